#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nhse/geometry.hpp"
#include "nhse/linalg.hpp"

namespace nhse {

/// Eigenvalues with unit-norm right eigenvectors (columns) and per-state IPR,
/// sorted lexicographically by (real, imaginary).
struct SpectralSet {
  std::vector<Complex> values;
  ComplexMatrix vectors;
  std::vector<double> ipr;
  /// max_j |H v_j - lambda_j v_j| / |H|_F
  double max_residual = 0.0;

  std::size_t size() const { return values.size(); }
};

/// Dense non-symmetric eigendecomposition (LAPACK zgeev). `id` names the
/// matrix in error messages.
SpectralSet eig(const ComplexMatrix& h, const std::string& id = "matrix");

/// Eigenvalues only.
std::vector<Complex> eigenvalues(const ComplexMatrix& h, const std::string& id = "matrix");

double ipr(const ComplexVector& v);

/// Per-site density sum_orbitals |psi|^2, summed over the selected states
/// (all states when `selection` is empty). Ordered by geometry site index.
std::vector<double> density_profile(const SpectralSet& s, const LatticeGeometry& g,
                                    const std::vector<std::size_t>& selection = {});

double max_ipr(const SpectralSet& s);

/// Maximum IPR over the states not flagged in `excluded`.
double max_ipr(const SpectralSet& s, const std::vector<bool>& excluded);

/// Flags eigenvalues isolated from the rest of the spectrum.
///
/// A state counts as isolated when its distance to the second-nearest other
/// eigenvalue exceeds `factor` times the median of that same distance over
/// the spectrum; using the second neighbour keeps degenerate edge-mode pairs
/// detectable. With `real_period` > 0 real parts are compared modulo the
/// period (quasi-energies).
std::vector<bool> isolated_states(const std::vector<Complex>& values, double factor = 5.0,
                                  double real_period = 0.0);

/// Index of the state whose |value| is closest to `modulus`; ties go to the
/// smaller real part.
std::size_t select_by_modulus(const std::vector<Complex>& values, double modulus);

/// Larger end-cell density of a chain profile over the mean of the central
/// half (cells L/4 .. 3L/4).
double chain_edge_bulk_ratio(const std::vector<double>& rho);

/// Profile summed along x for each row y (index y - 1), or along y for each
/// column x when `by_row` is false.
std::vector<double> line_profile(const LatticeGeometry& g, const std::vector<double>& rho,
                                 bool by_row);

struct CornerStats {
  bool max_at_corner = false;
  /// Weight in the densest (L/4 x L/4) corner block over its uniform share.
  double corner_enrichment = 0.0;
};
CornerStats corner_stats(const LatticeGeometry& g, const std::vector<double>& rho);

/// Site index with the largest density.
std::size_t argmax_site(const std::vector<double>& rho);

}  // namespace nhse
