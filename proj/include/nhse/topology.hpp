#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nhse/linalg.hpp"

namespace nhse {

using BlochFamily = std::function<ComplexMatrix(double)>;

struct WindingResult {
  int winding = 0;
  Complex base_point;
  /// Accumulated argument / 2 pi before rounding.
  double raw_phase = 0.0;
  double residual = 0.0;
  /// Largest single-step argument increment (radians).
  double max_step = 0.0;
  int k_samples = 0;
};

/// A closed loop k -> M(k) sampled on the uniform grid, together with the
/// energies that define the base-point search box.
///
/// For a Hamiltonian loop M(k) = H(k) and energies are its eigenvalues. For a
/// Floquet loop M(k) = U(k, T); base point eps0 is mapped to exp(-i eps0 T)
/// so that the winding is taken on the quasi-energy cylinder and no
/// logarithm branch cut can enter.
struct SampledLoop {
  std::vector<ComplexMatrix> matrices;
  std::vector<Complex> energies;
  double scale = 1.0;   // spectral radius over the loop, for the on-spectrum test
  double period = 0.0;  // > 0 marks a Floquet loop

  Complex matrix_base(Complex energy) const;
  int samples() const { return static_cast<int>(matrices.size()); }
};

/// Samples the loop on the uniform k grid; `workers` threads share the
/// k points and the result does not depend on their number.
SampledLoop sample_loop(const BlochFamily& h_of_k, int n_k, int workers = 1);
SampledLoop sample_floquet_loop(const BlochFamily& u_of_k, double period, int n_k,
                                int workers = 1);

struct WindingOptions {
  double residual_tolerance = 0.05;
  /// Steps larger than this (radians) mean the loop is undersampled.
  double max_step = 2.0;
  double spectrum_threshold = 1e-8;
};

/// Winding of det(M(k) - base) around zero, accumulated from principal-valued
/// ratios det_{j+1} / det_j in index order.
WindingResult winding(const SampledLoop& loop, Complex energy, const WindingOptions& opt = {});

WindingResult winding_1d(const BlochFamily& h_of_k, Complex base, int n_k = 2001,
                         const WindingOptions& opt = {});

enum class Axis { x, y };

/// C_y: k_y -> H(fixed, k_y).  C_x: k_x -> H(k_x, fixed).
WindingResult winding_2d(const std::function<ComplexMatrix(double, double)>& h,
                         Axis winding_axis, double fixed_value, Complex base, int n_k = 2001,
                         const WindingOptions& opt = {});

Complex spectral_centroid(const std::vector<Complex>& energies);

/// m x m points strictly inside the bounding box of `energies`, at fractions
/// i / (m + 1), i = 1..m, along each axis.
std::vector<Complex> interior_base_grid(const std::vector<Complex>& energies, int m);

struct AreaScan {
  bool nonzero = false;
  std::vector<WindingResult> windings;
  /// Base points skipped, with the reason (on spectrum, undersampled).
  std::vector<std::pair<Complex, std::string>> skipped;
};

/// Scans the interior base grid; `nonzero` is true iff any accepted base
/// point gives a nonzero winding.
AreaScan spectral_area_flag(const SampledLoop& loop, int m = 10, const WindingOptions& opt = {});

}  // namespace nhse
