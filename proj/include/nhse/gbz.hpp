#pragma once

#include <string>
#include <vector>

#include "nhse/linalg.hpp"
#include "nhse/models.hpp"

namespace nhse {

/// H(beta) = A_-1 / beta + A_0 + A_+1 beta, with beta = e^{ik} on the
/// Brillouin zone. In real space the block between cells r and r + 1 is
/// A_-1 and the reverse block is A_+1, so the open-chain ansatz is
/// psi_j ~ beta^{-j}: |beta| < 1 accumulates states at the high-index end.
struct NonBlochModel {
  ComplexMatrix a_minus;
  ComplexMatrix a0;
  ComplexMatrix a_plus;

  int dim() const { return static_cast<int>(a0.rows()); }
  ComplexMatrix h(Complex beta) const;
  /// Open chain of `cells` cells.
  ComplexMatrix open_chain(int cells) const;
};

/// Static chain frozen at time t.
NonBlochModel non_bloch_from_chain(const Chain1DParams& p, double t = 0.0);
/// h(k) = t_R e^{ik} + t_L e^{-ik}
NonBlochModel hatano_nelson(double t_right, double t_left);

/// Ascending coefficients c_0..c_{2d} of beta^d det[E - H(beta)], d = dim.
/// Supports d <= 2. Throws ValidationError when the polynomial is identically
/// zero or has no beta dependence (flat bands).
std::vector<Complex> char_poly_coeffs(const NonBlochModel& m, Complex energy);

/// max_j |c_j - c_{2d-j}| / max_j |c_j|
double palindromic_residual(const std::vector<Complex>& coeffs);

/// Roots of the polynomial with ascending coefficients after dropping
/// negligible leading and trailing coefficients; dropped trailing
/// coefficients are returned as exact zero roots.
struct PolyRoots {
  std::vector<Complex> roots;  // finite roots, zero roots included
  int zero_roots = 0;
  int infinite_roots = 0;
};
PolyRoots poly_roots(const std::vector<Complex>& coeffs);

Complex poly_eval(const std::vector<Complex>& coeffs, Complex x);

struct GbzSample {
  Complex seed;    // energy supplied by the caller
  Complex energy;  // after projection onto |beta_M| = |beta_M+1|
  /// Finite roots sorted by modulus, ties by argument.
  std::vector<Complex> roots;
  int zero_roots = 0;
  int infinite_roots = 0;
  double radius_lower = 0.0;  // |beta_M|
  double radius_upper = 0.0;  // |beta_M+1|
  double gbz_radius = 0.0;
  bool matched = false;
};

struct GbzOptions {
  double match_tolerance = 1e-3;
  /// Move each seed onto the curve |beta_M| = |beta_M+1| before reading the
  /// radius. Finite open chains only approximate that curve.
  bool refine = true;
};

/// Eigenvalues of the open chain with `cells` cells, the default E samples.
std::vector<Complex> obc_energies(const NonBlochModel& m, int cells = 40);

/// Middle-root gap ||beta_M+1| - |beta_M|| at E (zero on the GBZ energy set).
double gbz_gap(const NonBlochModel& m, Complex energy);

std::vector<GbzSample> gbz_radii(const NonBlochModel& m, const std::vector<Complex>& energies,
                                 const GbzOptions& opt = {});

}  // namespace nhse
