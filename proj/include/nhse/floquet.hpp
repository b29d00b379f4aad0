#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nhse/linalg.hpp"
#include "nhse/models.hpp"

namespace nhse {

using TimeDependentH = std::function<ComplexMatrix(double)>;

struct Propagator {
  ComplexMatrix matrix;
  double period = 0.0;
  int steps = 0;
  double start_time = 0.0;
  std::string label;
};

struct EffectiveHamiltonian {
  ComplexMatrix matrix;
  double period = 0.0;
  /// Quasi-energies with real parts folded into (-pi/T, pi/T].
  std::vector<Complex> quasi_energies;
  /// Condition number of the eigenvector matrix used for the logarithm.
  double eigenvector_condition = 1.0;
};

struct FourierComponent {
  int harmonic = 0;
  ComplexMatrix matrix;
};

/// max(1024, ceil(64 * omega * T)).
int default_steps(double omega, double period);

/// Time-ordered product of midpoint-sampled slice exponentials over
/// [start, start + T):  U = prod_{j=N-1..0} exp(-i H(start + (j + 1/2) dt) dt).
Propagator propagate(const TimeDependentH& h, double period, int steps, double start = 0.0);

/// Exact propagator for a piecewise-constant H(t) with the given lab-time
/// breakpoints; one exponential per segment, H sampled at segment midpoints.
Propagator propagate_piecewise(const TimeDependentH& h, double period,
                               std::vector<double> breakpoints, double start = 0.0);

/// Strang-split propagator for H(t) = H_static + 1_sites (x) h_site(t) where
/// h_site is a small block repeated on every site. Costs one dense product
/// per slice instead of one dense exponential; second order in dt.
Propagator propagate_onsite_split(const ComplexMatrix& h_static, const TimeDependentH& h_site,
                                  double period, int steps, double start = 0.0);

/// Quasi-energy i log(lambda) / T with the real part in (-pi/T, pi/T].
Complex quasi_energy(Complex multiplier, double period);

std::vector<Complex> quasi_energies(const Propagator& u);

/// H_eff = (i/T) log U through U = V diag(lambda) V^-1.
/// Throws NumericalError("near-defective propagator") when cond(V) exceeds
/// `max_condition`.
EffectiveHamiltonian effective_hamiltonian(const Propagator& u, double max_condition = 1e10);

/// S^-1 H S - i S^-1 dS/dt at time t.
ComplexMatrix rotating_frame(const TimeDependentH& h, const TimeDependentH& s,
                             const TimeDependentH& s_dot, double t);

/// (1/T) int_0^T H(t) e^{-i q omega t} dt by the periodic trapezoid rule.
FourierComponent fourier_component(const TimeDependentH& h, double period, int q,
                                   int quad_points = 256);

/// Order 0: H^0. Order 1 adds, as written in the source model,
///   (1/w)[H^0, H^1] - (1/w)[H^1, H^-1] - (1/w)[H^-1, H^1].
ComplexMatrix magnus_effective(const TimeDependentH& h, double period, int order,
                               int quad_points = 256);

/// Bessel J0 from its integral representation (1/T) int cos(x sin wt) dt.
double bessel_j0_quadrature(double x, int quad_points = 256);

/// Frame S(t) = exp(-i (v1/w) sin(w t) sx) removing the cosine part of v(t).
struct QwzFrame {
  double v0 = 0.0;
  double v1 = 0.0;
  double omega = 1.0;
  ComplexMatrix s(double t) const;
  ComplexMatrix s_dot(double t) const;
};

/// Extracts the frame from v(t); v must be constant or a zero-phase cosine.
QwzFrame qwz_frame(const Qwz2DParams& p);

/// Closed-form rotating-frame Hamiltonian with p = v1/w and g(t) = sin(w t):
///   [v0 + cos kx + cos ky] sx
///   + {sin kx cos(2pg) + [M sin ky + i gamma] sin(2pg)} sy
///   + {[M sin ky + i gamma] cos(2pg) - sin kx sin(2pg)} sz
ComplexMatrix qwz_rotated_h(const Qwz2DParams& p, double kx, double ky, double t);

struct QwzAnalytic {
  ComplexMatrix matrix;
  double j0 = 0.0;         // J0(2 v1 / w)
  double n_factor = 0.0;   // (1/T) int gamma(t) cos(2 p sin wt) dt
};

/// High-frequency effective model d_eff . sigma with
///   d_x = v0 + cos kx + cos ky, d_y = sin kx J0, d_z = M sin ky J0 + i N.
/// Valid only when the relative phase between gamma(t) and v(t) is a
/// multiple of pi; other phases raise ValidationError.
QwzAnalytic qwz_analytic_effective(const Qwz2DParams& p, double kx, double ky,
                                   int quad_points = 512);

}  // namespace nhse
