#include "nhse/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <variant>

#include "nhse/spectral.hpp"

namespace nhse {

int default_steps(double omega, double period) {
  return std::max(1024, static_cast<int>(std::ceil(64.0 * omega * period)));
}

Propagator propagate(const TimeDependentH& h, double period, int steps, double start) {
  const char* where = "floquet.propagate";
  if (steps < 4) throw ValidationError(where, "need at least 4 slices");
  if (!(period > 0.0)) throw ValidationError(where, "period must be positive");
  const double dt = period / steps;
  ComplexMatrix u;
  for (int j = 0; j < steps; ++j) {
    const double t = start + (j + 0.5) * dt;
    const ComplexMatrix hj = h(t);
    ComplexMatrix slice;
    try {
      slice = expm((-kI * dt) * hj);
    } catch (const NumericalError& e) {
      throw NumericalError(where, "slice " + std::to_string(j) + ": " + e.what());
    }
    if (j == 0) {
      u = std::move(slice);
    } else {
      u = (slice * u).eval();
    }
  }
  return Propagator{std::move(u), period, steps, start, {}};
}

Propagator propagate_piecewise(const TimeDependentH& h, double period,
                               std::vector<double> breakpoints, double start) {
  const char* where = "floquet.propagate_piecewise";
  if (!(period > 0.0)) throw ValidationError(where, "period must be positive");
  // Express breakpoints as offsets into [start, start + T).
  std::vector<double> cuts{0.0, period};
  for (double b : breakpoints) {
    double offset = std::fmod(b - start, period);
    if (offset < 0.0) offset += period;
    if (offset > 1e-13 * period && offset < period * (1.0 - 1e-13)) cuts.push_back(offset);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double a, double b) { return std::abs(a - b) <= 1e-13 * period; }),
             cuts.end());
  ComplexMatrix u;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double width = cuts[i + 1] - cuts[i];
    const ComplexMatrix hi = h(start + 0.5 * (cuts[i] + cuts[i + 1]));
    ComplexMatrix piece;
    try {
      piece = expm((-kI * width) * hi);
    } catch (const NumericalError& e) {
      throw NumericalError(where, "segment " + std::to_string(i) + ": " + e.what());
    }
    u = i == 0 ? piece : (piece * u).eval();
  }
  return Propagator{std::move(u), period, static_cast<int>(cuts.size() - 1), start, {}};
}

Propagator propagate_onsite_split(const ComplexMatrix& h_static, const TimeDependentH& h_site,
                                  double period, int steps, double start) {
  const char* where = "floquet.propagate_onsite_split";
  if (steps < 4) throw ValidationError(where, "need at least 4 slices");
  const Eigen::Index n = h_static.rows();
  const Eigen::Index block = h_site(start).rows();
  if (block == 0 || n % block != 0) {
    throw ValidationError(where, "on-site block does not tile the static operator");
  }
  const double dt = period / steps;
  const ComplexMatrix kinetic = expm((-kI * dt) * h_static);
  auto half_step = [&](double t) { return expm((-kI * (0.5 * dt)) * h_site(t)); };
  auto apply_blocks = [&](const ComplexMatrix& b, ComplexMatrix& u) {
    for (Eigen::Index r = 0; r < n; r += block) {
      u.middleRows(r, block) = (b * u.middleRows(r, block)).eval();
    }
  };
  ComplexMatrix u = ComplexMatrix::Identity(n, n);
  ComplexMatrix pending = half_step(start + 0.5 * dt);
  ComplexMatrix scratch(n, n);
  for (int j = 0; j < steps; ++j) {
    apply_blocks(pending, u);
    scratch.noalias() = kinetic * u;
    u.swap(scratch);
    const ComplexMatrix closing = half_step(start + (j + 0.5) * dt);
    if (j + 1 < steps) {
      pending = half_step(start + (j + 1.5) * dt) * closing;
    } else {
      apply_blocks(closing, u);
    }
  }
  if (!u.allFinite()) throw NumericalError(where, "propagator overflowed");
  return Propagator{std::move(u), period, steps, start, {}};
}

Complex quasi_energy(Complex multiplier, double period) {
  if (multiplier == Complex{0.0, 0.0}) {
    throw NumericalError("floquet.quasi_energy", "zero Floquet multiplier");
  }
  const double zone = M_PI / period;
  double re = -std::arg(multiplier) / period;
  if (re <= -zone) re += 2.0 * zone;
  return {re, std::log(std::abs(multiplier)) / period};
}

std::vector<Complex> quasi_energies(const Propagator& u) {
  std::vector<Complex> out;
  for (const Complex& lambda : eigenvalues(u.matrix, "U(T)")) {
    out.push_back(quasi_energy(lambda, u.period));
  }
  sort_lexicographic(out);
  return out;
}

EffectiveHamiltonian effective_hamiltonian(const Propagator& u, double max_condition) {
  const char* where = "floquet.effective_hamiltonian";
  const SpectralSet s = eig(u.matrix, "U(T)");
  const double cond = condition_number(s.vectors);
  if (!(cond <= max_condition)) {
    // Name the closest pair of multipliers, the usual cause.
    double best = std::numeric_limits<double>::infinity();
    std::size_t a = 0;
    std::size_t b = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        const double d = std::abs(s.values[i] - s.values[j]);
        if (d < best) {
          best = d;
          a = i;
          b = j;
        }
      }
    }
    std::ostringstream msg;
    msg << "near-defective propagator (eigenvector condition " << cond << "); quasi-energies "
        << quasi_energy(s.values[a], u.period) << " and " << quasi_energy(s.values[b], u.period)
        << " collide";
    throw NumericalError(where, msg.str());
  }
  EffectiveHamiltonian out;
  out.period = u.period;
  out.eigenvector_condition = cond;
  ComplexVector eps(static_cast<Eigen::Index>(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j) {
    eps(static_cast<Eigen::Index>(j)) = quasi_energy(s.values[j], u.period);
    out.quasi_energies.push_back(eps(static_cast<Eigen::Index>(j)));
  }
  out.matrix = s.vectors * eps.asDiagonal() * s.vectors.partialPivLu().inverse();
  sort_lexicographic(out.quasi_energies);
  return out;
}

ComplexMatrix rotating_frame(const TimeDependentH& h, const TimeDependentH& s,
                             const TimeDependentH& s_dot, double t) {
  const ComplexMatrix st = s(t);
  const Eigen::PartialPivLU<ComplexMatrix> lu(st);
  const double det = std::abs(lu.determinant());
  if (!(det > 1e-14 * std::pow(std::max(st.norm(), 1e-300), static_cast<double>(st.rows())))) {
    throw NumericalError("floquet.rotating_frame", "S(t) is singular");
  }
  return lu.solve(h(t) * st) - kI * lu.solve(s_dot(t));
}

FourierComponent fourier_component(const TimeDependentH& h, double period, int q,
                                   int quad_points) {
  if (quad_points < 64) throw ValidationError("floquet.fourier_component", "need >= 64 points");
  const double omega = 2.0 * M_PI / period;
  ComplexMatrix sum;
  for (int j = 0; j < quad_points; ++j) {
    const double t = period * j / quad_points;
    const ComplexMatrix term = std::exp(-kI * (q * omega * t)) * h(t);
    if (j == 0) {
      sum = term;
    } else {
      sum += term;
    }
  }
  return {q, sum / static_cast<double>(quad_points)};
}

ComplexMatrix magnus_effective(const TimeDependentH& h, double period, int order,
                               int quad_points) {
  if (!(period > 0.0)) throw ValidationError("floquet.magnus_effective", "omega must be positive");
  if (order != 0 && order != 1) {
    throw ValidationError("floquet.magnus_effective", "order must be 0 or 1");
  }
  const ComplexMatrix h0 = fourier_component(h, period, 0, quad_points).matrix;
  if (order == 0) return h0;
  const double omega = 2.0 * M_PI / period;
  const ComplexMatrix h1 = fourier_component(h, period, 1, quad_points).matrix;
  const ComplexMatrix hm1 = fourier_component(h, period, -1, quad_points).matrix;
  return h0 + (commutator(h0, h1) - commutator(h1, hm1) - commutator(hm1, h1)) / omega;
}

double bessel_j0_quadrature(double x, int quad_points) {
  double sum = 0.0;
  for (int j = 0; j < quad_points; ++j) {
    sum += std::cos(x * std::sin(2.0 * M_PI * j / quad_points));
  }
  return sum / quad_points;
}

ComplexMatrix QwzFrame::s(double t) const {
  const double angle = (v1 / omega) * std::sin(omega * t);
  return std::cos(angle) * pauli::identity() - kI * std::sin(angle) * pauli::x();
}

ComplexMatrix QwzFrame::s_dot(double t) const {
  return (-kI * v1 * std::cos(omega * t)) * pauli::x() * s(t);
}

QwzFrame qwz_frame(const Qwz2DParams& p) {
  const char* where = "floquet.qwz_frame";
  if (const auto* c = std::get_if<ConstantDrive>(&p.v)) return {c->value, 0.0, 1.0};
  if (const auto* c = std::get_if<CosDrive>(&p.v)) {
    if (std::abs(std::remainder(c->phase, 2.0 * M_PI)) > 1e-12) {
      throw ValidationError(where, "v(t) must be v0 + v1 cos(w t) with zero phase");
    }
    return {c->offset, c->amplitude, c->omega};
  }
  throw ValidationError(where, "v(t) must be constant or cosinusoidal");
}

ComplexMatrix qwz_rotated_h(const Qwz2DParams& p, double kx, double ky, double t) {
  const QwzFrame frame = qwz_frame(p);
  const double two_pg = 2.0 * (frame.v1 / frame.omega) * std::sin(frame.omega * t);
  const double c = std::cos(two_pg);
  const double s = std::sin(two_pg);
  const Complex mass_term = p.mass * std::sin(ky) + kI * eval_drive(p.gamma, t);
  return (frame.v0 + std::cos(kx) + std::cos(ky)) * pauli::x() +
         (std::sin(kx) * c + mass_term * s) * pauli::y() +
         (mass_term * c - std::sin(kx) * s) * pauli::z();
}

QwzAnalytic qwz_analytic_effective(const Qwz2DParams& p, double kx, double ky, int quad_points) {
  const char* where = "floquet.qwz_analytic_effective";
  const QwzFrame frame = qwz_frame(p);
  if (frame.v1 != 0.0) {
    if (const auto* g = std::get_if<CosDrive>(&p.gamma)) {
      if (g->amplitude != 0.0) {
        if (std::abs(g->omega - frame.omega) > 1e-12 * frame.omega) {
          throw ValidationError(where, "gamma(t) and v(t) must share one frequency");
        }
        if (std::abs(std::remainder(g->phase, M_PI)) > 1e-9) {
          throw ValidationError(where, "analytic form out of regime: relative phase is not a multiple of pi");
        }
      }
    } else if (!std::holds_alternative<ConstantDrive>(p.gamma)) {
      throw ValidationError(where, "gamma(t) must be constant or cosinusoidal");
    }
  }
  const double period = 2.0 * M_PI / frame.omega;
  const double x = 2.0 * frame.v1 / frame.omega;
  QwzAnalytic out;
  out.j0 = bessel_j0_quadrature(x, quad_points);
  double n_sum = 0.0;
  for (int j = 0; j < quad_points; ++j) {
    const double t = period * j / quad_points;
    n_sum += eval_drive(p.gamma, t) * std::cos(x * std::sin(frame.omega * t));
  }
  out.n_factor = n_sum / quad_points;
  out.matrix = (frame.v0 + std::cos(kx) + std::cos(ky)) * pauli::x() +
               (std::sin(kx) * out.j0) * pauli::y() +
               (p.mass * std::sin(ky) * out.j0 + kI * out.n_factor) * pauli::z();
  return out;
}

}  // namespace nhse
