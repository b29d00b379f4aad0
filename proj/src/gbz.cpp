#include "nhse/gbz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nhse/spectral.hpp"

namespace nhse {

ComplexMatrix NonBlochModel::h(Complex beta) const {
  return a_minus / beta + a0 + a_plus * beta;
}

ComplexMatrix NonBlochModel::open_chain(int cells) const {
  if (cells < 1) throw ValidationError("gbz.open_chain", "need at least one cell");
  const int d = dim();
  ComplexMatrix h = ComplexMatrix::Zero(d * cells, d * cells);
  for (int r = 0; r < cells; ++r) {
    h.block(d * r, d * r, d, d) = a0;
    if (r + 1 < cells) {
      h.block(d * r, d * (r + 1), d, d) = a_minus;
      h.block(d * (r + 1), d * r, d, d) = a_plus;
    }
  }
  return h;
}

NonBlochModel non_bloch_from_chain(const Chain1DParams& p, double t) {
  validate(p);
  auto b = chain_blocks(p, t);
  return {b[0], b[1], b[2]};
}

NonBlochModel hatano_nelson(double t_right, double t_left) {
  ComplexMatrix m(1, 1);
  NonBlochModel out;
  m(0, 0) = t_left;
  out.a_minus = m;
  out.a0 = ComplexMatrix::Zero(1, 1);
  m(0, 0) = t_right;
  out.a_plus = m;
  return out;
}

namespace {

using Poly = std::vector<Complex>;

Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

double max_abs(const Poly& c) {
  double m = 0.0;
  for (const Complex& x : c) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<Complex> char_poly_coeffs(const NonBlochModel& m, Complex energy) {
  const char* where = "gbz.char_poly_coeffs";
  const int d = m.dim();
  if (d < 1 || d > 2) throw ValidationError(where, "only one- and two-band models are supported");
  // beta (E - H(beta)) = P0 + P1 beta + P2 beta^2
  const ComplexMatrix p0 = -m.a_minus;
  const ComplexMatrix p1 = energy * ComplexMatrix::Identity(d, d) - m.a0;
  const ComplexMatrix p2 = -m.a_plus;
  auto entry = [&](int i, int j) { return Poly{p0(i, j), p1(i, j), p2(i, j)}; };
  Poly c;
  if (d == 1) {
    c = entry(0, 0);
  } else {
    c = multiply(entry(0, 0), entry(1, 1));
    const Poly off = multiply(entry(0, 1), entry(1, 0));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= off[i];
  }
  const double scale = max_abs(c);
  if (scale == 0.0) throw ValidationError(where, "characteristic polynomial vanishes identically");
  int nonzero = 0;
  for (const Complex& x : c) nonzero += std::abs(x) > 1e-14 * scale ? 1 : 0;
  if (nonzero < 2) throw ValidationError(where, "flat bands: no beta dependence");
  return c;
}

double palindromic_residual(const std::vector<Complex>& coeffs) {
  const double scale = max_abs(coeffs);
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  const std::size_t n = coeffs.size();
  for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(coeffs[j] - coeffs[n - 1 - j]));
  return worst / scale;
}

Complex poly_eval(const std::vector<Complex>& coeffs, Complex x) {
  Complex acc{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

PolyRoots poly_roots(const std::vector<Complex>& coeffs) {
  const double scale = max_abs(coeffs);
  if (scale == 0.0) throw ValidationError("gbz.poly_roots", "zero polynomial");
  const double tiny = 1e-14 * scale;
  std::size_t lo = 0;
  std::size_t hi = coeffs.size();
  while (lo < hi && std::abs(coeffs[lo]) <= tiny) ++lo;
  while (hi > lo && std::abs(coeffs[hi - 1]) <= tiny) --hi;
  PolyRoots out;
  out.zero_roots = static_cast<int>(lo);
  out.infinite_roots = static_cast<int>(coeffs.size() - hi);
  out.roots.assign(lo, Complex{0.0, 0.0});
  const int degree = static_cast<int>(hi - lo) - 1;
  if (degree >= 1) {
    ComplexMatrix companion = ComplexMatrix::Zero(degree, degree);
    const Complex lead = coeffs[hi - 1];
    for (int i = 0; i < degree; ++i) companion(0, i) = -coeffs[hi - 2 - i] / lead;
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(companion, false);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("gbz.poly_roots", "companion eigenvalues did not converge");
    }
    for (int i = 0; i < degree; ++i) out.roots.push_back(solver.eigenvalues()(i));
  }
  // Sort by modulus; moduli equal to 1e-12 form a tie group ordered by argument.
  std::sort(out.roots.begin(), out.roots.end(),
            [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  for (std::size_t i = 0; i < out.roots.size();) {
    std::size_t j = i + 1;
    while (j < out.roots.size() &&
           std::abs(out.roots[j]) - std::abs(out.roots[i]) <= 1e-12 * std::abs(out.roots[j])) {
      ++j;
    }
    std::sort(out.roots.begin() + static_cast<std::ptrdiff_t>(i),
              out.roots.begin() + static_cast<std::ptrdiff_t>(j),
              [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });
    i = j;
  }
  return out;
}

namespace {

GbzSample sample_at(const NonBlochModel& m, Complex energy) {
  const PolyRoots r = poly_roots(char_poly_coeffs(m, energy));
  GbzSample s;
  s.seed = energy;
  s.energy = energy;
  s.roots = r.roots;
  s.zero_roots = r.zero_roots;
  s.infinite_roots = r.infinite_roots;
  // Full root list: finite roots (zeros included) followed by roots at infinity.
  const std::size_t d = static_cast<std::size_t>(m.dim());
  auto modulus = [&](std::size_t i) {
    return i < s.roots.size() ? std::abs(s.roots[i]) : std::numeric_limits<double>::infinity();
  };
  s.radius_lower = modulus(d - 1);
  s.radius_upper = modulus(d);
  return s;
}

double gap_of(const GbzSample& s) { return std::abs(s.radius_upper - s.radius_lower); }

}  // namespace

double gbz_gap(const NonBlochModel& m, Complex energy) { return gap_of(sample_at(m, energy)); }

std::vector<Complex> obc_energies(const NonBlochModel& m, int cells) {
  return eigenvalues(m.open_chain(cells), "open chain");
}

namespace {

// Minimises the gap along seed + s u, s in [-r, r]. The gap vanishes on the
// GBZ energy set, so a line crossing it has its minimum exactly there.
std::pair<Complex, double> line_search(const NonBlochModel& m, Complex seed, Complex u, double r) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double s) { return gbz_gap(m, seed + s * u); };
  double a = -r;
  double b = r;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-16 * (1.0 + std::abs(seed)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? std::pair{seed + c * u, fc} : std::pair{seed + d * u, fd};
}

}  // namespace

std::vector<GbzSample> gbz_radii(const NonBlochModel& m, const std::vector<Complex>& energies,
                                 const GbzOptions& opt) {
  std::vector<GbzSample> out;
  out.reserve(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const Complex seed = energies[i];
    GbzSample best = sample_at(m, seed);
    if (opt.refine && gap_of(best) > 0.0 && std::isfinite(gap_of(best))) {
      // Search radius: half the distance to the nearest other seed, so the
      // projection cannot jump onto a different arc.
      double r = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < energies.size(); ++j) {
        if (j != i && energies[j] != seed) r = std::min(r, std::abs(energies[j] - seed));
      }
      r = std::isfinite(r) ? 0.5 * r : 1e-2 * (1.0 + std::abs(seed));
      const Complex diag = std::polar(1.0, M_PI / 4.0);
      for (Complex u : {Complex{1.0, 0.0}, kI, diag, diag * kI}) {
        const auto [e, g] = line_search(m, seed, u, r);
        if (g < gap_of(best)) {
          best = sample_at(m, e);
          best.seed = seed;
        }
      }
    }
    const double upper = best.radius_upper;
    best.matched = std::isfinite(upper) &&
                   gap_of(best) <= opt.match_tolerance * std::max(upper, 1e-300);
    best.gbz_radius = best.matched ? 0.5 * (best.radius_lower + best.radius_upper) : 0.0;
    out.push_back(std::move(best));
  }
  return out;
}

}  // namespace nhse
