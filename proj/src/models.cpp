#include "nhse/models.hpp"

#include <cmath>

namespace nhse {

namespace {

void require_finite(double value, const char* name, const char* where) {
  if (!std::isfinite(value)) {
    throw ValidationError(where, std::string(name) + " must be finite");
  }
}

// Places a hop between sites r and s = r + d (d = +1 along the axis):
// block (r, s) = B_{-1}, block (s, r) = B_{+1}.
void add_bond(ComplexMatrix& h, int orbitals, int r, int s, const ComplexMatrix& minus,
              const ComplexMatrix& plus) {
  h.block(orbitals * r, orbitals * s, orbitals, orbitals) += minus;
  h.block(orbitals * s, orbitals * r, orbitals, orbitals) += plus;
}

void check_geometry(const LatticeGeometry& g, int orbitals, const char* where) {
  if (g.orbitals() != orbitals) {
    throw ValidationError(where, "geometry must carry 2 orbitals per site");
  }
}

}  // namespace

void validate(const Chain1DParams& p) {
  const char* where = "models.chain";
  if (p.length < 2) throw ValidationError(where, "L must be >= 2");
  require_finite(p.t0, "t0", where);
  require_finite(p.tp, "tp", where);
  require_finite(p.t2, "t2", where);
  require_finite(p.gamma2, "gamma2", where);
}

void validate(const Qwz2DParams& p) {
  const char* where = "models.qwz";
  if (p.lx < 2 || p.ly < 2) throw ValidationError(where, "Lx, Ly must be >= 2");
  require_finite(p.mass.real(), "M", where);
  require_finite(p.mass.imag(), "M", where);
}

std::array<ComplexMatrix, 3> chain_blocks(const Chain1DParams& p, double t) {
  const double t1 = eval_drive(p.t1, t);
  const double g1 = eval_drive(p.gamma1, t);
  const ComplexMatrix id = pauli::identity();
  const ComplexMatrix sx = pauli::x();
  const ComplexMatrix sy = pauli::y();
  const ComplexMatrix sz = pauli::z();
  // cos k -> (e^{ik} + e^{-ik}) / 2, sin k -> (e^{ik} - e^{-ik}) / 2i
  const ComplexMatrix even = p.t0 * id + kI * p.tp * sz + kI * p.t2 * sy;
  const ComplexMatrix odd = t1 * sx;
  return {even - odd, kI * p.gamma2 * sz + kI * g1 * sy, even + odd};
}

ComplexMatrix bloch_h1(const Chain1DParams& p, double k, double t) {
  const double t1 = eval_drive(p.t1, t);
  const double g1 = eval_drive(p.gamma1, t);
  const double c = std::cos(k);
  const double s = std::sin(k);
  return (2.0 * p.t0 * c) * pauli::identity() + (2.0 * kI * p.tp * c + kI * p.gamma2) * pauli::z() +
         (2.0 * kI * t1 * s) * pauli::x() + (2.0 * kI * p.t2 * c + kI * g1) * pauli::y();
}

ComplexMatrix real_space_h1(const Chain1DParams& p, const LatticeGeometry& g, double t) {
  const char* where = "models.real_space_h1";
  if (g.shape() != Shape::chain) throw ValidationError(where, "geometry must be a chain");
  if (g.num_sites() != p.length) throw ValidationError(where, "geometry length differs from L");
  check_geometry(g, 2, where);
  const auto blocks = chain_blocks(p, t);
  const int n = g.dimension();
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (int r = 0; r < g.num_sites(); ++r) {
    h.block(2 * r, 2 * r, 2, 2) += blocks[1];
    if (auto s = g.site_index(g.site(r).x + 1, 1)) {
      add_bond(h, 2, r, *s, blocks[0], blocks[2]);
    }
  }
  return h;
}

ComplexMatrix bloch_h2d(const Qwz2DParams& p, double kx, double ky, double t) {
  const double v = eval_drive(p.v, t);
  const double gamma = eval_drive(p.gamma, t);
  return (v + std::cos(kx) + std::cos(ky)) * pauli::x() + std::sin(kx) * pauli::y() +
         (p.mass * std::sin(ky) + kI * gamma) * pauli::z();
}

ComplexMatrix qwz_onsite(const Qwz2DParams& p, double t) {
  return eval_drive(p.v, t) * pauli::x() + kI * eval_drive(p.gamma, t) * pauli::z();
}

ComplexMatrix qwz_hopping(const Qwz2DParams& p, const LatticeGeometry& g) {
  const char* where = "models.real_space_h2d";
  if (g.shape() == Shape::chain) throw ValidationError(where, "geometry must be square or triangle");
  if (g.shape() == Shape::triangle &&
      (g.boundary_x() == Boundary::periodic || g.boundary_y() == Boundary::periodic)) {
    throw ValidationError(where, "periodic boundary requested on a triangle");
  }
  check_geometry(g, 2, where);
  const ComplexMatrix sx = pauli::x();
  const ComplexMatrix sy = pauli::y();
  const ComplexMatrix sz = pauli::z();
  const ComplexMatrix x_plus = 0.5 * sx + sy / (2.0 * kI);
  const ComplexMatrix x_minus = 0.5 * sx - sy / (2.0 * kI);
  const ComplexMatrix y_plus = 0.5 * sx + p.mass * sz / (2.0 * kI);
  const ComplexMatrix y_minus = 0.5 * sx - p.mass * sz / (2.0 * kI);
  const int n = g.dimension();
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (int r = 0; r < g.num_sites(); ++r) {
    const Site& site = g.site(r);
    if (auto s = g.site_index(site.x + 1, site.y)) add_bond(h, 2, r, *s, x_minus, x_plus);
    if (auto s = g.site_index(site.x, site.y + 1)) add_bond(h, 2, r, *s, y_minus, y_plus);
  }
  return h;
}

ComplexMatrix real_space_h2d(const Qwz2DParams& p, const LatticeGeometry& g, double t) {
  ComplexMatrix h = qwz_hopping(p, g);
  const ComplexMatrix onsite = qwz_onsite(p, t);
  for (int r = 0; r < g.num_sites(); ++r) h.block(2 * r, 2 * r, 2, 2) += onsite;
  return h;
}

std::vector<double> k_grid(int n) {
  if (n < 1) throw ValidationError("models.k_grid", "grid size must be positive");
  std::vector<double> ks(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) ks[static_cast<std::size_t>(m)] = -M_PI + 2.0 * M_PI * m / n;
  return ks;
}

}  // namespace nhse
