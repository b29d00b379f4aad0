#include <cmath>
#include <random>

#include "doctest.h"
#include "nhse/gbz.hpp"
#include "nhse/spectral.hpp"

using namespace nhse;

namespace {

// Non-Hermitian SSH chain: intra-cell hoppings t1 +- g/2, inter-cell t2.
NonBlochModel nh_ssh(double t1, double g, double t2) {
  NonBlochModel m;
  m.a0 = ComplexMatrix::Zero(2, 2);
  m.a0(0, 1) = t1 + g / 2;
  m.a0(1, 0) = t1 - g / 2;
  m.a_minus = ComplexMatrix::Zero(2, 2);
  m.a_minus(0, 1) = t2;
  m.a_plus = ComplexMatrix::Zero(2, 2);
  m.a_plus(1, 0) = t2;
  return m;
}

// Summed density of all open-chain eigenstates, per cell.
std::vector<double> summed_density(const NonBlochModel& m, int cells) {
  const auto g = LatticeGeometry::chain(cells, Boundary::open, m.dim());
  return density_profile(eig(m.open_chain(cells)), g);
}

}  // namespace

TEST_CASE("H(beta) on the unit circle is the Bloch matrix") {
  Chain1DParams p;
  p.t1 = CosDrive{0.7, 1.2, 5.0, 0.0};
  p.gamma1 = CosDrive{5.0, 7.0, 5.0, 1.0};
  for (double t : {0.0, 0.4}) {
    const auto m = non_bloch_from_chain(p, t);
    for (int j = 0; j < 16; ++j) {
      const double k = -M_PI + 2 * M_PI * j / 16;
      CHECK((m.h(std::exp(kI * k)) - bloch_h1(p, k, t)).norm() < 1e-12);
    }
  }
}

TEST_CASE("Hatano-Nelson characteristic polynomial") {
  const auto m = hatano_nelson(1.5, 0.5);
  const Complex e{0.3, -0.2};
  const auto c = char_poly_coeffs(m, e);
  REQUIRE(c.size() == 3);
  CHECK(std::abs(c[0] - Complex{-0.5, 0}) < 1e-15);
  CHECK(std::abs(c[1] - e) < 1e-15);
  CHECK(std::abs(c[2] - Complex{-1.5, 0}) < 1e-15);
}

TEST_CASE("flat bands are rejected") {
  NonBlochModel m;
  m.a0 = pauli::z();
  m.a_minus = ComplexMatrix::Zero(2, 2);
  m.a_plus = ComplexMatrix::Zero(2, 2);
  CHECK_THROWS_AS(char_poly_coeffs(m, Complex{0.2, 0.1}), ValidationError);
  CHECK_THROWS_AS(char_poly_coeffs(m, Complex{1.0, 0.0}), ValidationError);
}

TEST_CASE("PT chain polynomial is palindromic and its roots pair by inversion") {
  const auto m = non_bloch_from_chain(Chain1DParams{});
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g(0.0, 4.0);
  for (int i = 0; i < 20; ++i) {
    const Complex e{g(rng), g(rng)};
    const auto c = char_poly_coeffs(m, e);
    CHECK(palindromic_residual(c) < 1e-14);
    const auto r = poly_roots(c);
    REQUIRE(r.roots.size() == 4);
    std::vector<Complex> inv;
    for (const Complex& b : r.roots) inv.push_back(1.0 / b);
    CHECK(multiset_distance(r.roots, inv) < 1e-8);
    double scale = 0.0;
    for (const Complex& x : c) scale = std::max(scale, std::abs(x));
    for (const Complex& b : r.roots) CHECK(std::abs(poly_eval(c, b)) < 1e-8 * scale * std::max(1.0, std::pow(std::abs(b), 4)));
  }
  CHECK(palindromic_residual(char_poly_coeffs(hatano_nelson(1.5, 0.5), 0.2)) > 0.1);
}

TEST_CASE("degree drops are recorded") {
  const auto r = poly_roots({Complex{0, 0}, Complex{2, 0}, Complex{-1, 0}, Complex{0, 0}});
  CHECK(r.zero_roots == 1);
  CHECK(r.infinite_roots == 1);
  REQUIRE(r.roots.size() == 2);
  CHECK(std::abs(r.roots[0]) == 0.0);
  CHECK(std::abs(r.roots[1] - Complex{2, 0}) < 1e-14);
  CHECK_THROWS_AS(poly_roots({Complex{0, 0}, Complex{0, 0}}), ValidationError);
}

TEST_CASE("static PT chain GBZ is the unit circle") {
  const auto m = non_bloch_from_chain(Chain1DParams{});
  const auto samples = gbz_radii(m, obc_energies(m));
  CHECK(samples.size() == 80);
  for (const auto& s : samples) {
    CHECK(s.matched);
    CHECK(std::abs(s.gbz_radius - 1.0) < 1e-6);
    CHECK(s.roots.size() == 4);
  }
}

TEST_CASE("Hatano-Nelson GBZ radius") {
  const double tr = 1.5;
  const double tl = 0.5;
  const auto m = hatano_nelson(tr, tl);
  const auto samples = gbz_radii(m, obc_energies(m, 40));
  for (const auto& s : samples) {
    CHECK(s.matched);
    // The two roots multiply to t_L / t_R.
    CHECK(std::abs(s.roots[0] * s.roots[1] - Complex{tl / tr, 0}) < 1e-12);
    CHECK(std::abs(s.gbz_radius - std::sqrt(tl / tr)) < 1e-6);
  }
}

TEST_CASE("Hermitian SSH limit") {
  const auto trivial = nh_ssh(1.2, 0.0, 1.0);
  for (const auto& s : gbz_radii(trivial, obc_energies(trivial))) {
    CHECK(s.matched);
    CHECK(std::abs(s.gbz_radius - 1.0) < 1e-6);
  }
  // In the topological phase the two zero modes are not bulk energies and
  // are reported as off-GBZ samples.
  const auto topo = nh_ssh(0.6, 0.0, 1.0);
  int off = 0;
  for (const auto& s : gbz_radii(topo, obc_energies(topo))) {
    if (!s.matched) {
      ++off;
      CHECK(std::abs(s.seed) < 1e-6);
    } else {
      CHECK(std::abs(s.gbz_radius - 1.0) < 1e-6);
    }
  }
  CHECK(off == 2);
}

TEST_CASE("GBZ radius predicts the accumulation edge") {
  struct Case {
    NonBlochModel model;
    double expected;
  };
  const std::vector<Case> cases{
      {hatano_nelson(1.5, 0.5), std::sqrt(0.5 / 1.5)},
      {hatano_nelson(0.4, 1.1), std::sqrt(1.1 / 0.4)},
      // Root product (t1 - g/2) / (t1 + g/2).
      {nh_ssh(1.0, 0.8, 1.2), std::sqrt(0.6 / 1.4)},
      {nh_ssh(1.0, -0.8, 1.2), std::sqrt(1.4 / 0.6)},
  };
  for (const auto& c : cases) {
    const auto samples = gbz_radii(c.model, obc_energies(c.model, 40));
    for (const auto& s : samples) {
      if (!s.matched) continue;
      CHECK(std::abs(s.gbz_radius - c.expected) < 1e-6);
    }
    const auto rho = summed_density(c.model, 40);
    const bool right = rho.back() > rho.front();
    CHECK(right == (c.expected < 1.0));
  }
}

TEST_CASE("GBZ gap vanishes on the refined energies") {
  const auto m = nh_ssh(1.0, 0.8, 1.2);
  for (const auto& s : gbz_radii(m, obc_energies(m, 30))) {
    if (s.matched) CHECK(gbz_gap(m, s.energy) <= 1e-3 * s.radius_upper);
  }
  GbzOptions raw;
  raw.refine = false;
  const auto unrefined = gbz_radii(m, obc_energies(m, 30), raw);
  for (const auto& s : unrefined) CHECK(s.energy == s.seed);
}
