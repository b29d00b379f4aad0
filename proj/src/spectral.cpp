#include "nhse/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace nhse {

namespace {

struct RawEig {
  ComplexVector values;
  ComplexMatrix vectors;
};

RawEig zgeev(const ComplexMatrix& h, bool want_vectors, const std::string& id) {
  const std::string where = "spectral.eig";
  if (h.rows() != h.cols()) throw ValidationError(where, id + " is not square");
  if (!h.allFinite()) throw NumericalError(where, id + " has non-finite entries");
  const lapack_int n = static_cast<lapack_int>(h.rows());
  RawEig out;
  out.values.resize(n);
  if (n == 0) return out;
  ComplexMatrix a = h;
  ComplexMatrix vr;
  if (want_vectors) vr.resize(n, n);
  Complex dummy{};
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, a.data(), n,
                    out.values.data(), &dummy, 1, want_vectors ? vr.data() : &dummy,
                    want_vectors ? n : 1);
  if (info != 0) {
    throw NumericalError(where, "zgeev failed (info=" + std::to_string(info) + ") on " + id +
                                    " of dimension " + std::to_string(n));
  }
  out.vectors = std::move(vr);
  return out;
}

bool lex_less(const Complex& l, const Complex& r) {
  if (l.real() != r.real()) return l.real() < r.real();
  return l.imag() < r.imag();
}

}  // namespace

SpectralSet eig(const ComplexMatrix& h, const std::string& id) {
  RawEig raw = zgeev(h, true, id);
  const auto n = static_cast<std::size_t>(raw.values.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lex_less(raw.values(static_cast<Eigen::Index>(a)), raw.values(static_cast<Eigen::Index>(b)));
  });

  SpectralSet s;
  s.values.resize(n);
  s.vectors.resize(h.rows(), h.cols());
  s.ipr.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto src = static_cast<Eigen::Index>(order[j]);
    const auto dst = static_cast<Eigen::Index>(j);
    s.values[j] = raw.values(src);
    ComplexVector v = raw.vectors.col(src);
    v.normalize();
    s.vectors.col(dst) = v;
    s.ipr[j] = ipr(v);
  }
  if (n > 0) {
    const double scale = std::max(h.norm(), std::numeric_limits<double>::min());
    const ComplexMatrix hv = h * s.vectors;
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto c = static_cast<Eigen::Index>(j);
      worst = std::max(worst, (hv.col(c) - s.values[j] * s.vectors.col(c)).norm() / scale);
    }
    s.max_residual = worst;
  }
  return s;
}

std::vector<Complex> eigenvalues(const ComplexMatrix& h, const std::string& id) {
  RawEig raw = zgeev(h, false, id);
  std::vector<Complex> out(raw.values.data(), raw.values.data() + raw.values.size());
  std::stable_sort(out.begin(), out.end(), lex_less);
  return out;
}

double ipr(const ComplexVector& v) {
  const double norm2 = v.squaredNorm();
  if (!(norm2 > 0.0)) throw ValidationError("spectral.ipr", "zero vector");
  double fourth = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double p = std::norm(v(i));
    fourth += p * p;
  }
  return fourth / (norm2 * norm2);
}

std::vector<double> density_profile(const SpectralSet& s, const LatticeGeometry& g,
                                    const std::vector<std::size_t>& selection) {
  const char* where = "spectral.density_profile";
  if (s.vectors.rows() != g.dimension()) {
    throw ValidationError(where, "state dimension does not match the geometry");
  }
  std::vector<std::size_t> chosen = selection;
  if (chosen.empty()) {
    chosen.resize(s.size());
    std::iota(chosen.begin(), chosen.end(), 0);
  }
  std::vector<double> rho(static_cast<std::size_t>(g.num_sites()), 0.0);
  for (std::size_t j : chosen) {
    if (j >= s.size()) throw ValidationError(where, "state index out of range");
    const auto col = s.vectors.col(static_cast<Eigen::Index>(j));
    const double norm2 = col.squaredNorm();
    for (int site = 0; site < g.num_sites(); ++site) {
      double sum = 0.0;
      for (int o = 0; o < g.orbitals(); ++o) sum += std::norm(col(g.matrix_index(site, o)));
      rho[static_cast<std::size_t>(site)] += sum / norm2;
    }
  }
  return rho;
}

double max_ipr(const SpectralSet& s) {
  if (s.ipr.empty()) throw ValidationError("spectral.max_ipr", "empty spectral set");
  return *std::max_element(s.ipr.begin(), s.ipr.end());
}

double max_ipr(const SpectralSet& s, const std::vector<bool>& excluded) {
  double best = 0.0;
  bool any = false;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (j < excluded.size() && excluded[j]) continue;
    best = std::max(best, s.ipr[j]);
    any = true;
  }
  if (!any) throw ValidationError("spectral.max_ipr", "every state was excluded");
  return best;
}

std::vector<bool> isolated_states(const std::vector<Complex>& values, double factor,
                                  double real_period) {
  const std::size_t n = values.size();
  std::vector<bool> flags(n, false);
  if (n < 4) return flags;
  auto distance = [&](const Complex& a, const Complex& b) {
    double dre = a.real() - b.real();
    if (real_period > 0.0) {
      dre = std::remainder(dre, real_period);
    }
    return std::hypot(dre, a.imag() - b.imag());
  };
  std::vector<double> second(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d1 = std::numeric_limits<double>::infinity();
    double d2 = d1;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = distance(values[i], values[j]);
      if (d < d1) {
        d2 = d1;
        d1 = d;
      } else if (d < d2) {
        d2 = d;
      }
    }
    second[i] = d2;
  }
  std::vector<double> sorted = second;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2), sorted.end());
  const double median = sorted[n / 2];
  for (std::size_t i = 0; i < n; ++i) flags[i] = second[i] > factor * median;
  return flags;
}

std::size_t select_by_modulus(const std::vector<Complex>& values, double modulus) {
  if (values.empty()) throw ValidationError("spectral.select_by_modulus", "empty spectrum");
  std::size_t best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double gap = std::abs(std::abs(values[j]) - modulus);
    if (gap < best_gap - 1e-12 ||
        (std::abs(gap - best_gap) <= 1e-12 && values[j].real() < values[best].real())) {
      best = j;
      best_gap = std::min(gap, best_gap);
    }
  }
  return best;
}

double chain_edge_bulk_ratio(const std::vector<double>& rho) {
  const std::size_t n = rho.size();
  if (n < 4) throw ValidationError("spectral.edge_bulk_ratio", "chain too short");
  double bulk = 0.0;
  const std::size_t lo = n / 4;
  const std::size_t hi = 3 * n / 4;
  for (std::size_t i = lo; i < hi; ++i) bulk += rho[i];
  bulk /= static_cast<double>(hi - lo);
  return std::max(rho.front(), rho.back()) / bulk;
}

std::vector<double> line_profile(const LatticeGeometry& g, const std::vector<double>& rho,
                                 bool by_row) {
  if (static_cast<int>(rho.size()) != g.num_sites()) {
    throw ValidationError("spectral.line_profile", "profile size differs from the site count");
  }
  std::vector<double> out(static_cast<std::size_t>(by_row ? g.extent_y() : g.extent_x()), 0.0);
  for (int i = 0; i < g.num_sites(); ++i) {
    const Site& s = g.site(i);
    out[static_cast<std::size_t>((by_row ? s.y : s.x) - 1)] += rho[static_cast<std::size_t>(i)];
  }
  return out;
}

std::size_t argmax_site(const std::vector<double>& rho) {
  if (rho.empty()) throw ValidationError("spectral.argmax_site", "empty profile");
  return static_cast<std::size_t>(std::max_element(rho.begin(), rho.end()) - rho.begin());
}

CornerStats corner_stats(const LatticeGeometry& g, const std::vector<double>& rho) {
  if (g.shape() != Shape::square) throw ValidationError("spectral.corner_stats", "square lattice required");
  const int lx = g.extent_x();
  const int ly = g.extent_y();
  const Site& peak = g.site(static_cast<int>(argmax_site(rho)));
  CornerStats out;
  out.max_at_corner = (peak.x == 1 || peak.x == lx) && (peak.y == 1 || peak.y == ly);
  const int bx = std::max(1, lx / 4);
  const int by = std::max(1, ly / 4);
  double total = 0.0;
  for (double r : rho) total += r;
  const double share = total * (bx * by) / static_cast<double>(g.num_sites());
  for (int cx : {0, 1}) {
    for (int cy : {0, 1}) {
      double w = 0.0;
      for (int i = 0; i < g.num_sites(); ++i) {
        const Site& s = g.site(i);
        const bool in_x = cx == 0 ? s.x <= bx : s.x > lx - bx;
        const bool in_y = cy == 0 ? s.y <= by : s.y > ly - by;
        if (in_x && in_y) w += rho[static_cast<std::size_t>(i)];
      }
      out.corner_enrichment = std::max(out.corner_enrichment, w / share);
    }
  }
  return out;
}

}  // namespace nhse
