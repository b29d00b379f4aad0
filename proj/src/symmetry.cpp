#include "nhse/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nhse/models.hpp"

namespace nhse {

std::string to_string(SymmetryKind kind) {
  switch (kind) {
    case SymmetryKind::PT: return "PT";
    case SymmetryKind::TRS: return "TRS";
    case SymmetryKind::PHS: return "PHS";
    case SymmetryKind::CP: return "CP";
  }
  return "?";
}

SymmetryOp make_symmetry(SymmetryKind kind, const ComplexMatrix& q, bool antiunitary) {
  if (q.rows() != q.cols() || q.rows() == 0) {
    throw ValidationError("symmetry.make", "Q must be a nonempty square matrix");
  }
  const double dev =
      operator_norm(q * q.adjoint() - ComplexMatrix::Identity(q.rows(), q.cols()));
  if (!(dev < 1e-12)) {
    std::ostringstream msg;
    msg << "Q is not unitary (deviation " << dev << ")";
    throw ValidationError("symmetry.make", msg.str());
  }
  return {kind, q, antiunitary};
}

namespace {

void require_unitary(const ComplexMatrix& q, const char* where) {
  try {
    make_symmetry(SymmetryKind::PT, q);
  } catch (const ValidationError& e) {
    throw ValidationError(where, e.what());
  }
}

double relative(const ComplexMatrix& diff, const ComplexMatrix& ref) {
  const double scale = operator_norm(ref);
  const double d = operator_norm(diff);
  return scale > 0.0 ? d / scale : d;
}

ComplexMatrix conjugate_by(const ComplexMatrix& q, const ComplexMatrix& h) {
  return q * h.conjugate() * q.adjoint();
}

std::vector<double> time_grid(const SymmetrySampling& s) {
  std::vector<double> out;
  for (int j = 0; j < s.t_points; ++j) out.push_back(s.period * j / s.t_points);
  return out;
}

void check_sampling(const SymmetrySampling& s, const char* where) {
  if (s.k_points < 1 || s.t_points < 1) throw ValidationError(where, "empty sampling grid");
  if (!(s.period > 0.0)) throw ValidationError(where, "period must be positive");
}

SymmetryReport finish(std::string identity, double residual, double tolerance) {
  SymmetryReport r;
  r.identity = std::move(identity);
  r.residual = residual;
  r.tolerance = tolerance;
  r.pass = residual < tolerance;
  return r;
}

}  // namespace

SymmetryReport check_instantaneous_pt(const BlochDrivenH& h, const ComplexMatrix& q,
                                      const SymmetrySampling& sampling, double tolerance) {
  const char* where = "symmetry.check_instantaneous_pt";
  require_unitary(q, where);
  check_sampling(sampling, where);
  double worst = 0.0;
  double wk = 0.0;
  double wt = 0.0;
  for (double k : k_grid(sampling.k_points)) {
    for (double t : time_grid(sampling)) {
      const ComplexMatrix hk = h(k, t);
      const double r = relative(conjugate_by(q, hk) - hk, hk);
      if (r > worst) {
        worst = r;
        wk = k;
        wt = t;
      }
    }
  }
  SymmetryReport out = finish("Q H*(k,t) Q^dag = H(k,t)", worst, tolerance);
  out.witness = {{"k", wk}, {"t", wt}};
  return out;
}

double drive_time_symmetry_residual(const BlochDrivenH& h, const ComplexMatrix& q,
                                    const SymmetrySampling& sampling, double tv) {
  double worst = 0.0;
  for (double k : k_grid(sampling.k_points)) {
    for (double t : time_grid(sampling)) {
      const ComplexMatrix target = h(k, tv - t);
      worst = std::max(worst, relative(conjugate_by(q, h(k, tv + t)) - target, target));
    }
  }
  return worst;
}

SymmetryReport check_drive_time_symmetry(const BlochDrivenH& h, const ComplexMatrix& q,
                                         const SymmetrySampling& sampling, int tv_points,
                                         double tolerance) {
  const char* where = "symmetry.check_drive_time_symmetry";
  require_unitary(q, where);
  check_sampling(sampling, where);
  if (tv_points < 1) throw ValidationError(where, "empty t_v grid");
  auto residual = [&](double tv) { return drive_time_symmetry_residual(h, q, sampling, tv); };

  const double spacing = sampling.period / tv_points;
  std::vector<double> grid(static_cast<std::size_t>(tv_points));
  for (int j = 0; j < tv_points; ++j) grid[static_cast<std::size_t>(j)] = residual(spacing * j);
  const double grid_best = *std::min_element(grid.begin(), grid.end());
  // Drives with a shared period often make the residual periodic in tv with a
  // fraction of T, so several grid points tie. Every tied grid point is
  // refined and the earliest tv among equal minima is kept, which makes the
  // witness independent of rounding in the drive phases.
  auto tied = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(a, b) + 1e-300; };
  auto wrap = [&](double tv) {
    const double w = std::fmod(tv, sampling.period);
    return w < 0.0 ? w + sampling.period : w;
  };
  double best_tv = 0.0;
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](double tv, double r) {
    tv = wrap(tv);
    if (!std::isfinite(best) || (r < best && !tied(r, best))) {
      best = r;
      best_tv = tv;
    } else if (tied(r, best) && tv < best_tv) {
      best_tv = tv;
      best = std::min(best, r);
    }
  };
  for (int j = 0; j < tv_points; ++j) {
    const double r = grid[static_cast<std::size_t>(j)];
    if (!tied(r, grid_best)) continue;
    consider(spacing * j, r);
    if (r < tolerance) continue;
    // Golden-section refinement on [tv - spacing, tv + spacing]. The residual
    // is a max of smooth functions, so it is unimodal near a minimum.
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = spacing * (j - 1);
    double b = spacing * (j + 1);
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = residual(c);
    double fd = residual(d);
    for (int it = 0; it < 60 && b - a > 1e-14 * sampling.period; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - ratio * (b - a);
        fc = residual(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + ratio * (b - a);
        fd = residual(d);
      }
    }
    consider(fc < fd ? c : d, std::min(fc, fd));
  }
  SymmetryReport out = finish("Q H*(k,t+tv) Q^dag = H(k,-t+tv)", best, tolerance);
  out.witness = {{"t_v", best_tv}};
  return out;
}

ComplexMatrix propagate_inverse(const TimeDependentH& h, double period, int steps, double start) {
  const char* where = "symmetry.propagate_inverse";
  if (steps < 4) throw ValidationError(where, "need at least 4 slices");
  const double dt = period / steps;
  ComplexMatrix inv;
  for (int j = 0; j < steps; ++j) {
    const ComplexMatrix slice = expm((kI * dt) * h(start + (j + 0.5) * dt));
    inv = j == 0 ? slice : (inv * slice).eval();
  }
  return inv;
}

SymmetryReport check_floquet_pt(const Propagator& u, const ComplexMatrix& q, double tolerance,
                                const ComplexMatrix* u_inverse) {
  const char* where = "symmetry.check_floquet_pt";
  require_unitary(q, where);
  if (q.rows() != u.matrix.rows()) throw ValidationError(where, "Q and U dimensions differ");
  ComplexMatrix inv;
  if (u_inverse != nullptr) {
    inv = *u_inverse;
  } else {
    const Eigen::PartialPivLU<ComplexMatrix> lu(u.matrix);
    if (lu.determinant() == Complex{0.0, 0.0} || !std::isfinite(std::abs(lu.determinant()))) {
      throw NumericalError(where, "singular propagator");
    }
    inv = lu.inverse();
  }
  SymmetryReport out = finish("Q U*(T) Q^dag = U^-1(T)",
                              relative(conjugate_by(q, u.matrix) - inv, inv), tolerance);
  out.witness = {{"start_time", u.start_time}, {"steps", static_cast<double>(u.steps)}};
  return out;
}

double instantaneous_residual(const BlochDrivenH& h, SymmetryKind kind, const ComplexMatrix& q,
                              const SymmetrySampling& sampling) {
  if (kind != SymmetryKind::PHS && kind != SymmetryKind::TRS) {
    throw ValidationError("symmetry.instantaneous_residual", "kind must be TRS or PHS");
  }
  double worst = 0.0;
  for (double k : k_grid(sampling.k_points)) {
    for (double t : time_grid(sampling)) {
      const ComplexMatrix lhs = conjugate_by(q, h(k, t));
      const ComplexMatrix rhs = kind == SymmetryKind::PHS ? ComplexMatrix(-h(-k, t))
                                                          : ComplexMatrix(h(-k, -t));
      worst = std::max(worst, relative(lhs - rhs, rhs));
    }
  }
  return worst;
}

SymmetryReport check_inherited_antiunitary(const BlochDrivenH& h, SymmetryKind kind,
                                           const ComplexMatrix& q,
                                           const SymmetrySampling& sampling, int steps,
                                           double tolerance) {
  const char* where = "symmetry.check_inherited_antiunitary";
  require_unitary(q, where);
  check_sampling(sampling, where);
  const double pre = instantaneous_residual(h, kind, q, sampling);
  if (!(pre < kAlgebraicTolerance)) {
    std::ostringstream msg;
    msg << "instantaneous symmetry absent (" << to_string(kind) << " residual " << pre << ")";
    throw ValidationError(where, msg.str());
  }
  double worst = 0.0;
  double wk = 0.0;
  for (double k : k_grid(sampling.k_points)) {
    const Propagator uk = propagate([&](double t) { return h(k, t); }, sampling.period, steps);
    const TimeDependentH hm = [&](double t) { return h(-k, t); };
    const ComplexMatrix target = kind == SymmetryKind::PHS
                                     ? propagate(hm, sampling.period, steps).matrix
                                     : propagate_inverse(hm, sampling.period, steps);
    const double r = relative(conjugate_by(q, uk.matrix) - target, target);
    if (r > worst) {
      worst = r;
      wk = k;
    }
  }
  SymmetryReport out = finish(kind == SymmetryKind::PHS ? "Q U*(k,T) Q^dag = U(-k,T)"
                                                        : "Q U*(k,T) Q^dag = U^-1(-k,T)",
                              worst, tolerance);
  out.witness = {{"k", wk}, {"pre_residual", pre}};
  return out;
}

}  // namespace nhse
