#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nhse/floquet.hpp"
#include "nhse/linalg.hpp"

namespace nhse {

using BlochDrivenH = std::function<ComplexMatrix(double k, double t)>;

enum class SymmetryKind { PT, TRS, PHS, CP };

std::string to_string(SymmetryKind kind);

struct SymmetryOp {
  SymmetryKind kind = SymmetryKind::PT;
  ComplexMatrix q;
  bool antiunitary = true;
};

/// Throws ValidationError unless Q is unitary to 1e-12.
SymmetryOp make_symmetry(SymmetryKind kind, const ComplexMatrix& q, bool antiunitary = true);

struct SymmetryReport {
  std::string identity;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::map<std::string, double> witness;
};

/// Sampling used by the residual maxima: k on a uniform grid, t on one period.
struct SymmetrySampling {
  int k_points = 32;
  int t_points = 64;
  double period = 1.0;
};

inline constexpr double kAlgebraicTolerance = 1e-12;
inline constexpr double kPropagatorTolerance = 1e-8;

/// max_{k,t} |Q H*(k,t) Q^dag - H(k,t)| / |H(k,t)|
SymmetryReport check_instantaneous_pt(const BlochDrivenH& h, const ComplexMatrix& q,
                                      const SymmetrySampling& sampling,
                                      double tolerance = kAlgebraicTolerance);

/// Residual of Q H*(k, t + tv) Q^dag = H(k, -t + tv) minimised over tv: a
/// uniform grid of `tv_points` over one period, then a golden-section
/// refinement around the best grid point. Witness "t_v" is the minimiser.
SymmetryReport check_drive_time_symmetry(const BlochDrivenH& h, const ComplexMatrix& q,
                                         const SymmetrySampling& sampling, int tv_points = 64,
                                         double tolerance = kAlgebraicTolerance);

/// Residual for a single tv.
double drive_time_symmetry_residual(const BlochDrivenH& h, const ComplexMatrix& q,
                                    const SymmetrySampling& sampling, double tv);

/// |Q U* Q^dag - U^-1| / |U^-1|. When `u_inverse` is supplied it is used in
/// place of a numerical inverse; U(T) can be badly conditioned.
SymmetryReport check_floquet_pt(const Propagator& u, const ComplexMatrix& q,
                                double tolerance = kPropagatorTolerance,
                                const ComplexMatrix* u_inverse = nullptr);

/// Time-ordered inverse prod_{j=0..N-1} exp(+i H(t_j) dt) on the same slices
/// as `propagate`.
ComplexMatrix propagate_inverse(const TimeDependentH& h, double period, int steps,
                                double start = 0.0);

/// Verifies the propagator identity inherited from an instantaneous
/// antiunitary symmetry:
///   PHS  Q H*(k,t) Q^dag = -H(-k,t)  =>  Q U*(k) Q^dag = U(-k)
///   TRS  Q H*(k,t) Q^dag =  H(-k,-t) =>  Q U*(k) Q^dag = U(-k)^-1
/// Throws ValidationError("instantaneous symmetry absent") when the
/// instantaneous relation fails at the algebraic tolerance.
SymmetryReport check_inherited_antiunitary(const BlochDrivenH& h, SymmetryKind kind,
                                           const ComplexMatrix& q,
                                           const SymmetrySampling& sampling, int steps,
                                           double tolerance = kPropagatorTolerance);

/// Instantaneous residual for the TRS or PHS relation above.
double instantaneous_residual(const BlochDrivenH& h, SymmetryKind kind, const ComplexMatrix& q,
                              const SymmetrySampling& sampling);

}  // namespace nhse
