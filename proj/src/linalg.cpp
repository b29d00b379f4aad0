#include "nhse/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace nhse {

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

namespace {

double norm1(const ComplexMatrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Padé coefficients for degrees 3, 5, 7, 9, 13 (Higham 2005, Table 10.4).
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0,
                                          420.0,   30.0,    1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0,
                                          277200.0,   25200.0,   1512.0,
                                          56.0,       1.0};
constexpr std::array<double, 10> kPade9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
ComplexMatrix pade_low(const ComplexMatrix& a, const std::array<double, N>& b) {
  const Eigen::Index n = a.rows();
  const ComplexMatrix ident = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  ComplexMatrix power = ident;
  ComplexMatrix u_even = b[1] * ident;
  ComplexMatrix v_even = b[0] * ident;
  for (std::size_t j = 2; j < N; j += 2) {
    power = power * a2;
    u_even += b[j + 1] * power;
    v_even += b[j] * power;
  }
  const ComplexMatrix u = a * u_even;
  return (v_even - u).partialPivLu().solve(v_even + u);
}

ComplexMatrix pade13(const ComplexMatrix& a) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const ComplexMatrix ident = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  ComplexMatrix tmp = b[13] * a6 + b[11] * a4 + b[9] * a2;
  ComplexMatrix u = a * (a6 * tmp + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
  tmp = b[12] * a6 + b[10] * a4 + b[8] * a2;
  ComplexMatrix v = a6 * tmp + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

ComplexMatrix expm_2x2(const ComplexMatrix& a) {
  const Complex shift = 0.5 * (a(0, 0) + a(1, 1));
  ComplexMatrix traceless = a;
  traceless(0, 0) -= shift;
  traceless(1, 1) -= shift;
  // traceless^2 = delta * I
  const Complex delta =
      traceless(0, 0) * traceless(0, 0) + traceless(0, 1) * traceless(1, 0);
  Complex cosh_part;
  Complex sinhc_part;
  if (std::abs(delta) < 1e-4) {
    cosh_part = 1.0 + delta / 2.0 + delta * delta / 24.0 + delta * delta * delta / 720.0 +
                delta * delta * delta * delta / 40320.0;
    sinhc_part = 1.0 + delta / 6.0 + delta * delta / 120.0 +
                 delta * delta * delta / 5040.0 + delta * delta * delta * delta / 362880.0;
  } else {
    const Complex s = std::sqrt(delta);
    cosh_part = std::cosh(s);
    sinhc_part = std::sinh(s) / s;
  }
  ComplexMatrix out = sinhc_part * traceless;
  out(0, 0) += cosh_part;
  out(1, 1) += cosh_part;
  return std::exp(shift) * out;
}

}  // namespace

ComplexMatrix expm_pade(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw ValidationError("expm", "matrix is not square");
  }
  if (!a.allFinite()) {
    throw NumericalError("expm", "non-finite matrix entries");
  }
  const double norm = norm1(a);
  if (norm <= kTheta3) return pade_low(a, kPade3);
  if (norm <= kTheta5) return pade_low(a, kPade5);
  if (norm <= kTheta7) return pade_low(a, kPade7);
  if (norm <= kTheta9) return pade_low(a, kPade9);

  int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
  if (squarings > 1000) {
    throw NumericalError("expm", "matrix norm too large for scaling and squaring");
  }
  ComplexMatrix result = pade13(a / std::ldexp(1.0, squarings));
  for (int i = 0; i < squarings; ++i) {
    result = (result * result).eval();
  }
  if (!result.allFinite()) {
    throw NumericalError("expm", "overflow during squaring");
  }
  return result;
}

ComplexMatrix expm(const ComplexMatrix& a) {
  if (a.rows() == 2 && a.cols() == 2 && a.allFinite()) {
    return expm_2x2(a);
  }
  return expm_pade(a);
}

double operator_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

double condition_number(const ComplexMatrix& a) {
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

void sort_lexicographic(std::vector<Complex>& values) {
  std::sort(values.begin(), values.end(), [](const Complex& l, const Complex& r) {
    if (l.real() != r.real()) return l.real() < r.real();
    return l.imag() < r.imag();
  });
}

double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) {
    return std::numeric_limits<double>::infinity();
  }
  if (a.empty()) return 0.0;
  if (a.size() <= 8) {
    std::vector<std::size_t> perm(b.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double worst = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
      }
      best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  sort_lexicographic(a);
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const Complex& value : a) {
    std::size_t best_j = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(value - b[j]);
      if (d < best_d) {
        best_d = d;
        best_j = j;
      }
    }
    used[best_j] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

}  // namespace nhse
