#pragma once

#include <array>

#include "nhse/drive.hpp"
#include "nhse/geometry.hpp"
#include "nhse/linalg.hpp"

namespace nhse {

/// Two-band PT-symmetric chain with non-reciprocal inter-cell hopping.
///
///   H(k) = 2 t0 cos k I + (2i tp cos k + i gamma2) sz
///        + 2i t1 sin k sx + (2i t2 cos k + i gamma1) sy
///
/// t1 and gamma1 carry drive schedules; everything else is static.
struct Chain1DParams {
  double t0 = 1.0;
  double tp = 0.5;
  DriveSchedule t1 = ConstantDrive{0.7};
  double t2 = 2.0;
  DriveSchedule gamma1 = ConstantDrive{5.0};
  double gamma2 = 0.0;
  int length = 40;
};

/// Driven non-Hermitian Qi-Wu-Zhang model.
///
///   H(k) = [v(t) + cos kx + cos ky] sx + sin kx sy + [M sin ky + i gamma(t)] sz
struct Qwz2DParams {
  Complex mass{1.0, 0.0};
  DriveSchedule v = ConstantDrive{1.0};
  DriveSchedule gamma = ConstantDrive{2.0};
  int lx = 20;
  int ly = 20;
};

void validate(const Chain1DParams& p);
void validate(const Qwz2DParams& p);

/// Hopping blocks {B_-1, B_0, B_+1} with H(k) = sum_d B_d e^{i k d}.
std::array<ComplexMatrix, 3> chain_blocks(const Chain1DParams& p, double t);

ComplexMatrix bloch_h1(const Chain1DParams& p, double k, double t);

/// Real-space chain operator. The cell-to-cell block between cells r and
/// r + d is B_{-d}, so Bloch states are psi_j = e^{-i k j} u(k) and a
/// periodic chain of L cells has exactly the spectrum of H(k) on k = 2 pi m / L.
ComplexMatrix real_space_h1(const Chain1DParams& p, const LatticeGeometry& g, double t);

ComplexMatrix bloch_h2d(const Qwz2DParams& p, double kx, double ky, double t);

/// On-site 2x2 block v(t) sx + i gamma(t) sz.
ComplexMatrix qwz_onsite(const Qwz2DParams& p, double t);

/// Time-independent hopping part of the real-space operator (no on-site term).
ComplexMatrix qwz_hopping(const Qwz2DParams& p, const LatticeGeometry& g);

ComplexMatrix real_space_h2d(const Qwz2DParams& p, const LatticeGeometry& g, double t);

/// Bloch grid k_m = -pi + 2 pi m / n, m = 0..n-1.
std::vector<double> k_grid(int n);

}  // namespace nhse
