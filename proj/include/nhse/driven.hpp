#pragma once

#include <vector>

#include "nhse/floquet.hpp"
#include "nhse/geometry.hpp"
#include "nhse/models.hpp"
#include "nhse/symmetry.hpp"

namespace nhse {

/// Shared period of a set of drives. Constant drives are ignored; differing
/// periods raise ValidationError. Returns 0 when every drive is constant.
double common_period(const std::vector<DriveSchedule>& drives);

double drive_period(const Chain1DParams& p);
double drive_period(const Qwz2DParams& p);

/// Lab-time breakpoints of every piecewise-constant drive, merged and sorted;
/// empty unless all drives are constant or piecewise constant.
std::vector<double> quench_breakpoints(const std::vector<DriveSchedule>& drives);

/// (k, t) -> H(k, t) for the symmetry checks.
BlochDrivenH chain_family(const Chain1DParams& p);
/// (k, t) -> H(kx = k, ky = fixed, t) or H(kx = fixed, ky = k, t).
BlochDrivenH qwz_family(const Qwz2DParams& p, bool vary_kx, double fixed);

/// Floquet propagators. `steps` <= 0 selects default_steps. Piecewise-constant
/// drives use the exact segment product and ignore `steps`.
Propagator chain_floquet_bloch(const Chain1DParams& p, double k, int steps = 0, double start = 0.0);
Propagator qwz_floquet_bloch(const Qwz2DParams& p, double kx, double ky, int steps = 0,
                             double start = 0.0);
Propagator chain_floquet_real(const Chain1DParams& p, const LatticeGeometry& g, int steps = 0);

/// Real-space QWZ propagator. Cosine drives go through the on-site split
/// step (second order); quench drives are exact.
Propagator qwz_floquet_real(const Qwz2DParams& p, const LatticeGeometry& g, int steps = 0);

}  // namespace nhse
