#include "nhse/driven.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

namespace nhse {

double common_period(const std::vector<DriveSchedule>& drives) {
  double period = 0.0;
  for (const DriveSchedule& d : drives) {
    const double p = drive_period(d);
    if (p == 0.0) continue;
    if (period == 0.0) {
      period = p;
    } else if (std::abs(p - period) > 1e-12 * period) {
      throw ValidationError("driven.common_period", "drives do not share one period");
    }
  }
  return period;
}

double drive_period(const Chain1DParams& p) { return common_period({p.t1, p.gamma1}); }
double drive_period(const Qwz2DParams& p) { return common_period({p.v, p.gamma}); }

std::vector<double> quench_breakpoints(const std::vector<DriveSchedule>& drives) {
  std::vector<double> out;
  for (const DriveSchedule& d : drives) {
    if (!is_piecewise_constant(d)) return {};
    const auto b = breakpoints(d);
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

BlochDrivenH chain_family(const Chain1DParams& p) {
  return [p](double k, double t) { return bloch_h1(p, k, t); };
}

BlochDrivenH qwz_family(const Qwz2DParams& p, bool vary_kx, double fixed) {
  if (vary_kx) return [p, fixed](double k, double t) { return bloch_h2d(p, k, fixed, t); };
  return [p, fixed](double k, double t) { return bloch_h2d(p, fixed, k, t); };
}

namespace {

double require_period(double period, const char* where) {
  if (!(period > 0.0)) throw ValidationError(where, "model has no time-periodic drive");
  return period;
}

int resolve_steps(int steps, double period) {
  return steps > 0 ? steps : default_steps(2.0 * M_PI / period, period);
}

bool all_piecewise(const std::vector<DriveSchedule>& drives) {
  bool any_quench = false;
  for (const DriveSchedule& d : drives) {
    if (!is_piecewise_constant(d)) return false;
    any_quench = any_quench || std::holds_alternative<QuenchDrive>(d);
  }
  return any_quench;
}

}  // namespace

Propagator chain_floquet_bloch(const Chain1DParams& p, double k, int steps, double start) {
  const double period = require_period(drive_period(p), "driven.chain_floquet_bloch");
  const TimeDependentH h = [&](double t) { return bloch_h1(p, k, t); };
  Propagator u = all_piecewise({p.t1, p.gamma1})
                     ? propagate_piecewise(h, period, quench_breakpoints({p.t1, p.gamma1}), start)
                     : propagate(h, period, resolve_steps(steps, period), start);
  u.label = "chain k=" + std::to_string(k);
  return u;
}

Propagator qwz_floquet_bloch(const Qwz2DParams& p, double kx, double ky, int steps, double start) {
  const double period = require_period(drive_period(p), "driven.qwz_floquet_bloch");
  const TimeDependentH h = [&](double t) { return bloch_h2d(p, kx, ky, t); };
  Propagator u = all_piecewise({p.v, p.gamma})
                     ? propagate_piecewise(h, period, quench_breakpoints({p.v, p.gamma}), start)
                     : propagate(h, period, resolve_steps(steps, period), start);
  u.label = "qwz kx=" + std::to_string(kx) + " ky=" + std::to_string(ky);
  return u;
}

Propagator chain_floquet_real(const Chain1DParams& p, const LatticeGeometry& g, int steps) {
  const double period = require_period(drive_period(p), "driven.chain_floquet_real");
  const TimeDependentH h = [&](double t) { return real_space_h1(p, g, t); };
  Propagator u = all_piecewise({p.t1, p.gamma1})
                     ? propagate_piecewise(h, period, quench_breakpoints({p.t1, p.gamma1}))
                     : propagate(h, period, resolve_steps(steps, period));
  u.label = "chain " + g.id();
  return u;
}

Propagator qwz_floquet_real(const Qwz2DParams& p, const LatticeGeometry& g, int steps) {
  const double period = require_period(drive_period(p), "driven.qwz_floquet_real");
  Propagator u;
  if (all_piecewise({p.v, p.gamma})) {
    const TimeDependentH h = [&](double t) { return real_space_h2d(p, g, t); };
    u = propagate_piecewise(h, period, quench_breakpoints({p.v, p.gamma}));
  } else {
    const TimeDependentH site = [&](double t) { return qwz_onsite(p, t); };
    u = propagate_onsite_split(qwz_hopping(p, g), site, period, resolve_steps(steps, period));
  }
  u.label = "qwz " + g.id();
  return u;
}

}  // namespace nhse
