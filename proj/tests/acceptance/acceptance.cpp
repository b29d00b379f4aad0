// Runs the end-to-end acceptance checks and prints one verdict line per
// criterion. Exit status is nonzero when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "nhse/driven.hpp"
#include "nhse/gbz.hpp"
#include "nhse/models.hpp"
#include "nhse/runner.hpp"
#include "nhse/spectral.hpp"
#include "nhse/symmetry.hpp"
#include "nhse/topology.hpp"

using namespace nhse;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    detail << "\n    [" << (ok ? "ok" : "FAIL") << "] " << what;
    pass = pass && ok;
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

json cos_drive(double a, double b, double omega, double phi) {
  return {{"type", "cos"}, {"a", a}, {"b", b}, {"omega", omega}, {"phi", phi}};
}

json chain_config(double phi, const std::string& task) {
  return {{"model",
           {{"kind", "chain"},
            {"t0", 1.0},
            {"tp", 0.5},
            {"t2", 2.0},
            {"gamma2", 0.0},
            {"L", 40},
            {"t1", cos_drive(0.7, 1.2, 5.0, 0.0)},
            {"gamma1", cos_drive(5.0, 7.0, 5.0, phi)}}},
          {"geometry", {{"shape", "chain"}, {"bx", "open"}}},
          {"task", task}};
}

json qwz_config(const json& v, const json& gamma, const std::string& task) {
  return {{"model", {{"kind", "qwz"}, {"M", 1.0}, {"v", v}, {"gamma", gamma}}}, {"task", task}};
}

Chain1DParams fig1(double phi) {
  Chain1DParams p;
  p.t1 = CosDrive{0.7, 1.2, 5.0, 0.0};
  p.gamma1 = CosDrive{5.0, 7.0, 5.0, phi};
  return p;
}

json results_of(const json& config, double* seconds = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunReport r = run(config, {false});
  if (seconds) {
    *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return r.report.at("results");
}

Verdict criterion1() {
  Verdict v;
  const double L = 40;
  double t_on = 0.0;
  double t_off = 0.0;
  const json on = results_of(chain_config(M_PI / 2, "density"), &t_on);
  const json off = results_of(chain_config(0.0, "density"), &t_off);
  const double min_bulk = on.at("min_ipr_bulk").get<double>();
  const double ratio = on.at("edge_bulk_ratio").get<double>();
  const double max_bulk = off.at("max_ipr_bulk").get<double>();
  v.require(min_bulk > 2 / L, "phi=pi/2: min non-edge IPR " + fmt(min_bulk) + " > 2/L = " + fmt(2 / L));
  v.require(ratio > 10, "phi=pi/2: edge/bulk density ratio " + fmt(ratio) + " > 10");
  v.require(max_bulk < 4 / L, "phi=0: max non-edge IPR " + fmt(max_bulk) + " < 4/L = " + fmt(4 / L));
  v.require(t_on < 60 && t_off < 60, "runtimes " + fmt(t_on) + " s and " + fmt(t_off) + " s < 60 s");
  return v;
}

Verdict criterion2() {
  Verdict v;
  const double T = 2 * M_PI / 5;
  auto loop_for = [&](double phi, int n_k) {
    const Chain1DParams p = fig1(phi);
    return sample_floquet_loop([&](double k) { return chain_floquet_bloch(p, k).matrix; }, T, n_k,
                               default_workers());
  };
  const AreaScan off = spectral_area_flag(loop_for(0.0, 2001), 10);
  int off_nonzero = 0;
  for (const auto& w : off.windings) off_nonzero += w.winding != 0 ? 1 : 0;
  v.require(off_nonzero == 0 && !off.windings.empty(),
            "phi=0: " + std::to_string(off.windings.size()) + " accepted base points, " +
                std::to_string(off_nonzero) + " nonzero (" + std::to_string(off.skipped.size()) +
                " on-spectrum or undersampled skipped)");

  const SampledLoop coarse = loop_for(M_PI / 2, 2001);
  const SampledLoop fine = loop_for(M_PI / 2, 4002);
  const AreaScan on = spectral_area_flag(coarse, 10);
  int nonzero = 0;
  int stable = 0;
  double worst_residual = 0.0;
  for (const auto& w : on.windings) {
    if (w.winding == 0) continue;
    ++nonzero;
    worst_residual = std::max(worst_residual, w.residual);
    try {
      if (winding(fine, w.base_point).winding == w.winding) ++stable;
    } catch (const NumericalError&) {
    }
  }
  v.require(nonzero > 0, "phi=pi/2: " + std::to_string(nonzero) + " base points with |C| >= 1");
  v.require(nonzero > 0 && worst_residual < 0.05, "phi=pi/2: worst integer residual " + fmt(worst_residual));
  v.require(nonzero > 0 && stable == nonzero,
            "phi=pi/2: " + std::to_string(stable) + "/" + std::to_string(nonzero) +
                " nonzero windings unchanged with n_k doubled");
  return v;
}

SymmetrySampling sampling_for(double period) {
  SymmetrySampling s;
  s.period = period;
  return s;
}

// Floquet PT residual, propagated from the reflection time of the drives.
double floquet_pt_residual(const Chain1DParams& p, double k, int steps) {
  const double T = drive_period(p);
  const SymmetryReport tv = check_drive_time_symmetry(chain_family(p), pauli::y(), sampling_for(T));
  const double start = tv.witness.at("t_v");
  auto h = [&](double t) { return bloch_h1(p, k, t); };
  const Propagator u = propagate(h, T, steps, start);
  const ComplexMatrix inv = propagate_inverse(h, T, steps, start);
  return check_floquet_pt(u, pauli::y(), kPropagatorTolerance, &inv).residual;
}

Verdict criterion3() {
  Verdict v;
  const double r0a = floquet_pt_residual(fig1(0.0), 0.3, 4096);
  const double r0b = floquet_pt_residual(fig1(0.0), 0.3, 8192);
  const double r1 = floquet_pt_residual(fig1(M_PI / 2), 0.3, 8192);
  v.require(r0a < 1e-8 && r0b < 1e-8,
            "phi=0: residual " + fmt(r0a) + " (4096 steps), " + fmt(r0b) + " (8192 steps) < 1e-8");
  v.require(r1 > 1e-2, "phi=pi/2: residual " + fmt(r1) + " > 1e-2");

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> phase(0.0, 2 * M_PI);
  std::uniform_real_distribution<double> amp(0.3, 1.5);
  std::uniform_real_distribution<double> freq(3.0, 8.0);
  int eq5_pass = 0;
  int counterexamples = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Chain1DParams p;
    const double w = freq(rng);
    const double common = phase(rng);
    // Even trials share one phase between the two drives; odd trials do not.
    const double rel = trial % 2 == 0 ? 0.0 : phase(rng);
    p.t1 = CosDrive{0.7, amp(rng), w, common};
    p.gamma1 = CosDrive{5.0, 5.0 * amp(rng), w, common + rel};
    p.gamma2 = 0.0;
    const double T = drive_period(p);
    if (check_instantaneous_pt(chain_family(p), pauli::y(), sampling_for(T)).residual > kAlgebraicTolerance) {
      ++counterexamples;  // the family itself must be PT at every instant
      continue;
    }
    if (!check_drive_time_symmetry(chain_family(p), pauli::y(), sampling_for(T)).pass) continue;
    ++eq5_pass;
    for (double k : {-2.1, 0.3, 1.7}) {
      if (floquet_pt_residual(p, k, 4096) >= kPropagatorTolerance) {
        ++counterexamples;
        break;
      }
    }
  }
  v.require(eq5_pass > 0 && counterexamples == 0,
            "20 random families: " + std::to_string(eq5_pass) + " satisfy the drive reflection, " +
                std::to_string(counterexamples) + " counterexamples");
  return v;
}

bool all_zero(const AreaScan& s) {
  if (s.windings.empty()) return false;
  for (const auto& w : s.windings) {
    if (w.winding != 0) return false;
  }
  return true;
}

Verdict criterion4() {
  Verdict v;
  const Qwz2DParams p;
  auto h = [&](double kx, double ky) { return bloch_h2d(p, kx, ky, 0.0); };
  const SampledLoop ly = sample_loop([&](double ky) { return h(1.5, ky); }, 2001);
  const WindingResult cy = winding(ly, spectral_centroid(ly.energies));
  v.require(cy.winding != 0, "C_y at kx=1.5 is " + std::to_string(cy.winding));
  int zero_cuts = 0;
  for (int m = 0; m < 11; ++m) {
    const double ky = -M_PI + 2 * M_PI * (m + 0.5) / 11;
    const SampledLoop lx = sample_loop([&](double kx) { return h(kx, ky); }, 2001);
    zero_cuts += all_zero(spectral_area_flag(lx, 10)) ? 1 : 0;
  }
  v.require(zero_cuts == 11, std::to_string(zero_cuts) + "/11 ky cuts with C_x = 0 on the 10x10 base grid");

  json square = qwz_config(1.0, 2.0, "density");
  square["geometry"] = {{"shape", "square"}, {"bx", "periodic"}, {"by", "open"}};
  const json sq = results_of(square);
  const double row = sq.at("edge_row_ratio").get<double>();
  v.require(row > 5, "20x20 Y-OBC: edge row density / mean bulk row = " + fmt(row) + " > 5");
  json triangle = qwz_config(1.0, 2.0, "density");
  triangle["geometry"] = {{"shape", "triangle"}};
  const json tri = results_of(triangle);
  v.require(tri.at("peak_on_hypotenuse").get<bool>(),
            "triangle: density maximum on the hypotenuse (enrichment " +
                fmt(tri.at("hypotenuse_enrichment").get<double>()) + ")");
  return v;
}

Verdict criterion5() {
  Verdict v;
  const json drive_v = cos_drive(1.0, 2.0, 3.0, 0.0);
  const json w0 = results_of(qwz_config(drive_v, cos_drive(2.0, 1.0, 3.0, 0.0), "winding"));
  v.require(w0.at("cx_nonzero").get<bool>() != w0.at("cy_nonzero").get<bool>(),
            "phi=0: pattern " + w0.at("pattern").get<std::string>() + " (one direction all zero)");
  const json w1 = results_of(qwz_config(drive_v, cos_drive(2.0, 1.0, 3.0, M_PI / 3), "winding"));
  v.require(w1.at("pattern") == "xy", "phi=pi/3: pattern " + w1.at("pattern").get<std::string>());
  json open = qwz_config(drive_v, cos_drive(2.0, 1.0, 3.0, M_PI / 3), "density");
  open["geometry"] = {{"shape", "square"}, {"bx", "open"}, {"by", "open"}};
  const json d = results_of(open);
  const double enrich = d.at("corner_enrichment").get<double>();
  v.require(d.at("peak_at_corner").get<bool>() && enrich > 1,
            "phi=pi/3 fully open 20x20: density peak at a corner, corner enrichment " + fmt(enrich));
  return v;
}

// Power series for J0, independent of the quadrature in the library.
double j0_series(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 60; ++m) {
    term *= -(x * x / 4) / (static_cast<double>(m) * m);
    sum += term;
  }
  return sum;
}

Verdict criterion6() {
  Verdict v;
  double worst_j0 = 0.0;
  double worst_n = 0.0;
  for (double omega : {3.0, 5.0, 10.0, 50.0}) {
    for (double phi : {0.0, M_PI}) {
      Qwz2DParams p;
      p.v = CosDrive{1.0, 2.0, omega, 0.0};
      p.gamma = CosDrive{2.0, 1.0, omega, phi};
      const QwzAnalytic a = qwz_analytic_effective(p, 0.4, -1.1);
      const double ref = j0_series(2 * 2.0 / omega);
      worst_j0 = std::max(worst_j0, std::abs(a.j0 - ref));
      // The first harmonic of gamma is odd against cos(2p sin wt) and drops out.
      worst_n = std::max(worst_n, std::abs(a.n_factor - 2.0 * ref));
    }
  }
  v.require(worst_j0 < 1e-10, "J0 quadrature vs series: max deviation " + fmt(worst_j0));
  v.require(worst_n < 1e-10, "N quadrature vs gamma0 J0 series: max deviation " + fmt(worst_n));
  const json m = results_of(
      qwz_config(cos_drive(1.0, 2.0, 50.0, 0.0), cos_drive(2.0, 1.0, 50.0, 0.0), "magnus"));
  const double res = m.at("residual").get<double>();
  v.require(res < 1e-2, "omega=50: order-0 Magnus vs Floquet quasi-energies, relative " + fmt(res));
  return v;
}

Verdict criterion7() {
  Verdict v;
  std::map<std::string, std::string> pattern;
  for (const char* t : {"A", "B", "C"}) {
    json c = {{"model",
               {{"kind", "qwz"},
                {"M", 1.0},
                {"tempo", {{"name", t}, {"v0", 1.0}, {"gamma0", 2.0}, {"T", 3.0}}}}},
              {"task", "quench"}};
    pattern[t] = results_of(c).at("pattern").get<std::string>();
  }
  auto single = [](const std::string& s) { return s == "x" || s == "y"; };
  v.require(single(pattern["A"]) && single(pattern["B"]),
            "tempo A: " + pattern["A"] + ", tempo B: " + pattern["B"] + " (one direction each)");
  v.require(pattern["A"] != pattern["B"], "directions interchanged between A and B");
  v.require(pattern["C"] == "xy", "tempo C: " + pattern["C"] + " (both directions)");
  return v;
}

double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / xs.size();
    my += ys[i] / ys.size();
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

Verdict criterion8() {
  Verdict v;
  {
    const Chain1DParams p = fig1(M_PI / 2);
    const ComplexMatrix ref = chain_floquet_bloch(p, 0.3, 1 << 16).matrix;
    std::vector<double> xs;
    std::vector<double> ys;
    for (int n = 64; n <= 4096; n *= 2) {
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(operator_norm(chain_floquet_bloch(p, 0.3, n).matrix - ref)));
    }
    const double slope = -fitted_slope(xs, ys);
    v.require(slope >= 1.8 && slope <= 2.2, "Trotter slope " + fmt(slope));
  }
  {
    double worst = 0.0;
    for (int L : {3, 7, 20}) {
      Chain1DParams p = fig1(0.7);
      p.length = L;
      const auto g = LatticeGeometry::chain(L, Boundary::periodic);
      for (double t : {0.0, 0.37}) {
        std::vector<Complex> bloch;
        for (int m = 0; m < L; ++m) {
          const auto e = eigenvalues(bloch_h1(p, 2 * M_PI * m / L, t));
          bloch.insert(bloch.end(), e.begin(), e.end());
        }
        worst = std::max(worst, multiset_distance(eigenvalues(real_space_h1(p, g, t)), bloch));
      }
    }
    Qwz2DParams q;
    q.lx = 5;
    q.ly = 4;
    const auto g = LatticeGeometry::square(5, 4, Boundary::periodic, Boundary::periodic);
    std::vector<Complex> bloch;
    for (int a = 0; a < 5; ++a) {
      for (int b = 0; b < 4; ++b) {
        const auto e = eigenvalues(bloch_h2d(q, 2 * M_PI * a / 5, 2 * M_PI * b / 4, 0.0));
        bloch.insert(bloch.end(), e.begin(), e.end());
      }
    }
    worst = std::max(worst, multiset_distance(eigenvalues(real_space_h2d(q, g, 0.0)), bloch));
    v.require(worst < 1e-8, "PBC vs Bloch spectra: max distance " + fmt(worst));
  }
  {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0.0, 1.0);
    bool ok = true;
    for (int trial = 0; trial < 50; ++trial) {
      ComplexVector x(30);
      for (int i = 0; i < 30; ++i) x(i) = Complex{n(rng), n(rng)};
      const double r = ipr(x);
      const double scaled = ipr(Complex{2.5, -1.0} * x);
      ok = ok && r >= 1.0 / 30 - 1e-15 && r <= 1.0 + 1e-15 && std::abs(r - scaled) < 1e-14;
    }
    ComplexVector e = ComplexVector::Zero(30);
    e(4) = 1.0;
    ok = ok && std::abs(ipr(e) - 1.0) < 1e-15 && std::abs(ipr(ComplexVector::Ones(30)) - 1.0 / 30) < 1e-15;
    v.require(ok, "IPR within [1/n, 1] and scale invariant");
  }
  {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    bool ok = true;
    int accepted = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const Complex c1{u(rng), u(rng)};
      const Complex c2{u(rng), u(rng)};
      const Complex cm{u(rng), u(rng)};
      auto h = [&](double k) {
        ComplexMatrix m(1, 1);
        m(0, 0) = c1 * std::exp(Complex{0, k}) + c2 * std::exp(Complex{0, 2 * k}) + cm * std::exp(Complex{0, -k});
        return m;
      };
      const Complex base{0.1 * u(rng), 0.1 * u(rng)};
      try {
        const WindingResult a = winding_1d(h, base, 2001);
        const WindingResult b = winding_1d(h, base, 4002);
        ok = ok && a.residual < 0.05 && a.winding == b.winding;
        ++accepted;
      } catch (const NumericalError&) {
      }
    }
    v.require(ok && accepted >= 15, "winding integrality and stability under refinement (" +
                                        std::to_string(accepted) + "/20 random loops accepted)");
  }
  {
    const NonBlochModel chain = non_bloch_from_chain(fig1(0.0));
    double dev = 0.0;
    for (const auto& s : gbz_radii(chain, obc_energies(chain))) {
      if (s.matched) dev = std::max(dev, std::abs(s.gbz_radius - 1.0));
    }
    v.require(dev < 1e-6, "static PT chain GBZ radius deviation " + fmt(dev));
    const double tr = 1.5;
    const double tl = 0.5;
    const NonBlochModel hn = hatano_nelson(tr, tl);
    double hdev = 0.0;
    for (const auto& s : gbz_radii(hn, obc_energies(hn))) {
      hdev = std::max(hdev, std::abs(s.gbz_radius - std::sqrt(tl / tr)));
    }
    v.require(hdev < 1e-6, "Hatano-Nelson GBZ radius deviation from sqrt(tL/tR): " + fmt(hdev));
  }
  {
    json c = chain_config(0.0, "winding");
    c["model"]["L"] = 16;
    c["numeric"] = {{"n_k", 401}, {"base_grid", 4}};
    std::vector<json> phis;
    for (int i = 0; i < 13; ++i) phis.push_back(M_PI * i / 12);
    const SweepResult one = sweep(c, "phi", phis, 1, {false});
    const SweepResult four = sweep(c, "phi", phis, 4, {false});
    v.require(one.table.str() == four.table.str() && one.report.dump() == four.report.dump(),
              "13-point phase sweep byte-identical for 1 and 4 workers");
  }
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 phase switch of chain skin localization", criterion1},
      {"2 chain winding transition", criterion2},
      {"3 drive reflection implies Floquet PT", criterion3},
      {"4 static 2D directional skin effect", criterion4},
      {"5 driven 2D two-direction skin effect", criterion5},
      {"6 analytic effective model and Magnus", criterion6},
      {"7 quench tempo interchange", criterion7},
      {"8 property suites", criterion8},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << name << "  (" << fmt(s) << " s)"
              << v.detail.str() << "\n"
              << std::flush;
    failures += v.pass ? 0 : 1;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria pass\n";
  return failures == 0 ? 0 : 1;
}
