#include "nhse/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "nhse/driven.hpp"
#include "nhse/floquet.hpp"
#include "nhse/parallel.hpp"
#include "nhse/spectral.hpp"
#include "nhse/topology.hpp"

namespace nhse {

namespace {

const std::set<std::string> kTasks{"spectrum", "winding", "phase-sweep", "density",
                                   "quench",   "gbz",     "check-symmetry", "magnus"};

// Reads fields from one config section while building its echo.
class Section {
public:
  Section(const json& source, std::string name) : name_(std::move(name)) {
    if (source.is_null()) return;
    if (!source.is_object()) fail("must be an object");
    src_ = source;
  }

  double number(const std::string& key, double fallback) {
    double v = fallback;
    if (src_.contains(key)) {
      const json& j = src_.at(key);
      if (!j.is_number()) fail("'" + key + "' must be a number");
      v = j.get<double>();
      if (!std::isfinite(v)) fail("'" + key + "' must be finite");
    }
    echo_[key] = v;
    return v;
  }

  int integer(const std::string& key, int fallback) {
    int v = fallback;
    if (src_.contains(key)) {
      const json& j = src_.at(key);
      if (!j.is_number_integer()) fail("'" + key + "' must be an integer");
      v = j.get<int>();
    }
    echo_[key] = v;
    return v;
  }

  bool boolean(const std::string& key, bool fallback) {
    bool v = fallback;
    if (src_.contains(key)) {
      if (!src_.at(key).is_boolean()) fail("'" + key + "' must be true or false");
      v = src_.at(key).get<bool>();
    }
    echo_[key] = v;
    return v;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    std::string v = fallback;
    if (src_.contains(key)) {
      if (!src_.at(key).is_string()) fail("'" + key + "' must be a string");
      v = src_.at(key).get<std::string>();
    }
    echo_[key] = v;
    return v;
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    if (src_.contains(key)) {
      const json& j = src_.at(key);
      if (!j.is_array()) fail("'" + key + "' must be an array of numbers");
      fallback.clear();
      for (const auto& x : j) {
        if (!x.is_number()) fail("'" + key + "' must be an array of numbers");
        fallback.push_back(x.get<double>());
      }
    }
    echo_[key] = fallback;
    return fallback;
  }

  bool has(const std::string& key) const { return src_.contains(key); }
  const json& raw(const std::string& key) const { return src_.at(key); }
  void set_echo(const std::string& key, json value) { echo_[key] = std::move(value); }

  /// Rejects keys that were never read.
  json finish() const {
    for (const auto& [key, value] : src_.items()) {
      if (!echo_.contains(key)) fail("unknown field '" + key + "'");
    }
    return echo_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("cli.config", name_ + ": " + what);
  }

private:
  std::string name_;
  json src_ = json::object();
  json echo_ = json::object();
};

json cos_json(double a, double b, double omega, double phi) {
  return {{"type", "cos"}, {"a", a}, {"b", b}, {"omega", omega}, {"phi", phi}};
}

DriveSchedule read_drive(Section& sec, const std::string& key, const json& fallback) {
  const json source = sec.has(key) ? sec.raw(key) : fallback;
  DriveSchedule d;
  try {
    d = drive_from_json(source);
  } catch (const ValidationError& e) {
    sec.fail("'" + key + "': " + e.what());
  }
  sec.set_echo(key, source.is_object() && source.value("type", "") == "quench" ? source
                                                                               : drive_to_json(d));
  return d;
}

json normalize_numeric(const json& source, json& echo_out) {
  Section s(source, "numeric");
  const int steps = s.integer("steps", 0);
  const int split_steps = s.integer("split_steps", 128);
  const int n_k = s.integer("n_k", 2001);
  const int base_grid = s.integer("base_grid", 10);
  const int cuts = s.integer("cuts", 11);
  s.number("residual_tolerance", 0.05);
  s.number("max_step", 2.0);
  s.number("spectrum_threshold", 1e-8);
  s.number("edge_factor", 5.0);
  if (steps < 0 || (steps > 0 && steps < 4)) s.fail("'steps' must be 0 (default) or >= 4");
  if (split_steps < 4) s.fail("'split_steps' must be >= 4");
  if (n_k < 3) s.fail("'n_k' must be >= 3");
  if (base_grid < 1) s.fail("'base_grid' must be >= 1");
  if (cuts < 1) s.fail("'cuts' must be >= 1");
  echo_out = s.finish();
  return echo_out;
}

std::vector<double> default_cuts(int n) {
  std::vector<double> out;
  for (int m = 0; m < n; ++m) out.push_back(-M_PI + 2.0 * M_PI * (m + 0.5) / n);
  return out;
}

}  // namespace

int default_workers() {
  if (const char* env = std::getenv("NHSE_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 4096) return static_cast<int>(v);
  }
  return 1;
}

RunConfig parse_config(const json& config) {
  if (!config.is_object()) throw ValidationError("cli.config", "configuration must be a JSON object");
  static const std::set<std::string> top{"model", "geometry", "task", "numeric", "output", "workers"};
  for (const auto& [key, value] : config.items()) {
    if (!top.count(key)) throw ValidationError("cli.config", "unknown section '" + key + "'");
  }
  RunConfig cfg;
  json echo = json::object();

  // Model.
  Section model(config.value("model", json()), "model");
  const std::string kind = model.text("kind", "chain");
  if (kind == "chain") {
    cfg.kind = ModelKind::chain;
    Chain1DParams& p = cfg.chain;
    p.t0 = model.number("t0", 1.0);
    p.tp = model.number("tp", 0.5);
    p.t2 = model.number("t2", 2.0);
    p.gamma2 = model.number("gamma2", 0.0);
    p.length = model.integer("L", 40);
    p.t1 = read_drive(model, "t1", cos_json(0.7, 1.2, 5.0, 0.0));
    p.gamma1 = read_drive(model, "gamma1", cos_json(5.0, 7.0, 5.0, 0.0));
    try {
      validate(p);
      drive_period(p);
    } catch (const ValidationError& e) {
      model.fail(e.what());
    }
  } else if (kind == "qwz") {
    cfg.kind = ModelKind::qwz;
    Qwz2DParams& p = cfg.qwz;
    cfg.mass_defaulted = !model.has("M");
    if (model.has("M") && model.raw("M").is_array()) {
      const json& m = model.raw("M");
      if (m.size() != 2 || !m[0].is_number() || !m[1].is_number()) {
        model.fail("'M' must be a number or [re, im]");
      }
      p.mass = {m[0].get<double>(), m[1].get<double>()};
      model.set_echo("M", json::array({p.mass.real(), p.mass.imag()}));
    } else {
      p.mass = model.number("M", 1.0);
    }
    p.lx = model.integer("Lx", 20);
    p.ly = model.integer("Ly", 20);
    if (model.has("tempo")) {
      Section tempo(model.raw("tempo"), "model.tempo");
      const std::string name = tempo.text("name", "A");
      const double v0 = tempo.number("v0", 1.0);
      const double g0 = tempo.number("gamma0", 2.0);
      const double period = tempo.number("T", 3.0);
      try {
        std::tie(p.v, p.gamma) = tempo_schedules(name, v0, g0, period);
      } catch (const ValidationError& e) {
        tempo.fail(e.what());
      }
      model.set_echo("tempo", tempo.finish());
    } else {
      p.v = read_drive(model, "v", cos_json(1.0, 2.0, 3.0, 0.0));
      p.gamma = read_drive(model, "gamma", cos_json(2.0, 1.0, 3.0, 0.0));
    }
    try {
      validate(p);
      drive_period(p);
    } catch (const ValidationError& e) {
      model.fail(e.what());
    }
  } else if (kind == "hatano-nelson") {
    cfg.kind = ModelKind::hatano_nelson;
    cfg.t_right = model.number("t_right", 1.5);
    cfg.t_left = model.number("t_left", 0.5);
    cfg.hn_length = model.integer("L", 40);
    if (cfg.hn_length < 2) model.fail("L must be >= 2");
  } else {
    model.fail("unknown kind '" + kind + "'");
  }
  echo["model"] = model.finish();

  // Geometry.
  Section geo(config.value("geometry", json()), "geometry");
  const std::string shape = geo.text("shape", cfg.kind == ModelKind::qwz ? "square" : "chain");
  const std::string bx = geo.text("bx", "open");
  const std::string by = geo.text("by", "open");
  try {
    const Shape s = parse_shape(shape);
    parse_boundary(bx);
    parse_boundary(by);
    if ((cfg.kind == ModelKind::qwz) == (s == Shape::chain)) {
      geo.fail("shape '" + shape + "' does not fit the model");
    }
    if (s == Shape::triangle && (bx != "open" || by != "open")) {
      geo.fail("periodic boundary requested on a triangle");
    }
  } catch (const ValidationError& e) {
    if (std::string(e.what()).find("cli.config") == 0) throw;
    geo.fail(e.what());
  }
  echo["geometry"] = geo.finish();

  // Task.
  if (!config.contains("task")) throw ValidationError("cli.config", "missing 'task' section");
  json task_src = config.at("task");
  if (task_src.is_string()) task_src = json{{"name", task_src}};
  Section task(task_src, "task");
  cfg.task = task.text("name", "");
  if (!kTasks.count(cfg.task)) task.fail("unknown task '" + cfg.task + "'");
  const bool periodic = cfg.kind == ModelKind::chain   ? drive_period(cfg.chain) > 0.0
                        : cfg.kind == ModelKind::qwz   ? drive_period(cfg.qwz) > 0.0
                                                       : false;
  if (cfg.task == "spectrum" || cfg.task == "density") {
    if (cfg.kind == ModelKind::hatano_nelson) task.fail("needs the chain or qwz model");
    task.numbers("select_modulus", {});
  } else if (cfg.task == "winding" || cfg.task == "quench") {
    if (cfg.kind == ModelKind::hatano_nelson) {
      // Static scalar loop.
    }
    if (cfg.task == "quench" && !(cfg.kind == ModelKind::qwz && echo["model"].contains("tempo"))) {
      task.fail("quench needs the qwz model with a 'tempo' block");
    }
    if (task.has("base") && task.raw("base").is_array()) {
      const json& b = task.raw("base");
      if (b.size() != 2 || !b[0].is_number() || !b[1].is_number()) task.fail("'base' must be [re, im]");
      task.set_echo("base", b);
    } else {
      const std::string b = task.text("base", "centroid");
      if (b != "centroid") task.fail("'base' must be \"centroid\" or [re, im]");
    }
    task.boolean("scan", true);
    const std::string frame = task.text("frame", "exact");
    if (frame != "exact" && frame != "analytic") task.fail("'frame' must be exact or analytic");
    if (frame == "analytic" && cfg.kind != ModelKind::qwz) task.fail("analytic frame needs qwz");
    task.numbers("fixed_x", {});
    task.numbers("fixed_y", {});
  } else if (cfg.task == "phase-sweep") {
    if (cfg.kind == ModelKind::hatano_nelson) task.fail("needs a driven model");
    const int n_phi = task.integer("n_phi", 13);
    if (n_phi < 1) task.fail("'n_phi' must be >= 1");
    std::vector<double> phis;
    for (int i = 0; i < n_phi; ++i) phis.push_back(n_phi == 1 ? 0.0 : M_PI * i / (n_phi - 1));
    task.numbers("phis", phis);
  } else if (cfg.task == "gbz") {
    if (cfg.kind == ModelKind::qwz) task.fail("gbz needs a one-dimensional model");
    task.number("time", 0.0);
    if (task.integer("cells", 40) < 2) task.fail("'cells' must be >= 2");
    task.boolean("refine", true);
  } else if (cfg.task == "check-symmetry") {
    if (cfg.kind == ModelKind::hatano_nelson) task.fail("needs the chain or qwz model");
    task.number("k", 0.3);
    if (task.integer("tv_points", 64) < 1) task.fail("'tv_points' must be >= 1");
    if (task.integer("k_points", 32) < 1) task.fail("'k_points' must be >= 1");
    if (task.integer("t_points", 64) < 1) task.fail("'t_points' must be >= 1");
  } else if (cfg.task == "magnus") {
    if (cfg.kind != ModelKind::qwz) task.fail("magnus needs the qwz model");
    json pts = json::array({json::array({0.3, 0.7}), json::array({1.5, -0.4}),
                            json::array({-2.0, 1.1})});
    if (task.has("points")) {
      pts = task.raw("points");
      bool ok = pts.is_array() && !pts.empty();
      for (const auto& p : pts) ok = ok && p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number();
      if (!ok) task.fail("'points' must be a nonempty list of [kx, ky]");
    }
    task.set_echo("points", pts);
    const int order = task.integer("order", 0);
    if (order != 0 && order != 1) task.fail("'order' must be 0 or 1");
    try {
      qwz_frame(cfg.qwz);
    } catch (const ValidationError& e) {
      task.fail(e.what());
    }
  }
  if ((cfg.task == "phase-sweep" || cfg.task == "check-symmetry" || cfg.task == "magnus") &&
      !periodic) {
    task.fail("task '" + cfg.task + "' needs a time-periodic drive");
  }
  echo["task"] = task.finish();

  json numeric_echo;
  normalize_numeric(config.value("numeric", json()), numeric_echo);
  echo["numeric"] = numeric_echo;

  Section out(config.value("output", json()), "output");
  out.text("directory", "nhse-out");
  json formats = json::array({"csv", "json", "svg"});
  if (out.has("formats")) {
    formats = out.raw("formats");
    bool ok = formats.is_array();
    for (const auto& f : formats) {
      ok = ok && f.is_string() &&
           (f.get<std::string>() == "csv" || f.get<std::string>() == "json" || f.get<std::string>() == "svg");
    }
    if (!ok) out.fail("'formats' must list csv, json and/or svg");
  }
  out.set_echo("formats", formats);
  echo["output"] = out.finish();

  if (config.contains("workers")) {
    if (!config.at("workers").is_number_integer() || config.at("workers").get<int>() < 1) {
      throw ValidationError("cli.config", "'workers' must be a positive integer");
    }
    cfg.workers = config.at("workers").get<int>();
  } else {
    cfg.workers = default_workers();
  }
  echo["workers"] = cfg.workers;
  cfg.echo = echo;
  return cfg;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  std::set<std::string> formats;

  void csv(const std::string& name, const CsvTable& t) {
    if (formats.count("csv")) files.emplace_back(name, t.str());
  }
  void svg(const std::string& name, const std::vector<PlotPoint>& pts, PlotKind kind,
           const std::string& title) {
    if (formats.count("svg") && !pts.empty()) files.emplace_back(name, render_svg(pts, kind, title));
  }
};

WindingOptions winding_options(const json& numeric) {
  WindingOptions o;
  o.residual_tolerance = numeric.at("residual_tolerance").get<double>();
  o.max_step = numeric.at("max_step").get<double>();
  o.spectrum_threshold = numeric.at("spectrum_threshold").get<double>();
  return o;
}

LatticeGeometry make_geometry(const RunConfig& cfg) {
  const json& g = cfg.echo.at("geometry");
  const Shape shape = parse_shape(g.at("shape").get<std::string>());
  const Boundary bx = parse_boundary(g.at("bx").get<std::string>());
  const Boundary by = parse_boundary(g.at("by").get<std::string>());
  if (shape == Shape::chain) {
    return LatticeGeometry::chain(cfg.kind == ModelKind::chain ? cfg.chain.length : cfg.hn_length, bx);
  }
  if (shape == Shape::triangle) return LatticeGeometry::triangle(cfg.qwz.lx);
  return LatticeGeometry::square(cfg.qwz.lx, cfg.qwz.ly, bx, by);
}

double model_period(const RunConfig& cfg) {
  if (cfg.kind == ModelKind::chain) return drive_period(cfg.chain);
  if (cfg.kind == ModelKind::qwz) return drive_period(cfg.qwz);
  return 0.0;
}

// Re-expresses Floquet multipliers as quasi-energies and restores the
// lexicographic order, carrying eigenvectors and IPRs along.
void to_quasi_energies(SpectralSet& s, double period) {
  std::vector<std::size_t> order(s.size());
  std::vector<Complex> eps(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    order[i] = i;
    eps[i] = quasi_energy(s.values[i], period);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (eps[a].real() != eps[b].real()) return eps[a].real() < eps[b].real();
    return eps[a].imag() < eps[b].imag();
  });
  SpectralSet out;
  out.vectors.resize(s.vectors.rows(), s.vectors.cols());
  out.max_residual = s.max_residual;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.values.push_back(eps[order[i]]);
    out.ipr.push_back(s.ipr[order[i]]);
    out.vectors.col(static_cast<Eigen::Index>(i)) = s.vectors.col(static_cast<Eigen::Index>(order[i]));
  }
  s = std::move(out);
}

struct RealSpace {
  SpectralSet states;
  double period = 0.0;
  std::vector<bool> edge;
};

RealSpace real_space(const RunConfig& cfg, const LatticeGeometry& g) {
  const json& numeric = cfg.echo.at("numeric");
  const int steps = numeric.at("steps").get<int>();
  RealSpace out;
  out.period = model_period(cfg);
  if (cfg.kind == ModelKind::chain) {
    if (out.period > 0.0) {
      out.states = eig(chain_floquet_real(cfg.chain, g, steps).matrix, "U(T) chain");
    } else {
      out.states = eig(real_space_h1(cfg.chain, g, 0.0), "H chain");
    }
  } else {
    if (out.period > 0.0) {
      const int split = steps > 0 ? steps : numeric.at("split_steps").get<int>();
      out.states = eig(qwz_floquet_real(cfg.qwz, g, split).matrix, "U(T) qwz");
    } else {
      out.states = eig(real_space_h2d(cfg.qwz, g, 0.0), "H qwz");
    }
  }
  if (out.period > 0.0) to_quasi_energies(out.states, out.period);
  out.edge = isolated_states(out.states.values, numeric.at("edge_factor").get<double>(),
                             out.period > 0.0 ? 2.0 * M_PI / out.period : 0.0);
  return out;
}

json localization_summary(const RunConfig& cfg, const LatticeGeometry& g, const RealSpace& rs,
                          const std::vector<double>& rho) {
  json r;
  const auto& s = rs.states;
  std::size_t n_edge = 0;
  double min_bulk = 1.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (rs.edge[i]) {
      ++n_edge;
    } else {
      min_bulk = std::min(min_bulk, s.ipr[i]);
    }
  }
  r["states"] = s.size();
  r["edge_states"] = n_edge;
  r["max_ipr"] = max_ipr(s);
  r["max_ipr_bulk"] = n_edge < s.size() ? max_ipr(s, rs.edge) : 0.0;
  r["min_ipr_bulk"] = min_bulk;
  r["eigen_residual"] = s.max_residual;
  const std::size_t peak = argmax_site(rho);
  r["peak_x"] = g.site(static_cast<int>(peak)).x;
  r["peak_y"] = g.site(static_cast<int>(peak)).y;
  if (cfg.kind == ModelKind::chain) {
    r["edge_bulk_ratio"] = chain_edge_bulk_ratio(rho);
    r["dominant_edge"] = rho.front() >= rho.back() ? "left" : "right";
  } else {
    auto ratio = [](const std::vector<double>& line) {
      const std::size_t n = line.size();
      double bulk = 0.0;
      const std::size_t lo = n / 4;
      const std::size_t hi = std::max(lo + 1, 3 * n / 4);
      for (std::size_t i = lo; i < hi; ++i) bulk += line[i];
      bulk /= static_cast<double>(hi - lo);
      return std::max(line.front(), line.back()) / bulk;
    };
    if (g.shape() == Shape::square) {
      r["edge_row_ratio"] = ratio(line_profile(g, rho, true));
      r["edge_col_ratio"] = ratio(line_profile(g, rho, false));
      const CornerStats c = corner_stats(g, rho);
      r["peak_at_corner"] = c.max_at_corner;
      r["corner_enrichment"] = c.corner_enrichment;
    } else {
      const int l = g.extent_x();
      double hyp = 0.0;
      int n_hyp = 0;
      double total = 0.0;
      for (int i = 0; i < g.num_sites(); ++i) {
        total += rho[static_cast<std::size_t>(i)];
        if (g.site(i).x + g.site(i).y == l + 1) {
          hyp += rho[static_cast<std::size_t>(i)];
          ++n_hyp;
        }
      }
      const Site& p = g.site(static_cast<int>(peak));
      r["peak_on_hypotenuse"] = p.x + p.y == l + 1;
      r["hypotenuse_enrichment"] = (hyp / n_hyp) / (total / g.num_sites());
    }
  }
  return r;
}

std::vector<PlotPoint> spectrum_points(const std::vector<Complex>& values,
                                       const std::vector<bool>& edge) {
  std::vector<PlotPoint> pts;
  for (std::size_t i = 0; i < values.size(); ++i) {
    pts.push_back({values[i].real(), values[i].imag(), 0.0, i < edge.size() && edge[i] ? 1 : 0});
  }
  return pts;
}

std::vector<PlotPoint> density_points(const LatticeGeometry& g, const std::vector<double>& rho) {
  std::vector<PlotPoint> pts;
  for (int i = 0; i < g.num_sites(); ++i) {
    pts.push_back({static_cast<double>(g.site(i).x), static_cast<double>(g.site(i).y),
                   rho[static_cast<std::size_t>(i)], 0});
  }
  return pts;
}

json task_real_space(const RunConfig& cfg, Outputs& out, bool with_density) {
  const LatticeGeometry g = make_geometry(cfg);
  const RealSpace rs = real_space(cfg, g);
  const std::vector<double> rho = density_profile(rs.states, g);
  json r = localization_summary(cfg, g, rs, rho);
  r["geometry"] = g.id();
  r["period"] = rs.period;
  out.csv("spectrum.csv", spectrum_table(rs.states));
  out.svg("spectrum.svg", spectrum_points(rs.states.values, rs.edge), PlotKind::scatter,
          rs.period > 0.0 ? "quasi-energies" : "eigenvalues");
  if (with_density) {
    out.csv("density.csv", density_table(g, rho));
    out.svg("density.svg", density_points(g, rho), PlotKind::heatmap, "summed density");
  }
  json selected = json::array();
  for (double m : cfg.echo.at("task").at("select_modulus").get<std::vector<double>>()) {
    const std::size_t idx = select_by_modulus(rs.states.values, m);
    const std::vector<double> one = density_profile(rs.states, g, {idx});
    const std::string name = "state_" + std::to_string(selected.size()) + ".csv";
    out.csv(name, density_table(g, one));
    selected.push_back({{"modulus", m},
                        {"index", idx},
                        {"re", rs.states.values[idx].real()},
                        {"im", rs.states.values[idx].imag()},
                        {"ipr", rs.states.ipr[idx]},
                        {"file", name}});
  }
  if (!selected.empty()) r["selected_states"] = selected;
  return r;
}

struct LoopCut {
  std::string axis;  // "k" for chains, "x" or "y" for C_x / C_y
  double fixed = 0.0;
};

SampledLoop build_loop(const RunConfig& cfg, const LoopCut& cut, int n_k) {
  const int steps = cfg.echo.at("numeric").at("steps").get<int>();
  const bool analytic = cfg.echo.at("task").value("frame", "exact") == "analytic";
  const double period = model_period(cfg);
  if (cfg.kind == ModelKind::hatano_nelson) {
    const NonBlochModel m = hatano_nelson(cfg.t_right, cfg.t_left);
    return sample_loop([m](double k) { return m.h(std::exp(kI * k)); }, n_k, cfg.workers);
  }
  if (cfg.kind == ModelKind::chain) {
    if (period > 0.0) {
      return sample_floquet_loop(
          [&](double k) { return chain_floquet_bloch(cfg.chain, k, steps).matrix; }, period, n_k,
          cfg.workers);
    }
    return sample_loop([&](double k) { return bloch_h1(cfg.chain, k, 0.0); }, n_k, cfg.workers);
  }
  // C_y varies ky at fixed kx; C_x varies kx at fixed ky.
  auto point = [&](double k) {
    return cut.axis == "y" ? std::pair{cut.fixed, k} : std::pair{k, cut.fixed};
  };
  if (analytic) {
    return sample_loop(
        [&](double k) {
          const auto [kx, ky] = point(k);
          return qwz_analytic_effective(cfg.qwz, kx, ky).matrix;
        },
        n_k, cfg.workers);
  }
  if (period > 0.0) {
    return sample_floquet_loop(
        [&](double k) {
          const auto [kx, ky] = point(k);
          return qwz_floquet_bloch(cfg.qwz, kx, ky, steps).matrix;
        },
        period, n_k, cfg.workers);
  }
  return sample_loop(
      [&](double k) {
        const auto [kx, ky] = point(k);
        return bloch_h2d(cfg.qwz, kx, ky, 0.0);
      },
      n_k, cfg.workers);
}

json winding_json(const WindingResult& w) {
  return {{"C", w.winding},
          {"base_re", w.base_point.real()},
          {"base_im", w.base_point.imag()},
          {"raw_phase", w.raw_phase},
          {"residual", w.residual},
          {"max_step", w.max_step},
          {"k_samples", w.k_samples}};
}

struct CutResult {
  json result;
  bool nonzero = false;
  std::vector<WindingResult> windings;
};

CutResult analyse_cut(const RunConfig& cfg, const LoopCut& cut) {
  const json& numeric = cfg.echo.at("numeric");
  const json& task = cfg.echo.at("task");
  const WindingOptions opt = winding_options(numeric);
  const SampledLoop loop = build_loop(cfg, cut, numeric.at("n_k").get<int>());
  CutResult out;
  out.result["axis"] = cut.axis;
  out.result["fixed"] = cut.fixed;
  const json base = task.value("base", json("centroid"));
  if (base.is_array()) {
    // Explicit base points are the caller's responsibility: errors propagate.
    const WindingResult w = winding(loop, {base[0].get<double>(), base[1].get<double>()}, opt);
    out.result["base"] = winding_json(w);
    out.windings.push_back(w);
    out.nonzero = w.winding != 0;
  } else {
    const Complex c = spectral_centroid(loop.energies);
    try {
      const WindingResult w = winding(loop, c, opt);
      out.result["base"] = winding_json(w);
      out.windings.push_back(w);
      out.nonzero = w.winding != 0;
    } catch (const NumericalError& e) {
      out.result["base"] = {{"base_re", c.real()}, {"base_im", c.imag()}, {"skipped", e.what()}};
    }
  }
  if (task.value("scan", true)) {
    const AreaScan scan = spectral_area_flag(loop, numeric.at("base_grid").get<int>(), opt);
    out.nonzero = out.nonzero || scan.nonzero;
    int nonzero_points = 0;
    for (const auto& w : scan.windings) {
      out.windings.push_back(w);
      nonzero_points += w.winding != 0 ? 1 : 0;
    }
    out.result["scan_accepted"] = scan.windings.size();
    out.result["scan_nonzero"] = nonzero_points;
    out.result["scan_skipped"] = scan.skipped.size();
  }
  out.result["nonzero"] = out.nonzero;
  return out;
}

std::vector<LoopCut> loop_cuts(const RunConfig& cfg) {
  if (cfg.kind != ModelKind::qwz) return {{"k", 0.0}};
  const json& task = cfg.echo.at("task");
  const int cuts = cfg.echo.at("numeric").at("cuts").get<int>();
  auto fixed_x = task.at("fixed_x").get<std::vector<double>>();
  auto fixed_y = task.at("fixed_y").get<std::vector<double>>();
  if (fixed_x.empty()) fixed_x = default_cuts(cuts);
  if (fixed_y.empty()) fixed_y = default_cuts(cuts);
  std::vector<LoopCut> out;
  for (double k : fixed_y) out.push_back({"x", k});
  for (double k : fixed_x) out.push_back({"y", k});
  return out;
}

json task_winding(const RunConfig& cfg, Outputs& out) {
  const std::vector<LoopCut> cuts = loop_cuts(cfg);
  CsvTable table{{"axis", "fixed", "base_re", "base_im", "C", "residual"}, {}};
  json cut_results = json::array();
  bool nonzero_x = false;
  bool nonzero_y = false;
  bool nonzero = false;
  for (const LoopCut& cut : cuts) {
    CutResult r = analyse_cut(cfg, cut);
    for (const auto& w : r.windings) {
      table.add_row({cut.axis, format_double(cut.fixed), format_double(w.base_point.real()),
                     format_double(w.base_point.imag()), std::to_string(w.winding),
                     format_double(w.residual)});
    }
    nonzero = nonzero || r.nonzero;
    if (cut.axis == "x") nonzero_x = nonzero_x || r.nonzero;
    if (cut.axis == "y") nonzero_y = nonzero_y || r.nonzero;
    cut_results.push_back(r.result);
  }
  out.csv("windings.csv", table);
  json res{{"cuts", cut_results}, {"any_nonzero", nonzero}};
  if (cfg.kind == ModelKind::qwz) {
    res["cx_nonzero"] = nonzero_x;
    res["cy_nonzero"] = nonzero_y;
    res["pattern"] = nonzero_x && nonzero_y ? "xy" : nonzero_x ? "x" : nonzero_y ? "y" : "none";
  }
  return res;
}

RunConfig with_phase(const RunConfig& cfg, double phi) {
  RunConfig c = cfg;
  auto set = [&](DriveSchedule& d) {
    if (auto* cd = std::get_if<CosDrive>(&d)) cd->phase = phi;
  };
  if (c.kind == ModelKind::chain) set(c.chain.gamma1);
  if (c.kind == ModelKind::qwz) set(c.qwz.gamma);
  c.workers = 1;
  return c;
}

double phase_omega(const RunConfig& cfg) {
  const double period = model_period(cfg);
  return period > 0.0 ? 2.0 * M_PI / period : 0.0;
}

json task_phase_sweep(const RunConfig& cfg, Outputs& out) {
  const auto phis = cfg.echo.at("task").at("phis").get<std::vector<double>>();
  struct Row {
    double max_ipr = 0.0;
    bool nonzero = false;
    bool nonzero_x = false;
    bool nonzero_y = false;
    std::vector<WindingResult> windings;
  };
  std::vector<Row> rows(phis.size());
  parallel_for(phis.size(), cfg.workers, [&](std::size_t i) {
    const RunConfig c = with_phase(cfg, phis[i]);
    Row& row = rows[i];
    if (c.kind == ModelKind::chain) {
      const LatticeGeometry g = make_geometry(c);
      const RealSpace rs = real_space(c, g);
      row.max_ipr = max_ipr(rs.states, rs.edge);
    }
    for (const LoopCut& cut : loop_cuts(c)) {
      CutResult r = analyse_cut(c, cut);
      row.nonzero = row.nonzero || r.nonzero;
      if (cut.axis == "x") row.nonzero_x = row.nonzero_x || r.nonzero;
      if (cut.axis == "y") row.nonzero_y = row.nonzero_y || r.nonzero;
      row.windings.insert(row.windings.end(), r.windings.begin(), r.windings.end());
    }
  });
  const double omega = phase_omega(cfg);
  CsvTable summary = cfg.kind == ModelKind::chain
                         ? CsvTable{{"phi", "max_ipr", "any_nonzero_winding"}, {}}
                         : CsvTable{{"phi", "cx_nonzero", "cy_nonzero"}, {}};
  CsvTable diagram{{"phi", "omega", "base_re", "base_im", "C"}, {}};
  json res = json::array();
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const Row& row = rows[i];
    if (cfg.kind == ModelKind::chain) {
      summary.add_row({format_double(phis[i]), format_double(row.max_ipr), row.nonzero ? "1" : "0"});
      res.push_back({{"phi", phis[i]}, {"max_ipr", row.max_ipr}, {"any_nonzero_winding", row.nonzero}});
    } else {
      summary.add_row({format_double(phis[i]), row.nonzero_x ? "1" : "0", row.nonzero_y ? "1" : "0"});
      res.push_back({{"phi", phis[i]}, {"cx_nonzero", row.nonzero_x}, {"cy_nonzero", row.nonzero_y}});
    }
    for (const auto& w : row.windings) {
      diagram.add_row({format_double(phis[i]), format_double(omega), format_double(w.base_point.real()),
                       format_double(w.base_point.imag()), std::to_string(w.winding)});
    }
  }
  out.csv("phase_sweep.csv", summary);
  out.csv("phase_diagram.csv", diagram);
  if (cfg.kind == ModelKind::chain) {
    std::vector<PlotPoint> pts;
    for (std::size_t i = 0; i < phis.size(); ++i) pts.push_back({phis[i], rows[i].max_ipr, 0.0, 0});
    out.svg("phase_sweep.svg", pts, PlotKind::scatter, "max bulk IPR vs phase");
  }
  return {{"rows", res}};
}

json task_gbz(const RunConfig& cfg, Outputs& out) {
  const json& task = cfg.echo.at("task");
  const NonBlochModel m = cfg.kind == ModelKind::chain
                              ? non_bloch_from_chain(cfg.chain, task.at("time").get<double>())
                              : hatano_nelson(cfg.t_right, cfg.t_left);
  const auto seeds = obc_energies(m, task.at("cells").get<int>());
  GbzOptions opt;
  opt.refine = task.at("refine").get<bool>();
  const auto samples = gbz_radii(m, seeds, opt);
  out.csv("gbz.csv", gbz_table(samples));
  std::size_t matched = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double palindrome = 0.0;
  for (const auto& s : samples) {
    if (s.matched) {
      ++matched;
      lo = std::min(lo, s.gbz_radius);
      hi = std::max(hi, s.gbz_radius);
    }
    palindrome = std::max(palindrome, palindromic_residual(char_poly_coeffs(m, s.energy)));
  }
  json r{{"samples", samples.size()},
         {"matched", matched},
         {"radius_min", matched ? lo : 0.0},
         {"radius_max", hi},
         {"palindromic_residual", palindrome}};
  const double expected = cfg.kind == ModelKind::chain ? 1.0 : std::sqrt(std::abs(cfg.t_left / cfg.t_right));
  r["expected_radius"] = expected;
  r["max_radius_deviation"] = matched ? std::max(std::abs(hi - expected), std::abs(lo - expected)) : 0.0;
  return r;
}

json report_json(const SymmetryReport& r) {
  json w = json::object();
  for (const auto& [k, v] : r.witness) w[k] = v;
  return {{"identity", r.identity},
          {"residual", r.residual},
          {"tolerance", r.tolerance},
          {"pass", r.pass},
          {"witness", w}};
}

json task_check_symmetry(const RunConfig& cfg, Outputs& out) {
  const auto reports = check_symmetry(cfg);
  CsvTable t{{"identity", "residual", "tolerance", "pass"}, {}};
  json list = json::array();
  for (const auto& r : reports) {
    t.add_row({r.identity, format_double(r.residual), format_double(r.tolerance), r.pass ? "1" : "0"});
    list.push_back(report_json(r));
  }
  out.csv("symmetry.csv", t);
  return {{"reports", list}};
}

json task_magnus(const RunConfig& cfg, Outputs& out) {
  const json& task = cfg.echo.at("task");
  const int order = task.at("order").get<int>();
  const double period = model_period(cfg);
  const int steps = cfg.echo.at("numeric").at("steps").get<int>();
  CsvTable t{{"kx", "ky", "quasi_energy_error", "operator_error"}, {}};
  double worst = 0.0;
  double worst_op = 0.0;
  for (const auto& p : task.at("points")) {
    const double kx = p[0].get<double>();
    const double ky = p[1].get<double>();
    const Propagator u = qwz_floquet_bloch(cfg.qwz, kx, ky, steps);
    const EffectiveHamiltonian exact = effective_hamiltonian(u);
    const ComplexMatrix approx = magnus_effective(
        [&](double t) { return qwz_rotated_h(cfg.qwz, kx, ky, t); }, period, order);
    std::vector<Complex> folded;
    for (const Complex& e : eigenvalues(approx, "Magnus H")) {
      folded.push_back(quasi_energy(std::exp(-kI * e * period), period));
    }
    double scale = 0.0;
    for (const Complex& e : exact.quasi_energies) scale = std::max(scale, std::abs(e));
    const double err = multiset_distance(folded, exact.quasi_energies) / scale;
    const double op = operator_norm(approx - exact.matrix) / operator_norm(exact.matrix);
    worst = std::max(worst, err);
    worst_op = std::max(worst_op, op);
    t.add_row({format_double(kx), format_double(ky), format_double(err), format_double(op)});
  }
  out.csv("magnus.csv", t);
  return {{"omega", 2.0 * M_PI / period},
          {"order", order},
          {"residual", worst},
          {"operator_residual", worst_op}};
}

// Scalar fields of a result, used as one sweep row.
json summarize(const std::string& task, const json& results) {
  json s = json::object();
  for (const auto& [key, value] : results.items()) {
    if (value.is_primitive()) s[key] = value;
  }
  if (task == "winding" || task == "quench") {
    if (!s.contains("pattern")) s["pattern"] = results.value("any_nonzero", false) ? "k" : "none";
  }
  if (task == "check-symmetry") {
    for (const auto& r : results.at("reports")) s[r.at("identity").get<std::string>()] = r.at("residual");
  }
  return s;
}

}  // namespace

std::vector<SymmetryReport> check_symmetry(const RunConfig& cfg) {
  const json& task = cfg.echo.at("task");
  const double k = task.value("k", 0.3);
  SymmetrySampling sampling;
  sampling.k_points = task.value("k_points", 32);
  sampling.t_points = task.value("t_points", 64);
  sampling.period = model_period(cfg);
  if (!(sampling.period > 0.0)) {
    throw ValidationError("cli.check_symmetry", "model has no time-periodic drive");
  }
  const int steps_cfg = cfg.echo.at("numeric").at("steps").get<int>();
  std::vector<SymmetryReport> out;
  BlochDrivenH family;
  ComplexMatrix q;
  TimeDependentH at_k;
  bool piecewise = false;
  std::vector<double> cuts;
  if (cfg.kind == ModelKind::chain) {
    family = chain_family(cfg.chain);
    q = pauli::y();
    at_k = [&](double t) { return bloch_h1(cfg.chain, k, t); };
    cuts = quench_breakpoints({cfg.chain.t1, cfg.chain.gamma1});
    piecewise = !cuts.empty();
  } else {
    family = qwz_family(cfg.qwz, true, k);
    q = pauli::x();
    at_k = [&](double t) { return bloch_h2d(cfg.qwz, k, k, t); };
    cuts = quench_breakpoints({cfg.qwz.v, cfg.qwz.gamma});
    piecewise = !cuts.empty();
  }
  out.push_back(check_instantaneous_pt(family, q, sampling));
  const SymmetryReport tv = check_drive_time_symmetry(family, q, sampling, task.value("tv_points", 64));
  out.push_back(tv);
  // The Floquet identity is tested on the propagator that starts at the
  // reflection time, where the slicing is symmetric.
  const double start = tv.witness.at("t_v");
  const int steps = steps_cfg > 0 ? steps_cfg : default_steps(2.0 * M_PI / sampling.period, sampling.period);
  Propagator u;
  ComplexMatrix inv;
  if (piecewise) {
    u = propagate_piecewise(at_k, sampling.period, cuts, start);
    inv = u.matrix.inverse();
  } else {
    u = propagate(at_k, sampling.period, steps, start);
    inv = propagate_inverse(at_k, sampling.period, steps, start);
  }
  out.push_back(check_floquet_pt(u, q, kPropagatorTolerance, &inv));
  for (SymmetryKind kind : {SymmetryKind::PHS, SymmetryKind::TRS}) {
    SymmetryReport r;
    r.identity = to_string(kind) + " inherited by U(T)";
    r.tolerance = kPropagatorTolerance;
    try {
      r = check_inherited_antiunitary(family, kind, q, sampling, steps);
    } catch (const ValidationError& e) {
      r.residual = instantaneous_residual(family, kind, q, sampling);
      r.pass = false;
      r.witness["instantaneous_absent"] = 1.0;
    }
    out.push_back(r);
  }
  return out;
}

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cli.config", "cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw ValidationError("cli.config", std::string("malformed JSON: ") + e.what());
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return 2;
  if (dynamic_cast<const json::exception*>(&e)) return 2;
  return 3;
}

namespace {

std::string hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

RunReport run(const json& config, const RunOptions& options) {
  const auto t0 = Clock::now();
  const RunConfig cfg = parse_config(config);
  const double t_parse = seconds_since(t0);

  Outputs out;
  for (const auto& f : cfg.echo.at("output").at("formats")) out.formats.insert(f.get<std::string>());
  const auto t1 = Clock::now();
  json results;
  try {
    if (cfg.task == "spectrum") results = task_real_space(cfg, out, false);
    else if (cfg.task == "density") results = task_real_space(cfg, out, true);
    else if (cfg.task == "winding" || cfg.task == "quench") results = task_winding(cfg, out);
    else if (cfg.task == "phase-sweep") results = task_phase_sweep(cfg, out);
    else if (cfg.task == "gbz") results = task_gbz(cfg, out);
    else if (cfg.task == "check-symmetry") results = task_check_symmetry(cfg, out);
    else if (cfg.task == "magnus") results = task_magnus(cfg, out);
  } catch (const json::exception& e) {
    throw ValidationError("cli.run", e.what());
  }
  const double t_compute = seconds_since(t1);

  json metadata = json::object();
  if (cfg.kind == ModelKind::qwz) metadata["M_defaulted"] = cfg.mass_defaulted;
  if (cfg.kind == ModelKind::chain) metadata["gamma2"] = cfg.chain.gamma2;
  metadata["edge_rule"] = "second-neighbour spacing > edge_factor x median";
  metadata["state_selection"] = "nearest |eps|, ties to the smaller real part";
  metadata["quench_origin_shift"] = "tempos are written on [-T/2, T/2) and stored on [0, T)";

  std::uint64_t h = fnv1a(results.dump());
  json files = json::array();
  for (const auto& [name, body] : out.files) {
    h = fnv1a(name, h);
    h = fnv1a(body, h);
    files.push_back(name);
  }

  RunReport rep;
  rep.summary = summarize(cfg.task, results);
  rep.report = {{"schema", kReportSchema},
                {"config", cfg.echo},
                {"results", results},
                {"files", files},
                {"metadata", metadata},
                {"determinism_hash", hex(h)}};

  const auto t2 = Clock::now();
  if (options.write_files) {
    namespace fs = std::filesystem;
    const fs::path dir = cfg.echo.at("output").at("directory").get<std::string>();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cli.run", "cannot create " + dir.string() + ": " + ec.message());
    for (const auto& [name, body] : out.files) {
      write_text((dir / name).string(), body);
      rep.files.push_back((dir / name).string());
    }
    rep.report["timings"] = {{"parse", t_parse}, {"compute", t_compute}, {"write", seconds_since(t2)}};
    if (out.formats.count("json")) {
      write_text((dir / "report.json").string(), rep.report.dump(2) + "\n");
      rep.files.push_back((dir / "report.json").string());
    }
  } else {
    rep.report["timings"] = {{"parse", t_parse}, {"compute", t_compute}, {"write", 0.0}};
  }
  return rep;
}

json set_config_path(const json& config, const std::string& path, const json& value) {
  json c = config;
  std::vector<std::string> keys;
  std::string p = path;
  const std::string kind = c.contains("model") ? c["model"].value("kind", "chain") : "chain";
  if (p == "phi") {
    const char* drive = kind == "qwz" ? "gamma" : "gamma1";
    json& m = c["model"];
    if (!m.contains(drive) || !m[drive].is_object()) {
      // Materialise the default drive so its phase can be set.
      const json echoed = parse_config(c).echo.at("model");
      if (!echoed.contains(drive)) throw ValidationError("cli.sweep", "axis 'phi' needs a driven model");
      m[drive] = echoed.at(drive);
    }
    m[drive]["phi"] = value;
    return c;
  } else if (p == "tempo") {
    p = "model.tempo.name";
  } else if (p == "omega") {
    // Every cosine drive shares the clock.
    for (const char* d : {"t1", "gamma1", "v", "gamma"}) {
      json& m = c["model"];
      if (m.contains(d) && m[d].is_object() && m[d].value("type", "") == "cos") m[d]["omega"] = value;
    }
    const bool any = c.contains("model") &&
                     (c["model"].contains("t1") || c["model"].contains("v") ||
                      c["model"].contains("gamma1") || c["model"].contains("gamma"));
    if (!any) throw ValidationError("cli.sweep", "axis 'omega' needs explicit cosine drives");
    return c;
  }
  std::stringstream ss(p);
  std::string part;
  while (std::getline(ss, part, '.')) keys.push_back(part);
  if (keys.empty()) throw ValidationError("cli.sweep", "empty axis path");
  json* node = &c;
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    if (!node->is_object()) throw ValidationError("cli.sweep", "path '" + path + "' does not resolve");
    if (!node->contains(keys[i])) {
      if (i == 0) (*node)[keys[i]] = json::object();
      else throw ValidationError("cli.sweep", "path '" + path + "' does not resolve");
    }
    node = &(*node)[keys[i]];
  }
  if (!node->is_object()) throw ValidationError("cli.sweep", "path '" + path + "' does not resolve");
  (*node)[keys.back()] = value;
  return c;
}

SweepResult sweep(const json& config, const std::string& axis, const std::vector<json>& values,
                  int workers, const RunOptions& options) {
  if (values.empty()) throw ValidationError("cli.sweep", "no sweep values");
  // Resolve every path up front so a bad axis fails before any work starts.
  std::vector<json> configs;
  for (const json& v : values) {
    json c = set_config_path(config, axis, v);
    c["workers"] = 1;
    configs.push_back(std::move(c));
  }
  parse_config(configs.front());
  struct Row {
    json summary;
    int code = 0;
    std::string message;
  };
  std::vector<Row> rows(values.size());
  RunOptions sub;
  sub.write_files = false;
  parallel_for(values.size(), workers, [&](std::size_t i) {
    try {
      rows[i].summary = run(configs[i], sub).summary;
    } catch (const std::exception& e) {
      rows[i].code = exit_code_for(e);
      rows[i].message = e.what();
    }
  });
  std::vector<std::string> columns;
  std::set<std::string> seen;
  for (const Row& r : rows) {
    for (const auto& [key, value] : r.summary.items()) {
      if (seen.insert(key).second) columns.push_back(key);
    }
  }
  auto cell = [](const json& v) -> std::string {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  SweepResult res;
  res.table.header = {axis};
  res.table.header.insert(res.table.header.end(), columns.begin(), columns.end());
  res.table.header.push_back("error");
  json rows_json = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string> line{cell(values[i])};
    for (const auto& col : columns) line.push_back(cell(rows[i].summary.is_object() ? rows[i].summary.value(col, json()) : json()));
    line.push_back(rows[i].code ? std::to_string(rows[i].code) : "");
    res.table.add_row(line);
    json rj{{"value", values[i]}, {"summary", rows[i].summary}, {"error", rows[i].code}};
    if (rows[i].code) rj["message"] = rows[i].message;
    rows_json.push_back(rj);
  }
  const std::string csv = res.table.str();
  res.report = {{"schema", kSweepSchema},
                {"config", parse_config(configs.front()).echo},
                {"axis", axis},
                {"values", values},
                {"rows", rows_json},
                {"determinism_hash", hex(fnv1a(csv))}};
  if (options.write_files) {
    namespace fs = std::filesystem;
    const fs::path dir = res.report["config"]["output"]["directory"].get<std::string>();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cli.sweep", "cannot create " + dir.string() + ": " + ec.message());
    write_text((dir / "sweep.csv").string(), csv);
    write_text((dir / "sweep.json").string(), res.report.dump(2) + "\n");
  }
  return res;
}

}  // namespace nhse
