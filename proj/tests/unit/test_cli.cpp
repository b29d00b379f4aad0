#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "nhse/io.hpp"
#include "nhse/parallel.hpp"
#include "nhse/runner.hpp"

using namespace nhse;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nhse-test-" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(NHSE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const json& config) {
  fs::create_directories(dir);
  const fs::path p = dir / "config.json";
  write_text(p.string(), config.dump());
  return p;
}

// Small chain configuration that keeps each run well under a second.
json quick_chain(const std::string& task, const fs::path& out) {
  return {{"model", {{"kind", "chain"}, {"L", 16}}},
          {"task", task},
          {"numeric", {{"n_k", 301}, {"base_grid", 4}}},
          {"output", {{"directory", out.string()}}}};
}

}  // namespace

TEST_CASE("validation errors") {
  json bad = quick_chain("spectrum", scratch("bad"));
  bad["model"]["L"] = -4;
  CHECK_THROWS_AS(parse_config(bad), ValidationError);
  json unknown = quick_chain("spectrum", scratch("unknown"));
  unknown["model"]["tq"] = 1.0;
  CHECK_THROWS_AS(parse_config(unknown), ValidationError);
  json task = quick_chain("fly", scratch("task"));
  CHECK_THROWS_AS(parse_config(task), ValidationError);
  CHECK_THROWS_AS(set_config_path(quick_chain("spectrum", scratch("p")), "model.nothing.here", 1),
                  ValidationError);
  CHECK(exit_code_for(ValidationError("x", "y")) == 2);
  CHECK(exit_code_for(NumericalError("x", "y")) == 3);
}

TEST_CASE("defaults are echoed and rerunning the echo reproduces the hash") {
  const fs::path out = scratch("echo");
  const RunReport a = run(quick_chain("winding", out), {false});
  const json echo = a.report.at("config");
  CHECK(echo.at("numeric").contains("steps"));
  CHECK(echo.at("model").contains("gamma2"));
  CHECK(echo.at("model").at("t1").at("type") == "cos");
  CHECK(a.report.at("schema") == kReportSchema);
  const RunReport b = run(echo, {false});
  CHECK(a.report.at("determinism_hash") == b.report.at("determinism_hash"));
  CHECK(a.report.at("results") == b.report.at("results"));
}

TEST_CASE("winding task at phi = 0 reports zero windings") {
  json c = quick_chain("winding", scratch("w0"));
  c["model"].erase("L");
  const RunReport r = run(c, {false});
  CHECK_FALSE(r.report.at("results").at("any_nonzero").get<bool>());
  for (const auto& cut : r.report.at("results").at("cuts")) {
    CHECK(cut.at("scan_nonzero") == 0);
    CHECK(cut.at("scan_accepted").get<int>() > 0);
  }
}

TEST_CASE("run writes the report and tables") {
  const fs::path out = scratch("spectrum");
  const RunReport r = run(quick_chain("density", out));
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "spectrum.csv"));
  CHECK(fs::exists(out / "density.csv"));
  CHECK(fs::exists(out / "density.svg"));
  const std::string spectrum = slurp(out / "spectrum.csv");
  CHECK(spectrum.rfind("index,re_eig,im_eig,ipr\n", 0) == 0);
  CHECK(slurp(out / "density.csv").rfind("x,y,rho\n", 0) == 0);
  const json saved = json::parse(slurp(out / "report.json"));
  CHECK(saved.at("determinism_hash") == r.report.at("determinism_hash"));
  CHECK(saved.at("metadata").contains("edge_rule"));
  CHECK(saved.at("timings").is_object());
}

TEST_CASE("phase sweep task writes one row per phase") {
  json c = quick_chain("phase-sweep", scratch("phase"));
  const RunReport r = run(c);
  const std::string csv = slurp(fs::path(c["output"]["directory"].get<std::string>()) / "phase_sweep.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "phi,max_ipr,any_nonzero_winding");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 13);
}

TEST_CASE("sweep output is identical for one and four workers") {
  json c = quick_chain("winding", scratch("sweep"));
  std::vector<json> phis;
  for (int i = 0; i < 13; ++i) phis.push_back(M_PI * i / 12);
  const SweepResult one = sweep(c, "phi", phis, 1, {false});
  const SweepResult four = sweep(c, "phi", phis, 4, {false});
  CHECK(one.table.str() == four.table.str());
  CHECK(one.report.dump() == four.report.dump());
  CHECK(one.table.rows.size() == 13);

  const fs::path out1 = scratch("sweep-cli-1");
  const fs::path out4 = scratch("sweep-cli-4");
  c["output"]["directory"] = out1.string();
  const fs::path cfg1 = write_config(scratch("sweep-cfg-1"), c);
  c["output"]["directory"] = out4.string();
  const fs::path cfg4 = write_config(scratch("sweep-cfg-4"), c);
  const std::string values = "0,0.5,1,1.5707963267948966,2,3.141592653589793";
  CHECK(cli("sweep " + cfg1.string() + " --axis phi --values " + values + " --workers 1") == 0);
  CHECK(cli("sweep " + cfg4.string() + " --axis phi --values " + values + " --workers 4") == 0);
  const std::string csv1 = slurp(out1 / "sweep.csv");
  CHECK(csv1.rfind("phi,", 0) == 0);
  CHECK(csv1 == slurp(out4 / "sweep.csv"));
  // The reports differ only in the echoed output directory.
  json j1 = json::parse(slurp(out1 / "sweep.json"));
  json j4 = json::parse(slurp(out4 / "sweep.json"));
  j1["config"]["output"].erase("directory");
  j4["config"]["output"].erase("directory");
  CHECK(j1 == j4);
}

TEST_CASE("sweep rows keep failures") {
  json c = quick_chain("spectrum", scratch("sweep-fail"));
  const SweepResult r = sweep(c, "model.L", {8, -1, 12}, 2, {false});
  REQUIRE(r.table.rows.size() == 3);
  CHECK(r.table.rows[0].back().empty());
  CHECK(r.table.rows[1].back() == "2");
  CHECK(r.table.rows[2].back().empty());
}

TEST_CASE("Magnus residual decreases with frequency") {
  json c = {{"model",
             {{"kind", "qwz"},
              {"M", 1},
              {"v", {{"type", "cos"}, {"a", 1}, {"b", 2}, {"omega", 3}, {"phi", 0}}},
              {"gamma", {{"type", "cos"}, {"a", 2}, {"b", 1}, {"omega", 3}, {"phi", 0}}}}},
            {"task", "magnus"},
            {"output", {{"directory", scratch("magnus").string()}}}};
  const SweepResult r = sweep(c, "omega", {3, 5, 10, 50}, 2, {false});
  const auto& h = r.table.header;
  const auto col = static_cast<std::size_t>(std::find(h.begin(), h.end(), "residual") - h.begin());
  REQUIRE(col < h.size());
  double prev = 1e300;
  for (const auto& row : r.table.rows) {
    const double v = std::stod(row[col]);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("tempo sweep gives one pattern per tempo") {
  json c = {{"model", {{"kind", "qwz"}, {"M", 1}, {"tempo", {{"name", "A"}, {"v0", 1}, {"gamma0", 2}, {"T", 3}}}}},
            {"task", "quench"},
            {"numeric", {{"n_k", 801}}},
            {"output", {{"directory", scratch("tempo").string()}}}};
  const SweepResult r = sweep(c, "tempo", {"A", "B", "C"}, 3, {false});
  const auto& h = r.table.header;
  const auto col = static_cast<std::size_t>(std::find(h.begin(), h.end(), "pattern") - h.begin());
  REQUIRE(col < h.size());
  CHECK(r.table.rows[0][col] == "x");
  CHECK(r.table.rows[1][col] == "y");
  CHECK(r.table.rows[2][col] == "xy");
}

TEST_CASE("CLI exit codes") {
  const fs::path good_out = scratch("cli-good");
  json good = quick_chain("spectrum", good_out);
  CHECK(cli("run " + write_config(scratch("cli-good-cfg"), good).string()) == 0);
  CHECK(fs::exists(good_out / "report.json"));

  const fs::path out = scratch("cli-bad");
  json bad = quick_chain("spectrum", out);
  bad["model"]["L"] = -2;
  CHECK(cli("run " + write_config(scratch("cli-bad-cfg"), bad).string()) == 2);
  CHECK_FALSE(fs::exists(out));

  const fs::path junk = scratch("cli-junk") / "config.json";
  fs::create_directories(junk.parent_path());
  write_text(junk.string(), "{ not json");
  CHECK(cli("run " + junk.string()) == 2);
  CHECK(cli("run /nonexistent/config.json") == 2);
  CHECK(cli("frobnicate") == 2);

  // A loop sampled far too coarsely is a numerical failure.
  json coarse = quick_chain("winding", scratch("cli-coarse"));
  coarse["numeric"]["n_k"] = 3;
  coarse["numeric"]["max_step"] = 0.01;
  coarse["task"] = {{"name", "winding"}, {"scan", false}, {"base", {0.0, 0.0}}};
  CHECK(cli("run " + write_config(scratch("cli-coarse-cfg"), coarse).string()) == 3);

  json sym = quick_chain("spectrum", scratch("cli-sym"));
  CHECK(cli("check-symmetry " + write_config(scratch("cli-sym-cfg"), sym).string()) == 0);
  json flat = sym;
  flat["model"]["t1"] = 0.7;
  flat["model"]["gamma1"] = 5.0;
  CHECK(cli("check-symmetry " + write_config(scratch("cli-flat-cfg"), flat).string()) == 2);
}

TEST_CASE("SVG output") {
  CHECK_THROWS_AS(render_svg({}, PlotKind::scatter), ValidationError);
  const fs::path out = scratch("svg");
  fs::create_directories(out);
  CHECK_THROWS_AS(emit_svg({}, PlotKind::heatmap, (out / "empty.svg").string()), ValidationError);
  CHECK_FALSE(fs::exists(out / "empty.svg"));
  std::vector<PlotPoint> grid;
  for (int x = 1; x <= 20; ++x) {
    for (int y = 1; y <= 20; ++y) grid.push_back({double(x), double(y), double(x * y), 0});
  }
  const std::string svg = render_svg(grid, PlotKind::heatmap, "density");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t cells = 0;
  for (std::size_t p = svg.find("<rect x="); p != std::string::npos; p = svg.find("<rect x=", p + 1)) ++cells;
  CHECK(cells == 401);  // 400 cells and the frame
  const std::string scatter = render_svg({{0, 0, 0, 0}, {1, 1, 0, 1}}, PlotKind::scatter);
  CHECK(scatter.find("#1f77b4") != std::string::npos);
  CHECK(scatter.find("#d62728") != std::string::npos);
}

TEST_CASE("CSV formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(M_PI)) == M_PI);
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = Complex{1.5, -2.0};
  CHECK(matrix_table(m).str() == "row,col,re,im\n0,1,1.5,-2\n");
  CsvTable t{{"a", "b"}, {}};
  CHECK_THROWS_AS(t.add_row({"1"}), Error);
}

TEST_CASE("parallel_for covers every index once and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t i) {
                                 if (i == 37) throw NumericalError("t", "boom");
                               }),
                  NumericalError);
}
