#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nhse/runner.hpp"

namespace {

// Sweep values are JSON literals when they parse as such, strings otherwise,
// so `--values 0,0.5,1` and `--values A,B,C` both work.
std::vector<nhse::json> parse_values(const std::string& list) {
  std::vector<nhse::json> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(nhse::json::parse(item));
    } catch (const nhse::json::exception&) {
      out.emplace_back(item);
    }
  }
  return out;
}

void print_symmetry_table(const nhse::json& reports) {
  std::printf("%-34s %14s %10s  %s\n", "identity", "residual", "tolerance", "result");
  for (const auto& r : reports) {
    std::printf("%-34s %14.6e %10.1e  %s\n", r.at("identity").get<std::string>().c_str(),
                r.at("residual").get<double>(), r.at("tolerance").get<double>(),
                r.at("pass").get<bool>()                        ? "pass"
                : r.at("witness").contains("instantaneous_absent") ? "absent (no instantaneous symmetry)"
                                                                   : "FAIL");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven non-Hermitian lattice simulations"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the task described by a JSON config");
  run->add_option("config", config_path, "config file")->required();

  std::string axis;
  std::string values;
  int workers = nhse::default_workers();
  auto* sweep = app.add_subcommand("sweep", "Run a config once per value of one parameter");
  sweep->add_option("config", config_path, "config file")->required();
  sweep->add_option("--axis", axis, "dotted parameter path, or phi / omega / tempo")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();
  sweep->add_option("--workers", workers, "parallel runs (default NHSE_WORKERS or 1)")
      ->check(CLI::PositiveNumber);

  auto* sym = app.add_subcommand("check-symmetry", "Print the symmetry residual table");
  sym->add_option("config", config_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      const nhse::RunReport rep = nhse::run(nhse::load_json(config_path));
      std::cout << rep.report.at("results").dump(2) << "\n";
      for (const auto& f : rep.files) std::cout << "wrote " << f << "\n";
      return 0;
    }
    if (*sweep) {
      const nhse::SweepResult res = nhse::sweep(nhse::load_json(config_path), axis,
                                                parse_values(values), workers);
      std::cout << res.table.str();
      int worst = 0;
      for (const auto& r : res.report.at("rows")) worst = std::max(worst, r.at("error").get<int>());
      return worst;
    }
    if (*sym) {
      nhse::json config = nhse::load_json(config_path);
      config["task"] = {{"name", "check-symmetry"}};
      const nhse::RunReport rep = nhse::run(config);
      print_symmetry_table(rep.report.at("results").at("reports"));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nhse::exit_code_for(e);
  }
  return 0;
}
