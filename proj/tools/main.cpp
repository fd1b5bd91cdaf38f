/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "fspass.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct CommonFlags {
  std::string input;
  std::string output;
  std::optional<double> tol_gap;
  std::optional<double> tol_feas;
  std::optional<double> bisect_tol;
  std::optional<int> mult_degree;
  std::optional<int> grid;
  bool direct = false;
  std::string dump_sdp;
  std::vector<double> rho;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_rho) {
  cmd->add_option("--input", f.input, "problem file (JSON)")->required();
  cmd->add_option("--output", f.output, "report file (defaults next to the input)");
  cmd->add_option("--tol-gap", f.tol_gap, "SDP relative duality-gap tolerance");
  cmd->add_option("--tol-feas", f.tol_feas, "SDP feasibility tolerance");
  cmd->add_option("--bisect-tol", f.bisect_tol, "bisection bracket tolerance on gamma");
  cmd->add_option("--mult-degree", f.mult_degree, "degree of the box multipliers");
  cmd->add_option("--grid", f.grid, "grid resolution for the brute-force oracle");
  cmd->add_flag("--direct", f.direct,
                "skip box-wide stability certification; check stability only at rho*");
  cmd->add_option("--dump-sdp", f.dump_sdp, "directory for conic program dumps");
  if (with_rho) {
    cmd->add_option("--rho", f.rho, "parameter value to verify")->expected(-1);
  }
}

std::string overrides_of(const CommonFlags& f) {
  nlohmann::json o = nlohmann::json::object();
  if (f.tol_gap) o["tol_gap"] = *f.tol_gap;
  if (f.tol_feas) o["tol_feas"] = *f.tol_feas;
  if (f.bisect_tol) o["bisect_tol"] = *f.bisect_tol;
  if (f.mult_degree) o["mult_degree"] = *f.mult_degree;
  if (f.grid) o["grid_resolution"] = *f.grid;
  if (f.direct) o["direct"] = true;
  if (!f.dump_sdp.empty()) o["dump_dir"] = f.dump_sdp;
  if (!f.rho.empty()) o["rho"] = f.rho;
  return o.empty() ? std::string{} : o.dump();
}

void print_summary(const nlohmann::json& rep) {
  std::string status = rep.value("status", "unknown");
  std::cout << "status: " << status << "\n";
  if (rep.contains("theta_star")) std::cout << "theta* = " << rep["theta_star"].get<double>() << "\n";
  if (rep.contains("epsilon_star")) {
    std::cout << "epsilon* = " << rep["epsilon_star"].get<double>() << "\n";
  }
  if (rep.contains("index")) std::cout << "index = " << rep["index"].get<double>() << "\n";
  auto print_vec = [&](const char* key, const char* label) {
    if (!rep.contains(key)) return;
    std::cout << label << " = (";
    bool first = true;
    for (const auto& x : rep[key]) {
      std::cout << (first ? "" : ", ") << x.get<double>();
      first = false;
    }
    std::cout << ")\n";
  };
  print_vec("rho_star", "rho*");
  print_vec("counterexample_rho", "counterexample rho");
  if (rep.contains("verification")) {
    const auto& v = rep["verification"];
    if (v.contains("sweep_index")) {
      std::cout << "verification: sweep = " << v["sweep_index"].get<double>();
      if (v.contains("kyp_index")) std::cout << ", kyp = " << v["kyp_index"].get<double>();
      std::cout << ", stable = " << (v.value("stable_at_rho_star", false) ? "yes" : "no") << "\n";
    } else if (v.contains("stable_at_rho_star")) {
      std::cout << "verification: stable = "
                << (v["stable_at_rho_star"].get<bool>() ? "yes" : "no") << "\n";
    }
  }
  if (rep.contains("error")) std::cout << rep["error"].get<std::string>() << "\n";
}

int run(const std::string& command, const CommonFlags& f) {
  fspass_problem* prob = fspass_problem_from_file(f.input.c_str());
  if (!prob) {
    std::cerr << "error: " << fspass_last_error() << "\n";
    return 1;
  }
  char* report = nullptr;
  int exit_code = 1;
  std::string overrides = overrides_of(f);
  int rc = fspass_run(prob, command.c_str(), overrides.empty() ? nullptr : overrides.c_str(),
                      &report, &exit_code);
  fspass_problem_free(prob);
  if (rc != 0) {
    std::cerr << "error: " << fspass_last_error() << "\n";
    return 1;
  }

  std::string out_path = f.output.empty() ? f.input + ".report.json" : f.output;
  {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write report to " << out_path << "\n";
      fspass_free_string(report);
      return 1;
    }
    out << report << "\n";
  }
  nlohmann::json rep = nlohmann::json::parse(report);
  fspass_free_string(report);
  print_summary(rep);
  std::cout << "report: " << out_path << "\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-structure feedback passivation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fspass_version());

  const std::vector<std::string> commands = {"stability", "feasibility", "max-ifp", "max-ofp",
                                             "verify"};
  const std::vector<std::string> descriptions = {
      "certify robust stability of the closed loop over the parameter box",
      "decide whether some controller in the set passivates the plant",
      "maximize the closed-loop input feedforward passivity index",
      "maximize the closed-loop output feedback passivity index",
      "independent checks (sweep, KYP, roots) at a given parameter value"};
  std::vector<CommonFlags> flags(commands.size());
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(commands[i], descriptions[i]);
    add_common(cmd, flags[i], commands[i] == "verify");
  }

  CLI11_PARSE(app, argc, argv);
  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (app.got_subcommand(commands[i])) return run(commands[i], flags[i]);
  }
  return 1;
}
