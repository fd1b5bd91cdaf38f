/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include "fsp/passivation.hpp"
#include "fsp/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fsp {

struct ProblemOptions {
  int mult_degree = 2;
  double bisect_tol = 1e-4;
  int grid_resolution = 50;
  bool direct_mode = false;
  double tol_gap = 1e-7;
  double tol_feas = 1e-8;
  std::string dump_dir;
  std::optional<std::vector<double>> rho;  // for the verify command
};

struct ProblemSpec {
  Domain domain = Domain::CT;
  RationalTransfer plant;
  ControllerBasis basis;
  ParamBox box;
  ProblemOptions options;
};

/// Strict-schema JSON parse: unknown keys are errors; coefficients are
/// decimal strings (or plain JSON numbers) converted to exact rationals,
/// ascending power order.
ProblemSpec parse_problem_text(const std::string& text);
ProblemSpec parse_problem_file(const std::string& path);

struct RunResult {
  int exit_code = 1;        // 0 ok, 2 certified negative, 1 error
  std::string report_json;  // versioned report
  std::string summary;      // one-paragraph human text
};

/// command: stability | feasibility | max-ifp | max-ofp | verify.
RunResult run_command(const std::string& command, const ProblemSpec& spec);

/// Applies a JSON object of option overrides (same keys as the file's
/// "options" object, plus "rho") on top of the spec.
void apply_overrides(ProblemSpec& spec, const std::string& overrides_json);

}  // namespace fsp
