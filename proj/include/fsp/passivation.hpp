/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include "fsp/sos.hpp"
#include "fsp/system.hpp"

#include <vector>

namespace fsp {

enum class IndexMode { IFP, OFP };

struct PassivationProblem {
  ClosedLoop cl;
  FreqDecomposition fd;
  ParamBox box;
};

PassivationProblem make_problem(const ClosedLoop& cl, const ParamBox& box);

struct SynthOptions {
  double bisect_tol = 1e-4;
  double theta_min = 1e-6;
  double gamma_cap = 1048576.0;  // 2^20
  SolveOptions solve;
  SosOptions sos;
};

struct FeasibilityResult {
  double epsilon_star = 0;
  std::vector<double> rho_witness;
  bool passivatable = false;
  bool solvable = true;  // SOS program admitted a Gram at all
};

/// max epsilon s.t. the boundary real-part numerator minus epsilon is SOS
/// with rho confined to the box; passivatable iff epsilon* exceeds the
/// positivity threshold.
FeasibilityResult feasibility(const PassivationProblem& prob, const SynthOptions& opts = {});

struct BisectionStep {
  double gamma = 0;
  bool feasible = false;
};

struct SynthesisResult {
  bool feasible = false;
  std::vector<double> rho_star;
  double index_value = 0;  // nu* (IFP) or xi* (OFP)
  double epsilon_star = 0;
  double certificate_residual = 0;
  double gram_min_eig = 0;
  std::vector<BisectionStep> trace;  // IFP only
  bool hit_gamma_cap = false;
};

/// Maximum achievable IFP index over the controller box: bisection on gamma
/// with a 3x3 matrix-SOS feasibility test per step; returns nu* = gamma*^2.
SynthesisResult maximize_ifp(const PassivationProblem& prob, const SynthOptions& opts = {});

/// Maximum achievable OFP index: single SDP, xi enters linearly.
SynthesisResult maximize_ofp(const PassivationProblem& prob, const SynthOptions& opts = {});

}  // namespace fsp
