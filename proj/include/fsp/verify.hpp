/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include "fsp/passivation.hpp"
#include "fsp/system.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace fsp {

struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  double D = 0;
  Domain domain = Domain::CT;

  int order() const { return static_cast<int>(A.rows()); }
  std::complex<double> eval(std::complex<double> x) const;
};

struct SweepOptions {
  int grid = 4096;
  double wmin = 1e-6;
  double wmax = 1e6;
  double refine_width = 1e-9;
};

/// Frequency-sweep passivity index: min over the boundary of Re G (IFP) or
/// Re G^{-1} (OFP), log-spaced grid plus limits plus golden-section
/// refinement around the grid minimum.
double freq_index(const RationalTransfer& g, IndexMode mode, const SweepOptions& opts = {});

bool transfer_stable(const RationalTransfer& g, double margin = 1e-9);
bool transfer_minimum_phase(const RationalTransfer& g, double margin = 1e-9);

/// Controllable-canonical realization (monic denominator written as
/// x^n - a_1 x^{n-1} - ... - a_n; A = [[a_1..a_n],[I,0]], B = e_1).
StateSpace tf_to_ss(const RationalTransfer& g);

/// Transfer function recovered from a realization (Faddeev-LeVerrier),
/// ascending coefficients.
RationalTransfer ss_to_tf(const StateSpace& ss);

/// Largest index for which the dissipativity LMI admits P > 0; solved as a
/// single SDP (the index enters the LMI linearly).
double kyp_index(const StateSpace& ss, IndexMode mode, const SolveOptions& opts = {});

struct GridOracleResult {
  std::vector<double> rho_hat;
  double index_hat = 0;
};

/// Brute-force reference: exhaustive grid over the box, per-point stability
/// by roots then sweep index; lexicographic-first tie-break.
GridOracleResult grid_oracle(const RationalTransfer& g0, const ControllerBasis& basis,
                             const ParamBox& box, IndexMode mode, int resolution,
                             const SweepOptions& sweep = {});

struct PositiveRealReport {
  bool positive_real = false;
  std::vector<std::string> diagnostics;
};

PositiveRealReport positive_real_check(const RationalTransfer& g);

}  // namespace fsp
