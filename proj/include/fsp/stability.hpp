/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include "fsp/sos.hpp"
#include "fsp/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fsp {

enum class TableKind { RouthModified, JuryModified };

/// Division-free stability table with entries polynomial in rho1..rhop.
/// first_column holds f_1..f_{n+1}; their joint positivity over the box is
/// the robust stability condition.
struct StabilityTable {
  TableKind kind = TableKind::RouthModified;
  int n = 0;
  std::vector<std::vector<Poly>> rows;
  std::vector<Poly> first_column;
};

/// Modified Routh-Hurwitz table from descending coefficients a_n..a_0
/// (each a polynomial in the parameters).
StabilityTable routh_modified(const std::vector<Poly>& desc_coeffs);

/// Modified Jury table (even rows removed, division-free recurrence).
StabilityTable jury_modified(const std::vector<Poly>& desc_coeffs);

/// Table for the closed-loop denominator, picked by domain.
StabilityTable stability_table(const ClosedLoop& cl);

/// Point check: all first-column entries strictly positive at rho.
bool stable_at(const StabilityTable& table, const std::vector<double>& rho);

struct BoxEntryResult {
  double theta = 0;
  bool short_circuited = false;  // constant entry, no SDP run
  double certificate_residual = 0;
};

struct BoxCertResult {
  bool certified = false;
  bool inconclusive = false;  // no counterexample found, no certificate either
  double theta_star = 0;      // min over first-column programs
  std::vector<BoxEntryResult> entries;
  std::optional<std::vector<double>> counterexample;  // rho with some f_i <= 0
  std::string detail;
};

struct BoxCertOptions {
  int mult_degree = 2;
  double theta_min = 1e-6;
  int samples = 200;
  unsigned seed = 20260823;
  SolveOptions solve;
};

/// Theorem-style box positivity of every first-column entry: per entry,
///   max theta  s.t.  f_i - sum_j s_ij c_j - theta is SOS, s_ij SOS,
/// with c_j = (ub_j - rho_j)(rho_j - lb_j). Collapsed box dimensions are
/// substituted before compiling. Sampling runs first and short-circuits to a
/// counterexample when one exists.
BoxCertResult certify_box_stability(const StabilityTable& table, const ParamBox& box,
                                    const BoxCertOptions& opts = {});

}  // namespace fsp
