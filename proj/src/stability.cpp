/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "fsp/stability.hpp"

#include "fsp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace fsp {

namespace {

Poly row_entry(const std::vector<Poly>& row, std::size_t j /*1-based*/) {
  if (j < 1 || j > row.size()) return Poly{};
  return row[j - 1];
}

}  // namespace

StabilityTable routh_modified(const std::vector<Poly>& desc) {
  const int n = static_cast<int>(desc.size()) - 1;
  if (n < 1) throw Error(ErrorCode::Precondition, "stability table needs degree >= 1");
  StabilityTable t;
  t.kind = TableKind::RouthModified;
  t.n = n;
  const std::size_t width = (static_cast<std::size_t>(n) + 2) / 2;
  std::vector<Poly> r1(width), r2(width);
  for (std::size_t j = 0; j < width; ++j) {
    std::size_t k1 = 2 * j;            // a_n, a_{n-2}, ...
    std::size_t k2 = 2 * j + 1;        // a_{n-1}, a_{n-3}, ...
    if (k1 < desc.size()) r1[j] = desc[k1];
    if (k2 < desc.size()) r2[j] = desc[k2];
  }
  t.rows.push_back(r1);
  t.rows.push_back(r2);
  for (int i = 3; i <= n + 1; ++i) {
    const auto& prev = t.rows[static_cast<std::size_t>(i - 2)];
    const auto& prev2 = t.rows[static_cast<std::size_t>(i - 3)];
    std::vector<Poly> row(width);
    for (std::size_t j = 1; j <= width; ++j) {
      row[j - 1] = row_entry(prev, 1) * row_entry(prev2, j + 1) -
                   row_entry(prev, j + 1) * row_entry(prev2, 1);
    }
    t.rows.push_back(row);
  }
  for (const auto& row : t.rows) t.first_column.push_back(row.empty() ? Poly{} : row[0]);
  return t;
}

StabilityTable jury_modified(const std::vector<Poly>& desc) {
  const int n = static_cast<int>(desc.size()) - 1;
  if (n < 1) throw Error(ErrorCode::Precondition, "stability table needs degree >= 1");
  StabilityTable t;
  t.kind = TableKind::JuryModified;
  t.n = n;
  t.rows.push_back(desc);  // a_n ... a_0
  for (int i = 2; i <= n + 1; ++i) {
    const auto& prev = t.rows[static_cast<std::size_t>(i - 2)];
    const std::size_t len = static_cast<std::size_t>(n + 2 - i);
    std::vector<Poly> row(len);
    for (std::size_t j = 1; j <= len; ++j) {
      row[j - 1] = row_entry(prev, j) * row_entry(prev, 1) -
                   row_entry(prev, static_cast<std::size_t>(n + 4 - i) - j) *
                       row_entry(prev, static_cast<std::size_t>(n + 3 - i));
    }
    t.rows.push_back(row);
  }
  for (const auto& row : t.rows) t.first_column.push_back(row.empty() ? Poly{} : row[0]);
  return t;
}

StabilityTable stability_table(const ClosedLoop& cl) {
  const char* v = cl.domain == Domain::CT ? "s" : "z";
  auto desc = cl.pD.coefficient_polys_desc(v);
  return cl.domain == Domain::CT ? routh_modified(desc) : jury_modified(desc);
}

bool stable_at(const StabilityTable& table, const std::vector<double>& rho) {
  for (const auto& f : table.first_column) {
    std::map<std::string, double> vals;
    for (std::size_t i = 0; i < rho.size(); ++i) {
      vals["rho" + std::to_string(i + 1)] = rho[i];
    }
    if (f.eval<double>(vals) <= 0) return false;
  }
  return true;
}

namespace {

struct BoundBox {
  std::vector<std::string> vars;   // non-collapsed parameter names
  std::vector<double> lo, hi;
  std::map<std::string, Rational> fixed;  // collapsed dimensions
};

BoundBox split_box(const ParamBox& box, const std::vector<std::string>& all_vars) {
  BoundBox bb;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    std::string name = "rho" + std::to_string(i + 1);
    if (box.collapsed(i)) {
      bb.fixed.emplace(name, box.lower[i]);
    } else {
      bb.vars.push_back(name);
      bb.lo.push_back(to_double(box.lower[i]));
      bb.hi.push_back(to_double(box.upper[i]));
    }
  }
  (void)all_vars;
  return bb;
}

/// max theta s.t. f - sum_j s_j c_j - theta SOS, s_j SOS. Returns theta*.
double entry_theta(const Poly& f_in, const BoundBox& bb, const BoxCertOptions& opts,
                   double& residual) {
  Poly f = f_in;
  for (const auto& [name, val] : bb.fixed) f = f.substitute(name, val);
  if (f.is_constant()) {
    residual = 0;
    return f.is_zero() ? 0.0 : to_double(f.constant_value());
  }

  // Restrict the program to the parameters the entry actually involves;
  // spectating variables would force the Gram blocks onto the boundary of
  // the cone (no mass on their pure powers) and break strict feasibility.
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < bb.vars.size(); ++j) {
    if (f.degree_in(bb.vars[j]) > 0) active.push_back(j);
  }
  std::vector<std::string> evars;
  for (std::size_t j : active) evars.push_back(bb.vars[j]);
  for (std::size_t j = 0; j < bb.vars.size(); ++j) {
    if (f.degree_in(bb.vars[j]) == 0) f = f.substitute(bb.vars[j], Rational(0));
  }

  ConicProgram prog;
  int theta = prog.add_scalar("theta");
  AffinePoly target = AffinePoly::from_poly(f);
  for (std::size_t j : active) {
    Poly rj = Poly::variable(bb.vars[j]);
    Poly cj = (Poly::constant(rational_of(bb.hi[j])) - rj) *
              (rj - Poly::constant(rational_of(bb.lo[j])));
    AffinePoly sj = make_sos_multiplier(prog, evars, opts.mult_degree,
                                        "s" + std::to_string(j + 1));
    target = target - (cj * sj);
  }
  AffinePoly theta_term(std::vector<std::string>{});
  theta_term.add_term(Monomial{}, AffineExpr::var(theta));
  target = target - theta_term;
  SosHandle h = sos_constrain(prog, target);

  std::vector<int> grams;
  for (int k = 0; k < prog.block_count(); ++k) grams.push_back(k);
  MarginResult mr = solve_margin(prog, grams, opts.solve);
  if (mr.sol.status != SolveStatus::Optimal || mr.margin < -1e-9) {
    residual = 1;
    return -std::numeric_limits<double>::infinity();
  }

  prog.add_objective_scalar(theta, 1.0);
  Solution sol = solve(prog, opts.solve);
  if (sol.status != SolveStatus::Optimal) {
    residual = 1;
    return -std::numeric_limits<double>::infinity();
  }
  Certificate cert = recover_certificate(prog, sol, h);
  residual = cert.residual;
  return sol.scalars[static_cast<std::size_t>(theta)];
}

}  // namespace

BoxCertResult certify_box_stability(const StabilityTable& table, const ParamBox& box,
                                    const BoxCertOptions& opts) {
  BoxCertResult res;
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < box.dim(); ++i) vars.push_back("rho" + std::to_string(i + 1));
  BoundBox bb = split_box(box, vars);

  // Sampling refutation first: corners, center, then uniform draws.
  std::vector<std::vector<double>> points;
  std::vector<double> center(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    center[i] = 0.5 * (to_double(box.lower[i]) + to_double(box.upper[i]));
  }
  points.push_back(center);
  const std::size_t ncorners = box.dim() <= 12 ? (std::size_t{1} << box.dim()) : 0;
  for (std::size_t mask = 0; mask < ncorners; ++mask) {
    std::vector<double> pt(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) {
      pt[i] = to_double((mask >> i) & 1 ? box.upper[i] : box.lower[i]);
    }
    points.push_back(pt);
  }
  std::mt19937 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < opts.samples; ++k) {
    std::vector<double> pt(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) {
      double lo = to_double(box.lower[i]);
      double hi = to_double(box.upper[i]);
      pt[i] = lo + unit(rng) * (hi - lo);
    }
    points.push_back(pt);
  }
  for (const auto& pt : points) {
    if (!stable_at(table, pt)) {
      res.certified = false;
      res.counterexample = pt;
      std::ostringstream os;
      os << "first-column entry nonpositive at sampled rho";
      res.detail = os.str();
      return res;
    }
  }

  bool all_pos = true;
  bool any_inconclusive = false;
  double theta_star = std::numeric_limits<double>::infinity();
  for (const auto& f : table.first_column) {
    Poly fs = f;
    for (const auto& [name, val] : bb.fixed) fs = fs.substitute(name, val);
    if (fs.is_zero()) {
      any_inconclusive = true;
      res.entries.push_back({0.0, true, 0.0});
      continue;
    }
    BoxEntryResult er;
    if (fs.is_constant()) {
      er.theta = to_double(fs.constant_value());
      er.short_circuited = true;
    } else {
      er.theta = entry_theta(f, bb, opts, er.certificate_residual);
      if (!std::isfinite(er.theta)) any_inconclusive = true;
    }
    if (er.theta <= opts.theta_min) all_pos = false;
    theta_star = std::min(theta_star, er.theta);
    res.entries.push_back(er);
  }
  res.theta_star = std::isfinite(theta_star) ? theta_star : 0.0;
  if (any_inconclusive || !all_pos) {
    res.certified = false;
    res.inconclusive = true;
    res.detail = "no SOS certificate at this multiplier degree and no counterexample found";
  } else {
    res.certified = true;
  }
  return res;
}

}  // namespace fsp
