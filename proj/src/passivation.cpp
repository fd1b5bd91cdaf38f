/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "fsp/passivation.hpp"

#include "fsp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace fsp {

namespace {

std::string rho_name(std::size_t i) { return "rho" + std::to_string(i + 1); }

/// base + sum rho_i * coeffs[i] as a single polynomial with the parameters
/// as explicit variables (still affine in them).
Poly with_params(const ParamPoly& pp) {
  Poly out = pp.base;
  for (std::size_t i = 0; i < pp.coeffs.size(); ++i) {
    out = out + Poly::variable(rho_name(i)) * pp.coeffs[i];
  }
  return out;
}

Poly one_plus_y2_pow(int e) {
  Poly y2 = Poly::variable("y") * Poly::variable("y");
  Poly base = Poly::constant(1) + y2;
  Poly out = Poly::constant(1);
  for (int k = 0; k < e; ++k) out = out * base;
  return out;
}

/// Shared scaffolding: one conic program with a box-bounded scalar per free
/// parameter dimension; collapsed dimensions are substituted away.
struct ParamBinding {
  ConicProgram prog;
  std::map<std::string, int> ids;          // free parameter -> scalar id
  std::map<std::string, Rational> fixed;   // collapsed parameter -> value
  std::vector<int> rho_ids;                // per dimension; -1 when fixed
};

ParamBinding bind_box(const ParamBox& box) {
  ParamBinding pb;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (box.collapsed(i)) {
      pb.fixed.emplace(rho_name(i), box.lower[i]);
      pb.rho_ids.push_back(-1);
    } else {
      int id = pb.prog.add_scalar(rho_name(i));
      pb.prog.add_box_bound(id, to_double(box.lower[i]), to_double(box.upper[i]));
      pb.ids.emplace(rho_name(i), id);
      pb.rho_ids.push_back(id);
    }
  }
  return pb;
}

AffinePoly bind_poly(const ParamBinding& pb, Poly p) {
  for (const auto& [name, val] : pb.fixed) p = p.substitute(name, val);
  return bind_parameters(p, pb.ids);
}

std::vector<double> extract_rho(const ParamBinding& pb, const std::vector<double>& scalars,
                                const ParamBox& box) {
  std::vector<double> rho(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    int id = pb.rho_ids[i];
    rho[i] = id >= 0 ? scalars[static_cast<std::size_t>(id)] : to_double(box.lower[i]);
    // Clamp solver roundoff back into the box.
    rho[i] = std::min(std::max(rho[i], to_double(box.lower[i])), to_double(box.upper[i]));
  }
  return rho;
}

/// Boundary real-part numerator: pNe*pDe + pNo*pDo (CT) or p1*p3 + p2*p4
/// (DT), with the parameters as explicit polynomial variables.
Poly realpart_numerator(const FreqDecomposition& fd) {
  return fd.n_even * with_params(fd.d_even) + fd.n_odd * with_params(fd.d_odd);
}

std::vector<int> gram_blocks(const ParamBinding& pb, int first_gram) {
  std::vector<int> out;
  for (int k = first_gram; k < pb.prog.block_count(); ++k) out.push_back(k);
  return out;
}

}  // namespace

PassivationProblem make_problem(const ClosedLoop& cl, const ParamBox& box) {
  if (box.dim() != cl.param_count()) {
    throw Error(ErrorCode::Precondition, "box dimension does not match the controller basis");
  }
  PassivationProblem prob;
  prob.cl = cl;
  prob.fd = param_freq_decompose(cl);
  prob.box = box;
  return prob;
}

FeasibilityResult feasibility(const PassivationProblem& prob, const SynthOptions& opts) {
  ParamBinding pb = bind_box(prob.box);
  int eps = pb.prog.add_scalar("epsilon");
  int first_gram = pb.prog.block_count();

  AffinePoly target = bind_poly(pb, realpart_numerator(prob.fd));
  AffinePoly eps_term(std::vector<std::string>{});
  eps_term.add_term(Monomial{}, AffineExpr::var(eps));
  target = target - eps_term;
  sos_constrain(pb.prog, target, opts.sos);

  FeasibilityResult res;
  MarginResult mr = solve_margin(pb.prog, gram_blocks(pb, first_gram), opts.solve);
  if (mr.sol.status != SolveStatus::Optimal) {
    throw Error(ErrorCode::Solver, "margin stage did not converge");
  }
  if (mr.margin < -1e-8) {
    res.solvable = false;
    res.passivatable = false;
    res.epsilon_star = -1;
    return res;
  }

  pb.prog.add_objective_scalar(eps, 1.0);
  Solution sol = solve(pb.prog, opts.solve);
  if (sol.status != SolveStatus::Optimal) {
    throw Error(ErrorCode::Solver, "feasibility SDP did not converge");
  }
  res.epsilon_star = sol.scalars[static_cast<std::size_t>(eps)];
  res.rho_witness = extract_rho(pb, sol.scalars, prob.box);
  res.passivatable = res.epsilon_star > opts.theta_min;
  return res;
}

namespace {

struct IfpData {
  Poly pi;  // Schur numerator; DT version already carries the clearing factor
  Poly b1;  // (1,2) entry without gamma
  Poly b2;  // (1,3) entry without gamma
};

IfpData ifp_data(const FreqDecomposition& fd) {
  IfpData d;
  Poly num = realpart_numerator(fd);
  if (fd.domain == Domain::CT) {
    d.pi = num;
  } else {
    d.pi = one_plus_y2_pow(fd.dD - fd.dN) * num;
  }
  d.b1 = with_params(fd.d_even);
  d.b2 = with_params(fd.d_odd);
  return d;
}

struct IfpStep {
  bool feasible = false;
  std::vector<double> rho;
  Certificate cert;
};

IfpStep ifp_feasible(const IfpData& d, const ParamBox& box, double gamma,
                     const SynthOptions& opts) {
  ParamBinding pb = bind_box(box);
  int first_gram = pb.prog.block_count();
  std::vector<std::vector<AffinePoly>> F(3, std::vector<AffinePoly>(3));
  F[0][0] = bind_poly(pb, d.pi);
  F[0][1] = gamma * bind_poly(pb, d.b1);
  F[0][2] = gamma * bind_poly(pb, d.b2);
  F[1][1] = AffinePoly::from_poly(Poly::constant(1));
  F[1][2] = AffinePoly{};
  F[2][2] = AffinePoly::from_poly(Poly::constant(1));
  // The trailing rows are constant: cap their basis at degree 0 so the Gram
  // block keeps a strictly feasible interior.
  SosOptions so = opts.sos;
  int d0 = (F[0][0].degree() + 1) / 2;
  d0 = std::max({d0, F[0][1].degree(), F[0][2].degree()});
  so.row_degrees = {d0, 0, 0};
  SosHandle h = sos_constrain(pb.prog, F, 3, so);

  IfpStep step;
  MarginResult mr = solve_margin(pb.prog, gram_blocks(pb, first_gram), opts.solve);
  if (mr.sol.status != SolveStatus::Optimal) return step;  // treat as infeasible
  if (mr.margin < -1e-8) return step;
  step.feasible = true;
  step.rho = extract_rho(pb, mr.sol.scalars, box);
  step.cert = recover_certificate(pb.prog, mr.sol, h);
  return step;
}

}  // namespace

SynthesisResult maximize_ifp(const PassivationProblem& prob, const SynthOptions& opts) {
  SynthesisResult res;
  FeasibilityResult feas = feasibility(prob, opts);
  res.epsilon_star = feas.epsilon_star;
  if (!feas.passivatable) {
    res.feasible = false;
    return res;
  }

  IfpData d = ifp_data(prob.fd);
  IfpStep best;
  auto probe = [&](double gamma) {
    IfpStep step = ifp_feasible(d, prob.box, gamma, opts);
    res.trace.push_back({gamma, step.feasible});
    if (step.feasible) best = step;
    return step.feasible;
  };

  double lo = 0;
  if (!probe(0)) {
    // The feasibility stage passed, so gamma = 0 must be solvable; failing
    // here means the solver gave up, not that the problem is infeasible.
    throw Error(ErrorCode::Solver, "bisection base case did not converge");
  }
  double hi = 1;
  while (probe(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > opts.gamma_cap) {
      res.hit_gamma_cap = true;
      hi = opts.gamma_cap;
      break;
    }
  }
  if (!res.hit_gamma_cap) {
    while (hi - lo > opts.bisect_tol) {
      double mid = 0.5 * (lo + hi);
      if (probe(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }

  res.feasible = true;
  res.index_value = lo * lo;
  res.rho_star = best.rho;
  res.certificate_residual = best.cert.residual;
  res.gram_min_eig = best.cert.min_eigenvalue;
  return res;
}

SynthesisResult maximize_ofp(const PassivationProblem& prob, const SynthOptions& opts) {
  const FreqDecomposition& fd = prob.fd;
  Poly num = realpart_numerator(fd);
  Poly n_sq = fd.n_even * fd.n_even + fd.n_odd * fd.n_odd;
  if (fd.domain == Domain::DT) {
    int e = fd.dN - fd.dD;
    if (e >= 0) {
      num = one_plus_y2_pow(e) * num;
    } else {
      n_sq = one_plus_y2_pow(-e) * n_sq;
    }
  }

  ParamBinding pb = bind_box(prob.box);
  int xi = pb.prog.add_scalar("xi");
  int first_gram = pb.prog.block_count();

  AffinePoly target = bind_poly(pb, num);
  AffinePoly xi_term(n_sq.vars());
  for (const auto& [m, c] : n_sq.terms()) {
    xi_term.add_term(m, AffineExpr::var(xi, to_double(c)));
  }
  target = target - xi_term;
  SosHandle h = sos_constrain(pb.prog, target, opts.sos);

  SynthesisResult res;
  MarginResult mr = solve_margin(pb.prog, gram_blocks(pb, first_gram), opts.solve);
  if (mr.sol.status != SolveStatus::Optimal) {
    throw Error(ErrorCode::Solver, "margin stage did not converge");
  }
  if (mr.margin < -1e-8) {
    res.feasible = false;
    return res;
  }

  pb.prog.add_objective_scalar(xi, 1.0);
  Solution sol = solve(pb.prog, opts.solve);
  if (sol.status != SolveStatus::Optimal) {
    throw Error(ErrorCode::Solver, "OFP SDP did not converge");
  }
  Certificate cert = recover_certificate(pb.prog, sol, h);
  res.feasible = true;
  res.index_value = sol.scalars[static_cast<std::size_t>(xi)];
  res.rho_star = extract_rho(pb, sol.scalars, prob.box);
  res.certificate_residual = cert.residual;
  res.gram_min_eig = cert.min_eigenvalue;
  return res;
}

}  // namespace fsp
