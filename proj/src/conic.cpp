/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "fsp/conic.hpp"

#include "fsp/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <tuple>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fsp {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NumericalLimit: return "numerical_limit";
  }
  return "unknown";
}

int ConicProgram::add_scalar(const std::string& name) {
  scalar_names_.push_back(name);
  return static_cast<int>(scalar_names_.size()) - 1;
}

int ConicProgram::add_block(int dim, const std::string& name) {
  if (dim <= 0) throw Error(ErrorCode::Validation, "PSD block dimension must be positive");
  block_dims_.push_back(dim);
  block_names_.push_back(name);
  return static_cast<int>(block_dims_.size()) - 1;
}

void ConicProgram::add_equality(LinearEq eq) {
  for (const auto& t : eq.scalars) {
    if (t.var < 0 || t.var >= scalar_count()) throw Error(ErrorCode::Validation, "equality references unknown scalar");
  }
  for (const auto& t : eq.entries) {
    if (t.block < 0 || t.block >= block_count()) throw Error(ErrorCode::Validation, "equality references unknown block");
    if (t.i > t.j || t.i < 0 || t.j >= block_dim(t.block)) {
      throw Error(ErrorCode::Validation, "equality block index out of range (need i <= j)");
    }
  }
  equalities_.push_back(std::move(eq));
}

void ConicProgram::add_objective_scalar(int var, double coef) {
  objective_scalars_.push_back({var, coef});
}

void ConicProgram::add_objective_entry(int block, int i, int j, double coef) {
  objective_entries_.push_back({block, i, j, coef});
}

void ConicProgram::add_box_bound(int var, double lo, double hi) {
  std::ostringstream os;
  os << "bound(" << scalar_name(var) << ")";
  int blk = add_block(2, os.str());
  // X00 = hi - var, X11 = var - lo, X01 = 0
  add_equality({{{var, 1.0}}, {{blk, 0, 0, 1.0}}, hi});
  add_equality({{{var, -1.0}}, {{blk, 1, 1, 1.0}}, -lo});
  add_equality({{}, {{blk, 0, 1, 1.0}}, 0.0});
}

void ConicProgram::dump(std::ostream& os, const std::string& name) const {
  os << "# fspass conic program";
  if (!name.empty()) os << ": " << name;
  os << "\n";
  os << "scalars " << scalar_count() << "\n";
  for (int v = 0; v < scalar_count(); ++v) os << "  " << v << " " << scalar_names_[static_cast<std::size_t>(v)] << "\n";
  os << "blocks " << block_count() << "\n";
  for (int k = 0; k < block_count(); ++k) {
    os << "  " << k << " dim " << block_dims_[static_cast<std::size_t>(k)] << " "
       << block_names_[static_cast<std::size_t>(k)] << "\n";
  }
  os << "objective (maximize)\n";
  for (const auto& t : objective_scalars_) os << "  s " << t.var << " " << t.coef << "\n";
  for (const auto& t : objective_entries_) os << "  b " << t.block << " " << t.i << " " << t.j << " " << t.coef << "\n";
  os << "equalities " << equality_count() << "\n";
  for (const auto& eq : equalities_) {
    os << "eq rhs " << eq.rhs << "\n";
    for (const auto& t : eq.scalars) os << "  s " << t.var << " " << t.coef << "\n";
    for (const auto& t : eq.entries) os << "  b " << t.block << " " << t.i << " " << t.j << " " << t.coef << "\n";
  }
}

namespace {

struct Assembled {
  int m = 0;
  int nu = 0;
  int K = 0;
  std::vector<int> dims;
  // A[i]: list of (block, symmetric matrix) for equality row i.
  std::vector<std::vector<std::pair<int, Eigen::MatrixXd>>> A;
  Eigen::MatrixXd Au;  // m x nu
  Eigen::VectorXd b;
  std::vector<Eigen::MatrixXd> C;
  Eigen::VectorXd cu;
  std::vector<double> row_scale;
};

Assembled assemble(const ConicProgram& p) {
  Assembled as;
  as.m = p.equality_count();
  as.nu = p.scalar_count();
  as.K = p.block_count();
  for (int k = 0; k < as.K; ++k) as.dims.push_back(p.block_dim(k));
  as.A.resize(static_cast<std::size_t>(as.m));
  as.Au = Eigen::MatrixXd::Zero(as.m, as.nu);
  as.b = Eigen::VectorXd::Zero(as.m);
  as.cu = Eigen::VectorXd::Zero(as.nu);
  for (int k = 0; k < as.K; ++k) as.C.push_back(Eigen::MatrixXd::Zero(as.dims[static_cast<std::size_t>(k)], as.dims[static_cast<std::size_t>(k)]));
  for (const auto& t : p.objective_scalars()) as.cu(t.var) += t.coef;
  for (const auto& t : p.objective_entries()) {
    auto& C = as.C[static_cast<std::size_t>(t.block)];
    if (t.i == t.j) {
      C(t.i, t.i) += t.coef;
    } else {
      C(t.i, t.j) += t.coef / 2;
      C(t.j, t.i) += t.coef / 2;
    }
  }
  for (int i = 0; i < as.m; ++i) {
    const auto& eq = p.equalities()[static_cast<std::size_t>(i)];
    double scale = std::abs(eq.rhs);
    for (const auto& t : eq.scalars) scale = std::max(scale, std::abs(t.coef));
    for (const auto& t : eq.entries) scale = std::max(scale, std::abs(t.coef));
    if (scale <= 0) scale = 1;
    as.row_scale.push_back(scale);
    as.b(i) = eq.rhs / scale;
    for (const auto& t : eq.scalars) as.Au(i, t.var) += t.coef / scale;
    std::vector<Eigen::MatrixXd> mats(static_cast<std::size_t>(as.K));
    std::vector<bool> used(static_cast<std::size_t>(as.K), false);
    for (const auto& t : eq.entries) {
      auto kk = static_cast<std::size_t>(t.block);
      if (!used[kk]) {
        mats[kk] = Eigen::MatrixXd::Zero(as.dims[kk], as.dims[kk]);
        used[kk] = true;
      }
      if (t.i == t.j) {
        mats[kk](t.i, t.i) += t.coef / scale;
      } else {
        mats[kk](t.i, t.j) += t.coef / (2 * scale);
        mats[kk](t.j, t.i) += t.coef / (2 * scale);
      }
    }
    for (int k = 0; k < as.K; ++k) {
      if (used[static_cast<std::size_t>(k)]) as.A[static_cast<std::size_t>(i)].emplace_back(k, std::move(mats[static_cast<std::size_t>(k)]));
    }
  }
  return as;
}

double sym_min_eig(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Largest alpha in (0, cap] with X + alpha*D >= 0, times gamma.
double psd_step(const std::vector<Eigen::MatrixXd>& X, const std::vector<Eigen::MatrixXd>& D,
                double gamma) {
  double alpha = 1.0 / gamma;  // so that gamma*alpha starts at 1
  for (std::size_t k = 0; k < X.size(); ++k) {
    Eigen::LLT<Eigen::MatrixXd> llt(X[k]);
    if (llt.info() != Eigen::Success) return 0.0;
    Eigen::MatrixXd L = llt.matrixL();
    Eigen::MatrixXd W = L.triangularView<Eigen::Lower>().solve(D[k]);
    W = L.triangularView<Eigen::Lower>().solve(W.transpose()).eval();
    double lmin = sym_min_eig(0.5 * (W + W.transpose()));
    if (lmin < 0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return std::min(1.0, gamma * alpha);
}

std::atomic<int> dump_counter{0};

}  // namespace

Solution solve(const ConicProgram& p, const SolveOptions& opts) {
  if (!opts.dump_dir.empty()) {
    int id = dump_counter.fetch_add(1);
    std::ostringstream path;
    path << opts.dump_dir << "/program_" << id << ".txt";
    std::ofstream f(path.str());
    if (f) p.dump(f);
  }
  if (p.block_count() == 0 || p.equality_count() == 0) {
    throw Error(ErrorCode::Unsupported, "conic solve requires at least one PSD block and one equality");
  }
  Assembled as = assemble(p);
  const int m = as.m, nu = as.nu, K = as.K;
  int ntot = 0;
  for (int d : as.dims) ntot += d;

  double normb = as.b.lpNorm<Eigen::Infinity>();
  double normc = as.cu.size() ? as.cu.lpNorm<Eigen::Infinity>() : 0.0;
  for (const auto& C : as.C) normc = std::max(normc, C.lpNorm<Eigen::Infinity>());

  std::vector<Eigen::MatrixXd> X, S;
  double eta = std::max({10.0, normb, normc});
  for (int k = 0; k < K; ++k) {
    X.push_back(eta * Eigen::MatrixXd::Identity(as.dims[static_cast<std::size_t>(k)], as.dims[static_cast<std::size_t>(k)]));
    S.push_back(eta * Eigen::MatrixXd::Identity(as.dims[static_cast<std::size_t>(k)], as.dims[static_cast<std::size_t>(k)]));
  }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(nu);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  Solution sol;
  sol.scalars.assign(static_cast<std::size_t>(nu), 0.0);

  auto trace_dot = [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    return A.cwiseProduct(B).sum();  // both symmetric in our uses
  };

  auto primal_obj = [&]() {
    double v = as.cu.dot(u);
    for (int k = 0; k < K; ++k) v += trace_dot(as.C[static_cast<std::size_t>(k)], X[static_cast<std::size_t>(k)]);
    return v;
  };

  // Best iterate so far (by worst residual); restored when the iteration
  // hits a numerical limit so a late breakdown cannot spoil a good solve.
  double best_score = std::numeric_limits<double>::infinity();
  double best_gap = 0, best_pres = 0, best_dres = 0;
  Eigen::VectorXd best_u = u, best_y = y;
  std::vector<Eigen::MatrixXd> best_X = X;

  auto fill_solution = [&](SolveStatus st, int iter) {
    sol.status = st;
    sol.iterations = iter;
    for (int v = 0; v < nu; ++v) sol.scalars[static_cast<std::size_t>(v)] = u(v);
    sol.blocks.assign(X.begin(), X.end());
    sol.dual.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) sol.dual[static_cast<std::size_t>(i)] = y(i) / as.row_scale[static_cast<std::size_t>(i)];
    sol.objective = primal_obj();
    sol.dual_objective = as.b.dot(y);
  };

  auto finish_best = [&](int iter) {
    u = best_u;
    y = best_y;
    X = best_X;
    bool near = best_gap <= 1e4 * opts.gap_tol && best_pres <= 1e3 * opts.feas_tol &&
                best_dres <= 1e3 * opts.feas_tol;
    fill_solution(near ? SolveStatus::Optimal : SolveStatus::NumericalLimit, iter);
    sol.duality_gap = best_gap;
    sol.max_infeasibility = std::max(best_pres, best_dres);
    return sol;
  };

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    // Residuals.
    Eigen::VectorXd rp = as.b - as.Au * u;
    for (int i = 0; i < m; ++i) {
      for (const auto& [k, Aik] : as.A[static_cast<std::size_t>(i)]) rp(i) -= trace_dot(Aik, X[static_cast<std::size_t>(k)]);
    }
    std::vector<Eigen::MatrixXd> Rd;  // want S = sum y A - C
    for (int k = 0; k < K; ++k) {
      Rd.push_back(-as.C[static_cast<std::size_t>(k)] - S[static_cast<std::size_t>(k)]);
    }
    for (int i = 0; i < m; ++i) {
      for (const auto& [k, Aik] : as.A[static_cast<std::size_t>(i)]) Rd[static_cast<std::size_t>(k)] += y(i) * Aik;
    }
    Eigen::VectorXd ru = as.cu - as.Au.transpose() * y;

    double mu = 0;
    for (int k = 0; k < K; ++k) mu += trace_dot(X[static_cast<std::size_t>(k)], S[static_cast<std::size_t>(k)]);
    mu /= ntot;

    double pobj = primal_obj();
    double dobj = as.b.dot(y);
    double rel_gap = std::abs(dobj - pobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    double prim_res = rp.lpNorm<Eigen::Infinity>() / (1.0 + normb);
    double dual_res = nu > 0 ? ru.lpNorm<Eigen::Infinity>() / (1.0 + normc) : 0.0;
    for (const auto& R : Rd) dual_res = std::max(dual_res, R.lpNorm<Eigen::Infinity>() / (1.0 + normc));

    if (opts.verbose) {
      std::ostringstream os;
      os << "iter " << iter << " mu " << mu << " gap " << rel_gap << " pres " << prim_res
         << " dres " << dual_res << " pobj " << pobj << " dobj " << dobj;
      // verbose output routed through stderr to keep stdout machine-readable
      std::fputs((os.str() + "\n").c_str(), stderr);
    }

    double score = std::max({rel_gap / opts.gap_tol, prim_res / opts.feas_tol,
                             dual_res / opts.feas_tol});
    if (score < best_score) {
      best_score = score;
      best_gap = rel_gap;
      best_pres = prim_res;
      best_dres = dual_res;
      best_u = u;
      best_y = y;
      best_X = X;
    }

    if (rel_gap <= opts.gap_tol && prim_res <= opts.feas_tol && dual_res <= opts.feas_tol) {
      fill_solution(SolveStatus::Optimal, iter);
      sol.duality_gap = rel_gap;
      sol.max_infeasibility = std::max(prim_res, dual_res);
      return sol;
    }
    // The barrier parameter is exhausted: iterates cannot improve further in
    // double precision. Return the best iterate, accepted when it is within
    // a moderate factor of the requested tolerances.
    if (mu <= 1e-13) return finish_best(iter);

    // Divergence: test for certificates of infeasibility / unboundedness.
    double ynorm = y.lpNorm<Eigen::Infinity>();
    if (ynorm > 1e8 * (1.0 + normb)) {
      Eigen::VectorXd yh = y / ynorm;
      bool ray = as.b.dot(yh) < -1e-6 && (as.Au.transpose() * yh).lpNorm<Eigen::Infinity>() < 1e-6;
      if (ray) {
        for (int k = 0; k < K && ray; ++k) {
          Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(as.dims[static_cast<std::size_t>(k)], as.dims[static_cast<std::size_t>(k)]);
          for (int i = 0; i < m; ++i) {
            for (const auto& [kk, Aik] : as.A[static_cast<std::size_t>(i)]) {
              if (kk == k) Z += yh(i) * Aik;
            }
          }
          if (sym_min_eig(Z) < -1e-6) ray = false;
        }
      }
      fill_solution(ray ? SolveStatus::Infeasible : SolveStatus::NumericalLimit, iter);
      return sol;
    }
    double xnorm = u.lpNorm<Eigen::Infinity>();
    for (const auto& Xk : X) xnorm = std::max(xnorm, Xk.lpNorm<Eigen::Infinity>());
    if (xnorm > 1e9 && prim_res < 1e-6 && pobj > 1e6) {
      fill_solution(SolveStatus::Unbounded, iter);
      return sol;
    }

    // Factorizations and the Schur complement M_ij = sum_k tr(A_i X A_j S^-1).
    std::vector<Eigen::MatrixXd> Sinv;
    for (int k = 0; k < K; ++k) {
      Eigen::LLT<Eigen::MatrixXd> llt(S[static_cast<std::size_t>(k)]);
      if (llt.info() != Eigen::Success) return finish_best(iter);
      Sinv.push_back(llt.solve(Eigen::MatrixXd::Identity(as.dims[static_cast<std::size_t>(k)], as.dims[static_cast<std::size_t>(k)])));
    }
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      for (const auto& [k, Ajk] : as.A[static_cast<std::size_t>(j)]) {
        Eigen::MatrixXd T = X[static_cast<std::size_t>(k)] * Ajk * Sinv[static_cast<std::size_t>(k)];
        for (int i = 0; i < m; ++i) {
          for (const auto& [kk, Aik] : as.A[static_cast<std::size_t>(i)]) {
            if (kk == k) M(i, j) += Aik.cwiseProduct(T.transpose()).sum();
          }
        }
      }
    }
    // Bordered KKT: [[M, -Au],[Au', 0]] [dy; du] = [g; ru]
    Eigen::MatrixXd KKT = Eigen::MatrixXd::Zero(m + nu, m + nu);
    KKT.topLeftCorner(m, m) = M;
    KKT.topRightCorner(m, nu) = -as.Au;
    KKT.bottomLeftCorner(nu, m) = as.Au.transpose();
    for (int v = 0; v < nu; ++v) KKT(m + v, m + v) = -1e-12;  // regularization
    Eigen::FullPivLU<Eigen::MatrixXd> lu(KKT);
    if (!lu.isInvertible()) {
      // fall back to least-squares direction
      lu.setThreshold(1e-13);
    }

    auto solve_direction = [&](double tau, const std::vector<Eigen::MatrixXd>* corr_XS)
        -> std::tuple<Eigen::VectorXd, Eigen::VectorXd, std::vector<Eigen::MatrixXd>, std::vector<Eigen::MatrixXd>> {
      Eigen::VectorXd g = -rp;
      for (int i = 0; i < m; ++i) {
        for (const auto& [k, Aik] : as.A[static_cast<std::size_t>(i)]) {
          auto kk = static_cast<std::size_t>(k);
          Eigen::MatrixXd E = tau * Sinv[kk] - X[kk] - X[kk] * Rd[kk] * Sinv[kk];
          if (corr_XS) E -= (*corr_XS)[kk];
          g(i) += Aik.cwiseProduct(E.transpose()).sum();
        }
      }
      Eigen::VectorXd rhs(m + nu);
      rhs.head(m) = g;
      rhs.tail(nu) = ru;
      Eigen::VectorXd d = lu.solve(rhs);
      // Iterative refinement: the Schur complement is badly conditioned near
      // the optimum and the raw solve can leave a residual large enough to
      // re-infect the (already tiny) primal residual.
      for (int ref = 0; ref < 3; ++ref) {
        Eigen::VectorXd rr = rhs - KKT * d;
        if (rr.lpNorm<Eigen::Infinity>() <= 1e-14 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) break;
        d += lu.solve(rr);
      }
      Eigen::VectorXd dy = d.head(m);
      Eigen::VectorXd du = d.tail(nu);
      // dS_k = sum_i dy_i A_ik + Rd_k, then dX from the linearized
      // complementarity X dS + dX S = tau I - X S (- second-order term).
      std::vector<Eigen::MatrixXd> dS, dX;
      for (int k = 0; k < K; ++k) {
        auto kk = static_cast<std::size_t>(k);
        Eigen::MatrixXd ds = Rd[kk];
        for (int i = 0; i < m; ++i) {
          for (const auto& [k2, Aik] : as.A[static_cast<std::size_t>(i)]) {
            if (k2 == k) ds += dy(i) * Aik;
          }
        }
        dS.push_back(std::move(ds));
      }
      for (int k = 0; k < K; ++k) {
        auto kk = static_cast<std::size_t>(k);
        Eigen::MatrixXd dx = tau * Sinv[kk] - X[kk] - X[kk] * dS[kk] * Sinv[kk];
        if (corr_XS) dx -= (*corr_XS)[kk];
        dx = 0.5 * (dx + dx.transpose()).eval();
        dX.push_back(std::move(dx));
      }
      return {dy, du, dX, dS};
    };

    // Predictor (affine scaling).
    auto [dy_aff, du_aff, dX_aff, dS_aff] = solve_direction(0.0, nullptr);
    double gamma = mu < 1e-4 ? 0.98 : 0.9;
    double ap_aff = psd_step(X, dX_aff, gamma);
    double ad_aff = psd_step(S, dS_aff, gamma);
    double mu_aff = 0;
    for (int k = 0; k < K; ++k) {
      auto kk = static_cast<std::size_t>(k);
      mu_aff += ((X[kk] + ap_aff * dX_aff[kk]).cwiseProduct(S[kk] + ad_aff * dS_aff[kk])).sum();
    }
    mu_aff = std::max(mu_aff / ntot, 0.0);
    double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
    sigma = std::min(std::max(sigma, 1e-8), 1.0);
    // Keep the barrier from collapsing while the iterate is still
    // infeasible relative to mu; otherwise a late numerical wobble in the
    // residuals can never be repaired.
    if (std::max(prim_res, dual_res) > mu) sigma = std::max(sigma, 0.5);

    // Corrector.
    std::vector<Eigen::MatrixXd> corr;
    for (int k = 0; k < K; ++k) {
      auto kk = static_cast<std::size_t>(k);
      corr.push_back(dX_aff[kk] * dS_aff[kk] * Sinv[kk]);
    }
    auto [dy, du, dX, dS] = solve_direction(sigma * mu, &corr);
    double ap = psd_step(X, dX, gamma);
    double ad = psd_step(S, dS, gamma);
    if (ap <= 1e-12 || ad <= 1e-12) return finish_best(iter);
    u += ap * du;
    y += ad * dy;
    for (int k = 0; k < K; ++k) {
      auto kk = static_cast<std::size_t>(k);
      X[kk] += ap * dX[kk];
      S[kk] += ad * dS[kk];
      X[kk] = 0.5 * (X[kk] + X[kk].transpose()).eval();
      S[kk] = 0.5 * (S[kk] + S[kk].transpose()).eval();
    }
  }
  return finish_best(opts.max_iter);
}

MarginResult solve_margin(const ConicProgram& p, const std::vector<int>& margin_blocks,
                          const SolveOptions& opts) {
  ConicProgram q;
  for (int v = 0; v < p.scalar_count(); ++v) q.add_scalar(p.scalar_name(v));
  for (int k = 0; k < p.block_count(); ++k) q.add_block(p.block_dim(k), "shifted");
  int t = q.add_scalar("margin_t");
  int cap = q.add_block(1, "margin_cap");
  auto is_margin = [&](int k) {
    return std::find(margin_blocks.begin(), margin_blocks.end(), k) != margin_blocks.end();
  };
  for (const auto& eq : p.equalities()) {
    LinearEq e = eq;
    for (const auto& bt : eq.entries) {
      if (is_margin(bt.block) && bt.i == bt.j) e.scalars.push_back({t, bt.coef});
    }
    q.add_equality(std::move(e));
  }
  q.add_equality({{{t, 1.0}}, {{cap, 0, 0, 1.0}}, 1.0});
  q.add_objective_scalar(t, 1.0);
  MarginResult res;
  res.sol = solve(q, opts);
  if (res.sol.status == SolveStatus::Optimal) {
    double tv = res.sol.scalars[static_cast<std::size_t>(t)];
    res.margin = tv;
    for (int k : margin_blocks) {
      auto kk = static_cast<std::size_t>(k);
      res.sol.blocks[kk] += tv * Eigen::MatrixXd::Identity(p.block_dim(k), p.block_dim(k));
    }
    res.sol.scalars.pop_back();
    res.sol.blocks.pop_back();
  }
  return res;
}

}  // namespace fsp
