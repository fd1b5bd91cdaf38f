/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "fsp/sos.hpp"

#include "fsp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace fsp {

AffineExpr AffineExpr::var(int id, double coef) {
  AffineExpr e;
  e.terms.push_back({id, coef});
  return e;
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& o) {
  constant += o.constant;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& o) {
  constant -= o.constant;
  for (const auto& t : o.terms) terms.push_back({t.var, -t.coef});
  return *this;
}

AffineExpr& AffineExpr::operator*=(double s) {
  constant *= s;
  for (auto& t : terms) t.coef *= s;
  return *this;
}

double AffineExpr::eval(const std::vector<double>& scalars) const {
  double acc = constant;
  for (const auto& t : terms) acc += t.coef * scalars[static_cast<std::size_t>(t.var)];
  return acc;
}

AffineExpr AffineExpr::simplified() const {
  AffineExpr out;
  out.constant = constant;
  std::map<int, double> acc;
  for (const auto& t : terms) acc[t.var] += t.coef;
  for (const auto& [v, c] : acc) {
    if (c != 0.0) out.terms.push_back({v, c});
  }
  return out;
}

AffinePoly AffinePoly::from_poly(const Poly& p) {
  AffinePoly out(p.vars());
  for (const auto& [m, c] : p.terms()) out.terms.emplace(m, AffineExpr(to_double(c)));
  return out;
}

int AffinePoly::degree() const {
  int d = -1;
  for (const auto& [m, e] : terms) {
    d = std::max(d, std::accumulate(m.begin(), m.end(), 0));
  }
  return d;
}

void AffinePoly::add_term(const Monomial& m, const AffineExpr& e) {
  auto it = terms.find(m);
  if (it == terms.end()) {
    terms.emplace(m, e);
  } else {
    it->second += e;
  }
}

AffinePoly AffinePoly::aligned_to(const std::vector<std::string>& universe) const {
  std::vector<std::size_t> slot(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto it = std::find(universe.begin(), universe.end(), vars[i]);
    if (it == universe.end()) {
      throw Error(ErrorCode::Precondition, "aligned_to: missing variable " + vars[i]);
    }
    slot[i] = static_cast<std::size_t>(it - universe.begin());
  }
  AffinePoly out(universe);
  for (const auto& [m, e] : terms) {
    Monomial nm(universe.size(), 0);
    for (std::size_t i = 0; i < vars.size(); ++i) nm[slot[i]] = m[i];
    out.add_term(nm, e);
  }
  return out;
}

namespace {

std::vector<std::string> merge_vars(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& v : b) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  std::sort(out.begin(), out.end(), var_less);
  return out;
}

}  // namespace

AffinePoly operator+(const AffinePoly& a, const AffinePoly& b) {
  auto vars = merge_vars(a.vars, b.vars);
  AffinePoly out = a.aligned_to(vars);
  for (const auto& [m, e] : b.aligned_to(vars).terms) out.add_term(m, e);
  return out;
}

AffinePoly operator-(const AffinePoly& a, const AffinePoly& b) {
  return a + (-1.0 * b);
}

AffinePoly operator*(const Poly& p, const AffinePoly& a) {
  auto vars = merge_vars(p.vars(), a.vars);
  AffinePoly pa = AffinePoly::from_poly(p).aligned_to(vars);
  AffinePoly aa = a.aligned_to(vars);
  AffinePoly out(vars);
  for (const auto& [mp, ep] : pa.terms) {
    for (const auto& [ma, ea] : aa.terms) {
      Monomial m(vars.size());
      for (std::size_t i = 0; i < vars.size(); ++i) m[i] = mp[i] + ma[i];
      out.add_term(m, ep.constant * ea);  // p-side coefficients are numeric
    }
  }
  return out;
}

AffinePoly operator*(double s, const AffinePoly& a) {
  AffinePoly out(a.vars);
  for (const auto& [m, e] : a.terms) out.terms.emplace(m, s * e);
  return out;
}

AffinePoly bind_parameters(const Poly& p, const std::map<std::string, int>& scalar_ids) {
  const auto& pv = p.vars();
  std::vector<int> bound(pv.size(), -1);
  std::vector<std::string> free_vars;
  std::vector<std::size_t> free_slot(pv.size());
  for (std::size_t i = 0; i < pv.size(); ++i) {
    auto it = scalar_ids.find(pv[i]);
    if (it != scalar_ids.end()) {
      bound[i] = it->second;
    } else {
      free_slot[i] = free_vars.size();
      free_vars.push_back(pv[i]);
    }
  }
  AffinePoly out(free_vars);
  for (const auto& [m, c] : p.terms()) {
    int bound_var = -1;
    for (std::size_t i = 0; i < pv.size(); ++i) {
      if (bound[i] < 0 || m[i] == 0) continue;
      if (m[i] > 1 || bound_var >= 0) {
        throw Error(ErrorCode::Precondition, "bind_parameters: polynomial not affine in " + pv[i]);
      }
      bound_var = bound[i];
    }
    Monomial fm(free_vars.size(), 0);
    for (std::size_t i = 0; i < pv.size(); ++i) {
      if (bound[i] < 0) fm[free_slot[i]] = m[i];
    }
    double cd = to_double(c);
    out.add_term(fm, bound_var >= 0 ? AffineExpr::var(bound_var, cd) : AffineExpr(cd));
  }
  return out;
}

std::vector<Monomial> monomial_basis(std::size_t nvars, int d) {
  std::vector<Monomial> out;
  Monomial cur(nvars, 0);
  // Enumerate by total degree, lexicographic within each degree.
  std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int rem) {
    if (idx + 1 == nvars) {
      cur[idx] = rem;
      out.push_back(cur);
      return;
    }
    for (int e = rem; e >= 0; --e) {
      cur[idx] = e;
      rec(idx + 1, rem - e);
    }
  };
  if (nvars == 0) {
    out.push_back({});
    return out;
  }
  for (int deg = 0; deg <= d; ++deg) rec(0, deg);
  return out;
}

namespace {

SosHandle sos_constrain_impl(ConicProgram& prog, const std::vector<std::vector<AffinePoly>>& F,
                             int q, const SosOptions& opts) {
  // Common variable universe and degree across all entries.
  std::vector<std::string> vars;
  int deg = 0;
  for (int u = 0; u < q; ++u) {
    for (int v = u; v < q; ++v) {
      const auto& e = F[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
      vars = merge_vars(vars, e.vars);
      deg = std::max(deg, e.degree());
    }
  }
  if (deg % 2 != 0) {
    // An odd-degree (matrix) polynomial cannot be SOS; still compile with the
    // larger basis so infeasibility is reported by the solver, unless the
    // leading odd terms make it structurally impossible. Keep it simple and
    // reject outright: callers always pass even-degree targets.
    throw Error(ErrorCode::Precondition, "SOS target has odd degree");
  }
  int half = deg / 2;
  if (!opts.row_degrees.empty() && static_cast<int>(opts.row_degrees.size()) != q) {
    throw Error(ErrorCode::Precondition, "row_degrees size must match the matrix dimension");
  }
  std::vector<std::vector<Monomial>> row_bases(static_cast<std::size_t>(q));
  std::vector<int> offset(static_cast<std::size_t>(q) + 1, 0);
  int dim = 0;
  for (int u = 0; u < q; ++u) {
    int du = opts.row_degrees.empty() ? half : opts.row_degrees[static_cast<std::size_t>(u)];
    row_bases[static_cast<std::size_t>(u)] = monomial_basis(vars.size(), du);
    offset[static_cast<std::size_t>(u)] = dim;
    dim += static_cast<int>(row_bases[static_cast<std::size_t>(u)].size());
  }
  offset[static_cast<std::size_t>(q)] = dim;
  if (dim > opts.max_basis) {
    std::ostringstream os;
    os << "SOS basis size " << dim << " exceeds cap " << opts.max_basis;
    throw Error(ErrorCode::DegreeOverflow, os.str());
  }

  SosHandle h;
  h.q = q;
  h.basis = row_bases[0];
  h.row_bases = row_bases;
  h.vars = vars;
  h.block = prog.add_block(dim, "gram" + std::to_string(prog.block_count()));

  // For each matrix entry (u, v) and each monomial, match:
  //   sum_{i, j: basis_i + basis_j = m} Q[(u, i), (v, j)] = coeff of m in F[u][v]
  // where Q index (u, i) = offset[u] + i (row-major blocks by matrix row).
  for (int u = 0; u < q; ++u) {
    for (int v = u; v < q; ++v) {
      AffinePoly e =
          F[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)].aligned_to(vars);
      const auto& bu = row_bases[static_cast<std::size_t>(u)];
      const auto& bv = row_bases[static_cast<std::size_t>(v)];
      // Collect all monomials reachable by basis products plus those of e.
      std::map<Monomial, std::vector<std::pair<int, int>>> products;
      for (int i = 0; i < static_cast<int>(bu.size()); ++i) {
        for (int j = 0; j < static_cast<int>(bv.size()); ++j) {
          Monomial m(vars.size());
          for (std::size_t k = 0; k < vars.size(); ++k) {
            m[k] = bu[static_cast<std::size_t>(i)][k] + bv[static_cast<std::size_t>(j)][k];
          }
          products[m].push_back({i, j});
        }
      }
      for (const auto& [m, e2] : e.terms) products[m];  // ensure presence
      for (const auto& [m, pairs] : products) {
        LinearEq eq;
        std::map<std::pair<int, int>, double> gram_coef;
        for (const auto& [i, j] : pairs) {
          int r = offset[static_cast<std::size_t>(u)] + i;
          int c = offset[static_cast<std::size_t>(v)] + j;
          if (r > c) std::swap(r, c);
          // Q is symmetric; both orientations of a pair read the same entry.
          gram_coef[{r, c}] += 1.0;
        }
        for (const auto& [rc, coef] : gram_coef) {
          eq.entries.push_back({h.block, rc.first, rc.second, coef});
        }
        AffineExpr target;
        auto it = e.terms.find(m);
        if (it != e.terms.end()) target = it->second.simplified();
        eq.rhs = target.constant;
        for (const auto& t : target.terms) eq.scalars.push_back({t.var, -t.coef});
        int row = prog.equality_count();
        prog.add_equality(std::move(eq));
        h.equality_rows.push_back(row);
      }
    }
  }
  return h;
}

}  // namespace

SosHandle sos_constrain(ConicProgram& prog, const std::vector<std::vector<AffinePoly>>& F, int q,
                        const SosOptions& opts) {
  return sos_constrain_impl(prog, F, q, opts);
}

SosHandle sos_constrain(ConicProgram& prog, const AffinePoly& target, const SosOptions& opts) {
  std::vector<std::vector<AffinePoly>> F{{target}};
  return sos_constrain_impl(prog, F, 1, opts);
}

AffinePoly make_sos_multiplier(ConicProgram& prog, const std::vector<std::string>& vars, int degree,
                               const std::string& name_prefix, const SosOptions& opts) {
  if (degree % 2 != 0) {
    throw Error(ErrorCode::Precondition, "multiplier degree must be even");
  }
  auto monos = monomial_basis(vars.size(), degree);
  AffinePoly s(vars);
  std::map<Monomial, int> coeff_var;
  std::size_t k = 0;
  for (const auto& m : monos) {
    int id = prog.add_scalar(name_prefix + "_c" + std::to_string(k++));
    coeff_var[m] = id;
    s.add_term(m, AffineExpr::var(id));
  }
  sos_constrain(prog, s, opts);
  return s;
}

Certificate recover_certificate(const ConicProgram& prog, const Solution& sol,
                                const SosHandle& h) {
  Certificate cert;
  cert.gram = sol.blocks[static_cast<std::size_t>(h.block)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cert.gram);
  cert.min_eigenvalue = es.eigenvalues().minCoeff();
  double worst = 0;
  const auto& eqs = prog.equalities();
  for (int row : h.equality_rows) {
    const auto& eq = eqs[static_cast<std::size_t>(row)];
    double lhs = 0;
    for (const auto& t : eq.scalars) lhs += t.coef * sol.scalars[static_cast<std::size_t>(t.var)];
    for (const auto& b : eq.entries) {
      lhs += b.coef * sol.blocks[static_cast<std::size_t>(b.block)](b.i, b.j);
    }
    worst = std::max(worst, std::abs(lhs - eq.rhs));
  }
  cert.residual = worst;
  return cert;
}

}  // namespace fsp
