/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "fsp/system.hpp"

#include "fsp/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace fsp {

namespace {

std::string rho_name(std::size_t i) {
  std::ostringstream os;
  os << "rho" << (i + 1);
  return os.str();
}

std::complex<double> eval_poly_c(const Poly& p, const std::string& var, std::complex<double> x) {
  std::map<std::string, std::complex<double>> vals{{var, x}};
  return p.eval<std::complex<double>>(vals);
}

}  // namespace

std::complex<double> RationalTransfer::eval(std::complex<double> x) const {
  return eval_poly_c(num, var(), x) / eval_poly_c(den, var(), x);
}

int RationalTransfer::relative_degree() const {
  return den.degree_in(var()) - num.degree_in(var());
}

RationalTransfer make_transfer(Domain domain, const std::vector<Rational>& num_asc,
                               const std::vector<Rational>& den_asc) {
  RationalTransfer g;
  g.domain = domain;
  const char* v = domain == Domain::CT ? "s" : "z";
  g.num = Poly::from_coeffs(v, num_asc);
  g.den = Poly::from_coeffs(v, den_asc);
  if (g.den.is_zero()) throw Error(ErrorCode::Validation, "transfer denominator is zero");
  return g;
}

bool ParamBox::contains(const std::vector<double>& rho, double tol) const {
  if (rho.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (rho[i] < to_double(lower[i]) - tol || rho[i] > to_double(upper[i]) + tol) return false;
  }
  return true;
}

ValidationReport validate_plant(const RationalTransfer& g, bool strict) {
  ValidationReport rep;
  if (g.num.is_zero()) {
    rep.ok = false;
    rep.violations.push_back("plant numerator is identically zero");
    return rep;
  }
  int rd = g.relative_degree();
  if (rd < 0 || rd >= 2) {
    rep.ok = false;
    std::ostringstream os;
    os << "relative degree " << rd << " outside {0,1}";
    rep.violations.push_back(os.str());
  }
  auto zeros = poly_roots(g.num.univariate_coeffs_d());
  for (const auto& zr : zeros) {
    bool bad;
    if (g.domain == Domain::CT) {
      bad = strict ? zr.real() >= -1e-9 : zr.real() > 1e-9;
    } else {
      bad = strict ? std::abs(zr) >= 1.0 - 1e-9 : std::abs(zr) > 1.0 + 1e-9;
    }
    if (bad) {
      rep.ok = false;
      rep.offending_zeros.push_back(zr);
      std::ostringstream os;
      os << "zero at (" << zr.real() << (zr.imag() >= 0 ? "+" : "") << zr.imag() << "j) violates the "
         << (strict ? "strict" : "weak") << " minimum-phase requirement";
      rep.violations.push_back(os.str());
    }
  }
  return rep;
}

void validate_basis(const ControllerBasis& basis) {
  for (std::size_t i = 0; i < basis.entries.size(); ++i) {
    const auto& e = basis.entries[i];
    if (e.domain != basis.domain) {
      throw Error(ErrorCode::DomainMismatch, "basis entry domain mismatch");
    }
    if (e.den.is_zero()) throw Error(ErrorCode::Validation, "basis entry denominator is zero");
    if (e.relative_degree() < 0) {
      throw Error(ErrorCode::Validation, "basis entry " + std::to_string(i + 1) + " is improper");
    }
    auto poles = poly_roots(e.den.univariate_coeffs_d());
    if (!roots_stable(poles, e.domain)) {
      throw Error(ErrorCode::Validation,
                  "basis entry " + std::to_string(i + 1) + " has an unstable pole");
    }
  }
}

Poly ParamPoly::at(const std::vector<Rational>& rho) const {
  Poly out = base;
  for (std::size_t i = 0; i < coeffs.size(); ++i) out = out + rho[i] * coeffs[i];
  return out;
}

Poly ParamPoly::at(const std::vector<double>& rho) const {
  std::vector<Rational> r(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) r[i] = rational_of(rho[i]);
  return at(r);
}

int ParamPoly::max_degree() const {
  int d = base.degree();
  for (const auto& c : coeffs) d = std::max(d, c.degree());
  return d;
}

std::vector<Poly> ParamPoly::coefficient_polys_desc(const std::string& freq_var) const {
  int n = max_degree();
  std::vector<std::string> rho_vars;
  for (std::size_t i = 0; i < coeffs.size(); ++i) rho_vars.push_back(rho_name(i));
  std::vector<Poly> out;
  auto base_c = base.univariate_coeffs();
  std::vector<std::vector<Rational>> coef_c;
  for (const auto& c : coeffs) coef_c.push_back(c.univariate_coeffs());
  for (int k = n; k >= 0; --k) {
    Poly a(rho_vars);
    std::size_t kk = static_cast<std::size_t>(k);
    if (kk < base_c.size() && base_c[kk] != 0) a.add_term(Monomial(rho_vars.size(), 0), base_c[kk]);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (kk < coef_c[i].size() && coef_c[i][kk] != 0) {
        Monomial m(rho_vars.size(), 0);
        m[i] = 1;
        a.add_term(m, coef_c[i][kk]);
      }
    }
    out.push_back(a);
  }
  return out;
}

std::complex<double> ClosedLoop::eval(std::complex<double> x, const std::vector<double>& rho) const {
  const char* v = domain == Domain::CT ? "s" : "z";
  std::map<std::string, std::complex<double>> vals{{v, x}};
  std::complex<double> den = pD.base.eval<std::complex<double>>(vals);
  for (std::size_t i = 0; i < pD.coeffs.size(); ++i) {
    den += rho[i] * pD.coeffs[i].eval<std::complex<double>>(vals);
  }
  return pN.eval<std::complex<double>>(vals) / den;
}

namespace {

// One joint positive scaling: clear coefficient denominators, then divide by
// the integer content, across pN and every pD component together.
void normalize_primitive(Poly& pN, ParamPoly& pD) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  Integer l = 1, g = 0;
  auto visit = [&](const Poly& p) {
    for (const auto& [m, c] : p.terms()) l = lcm(l, denominator(c));
  };
  visit(pN);
  visit(pD.base);
  for (const auto& c : pD.coeffs) visit(c);
  auto visit2 = [&](const Poly& p) {
    for (const auto& [m, c] : p.terms()) g = gcd(g, numerator(Rational(c * l)));
  };
  visit2(pN);
  visit2(pD.base);
  for (const auto& c : pD.coeffs) visit2(c);
  if (g == 0) g = 1;
  Rational scale = Rational(l, g);
  pN = scale * pN;
  pD.base = scale * pD.base;
  for (auto& c : pD.coeffs) c = scale * c;
}

void check_no_unstable_cancellation(const ClosedLoop& cl) {
  std::vector<double> samples = {0.0, 0.5, 1.0};
  auto zeros = poly_roots(cl.pN.univariate_coeffs_d());
  for (double sv : samples) {
    std::vector<Rational> rho(cl.param_count(), Rational(static_cast<int>(sv * 2), 2));
    Poly pd = cl.pD.at(rho);
    if (pd.is_zero()) continue;
    auto poles = poly_roots(pd.univariate_coeffs_d());
    for (const auto& zr : zeros) {
      bool unstable = cl.domain == Domain::CT ? zr.real() > 1e-7 : std::abs(zr) > 1.0 + 1e-7;
      if (!unstable) continue;
      for (const auto& pr : poles) {
        if (std::abs(zr - pr) < 1e-7 * (1.0 + std::abs(zr))) {
          throw Error(ErrorCode::Validation, "unstable pole-zero cancellation in the closed loop");
        }
      }
    }
  }
}

}  // namespace

ClosedLoop compose_closed_loop(const RationalTransfer& g0, const ControllerBasis& basis) {
  if (g0.domain != basis.domain) {
    throw Error(ErrorCode::DomainMismatch, "plant and controller basis domains differ");
  }
  validate_basis(basis);
  const std::size_t p = basis.entries.size();
  ClosedLoop cl;
  cl.domain = g0.domain;

  Poly prod_all = Poly::constant(1);
  for (const auto& e : basis.entries) prod_all = prod_all * e.den;
  cl.pN = g0.num * prod_all;
  cl.pD.base = g0.den * prod_all;
  for (std::size_t i = 0; i < p; ++i) {
    Poly prod_others = Poly::constant(1);
    for (std::size_t j = 0; j < p; ++j) {
      if (j != i) prod_others = prod_others * basis.entries[j].den;
    }
    cl.pD.coeffs.push_back(g0.num * basis.entries[i].num * prod_others);
  }
  normalize_primitive(cl.pN, cl.pD);
  cl.dN = cl.pN.degree();
  cl.dD = cl.pD.max_degree();
  check_no_unstable_cancellation(cl);
  return cl;
}

RationalTransfer closed_loop_at(const ClosedLoop& cl, const std::vector<Rational>& rho) {
  RationalTransfer g;
  g.domain = cl.domain;
  g.num = cl.pN;
  g.den = cl.pD.at(rho);
  if (g.den.is_zero()) throw Error(ErrorCode::Validation, "closed-loop denominator vanished");
  return g;
}

RationalTransfer closed_loop_at(const ClosedLoop& cl, const std::vector<double>& rho) {
  RationalTransfer g;
  g.domain = cl.domain;
  g.num = cl.pN;
  g.den = cl.pD.at(rho);
  if (g.den.is_zero()) throw Error(ErrorCode::Validation, "closed-loop denominator vanished");
  return g;
}

FreqDecomposition param_freq_decompose(const ClosedLoop& cl) {
  FreqDecomposition fd;
  fd.domain = cl.domain;
  fd.dN = cl.dN;
  fd.dD = cl.dD;
  if (cl.domain == Domain::CT) {
    auto n = even_odd_ct(cl.pN);
    fd.n_even = n.even;
    fd.n_odd = n.odd;
    auto b = even_odd_ct(cl.pD.base);
    fd.d_even.base = b.even;
    fd.d_odd.base = b.odd;
    for (const auto& c : cl.pD.coeffs) {
      auto e = even_odd_ct(c);
      fd.d_even.coeffs.push_back(e.even);
      fd.d_odd.coeffs.push_back(e.odd);
    }
  } else {
    auto n = moebius_lift(cl.pN, cl.dN);
    fd.n_even = n.even;
    fd.n_odd = n.odd;
    auto b = moebius_lift(cl.pD.base, cl.dD);
    fd.d_even.base = b.even;
    fd.d_odd.base = b.odd;
    for (const auto& c : cl.pD.coeffs) {
      auto e = moebius_lift(c, cl.dD);
      fd.d_even.coeffs.push_back(e.even);
      fd.d_odd.coeffs.push_back(e.odd);
    }
  }
  return fd;
}

}  // namespace fsp
