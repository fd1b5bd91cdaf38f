/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "fsp/poly.hpp"

#include "fsp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace fsp {

namespace {

int freq_var_rank(const std::string& v) {
  static const char* freq[] = {"s", "z", "w", "y", "omega"};
  for (int i = 0; i < 5; ++i) {
    if (v == freq[i]) return i;
  }
  return -1;
}

// Digit-aware comparison so that rho2 < rho10.
bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit(static_cast<unsigned char>(a[i])) &&
        std::isdigit(static_cast<unsigned char>(b[j]))) {
      std::size_t i0 = i, j0 = j;
      while (i < a.size() && std::isdigit(static_cast<unsigned char>(a[i]))) ++i;
      while (j < b.size() && std::isdigit(static_cast<unsigned char>(b[j]))) ++j;
      long long na = std::stoll(a.substr(i0, i - i0));
      long long nb = std::stoll(b.substr(j0, j - j0));
      if (na != nb) return na < nb;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

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

bool var_less(const std::string& a, const std::string& b) {
  int ra = freq_var_rank(a), rb = freq_var_rank(b);
  if (ra >= 0 && rb >= 0) return ra < rb;
  if (ra >= 0) return true;
  if (rb >= 0) return false;
  return natural_less(a, b);
}

Poly::Poly(std::vector<std::string> vars) : vars_(std::move(vars)) {
  std::sort(vars_.begin(), vars_.end(), var_less);
}

Poly Poly::constant(const Rational& c) {
  Poly p;
  if (c != 0) p.terms_[Monomial{}] = c;
  return p;
}

Poly Poly::variable(const std::string& name) {
  Poly p({name});
  p.terms_[Monomial{1}] = 1;
  return p;
}

Poly Poly::from_coeffs(const std::string& var, const std::vector<Rational>& ascending) {
  Poly p({var});
  for (std::size_t k = 0; k < ascending.size(); ++k) {
    if (ascending[k] != 0) p.terms_[Monomial{static_cast<int>(k)}] = ascending[k];
  }
  return p;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && degree() == 0;
}

Rational Poly::constant_value() const {
  if (terms_.empty()) return 0;
  auto it = terms_.find(Monomial(vars_.size(), 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    d = std::max(d, std::accumulate(m.begin(), m.end(), 0));
  }
  return d;
}

int Poly::degree_in(const std::string& var) const {
  auto it = std::find(vars_.begin(), vars_.end(), var);
  if (it == vars_.end()) return 0;
  std::size_t idx = static_cast<std::size_t>(it - vars_.begin());
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m[idx]);
  return d;
}

Rational Poly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
  if (m.size() != vars_.size()) throw Error(ErrorCode::Numerical, "monomial arity mismatch");
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    if (c != 0) terms_[m] = c;
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::aligned_to(const std::vector<std::string>& vars) const {
  // Positions of our variables inside the target universe.
  std::vector<std::size_t> where(vars_.size());
  for (std::size_t v = 0; v < vars_.size(); ++v) {
    auto it = std::find(vars.begin(), vars.end(), vars_[v]);
    if (it == vars.end()) throw Error(ErrorCode::Numerical, "alignment drops variable " + vars_[v]);
    where[v] = static_cast<std::size_t>(it - vars.begin());
  }
  Poly out(vars);
  for (const auto& [m, c] : terms_) {
    Monomial mm(vars.size(), 0);
    for (std::size_t v = 0; v < vars_.size(); ++v) mm[where[v]] = m[v];
    out.terms_[mm] = c;
  }
  return out;
}

std::vector<Rational> Poly::univariate_coeffs() const {
  // Effective variable: the one with nonzero exponent somewhere.
  int active = -1;
  for (const auto& [m, c] : terms_) {
    for (std::size_t v = 0; v < m.size(); ++v) {
      if (m[v] > 0) {
        if (active >= 0 && active != static_cast<int>(v)) {
          throw Error(ErrorCode::Validation, "polynomial is not univariate");
        }
        active = static_cast<int>(v);
      }
    }
  }
  int deg = active < 0 ? 0 : degree_in(vars_[active]);
  std::vector<Rational> out(static_cast<std::size_t>(deg) + 1, Rational(0));
  for (const auto& [m, c] : terms_) {
    int e = active < 0 ? 0 : m[active];
    out[static_cast<std::size_t>(e)] = c;
  }
  return out;
}

std::vector<double> Poly::univariate_coeffs_d() const {
  auto r = univariate_coeffs();
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = to_double(r[i]);
  return out;
}

Poly Poly::substitute(const std::string& var, const Rational& value) const {
  auto it = std::find(vars_.begin(), vars_.end(), var);
  if (it == vars_.end()) return *this;
  std::size_t idx = static_cast<std::size_t>(it - vars_.begin());
  std::vector<std::string> rest;
  for (std::size_t v = 0; v < vars_.size(); ++v) {
    if (v != idx) rest.push_back(vars_[v]);
  }
  Poly out(rest);
  for (const auto& [m, c] : terms_) {
    Rational scale = c;
    for (int e = 0; e < m[idx]; ++e) scale *= value;
    Monomial mm;
    for (std::size_t v = 0; v < m.size(); ++v) {
      if (v != idx) mm.push_back(m[v]);
    }
    out.add_term(mm, scale);
  }
  return out;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Poly operator+(const Poly& a, const Poly& b) {
  auto vars = merge_vars(a.vars_, b.vars_);
  Poly out = a.aligned_to(vars);
  Poly bb = b.aligned_to(vars);
  for (const auto& [m, c] : bb.terms_) out.add_term(m, c);
  return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  auto vars = merge_vars(a.vars_, b.vars_);
  Poly aa = a.aligned_to(vars);
  Poly bb = b.aligned_to(vars);
  Poly out(vars);
  for (const auto& [ma, ca] : aa.terms_) {
    for (const auto& [mb, cb] : bb.terms_) {
      Monomial m(vars.size());
      for (std::size_t v = 0; v < vars.size(); ++v) m[v] = ma[v] + mb[v];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Poly operator*(const Rational& c, const Poly& p) {
  Poly out(p.vars_);
  if (c == 0) return out;
  for (const auto& [m, pc] : p.terms_) out.terms_[m] = c * pc;
  return out;
}

bool operator==(const Poly& a, const Poly& b) {
  auto vars = merge_vars(a.vars_, b.vars_);
  return a.aligned_to(vars).terms_ == b.aligned_to(vars).terms_;
}

Rational Poly::eval_rational(const std::map<std::string, Rational>& values) const {
  Rational acc = 0;
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      const Rational& x = values.at(vars_[v]);
      for (int e = 0; e < m[v]; ++e) term *= x;
    }
    acc += term;
  }
  return acc;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest total degree first for readability.
  std::vector<std::pair<Monomial, Rational>> ts(terms_.begin(), terms_.end());
  std::stable_sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
    return std::accumulate(a.first.begin(), a.first.end(), 0) >
           std::accumulate(b.first.begin(), b.first.end(), 0);
  });
  for (const auto& [m, c] : ts) {
    if (!first) os << (c > 0 ? " + " : " - ");
    if (first && c < 0) os << "-";
    first = false;
    Rational ac = abs(c);
    bool has_var = std::accumulate(m.begin(), m.end(), 0) > 0;
    if (ac != 1 || !has_var) os << rational_str(ac);
    bool star = ac != 1 || !has_var;
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      if (m[v] == 0) continue;
      if (star) os << "*";
      os << vars_[v];
      if (m[v] > 1) os << "^" << m[v];
      star = true;
    }
  }
  return os.str();
}

EvenOddPair even_odd_ct(const Poly& p) {
  auto coeffs = p.univariate_coeffs();  // throws if multivariate
  Poly even({"w"}), odd({"w"});
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0) continue;
    int kk = static_cast<int>(k);
    if (kk % 2 == 0) {
      Rational sign = (kk / 2) % 2 == 0 ? 1 : -1;
      even.add_term(Monomial{kk}, sign * coeffs[k]);
    } else {
      Rational sign = ((kk - 1) / 2) % 2 == 0 ? 1 : -1;
      odd.add_term(Monomial{kk}, sign * coeffs[k]);
    }
  }
  return {even, odd};
}

EvenOddPair moebius_lift(const Poly& p, int d) {
  auto coeffs = p.univariate_coeffs();
  if (static_cast<int>(coeffs.size()) - 1 > d) {
    throw Error(ErrorCode::Validation, "moebius_lift: clearing degree below deg(p)");
  }
  Poly y = Poly::variable("y");
  Poly u = Poly::constant(1) - y * y;  // Re numerator of phi
  Poly v = Rational(2) * y;            // Im numerator of phi
  Poly w = Poly::constant(1) + y * y;  // |1 + y^2|
  // (u + jv)^k accumulated incrementally; multiply by w^(d-k).
  Poly pow_re = Poly::constant(1), pow_im = Poly::constant(0);
  std::vector<Poly> wpow(static_cast<std::size_t>(d) + 1);
  wpow[0] = Poly::constant(1);
  for (int k = 1; k <= d; ++k) wpow[static_cast<std::size_t>(k)] = wpow[static_cast<std::size_t>(k - 1)] * w;
  Poly out_re = Poly::constant(0), out_im = Poly::constant(0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (k > 0) {
      Poly nre = pow_re * u - pow_im * v;
      Poly nim = pow_re * v + pow_im * u;
      pow_re = nre;
      pow_im = nim;
    }
    if (coeffs[k] == 0) continue;
    const Poly& scale = wpow[static_cast<std::size_t>(d) - k];
    out_re = out_re + coeffs[k] * (pow_re * scale);
    out_im = out_im + coeffs[k] * (pow_im * scale);
  }
  return {out_re.aligned_to({"y"}), out_im.aligned_to({"y"})};
}

bool projectively_equal(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  // lambda from the leading terms, then exact comparison.
  const auto& ta = a.terms().begin()->second;
  // Align monomial keys first.
  std::vector<std::string> vars = a.vars();
  for (const auto& v : b.vars()) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  }
  std::sort(vars.begin(), vars.end(), var_less);
  Poly aa = a.aligned_to(vars), bb = b.aligned_to(vars);
  auto itb = bb.terms().find(aa.terms().begin()->first);
  if (itb == bb.terms().end()) return false;
  Rational lambda = itb->second / ta;
  if (lambda <= 0) return false;
  return lambda * aa == bb;
}

}  // namespace fsp
