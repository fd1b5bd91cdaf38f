/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include "fsp/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace fsp {

/// Exponent multi-index; one slot per indeterminate of the owning polynomial.
using Monomial = std::vector<int>;

/// Canonical ordering of indeterminate names: frequency variables first,
/// then parameters in natural (digit-aware) order.
bool var_less(const std::string& a, const std::string& b);

/// Sparse multivariate polynomial with exact rational coefficients.
/// Immutable in spirit: all operations return new values. Zero coefficients
/// are never stored, so structural equality is semantic equality.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<std::string> vars);

  static Poly constant(const Rational& c);
  static Poly variable(const std::string& name);
  /// Univariate polynomial from ascending coefficients (index = power).
  static Poly from_coeffs(const std::string& var, const std::vector<Rational>& ascending);

  const std::vector<std::string>& vars() const { return vars_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;  // requires is_constant()

  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  int degree_in(const std::string& var) const;

  Rational coeff(const Monomial& m) const;
  void add_term(const Monomial& m, const Rational& c);

  /// Reinterpret over a superset of variables (by name).
  Poly aligned_to(const std::vector<std::string>& vars) const;

  /// Ascending coefficient list; requires at most one effective variable.
  std::vector<Rational> univariate_coeffs() const;
  std::vector<double> univariate_coeffs_d() const;

  Poly substitute(const std::string& var, const Rational& value) const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Rational& c, const Poly& p);
  friend bool operator==(const Poly& a, const Poly& b);

  template <typename T, typename MapT>
  T eval(const MapT& values) const {
    T acc{};
    for (const auto& [mono, coef] : terms_) {
      T term = static_cast<T>(to_double(coef));
      for (std::size_t v = 0; v < vars_.size(); ++v) {
        for (int e = 0; e < mono[v]; ++e) term *= values.at(vars_[v]);
      }
      acc += term;
    }
    return acc;
  }

  Rational eval_rational(const std::map<std::string, Rational>& values) const;

  std::string str() const;

 private:
  std::vector<std::string> vars_;
  std::map<Monomial, Rational> terms_;
};

inline bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

/// Real/imaginary split of p evaluated on the stability boundary.
/// CT: p(jw) = even(w) + j*odd(w). DT lift: see moebius_lift.
struct EvenOddPair {
  Poly even;
  Poly odd;
};

/// Even-odd decomposition of a real univariate polynomial in s.
/// For p = sum a_k s^k: even part sum_{k even} a_k(-1)^{k/2} w^k,
/// odd part sum_{k odd} a_k(-1)^{(k-1)/2} w^k. Output is in variable "w".
EvenOddPair even_odd_ct(const Poly& p);

/// Lift of a polynomial in z onto the unit circle via z = phi(y) =
/// (1-y^2+j2y)/(1+y^2): returns real (p_re, p_im) in "y" with
/// p(phi(y))*(1+y^2)^d = p_re(y) + j*p_im(y). Requires d >= deg(p).
EvenOddPair moebius_lift(const Poly& p, int d);

/// Two polynomials are projectively equal if a == lambda*b for one
/// positive rational lambda. Used wherever a common positive scaling
/// is immaterial.
bool projectively_equal(const Poly& a, const Poly& b);

}  // namespace fsp
