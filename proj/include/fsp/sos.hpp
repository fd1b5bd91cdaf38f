/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include "fsp/conic.hpp"
#include "fsp/poly.hpp"

#include <map>
#include <string>
#include <vector>

namespace fsp {

/// constant + sum coef * program_scalar
struct AffineExpr {
  double constant = 0;
  std::vector<LinTerm> terms;

  AffineExpr() = default;
  AffineExpr(double c) : constant(c) {}  // NOLINT: implicit by design
  static AffineExpr var(int id, double coef = 1.0);

  AffineExpr& operator+=(const AffineExpr& o);
  AffineExpr& operator-=(const AffineExpr& o);
  AffineExpr& operator*=(double s);
  friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
  friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
  friend AffineExpr operator*(double s, AffineExpr a) { return a *= s; }

  double eval(const std::vector<double>& scalars) const;
  /// Collapses duplicate variable references and drops negligible ones.
  AffineExpr simplified() const;
};

/// Polynomial in explicit indeterminates whose coefficients are affine
/// expressions in conic-program scalars.
struct AffinePoly {
  std::vector<std::string> vars;
  std::map<Monomial, AffineExpr> terms;

  explicit AffinePoly(std::vector<std::string> v = {}) : vars(std::move(v)) {}
  static AffinePoly from_poly(const Poly& p);

  int degree() const;
  void add_term(const Monomial& m, const AffineExpr& e);
  AffinePoly aligned_to(const std::vector<std::string>& universe) const;

  friend AffinePoly operator+(const AffinePoly& a, const AffinePoly& b);
  friend AffinePoly operator-(const AffinePoly& a, const AffinePoly& b);
  /// Product with a numeric polynomial (keeps coefficients affine).
  friend AffinePoly operator*(const Poly& p, const AffinePoly& a);
  friend AffinePoly operator*(double s, const AffinePoly& a);
};

/// Binds the named parameter variables of p to conic-program scalars,
/// leaving the remaining variables as indeterminates. p must be affine in
/// the bound variables.
AffinePoly bind_parameters(const Poly& p, const std::map<std::string, int>& scalar_ids);

/// Graded-lex monomial basis of total degree <= d in the given variables.
std::vector<Monomial> monomial_basis(std::size_t nvars, int d);

/// Gram compilation handle: PSD block index plus the data needed to
/// reconstruct and check the certificate.
struct SosHandle {
  int block = -1;
  int q = 1;
  std::vector<Monomial> basis;  // basis of row 0 (the full basis when q == 1)
  std::vector<std::vector<Monomial>> row_bases;
  std::vector<std::string> vars;
  // Equality rows added for this constraint (indices into the program).
  std::vector<int> equality_rows;
};

struct SosOptions {
  int max_basis = 64;  // cap on sigma(r, d)
  // Per-row basis degree for matrix SOS constraints. When empty every row
  // uses half the maximal entry degree; rows whose entries have lower degree
  // can be capped to keep the Gram block strictly feasible.
  std::vector<int> row_degrees;
};

/// Constrains a symmetric q x q matrix polynomial (entries affine in the
/// program scalars) to be SOS: adds one PSD Gram block of dimension
/// q * sigma(r, d) and one coefficient-matching equality per monomial and
/// matrix entry. F must hold the upper triangle (F[u][v] for u <= v).
SosHandle sos_constrain(ConicProgram& prog, const std::vector<std::vector<AffinePoly>>& F, int q,
                        const SosOptions& opts = {});

SosHandle sos_constrain(ConicProgram& prog, const AffinePoly& target, const SosOptions& opts = {});

/// Fresh polynomial in `vars` of total degree <= degree whose coefficients
/// are new program scalars, itself constrained SOS. Used for the box
/// multipliers of the stability certificates.
AffinePoly make_sos_multiplier(ConicProgram& prog, const std::vector<std::string>& vars, int degree,
                               const std::string& name_prefix, const SosOptions& opts = {});

struct Certificate {
  Eigen::MatrixXd gram;
  double residual = 0;     // max |coefficient-matching violation|
  double min_eigenvalue = 0;
};

Certificate recover_certificate(const ConicProgram& prog, const Solution& sol, const SosHandle& h);

}  // namespace fsp
