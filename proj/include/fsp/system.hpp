/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include "fsp/poly.hpp"
#include "fsp/roots.hpp"

#include <complex>
#include <string>
#include <vector>

namespace fsp {

/// Proper rational transfer function in s (CT) or z (DT).
struct RationalTransfer {
  Poly num;
  Poly den;
  Domain domain = Domain::CT;

  const char* var() const { return domain == Domain::CT ? "s" : "z"; }
  std::complex<double> eval(std::complex<double> x) const;
  int relative_degree() const;
};

RationalTransfer make_transfer(Domain domain, const std::vector<Rational>& num_asc,
                               const std::vector<Rational>& den_asc);

/// The fixed controller structure C(., rho) = rho' * entries.
struct ControllerBasis {
  std::vector<RationalTransfer> entries;
  Domain domain = Domain::CT;
};

struct ParamBox {
  std::vector<Rational> lower;
  std::vector<Rational> upper;

  std::size_t dim() const { return lower.size(); }
  bool collapsed(std::size_t i) const { return lower[i] == upper[i]; }
  bool contains(const std::vector<double>& rho, double tol) const;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::vector<std::complex<double>> offending_zeros;
};

/// Checks properness (relative degree 0 or 1) and weak (strict=false) or
/// strict (strict=true) minimum phase of the plant.
ValidationReport validate_plant(const RationalTransfer& g, bool strict);

/// Checks that every basis entry is proper with strictly stable poles.
void validate_basis(const ControllerBasis& basis);

/// Polynomial affine in the controller parameters:
/// p(., rho) = base + sum_i rho_i * coeffs[i]. The base/coeff polynomials
/// involve the frequency variable only.
struct ParamPoly {
  Poly base;
  std::vector<Poly> coeffs;

  Poly at(const std::vector<Rational>& rho) const;
  Poly at(const std::vector<double>& rho) const;
  int max_degree() const;
  /// Descending list of the s^k / z^k coefficients as polynomials in
  /// rho1..rhop (input to the stability tables).
  std::vector<Poly> coefficient_polys_desc(const std::string& freq_var) const;
};

/// Closed loop G0/(1 + G0 * rho'Cbar) in numerator/denominator form with the
/// rho-dependence of the denominator kept affine. Jointly scaled to primitive
/// integer coefficients (one positive scalar on pN and pD together).
struct ClosedLoop {
  Poly pN;
  ParamPoly pD;
  Domain domain = Domain::CT;
  int dN = 0;
  int dD = 0;

  std::size_t param_count() const { return pD.coeffs.size(); }
  std::complex<double> eval(std::complex<double> x, const std::vector<double>& rho) const;
};

ClosedLoop compose_closed_loop(const RationalTransfer& g0, const ControllerBasis& basis);

/// Transfer function of the closed loop at a fixed parameter value.
RationalTransfer closed_loop_at(const ClosedLoop& cl, const std::vector<Rational>& rho);
RationalTransfer closed_loop_at(const ClosedLoop& cl, const std::vector<double>& rho);

/// Boundary decomposition of the closed loop.
/// CT: n_* in "w" with pN(jw) = n_even + j*n_odd, d_* likewise per component.
/// DT: Moebius lift in "y"; n_* carries (p1, p2) with clearing degree dN and
/// d_* carries (p3, p4) with clearing degree dD.
struct FreqDecomposition {
  Poly n_even;
  Poly n_odd;
  ParamPoly d_even;
  ParamPoly d_odd;
  Domain domain = Domain::CT;
  int dN = 0;
  int dD = 0;

  const char* var() const { return domain == Domain::CT ? "w" : "y"; }
};

FreqDecomposition param_freq_decompose(const ClosedLoop& cl);

}  // namespace fsp
