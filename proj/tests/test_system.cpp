/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fsp/errors.hpp"
#include "fsp/system.hpp"

#include <complex>

using namespace fsp;

namespace {

RationalTransfer tf(Domain d, std::vector<Rational> num, std::vector<Rational> den) {
  return make_transfer(d, num, den);
}

// z/(z-2) with basis {1, 1/(z-0.5)} over [0.1,1]x[1,2]
ClosedLoop loop_dt() {
  RationalTransfer g0 = tf(Domain::DT, {Rational(0), Rational(1)}, {Rational(-2), Rational(1)});
  ControllerBasis basis;
  basis.domain = Domain::DT;
  basis.entries.push_back(tf(Domain::DT, {Rational(1)}, {Rational(1)}));
  basis.entries.push_back(tf(Domain::DT, {Rational(1)}, {Rational(-1, 2), Rational(1)}));
  return compose_closed_loop(g0, basis);
}

// (s+2)(s+3)/((s-1)(s-2)) with PI basis {1, 1/(s+1)}
ClosedLoop loop_ct() {
  RationalTransfer g0 = tf(Domain::CT, {Rational(6), Rational(5), Rational(1)},
                           {Rational(2), Rational(-3), Rational(1)});
  ControllerBasis basis;
  basis.domain = Domain::CT;
  basis.entries.push_back(tf(Domain::CT, {Rational(1)}, {Rational(1)}));
  basis.entries.push_back(tf(Domain::CT, {Rational(1)}, {Rational(1), Rational(1)}));
  return compose_closed_loop(g0, basis);
}

Poly uni(const char* var, std::vector<Rational> asc) { return Poly::from_coeffs(var, asc); }

}  // namespace

TEST_CASE("plant validation") {
  // relative degree 2 violates the weak assumption
  auto g = tf(Domain::CT, {Rational(1)}, {Rational(1), Rational(2), Rational(1)});
  CHECK(!validate_plant(g, false).ok);
  // weakly minimum phase passes non-strict, fails strict
  auto h = tf(Domain::CT, {Rational(0), Rational(1)}, {Rational(1), Rational(1)});
  CHECK(validate_plant(h, false).ok);
  CHECK(!validate_plant(h, true).ok);
  // non-minimum phase fails both
  auto k = tf(Domain::CT, {Rational(-1), Rational(1)}, {Rational(1), Rational(1)});
  CHECK(!validate_plant(k, false).ok);
  CHECK(!validate_plant(k, true).ok);
}

TEST_CASE("basis validation rejects unstable or improper entries") {
  ControllerBasis basis;
  basis.domain = Domain::CT;
  basis.entries.push_back(tf(Domain::CT, {Rational(1)}, {Rational(-1), Rational(1)}));  // 1/(s-1)
  CHECK_THROWS_AS(validate_basis(basis), Error);
  basis.entries.clear();
  basis.entries.push_back(tf(Domain::CT, {Rational(0), Rational(1)}, {Rational(1)}));  // s
  CHECK_THROWS_AS(validate_basis(basis), Error);
}

TEST_CASE("closed-loop composition, discrete example") {
  ClosedLoop cl = loop_dt();
  CHECK(cl.domain == Domain::DT);
  CHECK(cl.dN == 2);
  CHECK(cl.dD == 2);
  REQUIRE(cl.param_count() == 2);
  // joint primitive scaling reproduces integer coefficients with factor 2
  CHECK(cl.pN == uni("z", {Rational(0), Rational(-1), Rational(2)}));
  CHECK(cl.pD.base == uni("z", {Rational(2), Rational(-5), Rational(2)}));
  CHECK(cl.pD.coeffs[0] == uni("z", {Rational(0), Rational(-1), Rational(2)}));
  CHECK(cl.pD.coeffs[1] == uni("z", {Rational(0), Rational(2)}));
}

TEST_CASE("closed-loop composition, continuous example") {
  ClosedLoop cl = loop_ct();
  CHECK(cl.dN == 3);
  CHECK(cl.dD == 3);
  CHECK(cl.pN == uni("s", {Rational(6), Rational(11), Rational(6), Rational(1)}));
  CHECK(cl.pD.base == uni("s", {Rational(2), Rational(-1), Rational(-2), Rational(1)}));
  CHECK(cl.pD.coeffs[0] == uni("s", {Rational(6), Rational(11), Rational(6), Rational(1)}));
  CHECK(cl.pD.coeffs[1] == uni("s", {Rational(6), Rational(5), Rational(1)}));
}

TEST_CASE("denominator coefficients as polynomials in the parameters") {
  ClosedLoop cl = loop_dt();
  auto desc = cl.pD.coefficient_polys_desc("z");
  REQUIRE(desc.size() == 3);
  Poly r1 = Poly::variable("rho1");
  Poly r2 = Poly::variable("rho2");
  CHECK(desc[0] == Rational(2) * r1 + Poly::constant(2));
  CHECK(desc[1] == Rational(-1) * r1 + Rational(2) * r2 + Poly::constant(-5));
  CHECK(desc[2] == Poly::constant(2));
}

TEST_CASE("transfer at a parameter point evaluates consistently") {
  ClosedLoop cl = loop_dt();
  std::vector<double> rho{0.1, 1.5};
  RationalTransfer g = closed_loop_at(cl, rho);
  std::complex<double> z(0.3, 0.4);
  std::complex<double> via_struct = cl.eval(z, rho);
  std::complex<double> via_tf = g.eval(z);
  CHECK(std::abs(via_struct - via_tf) < 1e-12);
}

TEST_CASE("frequency decomposition matches the displayed continuous forms") {
  ClosedLoop cl = loop_ct();
  FreqDecomposition fd = param_freq_decompose(cl);
  CHECK(fd.n_even == uni("w", {Rational(6), Rational(0), Rational(-6)}));
  CHECK(fd.n_odd == uni("w", {Rational(0), Rational(11), Rational(0), Rational(-1)}));
  CHECK(fd.d_even.base == uni("w", {Rational(2), Rational(0), Rational(2)}));
  CHECK(fd.d_even.coeffs[0] == uni("w", {Rational(6), Rational(0), Rational(-6)}));
  CHECK(fd.d_even.coeffs[1] == uni("w", {Rational(6), Rational(0), Rational(-1)}));
  CHECK(fd.d_odd.base == uni("w", {Rational(0), Rational(-1), Rational(0), Rational(-1)}));
  CHECK(fd.d_odd.coeffs[0] == uni("w", {Rational(0), Rational(11), Rational(0), Rational(-1)}));
  CHECK(fd.d_odd.coeffs[1] == uni("w", {Rational(0), Rational(5)}));
}

TEST_CASE("frequency decomposition matches the displayed discrete lifts") {
  ClosedLoop cl = loop_dt();
  FreqDecomposition fd = param_freq_decompose(cl);
  CHECK(fd.n_even == uni("y", {Rational(1), Rational(0), Rational(-12), Rational(0), Rational(3)}));
  CHECK(fd.n_odd == uni("y", {Rational(0), Rational(6), Rational(0), Rational(-10)}));
  CHECK(fd.d_even.base ==
        uni("y", {Rational(-1), Rational(0), Rational(-8), Rational(0), Rational(9)}));
  CHECK(fd.d_odd.base == uni("y", {Rational(0), Rational(-2), Rational(0), Rational(-18)}));
  CHECK(fd.d_even.coeffs[0] ==
        uni("y", {Rational(1), Rational(0), Rational(-12), Rational(0), Rational(3)}));
  CHECK(fd.d_odd.coeffs[0] == uni("y", {Rational(0), Rational(6), Rational(0), Rational(-10)}));
  CHECK(fd.d_even.coeffs[1] == uni("y", {Rational(2), Rational(0), Rational(0), Rational(0), Rational(-2)}));
  CHECK(fd.d_odd.coeffs[1] == uni("y", {Rational(0), Rational(4), Rational(0), Rational(4)}));
}

TEST_CASE("domain mismatch is rejected") {
  RationalTransfer g0 = tf(Domain::CT, {Rational(1)}, {Rational(1), Rational(1)});
  ControllerBasis basis;
  basis.domain = Domain::DT;
  basis.entries.push_back(tf(Domain::DT, {Rational(1)}, {Rational(1)}));
  CHECK_THROWS_AS(compose_closed_loop(g0, basis), Error);
}

TEST_CASE("box membership") {
  ParamBox box;
  box.lower = {Rational(0), Rational(1)};
  box.upper = {Rational(1), Rational(2)};
  CHECK(box.contains({0.5, 1.5}, 1e-9));
  CHECK(!box.contains({1.5, 1.5}, 1e-9));
  CHECK(!box.collapsed(0));
  ParamBox pt;
  pt.lower = {Rational(1)};
  pt.upper = {Rational(1)};
  CHECK(pt.collapsed(0));
}
