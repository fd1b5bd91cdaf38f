/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fsp/errors.hpp"
#include "fsp/verify.hpp"

#include <complex>
#include <random>

using namespace fsp;

namespace {

RationalTransfer tf(Domain d, std::vector<Rational> num, std::vector<Rational> den) {
  return make_transfer(d, num, den);
}

/// Random stable (and minimum-phase) pole-zero transfer function.
RationalTransfer random_stable(std::mt19937& rng, Domain d) {
  std::uniform_real_distribution<double> u(0.1, 2.0);
  if (d == Domain::CT) {
    double z = u(rng), p1 = u(rng), p2 = u(rng);
    // (s+z)/((s+p1)(s+p2))? relative degree 1 keeps IFP finite; use
    // (s+z)(s+p1') form degree (1,2) -> rel degree 1.
    Poly s = Poly::variable("s");
    Poly num = s + Poly::constant(rational_of(z));
    Poly den = (s + Poly::constant(rational_of(p1))) * (s + Poly::constant(rational_of(p2)));
    RationalTransfer g;
    g.domain = d;
    g.num = num;
    g.den = den;
    return g;
  }
  std::uniform_real_distribution<double> r(-0.8, 0.8);
  double z = r(rng), p1 = r(rng), p2 = r(rng);
  Poly zz = Poly::variable("z");
  RationalTransfer g;
  g.domain = d;
  g.num = zz * (zz + Poly::constant(rational_of(z)));
  g.den = (zz + Poly::constant(rational_of(p1))) * (zz + Poly::constant(rational_of(p2)));
  return g;
}

}  // namespace

TEST_CASE("sweep index on closed-form systems") {
  // (s+2)/(s+1): Re G = (2+w^2)/(1+w^2) -> min 1 at infinity
  auto g = tf(Domain::CT, {Rational(2), Rational(1)}, {Rational(1), Rational(1)});
  CHECK(freq_index(g, IndexMode::IFP) == doctest::Approx(1.0).epsilon(1e-6));
  // Re G^{-1} = (2+w^2)/(4+w^2) -> min 1/2 at 0
  CHECK(freq_index(g, IndexMode::OFP) == doctest::Approx(0.5).epsilon(1e-6));
  // static gain 2
  auto c = tf(Domain::CT, {Rational(2)}, {Rational(1)});
  CHECK(freq_index(c, IndexMode::OFP) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(freq_index(c, IndexMode::IFP) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("sweep rejects unstable or non-minimum-phase inputs") {
  auto bad = tf(Domain::CT, {Rational(1)}, {Rational(-1), Rational(1)});
  CHECK_THROWS_AS(freq_index(bad, IndexMode::IFP), Error);
  auto nmp = tf(Domain::CT, {Rational(-1), Rational(1)}, {Rational(1), Rational(1)});
  CHECK_THROWS_AS(freq_index(nmp, IndexMode::OFP), Error);
  CHECK_NOTHROW(freq_index(nmp, IndexMode::IFP));
}

TEST_CASE("controllable canonical realization") {
  // 1/(s+1)
  auto g = tf(Domain::CT, {Rational(1)}, {Rational(1), Rational(1)});
  StateSpace ss = tf_to_ss(g);
  REQUIRE(ss.order() == 1);
  CHECK(ss.A(0, 0) == doctest::Approx(-1.0));
  CHECK(ss.B(0) == doctest::Approx(1.0));
  CHECK(ss.C(0) == doctest::Approx(1.0));
  CHECK(ss.D == doctest::Approx(0.0));
  // static passthrough
  auto one = tf(Domain::CT, {Rational(1)}, {Rational(1)});
  CHECK(tf_to_ss(one).D == doctest::Approx(1.0));
  // improper rejected
  auto imp = tf(Domain::CT, {Rational(0), Rational(0), Rational(1)}, {Rational(1), Rational(1)});
  CHECK_THROWS_AS(tf_to_ss(imp), Error);
}

TEST_CASE("realization round trip") {
  std::mt19937 rng(17);
  for (int k = 0; k < 10; ++k) {
    for (Domain d : {Domain::CT, Domain::DT}) {
      RationalTransfer g = random_stable(rng, d);
      StateSpace ss = tf_to_ss(g);
      RationalTransfer back = ss_to_tf(ss);
      // compare at complex sample points (16 per spec invariant)
      std::uniform_real_distribution<double> u(-2.0, 2.0);
      for (int i = 0; i < 16; ++i) {
        std::complex<double> x(u(rng), u(rng));
        std::complex<double> a = g.eval(x);
        std::complex<double> b = back.eval(x);
        std::complex<double> c = ss.eval(x);
        CHECK(std::abs(a - b) <= 1e-8 * (1.0 + std::abs(a)));
        CHECK(std::abs(a - c) <= 1e-8 * (1.0 + std::abs(a)));
      }
      // coefficient-wise agreement after monic normalization
      auto da = g.den.univariate_coeffs_d();
      auto db = back.den.univariate_coeffs_d();
      REQUIRE(da.size() == db.size());
      for (std::size_t i = 0; i < da.size(); ++i) {
        CHECK(da[i] / da.back() == doctest::Approx(db[i] / db.back()).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("dissipativity LMI agrees with the sweep") {
  std::mt19937 rng(23);
  for (int k = 0; k < 10; ++k) {
    for (Domain d : {Domain::CT, Domain::DT}) {
      RationalTransfer g = random_stable(rng, d);
      double sweep = freq_index(g, IndexMode::IFP);
      double kyp = kyp_index(tf_to_ss(g), IndexMode::IFP);
      CHECK(kyp == doctest::Approx(sweep).epsilon(1e-3));
    }
  }
}

TEST_CASE("static KYP special cases") {
  StateSpace ss;
  ss.A.resize(0, 0);
  ss.B.resize(0);
  ss.C.resize(0);
  ss.D = 1.0;
  CHECK(kyp_index(ss, IndexMode::IFP) == doctest::Approx(1.0));
  ss.D = 2.0;
  CHECK(kyp_index(ss, IndexMode::OFP) == doctest::Approx(0.5));
}

TEST_CASE("grid oracle basics") {
  auto g0 = tf(Domain::CT, {Rational(2), Rational(1)}, {Rational(1), Rational(1)});
  ControllerBasis basis;
  basis.domain = Domain::CT;
  basis.entries.push_back(tf(Domain::CT, {Rational(1)}, {Rational(1)}));
  ParamBox pt;
  pt.lower = {Rational(0)};
  pt.upper = {Rational(0)};
  auto res = grid_oracle(g0, basis, pt, IndexMode::IFP, 2);
  CHECK(res.index_hat == doctest::Approx(1.0).epsilon(1e-6));
  REQUIRE(res.rho_hat.size() == 1);
  CHECK(res.rho_hat[0] == doctest::Approx(0.0));

  // unstable everywhere: 1/(s-1) with zero controller
  auto bad = tf(Domain::CT, {Rational(1)}, {Rational(-1), Rational(1)});
  ParamBox z;
  z.lower = {Rational(0)};
  z.upper = {Rational(0)};
  CHECK_THROWS_AS(grid_oracle(bad, basis, z, IndexMode::IFP, 2), Error);
}

TEST_CASE("positive-real checks") {
  auto lag = tf(Domain::CT, {Rational(1)}, {Rational(1), Rational(1)});
  CHECK(positive_real_check(lag).positive_real);
  auto flipped = tf(Domain::CT, {Rational(-1), Rational(1)}, {Rational(1), Rational(1)});
  CHECK(!positive_real_check(flipped).positive_real);
  auto integrator = tf(Domain::CT, {Rational(1)}, {Rational(0), Rational(1)});
  CHECK(positive_real_check(integrator).positive_real);
  auto double_int = tf(Domain::CT, {Rational(1)}, {Rational(0), Rational(0), Rational(1)});
  CHECK(!positive_real_check(double_int).positive_real);
}
