/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fsp/conic.hpp"

#include <cmath>

using namespace fsp;

TEST_CASE("interval feasibility through box blocks") {
  ConicProgram p;
  int x = p.add_scalar("x");
  p.add_box_bound(x, 0.0, 1.0);
  Solution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.scalars[0] >= -1e-7);
  CHECK(sol.scalars[0] <= 1.0 + 1e-7);
}

TEST_CASE("linear objective over an interval") {
  ConicProgram p;
  int x = p.add_scalar("x");
  p.add_box_bound(x, -1.0, 3.0);
  p.add_objective_scalar(x, 1.0);
  Solution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.scalars[0] == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(sol.objective <= sol.dual_objective + 1e-6);  // weak duality
}

TEST_CASE("largest off-diagonal entry of a correlation matrix") {
  // max X01 s.t. X00 = X11 = 1, X >= 0  ->  X01 = 1
  ConicProgram p;
  int b = p.add_block(2, "X");
  p.add_equality({{}, {{b, 0, 0, 1.0}}, 1.0});
  p.add_equality({{}, {{b, 1, 1, 1.0}}, 1.0});
  p.add_objective_entry(b, 0, 1, 1.0);
  Solution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(sol.blocks[0](0, 1) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("smallest eigenvalue via identity trace") {
  // min X00+X11 s.t. X01 = 1, X >= 0  ->  X = [[1,1],[1,1]], value 2
  ConicProgram p;
  int b = p.add_block(2, "X");
  p.add_equality({{}, {{b, 0, 1, 1.0}}, 1.0});
  p.add_objective_entry(b, 0, 0, -1.0);
  p.add_objective_entry(b, 1, 1, -1.0);
  Solution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-2.0).epsilon(1e-5));
}

TEST_CASE("mixed scalar and block variables") {
  // max t s.t. [[1, t],[t, 2]] >= 0  ->  t = sqrt(2)
  ConicProgram p;
  int t = p.add_scalar("t");
  int b = p.add_block(2, "M");
  p.add_equality({{}, {{b, 0, 0, 1.0}}, 1.0});
  p.add_equality({{}, {{b, 1, 1, 1.0}}, 2.0});
  p.add_equality({{{t, 1.0}}, {{b, 0, 1, -1.0}}, 0.0});
  p.add_objective_scalar(t, 1.0);
  Solution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.scalars[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-5));
}

TEST_CASE("margin sign reflects feasibility") {
  // X pinned to diag(1, -1/2): largest t with X - tI >= 0 is -1/2.
  ConicProgram p;
  int b = p.add_block(2, "X");
  p.add_equality({{}, {{b, 0, 0, 1.0}}, 1.0});
  p.add_equality({{}, {{b, 1, 1, 1.0}}, -0.5});
  p.add_equality({{}, {{b, 0, 1, 1.0}}, 0.0});
  MarginResult mr = solve_margin(p, {0});
  REQUIRE(mr.sol.status == SolveStatus::Optimal);
  CHECK(mr.margin == doctest::Approx(-0.5).epsilon(1e-5));

  ConicProgram q;
  int c = q.add_block(2, "X");
  q.add_equality({{}, {{c, 0, 0, 1.0}}, 1.0});
  q.add_equality({{}, {{c, 1, 1, 1.0}}, 1.0});
  q.add_equality({{}, {{c, 0, 1, 1.0}}, 0.0});
  MarginResult mr2 = solve_margin(q, {0});
  REQUIRE(mr2.sol.status == SolveStatus::Optimal);
  CHECK(mr2.margin == doctest::Approx(1.0).epsilon(1e-5));  // capped at 1
  // Mapped-back block satisfies the pinned equalities.
  CHECK(mr2.sol.blocks[0](0, 0) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("status invariants on every solve") {
  ConicProgram p;
  int x = p.add_scalar("x");
  int b = p.add_block(2, "B");
  p.add_box_bound(x, 0.0, 2.0);
  p.add_equality({{{x, 1.0}}, {{b, 0, 0, 1.0}}, 2.0});
  p.add_equality({{}, {{b, 1, 1, 1.0}}, 1.0});
  p.add_equality({{}, {{b, 0, 1, 1.0}}, 0.25});
  p.add_objective_scalar(x, 1.0);
  Solution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.max_infeasibility <= 1e-7);
  CHECK(sol.duality_gap <= 1e-5 * (1.0 + std::abs(sol.objective)));
  for (const auto& blk : sol.blocks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blk);
    CHECK(es.eigenvalues().minCoeff() >= -1e-7);
  }
}
