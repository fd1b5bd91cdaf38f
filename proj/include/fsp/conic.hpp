/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace fsp {

/// coef * scalar_var
struct LinTerm {
  int var = 0;
  double coef = 0;
};

/// coef * X_block[i][j] with i <= j; an off-diagonal entry is referenced
/// once (its symmetric mirror is implied).
struct BlockTerm {
  int block = 0;
  int i = 0;
  int j = 0;
  double coef = 0;
};

struct LinearEq {
  std::vector<LinTerm> scalars;
  std::vector<BlockTerm> entries;
  double rhs = 0;
};

/// Standard-form conic program:
///   maximize  c_u' u + sum_k <C_k, X_k>
///   s.t.      per-row affine equalities over (u, X),  X_k >= 0 (PSD),
/// with u free scalars. Interval bounds on scalars compile to 2x2 diagonal
/// PSD blocks.
class ConicProgram {
 public:
  int add_scalar(const std::string& name);
  int add_block(int dim, const std::string& name);
  void add_equality(LinearEq eq);
  void add_objective_scalar(int var, double coef);
  void add_objective_entry(int block, int i, int j, double coef);
  /// lo <= scalar <= hi via a diagonal 2x2 PSD block.
  void add_box_bound(int var, double lo, double hi);

  int scalar_count() const { return static_cast<int>(scalar_names_.size()); }
  int block_count() const { return static_cast<int>(block_dims_.size()); }
  int block_dim(int k) const { return block_dims_[static_cast<std::size_t>(k)]; }
  int equality_count() const { return static_cast<int>(equalities_.size()); }
  const std::vector<LinearEq>& equalities() const { return equalities_; }
  const std::vector<LinTerm>& objective_scalars() const { return objective_scalars_; }
  const std::vector<BlockTerm>& objective_entries() const { return objective_entries_; }
  const std::string& scalar_name(int v) const { return scalar_names_[static_cast<std::size_t>(v)]; }

  /// Plain-text dump (block sizes, objective, equality triplets) for diffing
  /// against external solvers.
  void dump(std::ostream& os, const std::string& name = "") const;

 private:
  std::vector<std::string> scalar_names_;
  std::vector<int> block_dims_;
  std::vector<std::string> block_names_;
  std::vector<LinearEq> equalities_;
  std::vector<LinTerm> objective_scalars_;
  std::vector<BlockTerm> objective_entries_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalLimit };

const char* status_name(SolveStatus s);

struct SolveOptions {
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  int max_iter = 200;
  bool verbose = false;
  std::string dump_dir;  // when nonempty, write the program there before solving
};

struct Solution {
  SolveStatus status = SolveStatus::NumericalLimit;
  std::vector<double> scalars;
  std::vector<Eigen::MatrixXd> blocks;
  std::vector<double> dual;  // equality multipliers
  double objective = 0;
  double dual_objective = 0;
  double duality_gap = 0;       // |dual - primal|, absolute
  double max_infeasibility = 0; // worst scaled equality residual
  int iterations = 0;
};

Solution solve(const ConicProgram& p, const SolveOptions& opts = {});

/// Margin feasibility: maximize t subject to the program's equalities with
/// X_k replaced by Y_k + t*I on the designated blocks (t capped at 1).
/// The designated constraints admit a common PSD solution iff margin >= 0.
/// Scalars of the original objective are ignored; all program scalars stay
/// free decision variables.
struct MarginResult {
  double margin = -1;
  Solution sol;
};

MarginResult solve_margin(const ConicProgram& p, const std::vector<int>& margin_blocks,
                          const SolveOptions& opts = {});

}  // namespace fsp
