/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "fsp/roots.hpp"

#include "fsp/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace fsp {

std::vector<std::complex<double>> poly_roots(const std::vector<double>& ascending) {
  std::vector<double> c = ascending;
  double scale = 0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0) throw Error(ErrorCode::Numerical, "poly_roots: zero polynomial");
  while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) companion(0, i) = -c[static_cast<std::size_t>(n - 1 - i)] / c.back();
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return roots;
}

bool roots_stable(const std::vector<std::complex<double>>& roots, Domain domain, double margin) {
  for (const auto& r : roots) {
    if (domain == Domain::CT) {
      if (r.real() >= -margin) return false;
    } else {
      if (std::abs(r) >= 1.0 - margin) return false;
    }
  }
  return true;
}

bool roots_weakly_stable(const std::vector<std::complex<double>>& roots, Domain domain, double tol) {
  for (const auto& r : roots) {
    if (domain == Domain::CT) {
      if (r.real() > tol) return false;
    } else {
      if (std::abs(r) > 1.0 + tol) return false;
    }
  }
  return true;
}

}  // namespace fsp
