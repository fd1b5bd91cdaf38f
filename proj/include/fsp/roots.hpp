/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <complex>
#include <vector>

namespace fsp {

enum class Domain { CT, DT };

/// Roots of a real polynomial given by ascending coefficients, via the
/// companion-matrix eigenvalues. Leading (near-)zero coefficients are
/// stripped. A constant polynomial has no roots.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& ascending);

/// Strict stability with margin: CT max Re < -margin, DT max |.| < 1 - margin.
bool roots_stable(const std::vector<std::complex<double>>& roots, Domain domain,
                  double margin = 1e-9);

/// Weak containment in the stability region (closed half-plane / closed disk),
/// used by the Assumption-1 zero checks.
bool roots_weakly_stable(const std::vector<std::complex<double>>& roots, Domain domain,
                         double tol = 1e-9);

}  // namespace fsp
