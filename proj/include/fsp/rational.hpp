/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace fsp {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses a decimal string ("-2", "0.515", "3e-2", "1/4") into an exact
/// rational. Throws Error(Parse) on malformed input.
Rational parse_rational(const std::string& text);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact rational value of a finite double (dyadic).
Rational rational_of(double x);

std::string rational_str(const Rational& r);

}  // namespace fsp
