/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "fsp/rational.hpp"

#include "fsp/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace fsp {

namespace {

Rational parse_plain(const std::string& text) {
  // [sign] digits [. digits] [e[sign]digits]
  std::size_t pos = 0;
  bool neg = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    neg = text[pos] == '-';
    ++pos;
  }
  std::string int_part, frac_part;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    int_part.push_back(text[pos++]);
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      frac_part.push_back(text[pos++]);
    }
  }
  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool eneg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      eneg = text[pos] == '-';
      ++pos;
    }
    std::string digits;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits.push_back(text[pos++]);
    }
    if (digits.empty()) throw Error(ErrorCode::Parse, "malformed exponent in number '" + text + "'");
    exponent = std::strtol(digits.c_str(), nullptr, 10);
    if (eneg) exponent = -exponent;
  }
  if (pos != text.size() || (int_part.empty() && frac_part.empty())) {
    throw Error(ErrorCode::Parse, "malformed number '" + text + "'");
  }
  Integer num(int_part.empty() ? "0" : int_part);
  Integer den = 1;
  for (char c : frac_part) {
    num *= 10;
    num += c - '0';
    den *= 10;
  }
  long e = exponent;
  while (e > 0) {
    num *= 10;
    --e;
  }
  while (e < 0) {
    den *= 10;
    ++e;
  }
  if (neg) num = -num;
  return Rational(num, den);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_plain(text.substr(0, slash));
    Rational den = parse_plain(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + text + "'");
    return num / den;
  }
  return parse_plain(text);
}

Rational rational_of(double x) {
  if (x == 0.0) return 0;
  int e = 0;
  double m = std::frexp(x, &e);
  long long mant = static_cast<long long>(std::ldexp(m, 53));  // exact
  Rational r = mant;
  int shift = e - 53;
  Integer two = 1;
  two <<= (shift >= 0 ? shift : -shift);
  if (shift >= 0) {
    r *= Rational(two);
  } else {
    r /= Rational(two);
  }
  return r;
}

std::string rational_str(const Rational& r) {
  Integer num = boost::multiprecision::numerator(r);
  Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace fsp
