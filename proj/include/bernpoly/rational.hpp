#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace bernpoly {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/**
 * Parses "num/den", a plain integer, or a finite decimal such as "0.8" or
 * "-1.25e-3" into an exact rational.  Throws InvalidArgument on malformed
 * input or a zero denominator.
 */
Rational parse_rational(std::string_view text);

/** Always "num/den" (e.g. "0/1", "3/8"). */
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/**
 * Smallest-denominator rational within `tol` of `x` (Stern–Brocot walk).
 * Used to route floating-point input onto exact code paths: 0.8 -> 4/5.
 */
Rational rationalize(double x, double tol = 1e-12);

}   // namespace bernpoly
