#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace qrlab {

// Arbitrary-precision integers and exact rationals. Every probability or
// moment that has a closed form is carried as a Rational end to end; floating
// point only enters for explicitly asymptotic quantities.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt binomial(std::uint64_t n, std::uint64_t m);
BigInt factorial(unsigned n);
BigInt ipow(const BigInt& base, unsigned exp);
Rational rational_pow(const Rational& base, unsigned exp);

// Canonical "num/den" form with den >= 1, always including the denominator
// ("2/3", "-1/2", "5/1"). This is the wire format used in JSON output.
std::string rational_str(const Rational& r);

// Parses "a/b", plain integers, and decimal literals with optional exponent
// ("0.25", "-3", "1e-3", "2.5e2") into an exact rational. Decimal inputs are
// converted exactly (no binary rounding), so a CLI threshold of 0.1 really is
// 1/10. Throws ValidationError on malformed input or zero denominator.
Rational parse_rational(const std::string& text);

// Exact dyadic rational equal to the given long double. Used where a float
// parameter feeds an exact comparison.
Rational rational_from_float(long double x);

long double to_float(const Rational& r);
long double to_float(const BigInt& n);

} // namespace qrlab
