#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace supnorm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "7", "-3/20", "0.25".
Rational parse_rational(std::string_view text);

// "p/q" in lowest terms, or "p" when q == 1.
std::string to_string(const Rational& r);
std::string to_string(const BigInt& z);

long double to_long_double(const Rational& r);

inline Rational make_rational(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

BigInt floor_div(const BigInt& a, const BigInt& b);
BigInt floor_of(const Rational& r);
BigInt ceil_of(const Rational& r);
// Nearest integer, ties toward +infinity.
BigInt round_of(const Rational& r);

std::int64_t to_int64(const BigInt& z);  // throws std::overflow_error

}  // namespace supnorm
