#include "supnorm/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace supnorm {

namespace {

BigInt parse_integer(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer");
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw std::invalid_argument("bad integer: " + std::string(s));
  BigInt z = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer: " + std::string(s));
    z = z * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-z) : z;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto s = trim(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt p = parse_integer(trim(s.substr(0, slash)));
    BigInt q = parse_integer(trim(s.substr(slash + 1)));
    if (q == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    return Rational(p, q);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto ip = s.substr(0, dot);
    auto fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip.remove_prefix(1);
    BigInt whole = ip.empty() ? BigInt(0) : parse_integer(ip);
    BigInt frac = fp.empty() ? BigInt(0) : parse_integer(fp);
    if (!fp.empty() && (fp[0] == '-' || fp[0] == '+')) throw std::invalid_argument("bad decimal: " + std::string(text));
    BigInt scale = 1;
    for (std::size_t k = 0; k < fp.size(); ++k) scale *= 10;
    Rational r = Rational(whole) + Rational(frac, scale);
    return neg ? Rational(-r) : r;
  }
  return Rational(parse_integer(s));
}

std::string to_string(const BigInt& z) { return z.str(); }

std::string to_string(const Rational& r) {
  const BigInt& q = boost::multiprecision::denominator(r);
  if (q == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + q.str();
}

long double to_long_double(const Rational& r) {
  return r.convert_to<long double>();
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  BigInt rem = a - q * b;
  if (rem != 0 && ((rem < 0) != (b < 0))) q -= 1;
  return q;
}

BigInt floor_of(const Rational& r) {
  return floor_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

BigInt ceil_of(const Rational& r) { return -floor_of(-r); }

BigInt round_of(const Rational& r) { return floor_of(r + Rational(1, 2)); }

std::int64_t to_int64(const BigInt& z) {
  if (z > std::numeric_limits<std::int64_t>::max() || z < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer does not fit in 64 bits: " + z.str());
  return z.convert_to<std::int64_t>();
}

}  // namespace supnorm
