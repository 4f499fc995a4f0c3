#pragma once

#include "supnorm/rational.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace supnorm {

// Coordinates of an algebraic integer a + b*omega in the integral basis (1, omega).
// Over Q the second coordinate is always zero.
using IntCoords = std::array<std::int64_t, 2>;

class FieldElement;

// A totally real field of degree 1 or 2.  For Q(sqrt D) the integral basis is
// (1, omega) with omega = sqrt D, or (1 + sqrt D)/2 when D = 1 mod 4, so that
// omega^2 = t*omega + n.  Embedding 0 sends sqrt D to the positive root.
class FieldContext {
 public:
  FieldContext();  // Q
  static FieldContext rationals();
  static FieldContext quadratic(std::int64_t D);
  // "Q", "Qsqrt2", "Qsqrt5" or "QsqrtD:D=<n>".
  static FieldContext from_tag(std::string_view tag);

  const std::string& tag() const;
  int degree() const;
  std::int64_t radicand() const;        // D, or 1 for Q
  std::int64_t discriminant() const;    // field discriminant
  std::int64_t omega_trace() const;     // t
  std::int64_t omega_norm_term() const; // n, with omega^2 = t*omega + n
  long double omega(int sigma) const;

  // Fundamental unit eps with eps^{sigma_0} > 1, its norm, and the generator
  // eta of the totally positive units (eps or eps^2).
  IntCoords fundamental_unit() const;
  int fundamental_unit_norm() const;
  IntCoords positive_unit() const;
  long double log_positive_unit() const;  // log eta^{sigma_0}

  // Exact integer arithmetic on O_F.
  IntCoords add(const IntCoords& x, const IntCoords& y) const;
  IntCoords sub(const IntCoords& x, const IntCoords& y) const;
  IntCoords mul(const IntCoords& x, const IntCoords& y) const;
  IntCoords conj(const IntCoords& x) const;
  IntCoords pow(IntCoords x, int k) const;  // k >= 0
  std::int64_t norm(const IntCoords& x) const;
  std::int64_t trace(const IntCoords& x) const;
  long double embed(const IntCoords& x, int sigma) const;
  int sign(const IntCoords& x, int sigma) const;
  bool is_totally_positive(const IntCoords& x) const;

  // Rational prime p: true if (p) is a prime ideal of O_F.
  bool is_inert(std::int64_t p) const;

  bool operator==(const FieldContext& other) const;
  bool operator!=(const FieldContext& other) const { return !(*this == other); }

  struct Data;

 private:
  explicit FieldContext(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

class FieldElement {
 public:
  FieldElement() = default;  // zero of Q
  FieldElement(const FieldContext& ctx, Rational c0, Rational c1 = 0);
  FieldElement(const FieldContext& ctx, const IntCoords& x);
  static FieldElement from_int(const FieldContext& ctx, std::int64_t v) { return FieldElement(ctx, Rational(v)); }

  const FieldContext& context() const { return ctx_; }
  const std::array<Rational, 2>& coords() const { return c_; }
  long double embedding(int sigma) const { return emb_[sigma]; }
  std::vector<long double> embeddings() const;

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;  // throws on zero divisor
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  Rational norm() const;
  Rational trace() const;
  FieldElement conjugate() const;
  // Exact sign of the image under embedding sigma.
  int sign(int sigma) const;
  bool is_zero() const { return c_[0] == 0 && c_[1] == 0; }
  bool is_totally_positive() const;
  bool is_integral() const;
  IntCoords to_int() const;  // throws if not integral or too large
  std::string to_string() const;

 private:
  void refresh();
  FieldContext ctx_;
  std::array<Rational, 2> c_{};
  std::array<long double, 2> emb_{};
};

struct Evaluation {
  std::vector<long double> embedding;
  Rational norm;
};
Evaluation evaluate(const FieldElement& x);

// Units u with |u^{sigma_j}| <= A_j (a relative slack of 1e-12 absorbs rounding
// at exact boundary hits).
std::vector<FieldElement> units_in_box(const FieldContext& ctx, const std::vector<long double>& A);

// Nonzero x in O_F with |x^{sigma_j}| <= A_j.
std::vector<IntCoords> integers_in_box(const FieldContext& ctx, const std::vector<long double>& A);

// The log-coordinate s(y) = (log y1 - log y2) / (2 log eta1) of a totally
// positive y; the cone D_0 is -1/2 <= s < 1/2 (always 0 over Q).
long double cone_coordinate(const FieldContext& ctx, const IntCoords& y);
// Exact membership of a totally positive element in the cone.
bool in_cone(const FieldContext& ctx, const IntCoords& y);

struct ConeReduction {
  int exponent = 0;  // u = eta^exponent
  IntCoords unit{};
  IntCoords representative{};
};
// Throws std::invalid_argument if x is not totally positive.
ConeReduction cone_reduce(const FieldContext& ctx, const IntCoords& x);

// Totally positive cone generators of principal prime ideals with norm in
// [nmin, nmax], coprime to every listed ideal norm; sorted by norm, then by
// embeddings.
std::vector<IntCoords> principal_primes_in_cone(const FieldContext& ctx, std::int64_t nmin, std::int64_t nmax,
                                                const std::vector<std::int64_t>& avoid);
// Totally positive elements of D_0 with nmin <= N(x) <= nmax, ordered by norm.
std::vector<IntCoords> totally_positive_in_cone(const FieldContext& ctx, std::int64_t nmin, std::int64_t nmax);

bool is_prime(std::int64_t n);
std::vector<std::int64_t> prime_factors(std::int64_t n);  // distinct, ascending

std::string to_string(const FieldContext& ctx, const IntCoords& x);

}  // namespace supnorm
