#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "supnorm/json_io.hpp"
#include "supnorm/number_field.hpp"

#include <random>
#include <set>

using namespace supnorm;

namespace {

std::int64_t legendre_like(std::int64_t D, std::int64_t p) {
  // 1 split, 0 ramified, -1 inert, for the ring of integers of Q(sqrt D)
  std::int64_t disc = D % 4 == 1 ? D : 4 * D;
  if (disc % p == 0) return 0;
  if (p == 2) return (((disc % 8) + 8) % 8) == 1 ? 1 : -1;
  std::int64_t r = ((disc % p) + p) % p;
  for (std::int64_t x = 0; x < p; ++x)
    if (x * x % p == r) return 1;
  return -1;
}

}  // namespace

TEST_CASE("field data for Q(sqrt 2) and Q(sqrt 5)") {
  auto q2 = FieldContext::quadratic(2);
  CHECK(q2.tag() == "Qsqrt2");
  CHECK(q2.discriminant() == 8);
  CHECK(q2.fundamental_unit() == IntCoords{1, 1});
  CHECK(q2.fundamental_unit_norm() == -1);
  CHECK(q2.positive_unit() == IntCoords{3, 2});

  auto q5 = FieldContext::from_tag("Qsqrt5");
  CHECK(q5.discriminant() == 5);
  CHECK(q5.omega_trace() == 1);
  CHECK(q5.omega_norm_term() == 1);
  CHECK(q5.fundamental_unit() == IntCoords{0, 1});
  CHECK(q5.positive_unit() == IntCoords{1, 1});
  CHECK(FieldContext::from_tag("QsqrtD:D=13").radicand() == 13);
  CHECK_THROWS(FieldContext::from_tag("Qsqrt4"));
}

TEST_CASE("integer arithmetic agrees with an independent ring model") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> c(-1000, 1000);
  for (std::int64_t D : {2, 5, 13}) {
    auto ctx = FieldContext::quadratic(D);
    auto R = oracle::Ring::of(D);
    for (int k = 0; k < 500; ++k) {
      IntCoords x{c(rng), c(rng)}, y{c(rng), c(rng)};
      CHECK(ctx.mul(x, y) == R.mul(x, y));
      CHECK(ctx.norm(x) == R.norm(x));
      CHECK(ctx.norm(ctx.mul(x, y)) == ctx.norm(x) * ctx.norm(y));
      CHECK(ctx.embed(x, 1) == doctest::Approx(static_cast<double>(R.embed(x, 1))));
    }
  }
}

TEST_CASE("field elements: exact division and signs") {
  auto ctx = FieldContext::quadratic(2);
  FieldElement a(ctx, 3, 2), b(ctx, 1, 1);
  FieldElement q = a / b;
  CHECK(q * b == a);
  CHECK(a.norm() == 1);
  CHECK(a.is_totally_positive());
  // 99 - 70 sqrt 2 is positive but tiny under embedding 0
  FieldElement tiny(ctx, 99, -70);
  CHECK(tiny.sign(0) == 1);
  CHECK(tiny.sign(1) == 1);
  CHECK(FieldElement(ctx, 1393, -985).sign(0) == -1);
  CHECK_THROWS(a / FieldElement(ctx, 0));
  CHECK(FieldElement(ctx, Rational(1, 2), 0).is_integral() == false);
}

TEST_CASE("integers and units in boxes") {
  for (std::int64_t D : {1, 2, 5}) {
    auto ctx = D == 1 ? FieldContext::rationals() : FieldContext::quadratic(D);
    std::vector<long double> B(ctx.degree(), 7.5L);
    auto got = integers_in_box(ctx, B);
    auto want = oracle::box_integers(oracle::Ring::of(D), B);
    std::set<IntCoords> g(got.begin(), got.end()), w(want.begin(), want.end());
    w.erase(IntCoords{0, 0});
    CHECK(g == w);
  }
  auto ctx = FieldContext::quadratic(2);
  auto units = units_in_box(ctx, {10, 10});
  for (const auto& u : units) CHECK(abs(u.norm()) == 1);
  // +-1, +-(1+sqrt2)^{+-1}, +-(1+sqrt2)^{+-2}: |u^sigma| <= 10 for exponents up to 2
  CHECK(units.size() == 10);
}

TEST_CASE("cone reduction") {
  auto ctx = FieldContext::quadratic(2);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> c(-200, 200);
  int done = 0;
  while (done < 300) {
    IntCoords x{c(rng), c(rng)};
    if (!ctx.is_totally_positive(x)) continue;
    ++done;
    auto r = cone_reduce(ctx, x);
    CHECK(in_cone(ctx, r.representative));
    CHECK(r.representative == ctx.mul(r.unit, x));
    CHECK(ctx.norm(r.unit) == 1);
    CHECK(ctx.is_totally_positive(r.unit));
    CHECK(cone_coordinate(ctx, r.representative) >= -0.5L - 1e-12L);
    CHECK(cone_coordinate(ctx, r.representative) < 0.5L + 1e-12L);
  }
  CHECK_THROWS(cone_reduce(ctx, {-1, 0}));
}

TEST_CASE("principal primes in the cone match a sieve count") {
  for (std::int64_t D : {2, 5}) {
    auto ctx = FieldContext::quadratic(D);
    const std::int64_t X = 400;
    auto got = principal_primes_in_cone(ctx, 1, X, {});
    std::size_t expect = 0;
    for (auto p : oracle::sieve(X)) {
      auto s = legendre_like(D, p);
      if (s == 1) expect += 2;
      else if (s == 0) expect += 1;
      else if (p * p <= X) expect += 1;
    }
    CHECK(got.size() == expect);
    for (std::size_t k = 1; k < got.size(); ++k) CHECK(ctx.norm(got[k - 1]) <= ctx.norm(got[k]));
    for (const auto& x : got) {
      CHECK(in_cone(ctx, x));
      CHECK(ctx.is_totally_positive(x));
    }
    auto avoid = principal_primes_in_cone(ctx, 1, X, {D == 2 ? 2 : 5});
    CHECK(avoid.size() + 1 == got.size());
  }
  auto q = principal_primes_in_cone(FieldContext::rationals(), 10, 30, {13});
  CHECK(q == std::vector<IntCoords>{{11, 0}, {17, 0}, {19, 0}, {23, 0}, {29, 0}});
}

TEST_CASE("totally positive elements of the cone") {
  auto ctx = FieldContext::quadratic(5);
  auto v = totally_positive_in_cone(ctx, 1, 50);
  std::set<IntCoords> seen(v.begin(), v.end());
  CHECK(seen.size() == v.size());
  for (const auto& x : v) {
    CHECK(in_cone(ctx, x));
    CHECK(ctx.norm(x) <= 50);
  }
  CHECK(v.front() == IntCoords{1, 0});
}

TEST_CASE("rational primes") {
  CHECK(is_prime(2));
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(1000003));
  CHECK(prime_factors(360) == std::vector<std::int64_t>{2, 3, 5});
  CHECK(FieldContext::quadratic(2).is_inert(3));
  CHECK_FALSE(FieldContext::quadratic(2).is_inert(7));
}

TEST_CASE("parsing elements") {
  auto ctx = FieldContext::quadratic(5);
  CHECK(parse_element(ctx, "1+2*w") == FieldElement(ctx, 1, 2));
  CHECK(parse_element(ctx, "-w") == FieldElement(ctx, 0, -1));
  CHECK(parse_element(ctx, "3/2 - 1/2w") == FieldElement(ctx, Rational(3, 2), Rational(-1, 2)));
  CHECK_THROWS_AS(parse_element(FieldContext::rationals(), "w"), JsonIoError);
  CHECK_THROWS_AS(parse_element(ctx, "1+"), JsonIoError);
  CHECK(to_string(ctx, {2, -1}) == FieldElement(ctx, 2, -1).to_string());
}
