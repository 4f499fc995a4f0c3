#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "supnorm/amplifier_engine.hpp"
#include "supnorm/experiments.hpp"

#include <algorithm>
#include <set>

using namespace supnorm;

namespace {

std::vector<std::int64_t> rational_primes(std::int64_t lo, std::int64_t hi, const std::vector<std::int64_t>& excl) {
  std::vector<std::int64_t> out;
  for (std::int64_t p : oracle::sieve(hi))
    if (p >= lo && std::find(excl.begin(), excl.end(), p) == excl.end()) out.push_back(p);
  return out;
}

bool prime_or_prime_square(std::int64_t n) {
  if (is_prime(n)) return true;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (p * p == n) return is_prime(p);
  return false;
}

GeometricQuery lipschitz_query(const Rational& L, CoeffMode mode, int m, int l) {
  GeometricQuery q;
  q.split = builtin_split("lipschitz");
  q.directions = {unit_direction(q.split.ternary, 0, {1, 2, 3})};
  q.m = {m};
  q.l = {l};
  q.L = L;
  q.mode = mode;
  q.exclusions = {2};
  return q;
}

}  // namespace

TEST_CASE("sets over Q are the rational primes and their products") {
  auto ctx = FieldContext::rationals();
  for (int L : {3, 5, 10}) {
    CAPTURE(L);
    auto s = build_sets(ctx, L, {2});
    std::vector<std::int64_t> got1, got2;
    for (const auto& e : s.elements(1)) got1.push_back(e[0]);
    for (const auto& e : s.elements(2)) got2.push_back(e[0]);
    CHECK(got1 == rational_primes(L, 2 * L, {2}));
    CHECK(got2 == rational_primes(L * L, 4 * L * L, {2}));
    CHECK(s.sets[2].size() == got1.size() * got1.size());
    for (const auto& e : s.sets[2]) CHECK(e.value[0] == e.factors[0][0] * e.factors[1][0] * e.factors[1][0]);
    REQUIRE(s.sets[3].size() == got2.size());
    for (std::size_t k = 0; k < got2.size(); ++k) CHECK(s.sets[3][k].value[0] == got2[k] * got2[k]);
  }
  CHECK(build_sets(ctx, 3, {3}).elements(1) == std::vector<IntCoords>{{5, 0}});
  CHECK_THROWS(build_sets(ctx, Rational(1, 2), {}));
}

TEST_CASE("sets over Q(sqrt 2) hold cone primes of the right norm") {
  auto ctx = FieldContext::quadratic(2);
  Rational L(7, 2);
  auto s = build_sets(ctx, L, {3});
  for (int i = 1; i <= 2; ++i) {
    Rational lo = i == 1 ? L : Rational(L * L), hi = i == 1 ? Rational(2 * L) : Rational(4 * L * L);
    std::set<IntCoords> seen;
    for (const auto& x : s.elements(i)) {
      std::int64_t n = std::llabs(ctx.norm(x));
      CHECK(Rational(n) >= lo);
      CHECK(Rational(n) <= hi);
      CHECK(prime_or_prime_square(n));
      CHECK(n % 3 != 0);
      CHECK(in_cone(ctx, x));
      CHECK(seen.insert(x).second);
    }
  }
  // only the split prime 7 has norm in [7/2, 7]
  CHECK(s.elements(1).size() == 2);
  // composition in the field
  for (const auto& e : s.sets[2]) CHECK(e.value == ctx.mul(e.factors[0], ctx.mul(e.factors[1], e.factors[1])));
  for (const auto& e : s.sets[3]) CHECK(e.value == ctx.mul(e.factors[0], e.factors[0]));
  for (std::size_t k = 1; k < s.sets[2].size(); ++k)
    CHECK(std::llabs(ctx.norm(s.sets[2][k - 1].value)) <= std::llabs(ctx.norm(s.sets[2][k].value)));
}

TEST_CASE("geometric side in trivial and matrix modes") {
  auto triv = geometric_side(lipschitz_query(3, CoeffMode::Trivial, 0, 0));
  auto mat = geometric_side(lipschitz_query(3, CoeffMode::Matrix, 0, 0));
  CHECK(triv.S_count == mat.S_count);
  for (int i = 0; i < 4; ++i) CHECK(mat.S[i] == doctest::Approx(triv.S[i]).epsilon(1e-12));
  CHECK(triv.prefactor == 1);
  // each term is r_4 of an odd integer
  for (const auto& t : triv.terms) CHECK(t.count == static_cast<std::uint64_t>(oracle::r4(t.ell[0])));
  double inner = 1.0 / 3;
  for (int i = 1; i <= 4; ++i) inner += std::pow(3.0, -2.0 - i / 2.0) * triv.S[i - 1];
  CHECK(triv.B == doctest::Approx(inner).epsilon(1e-12));
  CHECK(triv.sqrtB == doctest::Approx(std::sqrt(inner)));
}

TEST_CASE("weights stay under the counts and the prefactors follow the mode") {
  auto mat = geometric_side(lipschitz_query(3, CoeffMode::Matrix, 4, 1));
  auto chr = geometric_side(lipschitz_query(3, CoeffMode::Character, 4, 0));
  CHECK(mat.prefactor == 5);
  CHECK(chr.prefactor == 25);
  for (int i = 0; i < 4; ++i) {
    CHECK(mat.S[i] <= static_cast<double>(mat.S_count[i]) + 1e-9);
    CHECK(chr.S[i] <= static_cast<double>(chr.S_count[i]) + 1e-9);
    CHECK(mat.S_count[i] == chr.S_count[i]);
  }
}

TEST_CASE("geometric side rejects bad queries") {
  auto q = lipschitz_query(3, CoeffMode::Matrix, 2, 3);
  CHECK_THROWS(geometric_side(q));
  q = lipschitz_query(3, CoeffMode::Matrix, 2, 1);
  q.directions = {{3, 0, 0}};
  CHECK_THROWS(geometric_side(q));
  q = lipschitz_query(3, CoeffMode::Matrix, 2, 1);
  q.m = {1, 1};
  CHECK_THROWS(geometric_side(q));
  q = lipschitz_query(3, CoeffMode::Matrix, 2, 1);
  q.split = diagonal_split(builtin_form("ternary-2I3"));
  q.split.gram_identity = false;
  CHECK_THROWS(geometric_side(q));
  CHECK_THROWS(coeff_mode_from_string("cosine"));
  CHECK(coeff_mode_from_string(to_string(CoeffMode::Character)) == CoeffMode::Character);
}

TEST_CASE("geometric side is thread independent") {
  auto q = lipschitz_query(5, CoeffMode::Matrix, 3, 2);
  CountOptions one, four;
  one.threads = 1;
  four.threads = 4;
  CHECK(to_json(geometric_side(q, one)).dump() == to_json(geometric_side(q, four)).dump());
}
