#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "supnorm/exponents.hpp"

using namespace supnorm;

TEST_CASE("profile evaluation matches the displayed formula") {
  for (const Rational& k : {Rational(0), Rational(1, 10), Rational(3, 20), Rational(1, 4), Rational(2, 5)})
    for (int i = 1; i <= 4; ++i)
      for (int s = -600; s <= 0; s += 7) {
        Rational beta(s, 100);
        CHECK(profile_eval(k, i, beta) == oracle::profile_direct(k, i, beta));
      }
}

TEST_CASE("pieces cover the half line and are continuous") {
  for (const Rational& k : {Rational(3, 20), Rational(1, 5)})
    for (int i = 1; i <= 4; ++i) {
      auto pieces = profile_pieces(k, i);
      REQUIRE(!pieces.empty());
      CHECK(!pieces.front().lo.has_value());
      CHECK(pieces.back().hi == 0);
      for (std::size_t p = 0; p < pieces.size(); ++p) {
        const auto& pc = pieces[p];
        CHECK(pc.f.at(pc.hi) == oracle::profile_direct(k, i, pc.hi));
        if (pc.lo) {
          CHECK(*pc.lo < pc.hi);
          CHECK(pc.f.at(*pc.lo) == oracle::profile_direct(k, i, *pc.lo));
          CHECK(pc.f.at((*pc.lo + pc.hi) / 2) == oracle::profile_direct(k, i, (*pc.lo + pc.hi) / 2));
        } else {
          CHECK(pc.f.at(pc.hi - 10) == oracle::profile_direct(k, i, pc.hi - 10));
        }
        if (p > 0) CHECK(*pc.lo == pieces[p - 1].hi);
      }
    }
}

TEST_CASE("optimum at the chosen amplifier length") {
  auto o = optimize_profile(Rational(3, 20));
  CHECK(o.value == Rational(17, 20));
  CHECK(o.max_by_i == std::vector<Rational>{Rational(31, 40), Rational(17, 20), Rational(31, 40), Rational(17, 20)});
  CHECK(optimize_profile(0).value == 1);
}

TEST_CASE("kappa scan") {
  auto s = kappa_scan(0, Rational(1, 4), Rational(1, 20));
  CHECK(s.values.size() == 6);
  for (const auto& [k, v] : s.values) CHECK(v == optimize_profile(k).value);
  CHECK(s.best_value <= Rational(17, 20));
}

TEST_CASE("polyline interpolation") {
  auto pts = figure_polyline(Rational(3, 20), -3);
  for (int i = 1; i <= 4; ++i)
    for (int s = -3000; s <= 0; s += 13) {
      Rational b(s, 1000);
      CHECK(polyline_value(pts, i, b) == oracle::profile_direct(Rational(3, 20), i, b));
    }
  CHECK_THROWS(polyline_value(pts, 2, Rational(1, 2)));
}

TEST_CASE("balancing exponents") {
  auto b = balance_exponents({{-1, 0}, {Rational(1, 2), Rational(-1, 2)}, {2, -1}});
  CHECK(b.bounded);
  CHECK(b.t == Rational(1, 3));
  CHECK(b.value == Rational(-1, 3));
  // a single decreasing term has no minimum
  CHECK_FALSE(balance_exponents({{-1, 0}}).bounded);
  // increasing terms: the minimum sits at t = 0
  auto z = balance_exponents({{1, -2}, {2, -3}});
  CHECK(z.bounded);
  CHECK(z.t == 0);
  CHECK(z.value == -2);
}

TEST_CASE("hybrid interpolation") {
  auto h = hybrid_interpolate(Rational(1, 6), Rational(3, 80));
  CHECK(h.theta == Rational(20, 29));
  CHECK(h.saving == Rational(3, 58));
  auto g = hybrid_interpolate(2, 1);
  CHECK(g.theta == Rational(1, 2));
  CHECK(g.saving == 1);
  CHECK_THROWS(hybrid_interpolate(1, 0));
}
