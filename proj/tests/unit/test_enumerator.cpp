#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "supnorm/enumerator.hpp"
#include "supnorm/experiments.hpp"

#include <set>

using namespace supnorm;

namespace {

struct Leaves {
  std::vector<OVector> v;
  void merge(const Leaves& o) { v.insert(v.end(), o.v.begin(), o.v.end()); }
};

std::vector<OVector> all_leaves(const EllipsoidEnumerator& e, const std::vector<long double>& r, bool exact, int threads) {
  auto jobs = e.map_jobs<Leaves>(r, exact, threads, [](Leaves& acc, const OVector& x) { acc.v.push_back(x); });
  Leaves all;
  for (const auto& j : jobs) all.merge(j);
  return all.v;
}

}  // namespace

TEST_CASE("ball search covers every lattice point of the ellipsoid") {
  for (const char* name : {"ternary-2I3", "hurwitz", "eichler-2-3", "qsqrt2-2I3", "qsqrt5-binary"}) {
    CAPTURE(name);
    QuadraticForm q = builtin_form(name);
    const auto& ctx = q.context();
    EllipsoidEnumerator e(q);
    std::vector<long double> r(ctx.degree(), 12.0L);
    auto leaves = all_leaves(e, r, false, 1);
    std::set<OVector> found(leaves.begin(), leaves.end());
    CHECK(found.size() == leaves.size());

    // every target with all embeddings <= 12 is reached
    std::vector<IntCoords> targets;
    for (const auto& t : totally_positive_in_cone(ctx, 1, 144))
      if (ctx.embed(t, 0) <= 12 && (ctx.degree() == 1 || ctx.embed(t, 1) <= 12)) targets.push_back(t);
    for (const auto& [t, reps] : oracle::brute_representations(q, targets))
      for (const auto& x : reps) CHECK(found.count(x) == 1);
  }
}

TEST_CASE("exact mode emits the surface and the job split is thread independent") {
  QuadraticForm q = builtin_form("hurwitz");
  EllipsoidEnumerator e(q);
  std::vector<long double> r{7.0L};
  auto one = all_leaves(e, r, true, 1);
  auto four = all_leaves(e, r, true, 4);
  CHECK(one == four);
  std::size_t on_surface = 0;
  for (const auto& x : one)
    if (q.value(x) == IntCoords{7, 0}) ++on_surface;
  CHECK(on_surface == 8 * 24);  // r_Hurwitz(n) = 24 sigma(n) for odd n
}

TEST_CASE("outer values bound the first coordinate") {
  QuadraticForm q = QuadraticForm::from_integers({{2, 0}, {0, 8}});
  EllipsoidEnumerator e(q);
  auto outs = e.outer_values({4.0L}, false);
  std::set<std::int64_t> vals;
  for (const auto& o : outs) vals.insert(o[0]);
  // the outermost coordinate is the last one: 4 y^2 <= 4
  CHECK(vals.count(1) == 1);
  CHECK(vals.count(-1) == 1);
  CHECK(vals.count(2) == 0);
}

TEST_CASE("shifted ellipsoids") {
  // (x + 1/2)^2 <= 1/4 + eps has the integer points -1 and 0
  QuadraticForm q = QuadraticForm::from_integers({{2}});
  EllipsoidEnumerator e(q, {{0.5L, 0.0L}});
  auto leaves = all_leaves(e, {0.25L}, false, 1);
  std::set<std::int64_t> xs;
  for (const auto& x : leaves) xs.insert(x[0][0]);
  CHECK(xs.count(0) == 1);
  CHECK(xs.count(-1) == 1);
}
