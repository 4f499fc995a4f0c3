#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "supnorm/experiments.hpp"
#include "supnorm/lattice_counting.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstring>
#include <random>

using namespace supnorm;

namespace {

// 2 M^t M with M unipotent upper triangular: positive definite, even diagonal.
QuadraticForm random_form(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> e(-2, 2);
  std::vector<std::vector<std::int64_t>> M(n, std::vector<std::int64_t>(n, 0)), A(n, std::vector<std::int64_t>(n, 0));
  for (int i = 0; i < n; ++i) {
    M[i][i] = 1;
    for (int j = i + 1; j < n; ++j) M[i][j] = e(rng);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) A[i][j] += 2 * M[k][i] * M[k][j];
  // perturb off the diagonal while keeping definiteness
  A[0][n - 1] += 1;
  A[n - 1][0] += 1;
  A[0][0] += 2;
  A[n - 1][n - 1] += 2;
  return QuadraticForm::from_integers(A);
}

std::vector<IntCoords> upto(std::int64_t N) {
  std::vector<IntCoords> v;
  for (std::int64_t k = 1; k <= N; ++k) v.push_back({k, 0});
  return v;
}

}  // namespace

TEST_CASE("random ternary and quaternary forms against the box search") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    QuadraticForm q = random_form(rng, trial % 2 ? 4 : 3);
    CAPTURE(trial);
    auto targets = upto(40);
    auto brute = oracle::brute_representations(q, targets);
    for (const auto& ell : targets) CHECK(enumerate_representations(q, ell) == brute[ell]);
  }
}

TEST_CASE("representations are sorted and exact") {
  QuadraticForm q = builtin_form("qsqrt5-binary");
  const auto& ctx = q.context();
  for (const auto& ell : totally_positive_in_cone(ctx, 1, 60)) {
    auto reps = enumerate_representations(q, ell);
    CHECK(std::is_sorted(reps.begin(), reps.end()));
    for (const auto& x : reps) CHECK(q.value(x) == ell);
  }
}

TEST_CASE("block convolution and search agree") {
  for (const char* name : {"lipschitz", "eichler-2-3", "eichler-3-1", "qsqrt2-2I4", "ternary-2I3"}) {
    CAPTURE(name);
    QuadraticForm q = builtin_form(name);
    CountOptions blocks, search;
    blocks.strategy = CountStrategy::Blocks;
    search.strategy = CountStrategy::Search;
    RepresentationEngine a(q, blocks), b(q, search);
    auto targets = totally_positive_in_cone(q.context(), 1, 300);
    CHECK(a.counts(targets) == b.counts(targets));
    for (std::size_t k = 0; k < targets.size(); k += 37) CHECK(a.representations(targets[k]) == b.representations(targets[k]));
  }
}

TEST_CASE("internal reduction does not change the answer") {
  for (const auto& e : corpus()) {
    CAPTURE(e.name);
    QuadraticForm q = builtin_form(e.name);
    CountOptions plain;
    plain.reduce = false;
    plain.strategy = CountStrategy::Search;
    RepresentationEngine a(q), b(q, plain);
    auto targets = totally_positive_in_cone(q.context(), 1, 120);
    CHECK(a.counts(targets) == b.counts(targets));
    CHECK(a.representations(targets.back()) == b.representations(targets.back()));
  }
}

TEST_CASE("accumulated floating sums do not depend on the thread count") {
  struct Sum {
    double s = 0;
    void merge(const Sum& o) { s += o.s; }
  };
  QuadraticForm q = builtin_form("hurwitz");
  auto targets = upto(60);
  auto run = [&](int threads) {
    CountOptions opt;
    opt.threads = threads;
    RepresentationEngine eng(q, opt);
    return eng.accumulate<Sum>(targets, [](Sum& a, const OVector& x) { a.s += std::sqrt(1.0 + std::abs(x[0][0]) * 0.1); });
  };
  auto one = run(1), three = run(3);
  for (std::size_t k = 0; k < targets.size(); ++k) CHECK(std::memcmp(&one[k].s, &three[k].s, sizeof(double)) == 0);
}

TEST_CASE("rep_count reports bounds by rank") {
  auto r = rep_count(builtin_form("lipschitz"), {3, 0});
  CHECK(r.count == 32);
  CHECK(static_cast<double>(r.bound) == doctest::Approx(3));
  REQUIRE(r.ratio.has_value());
  auto t = rep_count(builtin_form("ternary-2I3"), {9, 0});
  CHECK(t.count == 30);  // r_3(9)
  CHECK(static_cast<double>(t.bound) == doctest::Approx(3));
  CHECK(rep_count(builtin_form("lipschitz"), {0, 0}).count == 1);
  CHECK(rep_count(builtin_form("lipschitz"), {-1, 0}).count == 0);
}

TEST_CASE("averaged sums against the four-square formula") {
  QuadraticForm q = builtin_form("lipschitz");
  std::int64_t e3 = 0, e1 = 0, e2 = 0;
  for (std::int64_t l = 0; l <= 10; ++l) {
    e3 += oracle::r4(l);
    e1 += oracle::r4(l * l);
    for (std::int64_t m = 0; m <= 3; ++m) e2 += oracle::r4(l * m * m);
  }
  CHECK(averaged_sum(q, AveragedMode::E3, 10).count == static_cast<std::uint64_t>(e3));
  CHECK(averaged_sum(q, AveragedMode::E1, 10).count == static_cast<std::uint64_t>(e1));
  CHECK(averaged_sum(q, AveragedMode::E2, 10, 3).count == static_cast<std::uint64_t>(e2));

  CountOptions strict;
  strict.h1_threshold = 0.5L;
  CHECK_THROWS_AS(averaged_sum(q, AveragedMode::E1, 10, 1, strict), WitnessError);
  CHECK_NOTHROW(averaged_sum(q, AveragedMode::E3, 10, 1, strict));
}

TEST_CASE("binary inhomogeneous counts against a direct search") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> c(-3, 3);
  auto ctx = FieldContext::rationals();
  for (int trial = 0; trial < 30; ++trial) {
    BinaryPolynomial p{ctx, {1 + std::abs(c(rng)), 0}, {c(rng), 0}, {1 + std::abs(c(rng)), 0}, {c(rng), 0}, {c(rng), 0}, {c(rng), 0}};
    // keep the quadratic part definite
    if (p.b[0] * p.b[0] >= 4 * p.a[0] * p.c[0]) continue;
    for (std::int64_t ell = 0; ell <= 12; ++ell) {
      std::uint64_t want = 0;
      for (std::int64_t x = -30; x <= 30; ++x)
        for (std::int64_t y = -30; y <= 30; ++y)
          if (p.value({x, 0}, {y, 0}) == IntCoords{ell, 0}) ++want;
      CHECK(binary_inhomogeneous_count(p, {ell, 0}).count == want);
    }
  }
  BinaryPolynomial circle{ctx, {1, 0}, {0, 0}, {1, 0}, {1, 0}, {0, 0}, {0, 0}};
  CHECK(binary_inhomogeneous_count(circle, {0, 0}).count == 2);
}

TEST_CASE("archimedean inequalities with explicit constants") {
  // In the inner product <u, v> = u^t A v / 2 take an orthonormal frame (x, e2, e3).
  // Then min |y -+ x| <= 2 sqrt(eta / lambda_min(A)), |det(y1, y2, y3)| <=
  // 3 l^{3/2} eta^{1/2} / det(A/2)^{1/2} and |y| <= (2 l / lambda_min(A))^{1/2}.
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Matrix3d M;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M(i, j) = u(rng);
    Eigen::Matrix3d G = 2 * (M.transpose() * M + 0.2 * Eigen::Matrix3d::Identity());
    Mat3 A;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A[i][j] = G(i, j);
    double lmin = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(G).eigenvalues()(0);
    double half_det = (G / 2).determinant();
    auto ip = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b) { return a.dot(G * b) / 2; };
    std::array<Eigen::Vector3d, 3> f;
    for (auto& v : f) v = Eigen::Vector3d(u(rng), u(rng), u(rng));
    for (int k = 0; k < 3; ++k) {
      for (int m = 0; m < k; ++m) f[k] -= ip(f[k], f[m]) * f[m];
      f[k] /= std::sqrt(ip(f[k], f[k]));
    }
    auto vec = [](const Eigen::Vector3d& v) { return Vec3{v(0), v(1), v(2)}; };
    const Vec3 x = vec(f[0]);

    double eta = 0.001 + 0.5 * unit(rng);
    double a = std::sqrt(1 - eta) + (1 - std::sqrt(1 - eta)) * unit(rng);
    double phi = 6.283 * unit(rng);
    Eigen::Vector3d y = a * f[0] + std::sqrt(1 - a * a) * (std::cos(phi) * f[1] + std::sin(phi) * f[2]);
    if (trial % 2) y = -y;
    auto ra = arch_geometry_a(A, x, vec(y), eta);
    CHECK(ra.lhs <= 2 * std::sqrt(eta / lmin) * (1 + 1e-9));
    CHECK(ra.rhs == doctest::Approx(std::sqrt(eta)));

    double ell = 1 + 50 * unit(rng);
    std::array<Vec3, 3> ys;
    for (auto& yi : ys) {
      double ai = std::sqrt(ell * eta) * u(rng);
      double psi = 6.283 * unit(rng);
      double w = std::sqrt(ell - ai * ai);
      yi = vec(ai * f[0] + w * (std::cos(psi) * f[1] + std::sin(psi) * f[2]));
    }
    auto rb = arch_geometry_b(A, ys, x, ell, eta);
    CHECK(rb.lhs <= 3 * rb.rhs / std::sqrt(half_det) * (1 + 1e-9));

    Eigen::Vector3d z = std::sqrt(ell) * (std::cos(phi) * f[1] + std::sin(phi) * f[0]);
    auto rc = arch_geometry_c(A, vec(z), ell);
    CHECK(rc.lhs <= std::sqrt(2 * ell / lmin) * (1 + 1e-9));
  }
  Mat3 A{{{2, 0, 0}, {0, 2, 0}, {0, 0, 2}}};
  CHECK_THROWS(arch_geometry_a(A, {1, 0, 0}, {0, 1, 0}, 0.5));  // <y, x>^2 = 0 < 1 - eta
  CHECK_THROWS(arch_geometry_c(A, {1, 1, 0}, 1));
  Mat3 flat{{{2, 0, 0}, {0, 2, 0}, {0, 0, 0}}};
  CHECK_THROWS(arch_geometry_c(flat, {1, 0, 0}, 1));
}

TEST_CASE("constrained counts at the boundary and in eta") {
  auto split = builtin_split("hurwitz");
  ConstrainedCountQuery q;
  q.split = split;
  q.directions = {unit_direction(split.ternary, 0, {1, 2, 3})};
  RepresentationEngine eng(split.quaternary);
  for (std::int64_t ell = 1; ell <= 40; ++ell) {
    q.ell = {ell, 0};
    q.mode = ConstraintMode::NearTorus;
    q.eta = {2};
    CHECK(constrained_count(q).count == eng.count(q.ell));
    q.mode = ConstraintMode::NearEquator;
    q.eta = {1};
    CHECK(constrained_count(q).count == eng.count(q.ell));
    auto counts = constrained_counts(q, {{0.01L}, {0.1L}, {0.5L}, {1}});
    CHECK(std::is_sorted(counts.begin(), counts.end()));
  }
  q.directions = {{3, 0, 0}};
  CHECK_THROWS(validate_directions(split, q.directions));
  q.directions = {unit_direction(split.ternary, 0, {1, 2, 3})};
  q.eta = {0};
  CHECK_THROWS(constrained_count(q));
}

TEST_CASE("constraint bound terms") {
  std::vector<BoundTerm> alt;
  auto t = constrained_bound_terms(ConstraintMode::NearEquator, 100, 1, &alt);
  REQUIRE(alt.size() == 2);
  CHECK(static_cast<double>(alt[1].value) == doctest::Approx(100));
  long double sum = 0;
  for (const auto& b : t) sum += b.value;
  CHECK(static_cast<double>(sum) == doctest::Approx(101));
}
