#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "supnorm/special_functions.hpp"

#include <cmath>
#include <random>

using namespace supnorm;

TEST_CASE("exact recurrence matches the explicit sum") {
  for (int n = 0; n <= 15; ++n)
    for (auto [a, b] : {std::pair{0, 0}, {0, 2}, {3, 1}, {0, 8}})
      for (const Rational& t : {Rational(-1), Rational(-1, 3), Rational(0), Rational(2, 7), Rational(1)})
        CHECK(jacobi_eval_exact(n, a, b, t) == oracle::jacobi_explicit(n, a, b, t));
}

TEST_CASE("float recurrence tracks the exact one") {
  for (int n = 0; n <= 40; ++n)
    for (double t : {-0.9, -0.25, 0.0, 0.6, 0.99}) {
      double exact = static_cast<double>(to_long_double(jacobi_eval_exact(n, 0, 4, parse_rational(std::to_string(t)))));
      CHECK(jacobi_eval(n, 0, 4, t) == doctest::Approx(exact).epsilon(1e-10).scale(1));
    }
}

TEST_CASE("norms in closed form") {
  // Legendre: 2 / (2n + 1)
  for (int n = 0; n <= 20; ++n) CHECK(jacobi_norm_exact(n, 0, 0) == Rational(2, 2 * n + 1));
  // general: 2^{a+b+1} / (2n+a+b+1) * (n+a)! (n+b)! / (n! (n+a+b)!)
  auto fact = [](int k) {
    BigInt f = 1;
    for (int j = 2; j <= k; ++j) f *= j;
    return f;
  };
  for (int n = 0; n <= 12; ++n)
    for (auto [a, b] : {std::pair{0, 2}, {1, 3}, {2, 2}}) {
      Rational want = Rational(BigInt(1) << (a + b + 1)) / (2 * n + a + b + 1) * Rational(fact(n + a) * fact(n + b)) /
                      Rational(fact(n) * fact(n + a + b));
      CHECK(jacobi_norm_exact(n, a, b) == want);
    }
}

TEST_CASE("matrix coefficients") {
  // l = 0 is the Legendre polynomial
  for (int m = 0; m <= 30; ++m)
    for (double t : {-0.7, 0.1, 0.8}) CHECK(matrix_coeff(m, 0, t) == doctest::Approx(std::abs(std::legendre(m, t))));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 2000; ++k) {
    int m = static_cast<int>(rng() % 60);
    int l = static_cast<int>(rng() % (m + 1));
    double t = u(rng);
    double p = matrix_coeff(m, l, t);
    CHECK(p <= 1 + 1e-12);
    CHECK(p == matrix_coeff(m, -l, t));
  }
  CHECK(matrix_coeff(5, 5, -1.0) == 0.0);
  CHECK_THROWS(matrix_coeff(3, 4, 0.0));
  CHECK_THROWS(matrix_coeff(3, 1, 1.5));
}

TEST_CASE("decay bound and scan") {
  CHECK(decay_bound(0, 0, 0.5) == 1.0);
  CHECK(decay_bound(99, 0, 0.0) == doctest::Approx(0.1));
  CHECK(decay_margin(10, 2, 0.3) == doctest::Approx(matrix_coeff(10, 2, 0.3) / decay_bound(10, 2, 0.3)));
  std::vector<DecayRow> rows;
  auto s = decay_scan(20, 0.9, 0.9, 0.1, &rows);
  CHECK(!rows.empty());
  double mx = 0;
  for (const auto& r : rows) mx = std::max(mx, r.ratio);
  CHECK(mx == s.max_ratio);
  CHECK(s.max_by_m.size() == 21);
}

TEST_CASE("SO(4) characters") {
  for (int m = 0; m <= 20; ++m)
    for (double th : {0.1, 0.7, 1.5, 2.9}) {
      double t = std::cos(th);
      CHECK(so4_character(m, t) == doctest::Approx(std::sin((m + 1) * th) / ((m + 1) * std::sin(th))));
      CHECK(std::abs(so4_character(m, t)) <= so4_bound(m, t) + 1e-12);
    }
  CHECK(so4_character(7, 1.0) == 1.0);
}

TEST_CASE("rotation parameter: both formulas, range and trivial element") {
  QuaternionAlgebra H = QuaternionAlgebra::over_q(-1, -1);
  std::vector<std::array<double, 3>> x{{0.6, 0.0, 0.8}};
  CHECK(t_parameter(H, H.one(), x)[0] == doctest::Approx(1));
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> c(-9, 9);
  for (int k = 0; k < 200; ++k) {
    Quaternion g = H.make(c(rng), c(rng), c(rng), c(rng));
    if (H.norm(g).is_zero()) continue;
    double a = t_parameter(H, g, x)[0], b = t_parameter_rotation(H, g, x)[0];
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    CHECK(a >= -1 - 1e-12);
    CHECK(a <= 1 + 1e-12);
  }
  // (-1, -3 | Q): pure directions need nr(x') = 1, i.e. x1^2 + 3 x2^2 + 3 x3^2 = 1
  QuaternionAlgebra B = QuaternionAlgebra::over_q(-1, -3);
  std::vector<std::array<double, 3>> y{{0.5, 0.5, 0.0}};
  for (int k = 0; k < 50; ++k) {
    Quaternion g = B.make(c(rng), c(rng), c(rng), c(rng));
    if (B.norm(g).is_zero()) continue;
    CHECK(t_parameter(B, g, y)[0] == doctest::Approx(t_parameter_rotation(B, g, y)[0]).epsilon(1e-12));
  }
}
