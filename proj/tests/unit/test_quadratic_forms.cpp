#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "supnorm/experiments.hpp"
#include "supnorm/quadratic_forms.hpp"

#include <random>

using namespace supnorm;

namespace {

FieldElement prod(const std::vector<FieldElement>& v, const FieldContext& ctx) {
  FieldElement p(ctx, Rational(1));
  for (const auto& x : v) p *= x;
  return p;
}

}  // namespace

TEST_CASE("validation errors carry their kind") {
  auto expect = [](const std::vector<std::vector<std::int64_t>>& g, FormErrorKind kind) {
    try {
      QuadraticForm::from_integers(g);
      FAIL("no error");
    } catch (const FormError& e) {
      CHECK(e.kind() == kind);
    }
  };
  expect({{2, 1}, {0, 2}}, FormErrorKind::NotSymmetric);
  expect({{3, 1}, {1, 2}}, FormErrorKind::OddDiagonal);
  expect({{2, 3}, {3, 2}}, FormErrorKind::NotTotallyPositive);
  expect({{2, 0}}, FormErrorKind::NotSquare);

  // positive under one embedding only: diag(2, 2 sqrt2) over Q(sqrt 2)
  auto ctx = FieldContext::quadratic(2);
  FMatrix A = {{FieldElement(ctx, 2), FieldElement(ctx, 0)}, {FieldElement(ctx, 0), FieldElement(ctx, 0, 2)}};
  try {
    QuadraticForm::from_gram(ctx, A);
    FAIL("no error");
  } catch (const FormError& e) {
    CHECK(e.kind() == FormErrorKind::NotTotallyPositive);
    CHECK(e.embedding() == 1);
    CHECK(e.minor() == 2);
  }
}

TEST_CASE("values and polar form") {
  auto q = QuadraticForm::from_integers({{2, 1}, {1, 2}});
  CHECK(q.value({{1, 0}, {1, 0}}) == IntCoords{3, 0});
  CHECK(q.value({{1, 0}, {-1, 0}}) == IntCoords{1, 0});
  CHECK(q.polar({{1, 0}, {0, 0}}, {{0, 0}, {1, 0}}) == IntCoords{1, 0});
  CHECK(q.determinant() == FieldElement::from_int(q.context(), 3));
}

TEST_CASE("level of small forms") {
  CHECK(QuadraticForm::from_integers({{2, 0}, {0, 2}}).level_norm() == 4);
  CHECK(QuadraticForm::from_integers({{2, 1}, {1, 2}}).level_norm() == 3);
  CHECK(builtin_form("lipschitz").level_norm() == 4);
  CHECK(builtin_form("hurwitz").level_norm() == 2);
}

TEST_CASE("reduction identities on the corpus") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> c(-9, 9);
  for (const auto& e : corpus()) {
    CAPTURE(e.name);
    QuadraticForm q = builtin_form(e.name);
    const auto& ctx = q.context();
    ReducedForm r = reduce_form(q);
    QuadraticForm back = q.transformed(r.transform);
    CHECK(back.gram() == r.reduced.gram());
    CHECK(abs(determinant(to_fmatrix(ctx, r.transform)).norm()) == 1);

    // prod h = det(A'/2), and the nested squares reproduce the values
    const int n = q.rank();
    FieldElement half_det = r.reduced.determinant() / FieldElement(ctx, Rational(BigInt(1) << n));
    CHECK(prod(r.h, ctx) == half_det);
    CHECK(r.balanced_determinant == half_det);
    for (int trial = 0; trial < 50; ++trial) {
      OVector x(n);
      for (auto& v : x) v = {c(rng), ctx.degree() == 2 ? c(rng) : 0};
      FieldElement sum(ctx, Rational(0));
      for (int j = 0; j < n; ++j) {
        FieldElement inner(ctx, x[j]);
        for (int i = j + 1; i < n; ++i) inner += r.c[j][i] * FieldElement(ctx, x[i]);
        sum += r.h[j] * inner * inner;
      }
      CHECK(sum == FieldElement(ctx, r.reduced.value(x)));
    }
    for (int j = 0; j < n; ++j) {
      CHECK(r.c[j][j] == FieldElement(ctx, Rational(1)));
      CHECK(r.h[j].is_totally_positive());
    }
    auto sub = subdeterminant_check(r);
    CHECK(sub.holds);
    for (const auto& er : eigen_range(r)) {
      CHECK(er.lambda_min > 0);
      CHECK(er.lambda_min <= er.lambda_max);
    }
  }
}

TEST_CASE("hurwitz quasi-diagonal data") {
  auto r = reduce_form(builtin_form("hurwitz"));
  std::vector<std::string> h;
  for (const auto& x : r.h) h.push_back(x.to_string());
  CHECK(h == std::vector<std::string>{"1", "3/4", "2/3", "1/2"});
}

TEST_CASE("eigenvalues of a diagonal form") {
  auto er = eigen_range(QuadraticForm::from_integers({{2, 0, 0}, {0, 4, 0}, {0, 0, 6}}));
  REQUIRE(er.size() == 1);
  CHECK(static_cast<double>(er[0].lambda_min) == doctest::Approx(2));
  CHECK(static_cast<double>(er[0].lambda_max) == doctest::Approx(6));
  CHECK(static_cast<double>(er[0].det) == doctest::Approx(48));
}

TEST_CASE("quasi-diagonal data without a basis change") {
  auto q = QuadraticForm::from_integers({{2, 1}, {1, 2}});
  std::vector<FieldElement> h;
  FMatrix c;
  quasi_diagonal(q, h, c);
  // x^2 + xy + y^2 = (x + y/2)^2 + 3/4 y^2
  CHECK(h[0] == FieldElement(q.context(), Rational(1)));
  CHECK(h[1] == FieldElement(q.context(), Rational(3, 4)));
  CHECK(c[0][1] == FieldElement(q.context(), Rational(1, 2)));
}
