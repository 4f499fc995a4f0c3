#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "supnorm/experiments.hpp"
#include "supnorm/quaternion_orders.hpp"

#include <random>

using namespace supnorm;

namespace {

bool same(const Quaternion& a, const Quaternion& b) {
  for (int k = 0; k < 4; ++k)
    if (a.x[k] != b.x[k]) return false;
  return true;
}

}  // namespace

TEST_CASE("hamilton quaternion relations") {
  auto H = QuaternionAlgebra::over_q(-1, -1);
  auto i = H.make(0, 1, 0, 0), j = H.make(0, 0, 1, 0), k = H.make(0, 0, 0, 1);
  CHECK(same(H.mul(i, j), k));
  CHECK(same(H.mul(j, i), H.make(0, 0, 0, -1)));
  CHECK(same(H.mul(i, i), H.make(-1, 0, 0, 0)));
  CHECK(same(H.mul(k, k), H.make(-1, 0, 0, 0)));
  CHECK(H.norm(H.make(1, 2, 3, 4)) == FieldElement::from_int(H.context(), 30));
  CHECK(H.trace(H.make(1, 2, 3, 4)) == FieldElement::from_int(H.context(), 2));
  CHECK_THROWS(QuaternionAlgebra::over_q(1, -1));
}

TEST_CASE("reduced norm is multiplicative, trace is linear") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> c(-20, 20);
  auto ctx = FieldContext::quadratic(5);
  QuaternionAlgebra A(ctx, FieldElement(ctx, -1), FieldElement(ctx, -3, -1));
  for (int t = 0; t < 100; ++t) {
    Quaternion p, q;
    for (int k = 0; k < 4; ++k) {
      p.x[k] = FieldElement(ctx, c(rng), c(rng));
      q.x[k] = FieldElement(ctx, c(rng), c(rng));
    }
    CHECK(A.norm(A.mul(p, q)) == A.norm(p) * A.norm(q));
    CHECK(A.trace(A.add(p, q)) == A.trace(p) + A.trace(q));
    CHECK(A.inner(p, p) == A.norm(p));
    CHECK(same(A.mul(p, A.conj(p)), A.scale(A.norm(p), A.one())));
  }
}

TEST_CASE("built-in orders: discriminants and norm forms") {
  auto lip = builtin_order("lipschitz");
  CHECK(lip.norm_form.gram() == QuadraticForm::from_integers({{2, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 2}}).gram());
  CHECK(lip.reduced_disc_norm == 4);
  CHECK(lip.disc_identity);

  struct Case {
    const char* name;
    int disc_star;
  };
  for (auto [name, d] : {Case{"hurwitz", 2}, Case{"eichler-2-3", 6}, Case{"eichler-3-1", 3}, Case{"maximal-5", 5},
                         Case{"maximal-7", 7}, Case{"maximal-13", 13}, Case{"eichler-5-6", 30}}) {
    CAPTURE(name);
    auto o = builtin_order(name);
    CHECK(o.reduced_disc_norm == d);
    CHECK(o.disc == FieldElement::from_int(o.algebra.context(), d * d));
    CHECK(o.disc_identity);
    // closed under multiplication, with 1 in the lattice
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) CHECK(same(o.element(o.table[a][b]), o.algebra.mul(o.basis[a], o.basis[b])));
    for (const auto& x : o.coordinates(o.algebra.one())) CHECK(x.is_integral());
  }
  auto h = builtin_order("eichler-2-3").class_number;
  REQUIRE(h.has_value());
  CHECK(h->value == Rational(6) * Rational(1, 2) / Rational(2, 3));
}

TEST_CASE("order errors") {
  auto H = QuaternionAlgebra::over_q(-1, -1);
  auto kind = [&](const std::array<Quaternion, 4>& b) {
    try {
      order_from_basis(H, b);
    } catch (const OrderError& e) {
      return e.kind();
    }
    FAIL("no error");
    return OrderErrorKind::Dependent;
  };
  CHECK(kind({H.make(1, 0, 0, 0), H.make(0, 1, 0, 0), H.make(0, 1, 0, 0), H.make(0, 0, 0, 1)}) == OrderErrorKind::Dependent);
  CHECK(kind({H.make(2, 0, 0, 0), H.make(0, 1, 0, 0), H.make(0, 0, 1, 0), H.make(0, 0, 0, 1)}) == OrderErrorKind::MissingOne);
  CHECK(kind({H.make(1, 0, 0, 0), H.make(0, 1, 0, 0), H.make(0, 0, 1, 0), H.make(0, 0, 0, Rational(1, 2))}) ==
        OrderErrorKind::NotClosed);

  auto builtin_kind = [](std::int64_t p, std::int64_t N) {
    try {
      builtin_eichler_order(p, N);
    } catch (const OrderError& e) {
      return e.kind();
    }
    FAIL("no error");
    return OrderErrorKind::Dependent;
  };
  CHECK(builtin_kind(11, 1) == OrderErrorKind::UnsupportedPrime);
  CHECK(builtin_kind(2, 2) == OrderErrorKind::NotCoprime);
  CHECK(builtin_kind(2, 9) == OrderErrorKind::BadLevel);
}

TEST_CASE("norm form splits") {
  for (const char* name : {"lipschitz", "hurwitz", "eichler-2-3", "eichler-3-1"}) {
    CAPTURE(name);
    auto s = builtin_split(name);
    CHECK(s.gram_identity);
    CHECK(s.ternary.rank() == 3);
    CHECK(s.quaternary.rank() == 4);
  }
  CHECK(builtin_split("lipschitz").index == 1);
  CHECK(builtin_split("hurwitz").index == 2);

  auto d = diagonal_split(builtin_form("qsqrt2-2I3"));
  CHECK(d.gram_identity);
  CHECK(d.index == 1);
  CHECK(d.quaternary.gram() == builtin_form("qsqrt2-2I4").gram());
}
