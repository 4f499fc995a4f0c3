#include "supnorm/quaternion_orders.hpp"

#include "supnorm/int_lattice.hpp"

#include <algorithm>
#include <numeric>

namespace supnorm {

namespace {

FieldElement fe(const FieldContext& ctx, const Rational& r) { return FieldElement(ctx, r); }

}  // namespace

std::string to_string(OrderErrorKind kind) {
  switch (kind) {
    case OrderErrorKind::Dependent: return "dependent-basis";
    case OrderErrorKind::MissingOne: return "missing-one";
    case OrderErrorKind::NotClosed: return "not-closed";
    case OrderErrorKind::UnsupportedPrime: return "unsupported-prime";
    case OrderErrorKind::NotCoprime: return "not-coprime";
    case OrderErrorKind::BadLevel: return "bad-level";
  }
  return "unknown";
}

QuaternionAlgebra::QuaternionAlgebra(const FieldContext& ctx, const FieldElement& a, const FieldElement& b)
    : ctx_(ctx), a_(a), b_(b) {
  for (int s = 0; s < ctx.degree(); ++s)
    if (a.sign(s) >= 0 || b.sign(s) >= 0) throw std::invalid_argument("quaternion algebra is not totally definite");
}

QuaternionAlgebra QuaternionAlgebra::over_q(std::int64_t a, std::int64_t b) {
  auto q = FieldContext::rationals();
  return QuaternionAlgebra(q, fe(q, a), fe(q, b));
}

Quaternion QuaternionAlgebra::make(const Rational& x0, const Rational& x1, const Rational& x2, const Rational& x3) const {
  return Quaternion{{fe(ctx_, x0), fe(ctx_, x1), fe(ctx_, x2), fe(ctx_, x3)}};
}

Quaternion QuaternionAlgebra::mul(const Quaternion& p, const Quaternion& q) const {
  const auto& x = p.x;
  const auto& y = q.x;
  FieldElement ab = a_ * b_;
  return Quaternion{{x[0] * y[0] + a_ * x[1] * y[1] + b_ * x[2] * y[2] - ab * x[3] * y[3],
                     x[0] * y[1] + x[1] * y[0] - b_ * x[2] * y[3] + b_ * x[3] * y[2],
                     x[0] * y[2] + x[2] * y[0] + a_ * x[1] * y[3] - a_ * x[3] * y[1],
                     x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]}};
}

Quaternion QuaternionAlgebra::add(const Quaternion& p, const Quaternion& q) const {
  return Quaternion{{p.x[0] + q.x[0], p.x[1] + q.x[1], p.x[2] + q.x[2], p.x[3] + q.x[3]}};
}

Quaternion QuaternionAlgebra::scale(const FieldElement& c, const Quaternion& q) const {
  return Quaternion{{c * q.x[0], c * q.x[1], c * q.x[2], c * q.x[3]}};
}

Quaternion QuaternionAlgebra::conj(const Quaternion& q) const { return Quaternion{{q.x[0], -q.x[1], -q.x[2], -q.x[3]}}; }

FieldElement QuaternionAlgebra::trace(const Quaternion& q) const { return q.x[0] + q.x[0]; }

FieldElement QuaternionAlgebra::norm(const Quaternion& q) const { return inner(q, q); }

FieldElement QuaternionAlgebra::inner(const Quaternion& p, const Quaternion& q) const {
  return p.x[0] * q.x[0] - a_ * p.x[1] * q.x[1] - b_ * p.x[2] * q.x[2] + a_ * b_ * p.x[3] * q.x[3];
}

Quaternion QuaternionOrder::element(const OVector& c) const {
  const auto& ctx = algebra.context();
  Quaternion q = algebra.make(0, 0, 0, 0);
  for (int k = 0; k < 4; ++k) q = algebra.add(q, algebra.scale(FieldElement(ctx, c[k]), basis[k]));
  return q;
}

FVector QuaternionOrder::coordinates(const Quaternion& q) const {
  FMatrix M(4, FVector(4));
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) M[r][c] = basis[c].x[r];
  return solve(M, FVector(q.x.begin(), q.x.end()));
}

QuaternionOrder order_from_basis(const QuaternionAlgebra& alg, const std::array<Quaternion, 4>& basis, const std::string& name) {
  const auto& ctx = alg.context();
  QuaternionOrder o;
  o.name = name;
  o.algebra = alg;
  o.basis = basis;
  FMatrix M(4, FVector(4));
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) M[r][c] = basis[c].x[r];
  FMatrix Minv;
  try {
    Minv = inverse(M);
  } catch (const std::domain_error&) {
    throw OrderError(OrderErrorKind::Dependent, "basis elements are linearly dependent");
  }
  auto coords = [&](const Quaternion& q) {
    FVector out;
    for (int r = 0; r < 4; ++r) {
      FieldElement s = fe(ctx, 0);
      for (int k = 0; k < 4; ++k) s += Minv[r][k] * q.x[k];
      out.push_back(s);
    }
    return out;
  };
  for (const auto& c : coords(alg.one()))
    if (!c.is_integral()) throw OrderError(OrderErrorKind::MissingOne, "1 is not in the span of the basis");
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      FVector c = coords(alg.mul(basis[i], basis[j]));
      OVector ic;
      for (const auto& v : c) {
        if (!v.is_integral())
          throw OrderError(OrderErrorKind::NotClosed, "product of basis elements " + std::to_string(i) + " and " +
                                                          std::to_string(j) + " leaves the span");
        ic.push_back(v.to_int());
      }
      o.table[i][j] = ic;
    }
  FMatrix gram(4, FVector(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) gram[i][j] = fe(ctx, 2) * alg.inner(basis[i], basis[j]);
  o.norm_form = QuadraticForm::from_gram(ctx, gram);
  o.disc = o.norm_form.determinant();
  o.reduced_disc_norm = o.norm_form.level_norm();
  o.disc_identity = abs(o.disc.norm()) == Rational(o.reduced_disc_norm * o.reduced_disc_norm);
  return o;
}

QuaternionOrder lipschitz_order(const FieldContext& ctx) {
  QuaternionAlgebra alg(ctx, fe(ctx, -1), fe(ctx, -1));
  return order_from_basis(alg, {alg.make(1, 0, 0, 0), alg.make(0, 1, 0, 0), alg.make(0, 0, 1, 0), alg.make(0, 0, 0, 1)},
                          "lipschitz");
}

namespace {

QuaternionOrder maximal_order(std::int64_t p) {
  using R = Rational;
  if (p == 2) {
    auto alg = QuaternionAlgebra::over_q(-1, -1);
    return order_from_basis(alg, {alg.make(1, 0, 0, 0), alg.make(0, 1, 0, 0), alg.make(0, 0, 1, 0),
                                  alg.make(R(1, 2), R(1, 2), R(1, 2), R(1, 2))});
  }
  if (p == 3 || p == 7) {
    auto alg = QuaternionAlgebra::over_q(-1, -p);
    return order_from_basis(alg, {alg.make(1, 0, 0, 0), alg.make(0, 1, 0, 0), alg.make(R(1, 2), 0, R(1, 2), 0),
                                  alg.make(0, R(1, 2), 0, R(1, 2))});
  }
  if (p == 5 || p == 13) {
    auto alg = QuaternionAlgebra::over_q(-2, -p);
    return order_from_basis(alg, {alg.make(1, 0, 0, 0), alg.make(R(1, 2), 0, R(1, 2), R(1, 2)),
                                  alg.make(0, R(1, 4), R(1, 2), R(1, 4)), alg.make(0, 0, 0, 1)});
  }
  throw OrderError(OrderErrorKind::UnsupportedPrime, "no built-in maximal order ramified at " + std::to_string(p));
}

std::int64_t int_of(const FieldElement& x) { return x.to_int()[0]; }

// {x in O : x nu in nu O + q O} for a nonzero nu with tr = nr = 0 mod q.
QuaternionOrder eichler_refine(const QuaternionOrder& o, std::int64_t q) {
  const auto& alg = o.algebra;
  const auto& A = o.norm_form.int_gram();
  auto tr = [&](const OVector& x) {
    std::int64_t s = 0;
    for (int k = 0; k < 4; ++k) s += x[k][0] * int_of(alg.trace(o.basis[k]));
    return s;
  };
  auto nr = [&](const OVector& x) {
    std::int64_t s = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s += A[i][j][0] * x[i][0] * x[j][0];
    return s / 2;
  };
  OVector nu;
  bool found = false;
  OVector x(4, IntCoords{0, 0});
  for (std::int64_t code = 1; code < q * q * q * q && !found; ++code) {
    std::int64_t c = code;
    for (int k = 3; k >= 0; --k) {
      x[k] = {c % q, 0};
      c /= q;
    }
    if (tr(x) % q == 0 && nr(x) % q == 0) {
      nu = x;
      found = true;
    }
  }
  if (!found) throw OrderError(OrderErrorKind::BadLevel, "no nilpotent element mod " + std::to_string(q));
  Quaternion nuq = o.element(nu);
  // Right multiplication by nu (columns) and the subspace nu O mod q.
  ZMatrix R(4, ZVector(4)), W;
  for (int k = 0; k < 4; ++k) {
    FVector c = o.coordinates(alg.mul(o.basis[k], nuq));
    for (int r = 0; r < 4; ++r) R[r][k] = int_of(c[r]);
    FVector w = o.coordinates(alg.mul(nuq, o.basis[k]));
    ZVector wr;
    for (int r = 0; r < 4; ++r) wr.push_back(int_of(w[r]));
    W.push_back(std::move(wr));
  }
  ZMatrix perp = nullspace_mod_p(W, q, 4);
  ZMatrix K;
  for (const auto& f : perp) {
    ZVector row(4, 0);
    for (int k = 0; k < 4; ++k)
      for (int r = 0; r < 4; ++r) row[k] += f[r] * R[r][k];
    K.push_back(std::move(row));
  }
  ZMatrix L = congruence_lattice(K, q, 4);
  if (lattice_index(L, 4) != q) throw OrderError(OrderErrorKind::BadLevel, "Eichler refinement has wrong index");
  std::array<Quaternion, 4> nb;
  for (int r = 0; r < 4; ++r) {
    OVector c;
    for (int k = 0; k < 4; ++k) c.push_back({to_int64(L[r][k]), 0});
    nb[r] = o.element(c);
  }
  return order_from_basis(alg, nb);
}

}  // namespace

QuaternionOrder builtin_eichler_order(std::int64_t p, std::int64_t N) {
  if (N < 1) throw OrderError(OrderErrorKind::BadLevel, "level must be positive");
  if (std::gcd(p, N) != 1) throw OrderError(OrderErrorKind::NotCoprime, "level and ramified prime are not coprime");
  QuaternionOrder o = maximal_order(p);
  auto qs = prime_factors(N);
  std::int64_t prod = 1;
  for (auto q : qs) prod *= q;
  if (prod != N) throw OrderError(OrderErrorKind::BadLevel, "level must be squarefree");
  for (auto q : qs) o = eichler_refine(o, q);
  o.name = N == 1 ? (p == 2 ? "hurwitz" : "maximal-" + std::to_string(p)) : "eichler-" + std::to_string(p) + "-" + std::to_string(N);
  if (o.reduced_disc_norm != BigInt(p * N)) throw OrderError(OrderErrorKind::BadLevel, "reduced discriminant mismatch");
  ClassNumberProxy h;
  h.ramified = p;
  h.level = N;
  h.value = Rational(p * N) * (1 - Rational(1, p));
  for (auto q : qs) h.value /= (1 - Rational(1, q));
  o.class_number = h;
  return o;
}

NormFormSplit norm_form_split(const QuaternionOrder& o) {
  const auto& alg = o.algebra;
  const auto& ctx = alg.context();
  NormFormSplit s;
  s.quaternary = o.norm_form;

  // Column operations with Euclid over O_F taking the trace row to (g, 0, 0, 0).
  std::vector<FieldElement> t;
  for (int k = 0; k < 4; ++k) t.push_back(alg.trace(o.basis[k]));
  FMatrix V = fmatrix_identity(ctx, 4);
  auto abs_norm = [](const FieldElement& x) { return abs(x.norm()); };
  for (int guard = 0;; ++guard) {
    if (guard > 200) throw std::runtime_error("trace-zero sublattice: Euclid over O_F did not terminate");
    int piv = -1;
    for (int k = 0; k < 4; ++k)
      if (!t[k].is_zero() && (piv < 0 || abs_norm(t[k]) < abs_norm(t[piv]))) piv = k;
    bool done = true;
    for (int k = 0; k < 4; ++k) {
      if (k == piv || t[k].is_zero()) continue;
      FieldElement r = t[k] / t[piv];
      FieldElement qf(ctx, Rational(round_of(r.coords()[0])), Rational(round_of(r.coords()[1])));
      t[k] -= qf * t[piv];
      for (int i = 0; i < 4; ++i) V[i][k] -= qf * V[i][piv];
      if (!t[k].is_zero()) done = false;
    }
    if (done) {
      if (piv != 0) {
        std::swap(t[0], t[piv]);
        for (int i = 0; i < 4; ++i) std::swap(V[i][0], V[i][piv]);
      }
      break;
    }
  }
  std::array<Quaternion, 3> delta;
  for (int k = 0; k < 3; ++k) {
    OVector c;
    for (int i = 0; i < 4; ++i) c.push_back(V[i][k + 1].to_int());
    s.trace_zero_basis.push_back(c);
    delta[k] = o.element(c);
  }
  FMatrix tg(3, FVector(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) tg[i][j] = fe(ctx, 2) * alg.inner(delta[i], delta[j]);
  s.ternary = QuadraticForm::from_gram(ctx, tg);

  // y0 = tr/2; the pure part solved against delta in components 1..3.
  FMatrix D(3, FVector(3));
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k) D[r][k] = delta[k].x[r + 1];
  FMatrix Dinv = inverse(D);
  s.change = fmatrix_zero(ctx, 4, 4);
  FieldElement half(ctx, Rational(1, 2));
  for (int i = 0; i < 4; ++i) {
    s.change[0][i] = half * alg.trace(o.basis[i]);
    for (int k = 0; k < 3; ++k) {
      FieldElement v = fe(ctx, 0);
      for (int r = 0; r < 3; ++r) v += Dinv[k][r] * o.basis[i].x[r + 1];
      s.change[k + 1][i] = v;
    }
  }
  FMatrix mid = fmatrix_zero(ctx, 4, 4);
  mid[0][0] = fe(ctx, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) mid[i + 1][j + 1] = tg[i][j];
  FMatrix back = multiply(transpose(s.change), multiply(mid, s.change));
  s.gram_identity = back == o.norm_form.gram();

  // [O : O_F + O^0] = N(2)/N(g) where (g) = tr(O).
  Rational idx = Rational(ctx.degree() == 2 ? 4 : 2) / abs(t[0].norm());
  if (boost::multiprecision::denominator(idx) != 1) throw std::logic_error("non-integral split index");
  s.index = boost::multiprecision::numerator(idx);
  for (int sg = 0; sg < ctx.degree(); ++sg)
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) s.change_embedded[sg][r][c] = s.change[r][c].embedding(sg);
  return s;
}

NormFormSplit diagonal_split(const QuadraticForm& ternary) {
  const auto& ctx = ternary.context();
  NormFormSplit s;
  FMatrix g = fmatrix_zero(ctx, 4, 4);
  g[0][0] = fe(ctx, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g[i + 1][j + 1] = ternary.gram()[i][j];
  s.quaternary = QuadraticForm::from_gram(ctx, g);
  s.ternary = ternary;
  for (int k = 0; k < 3; ++k) {
    OVector c(4, IntCoords{0, 0});
    c[k + 1] = {1, 0};
    s.trace_zero_basis.push_back(c);
  }
  s.change = fmatrix_identity(ctx, 4);
  s.index = 1;
  s.gram_identity = true;
  for (int sg = 0; sg < ctx.degree(); ++sg)
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) s.change_embedded[sg][r][c] = r == c ? 1.0L : 0.0L;
  return s;
}

}  // namespace supnorm
