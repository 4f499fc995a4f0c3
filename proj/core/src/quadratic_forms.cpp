#include "supnorm/quadratic_forms.hpp"

#include "supnorm/int_lattice.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace supnorm {

namespace {

__extension__ typedef __int128 i128;

BigInt lcm_big(const BigInt& a, const BigInt& b) { return a / gcd(a, b) * b; }

// Index-one test for the O_F-ideal generated by elems, via its Z-lattice.
bool generates_unit_ideal(const FieldContext& ctx, const std::vector<FieldElement>& elems) {
  const int d = ctx.degree();
  ZMatrix gens;
  FieldElement w = d == 2 ? FieldElement(ctx, Rational(0), Rational(1)) : FieldElement(ctx, Rational(1));
  for (const auto& e : elems) {
    if (e.is_zero()) continue;
    for (const auto& g : {e, e * w}) {
      ZVector v;
      for (int k = 0; k < d; ++k) v.push_back(boost::multiprecision::numerator(g.coords()[k]));
      gens.push_back(std::move(v));
    }
  }
  if (gens.empty()) return false;
  ZMatrix h = hnf_rows(gens, d);
  if (static_cast<int>(h.size()) != d) return false;
  BigInt idx = 1;
  for (int i = 0; i < d; ++i) idx *= h[i][i];
  return abs(idx) == 1;
}

// Ideal of k x k minors of the n x k matrix with the given columns.
bool spans_direct_summand(const FieldContext& ctx, const std::vector<OVector>& cols) {
  const std::size_t n = cols[0].size();
  const std::size_t k = cols.size();
  std::vector<FieldElement> minors;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(k), true);
  do {
    FMatrix M;
    for (std::size_t r = 0; r < n; ++r) {
      if (!pick[r]) continue;
      FVector row;
      for (std::size_t c = 0; c < k; ++c) row.emplace_back(ctx, cols[c][r]);
      M.push_back(std::move(row));
    }
    minors.push_back(determinant(M));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return generates_unit_ideal(ctx, minors);
}

BigInt compute_level(const FieldContext& ctx, const FMatrix& gram) {
  const std::size_t n = gram.size();
  const int d = ctx.degree();
  FMatrix B = inverse(gram);
  FieldElement half(ctx, Rational(1, 2));
  std::vector<FieldElement> gens;
  for (std::size_t i = 0; i < n; ++i) {
    gens.push_back(half * B[i][i]);
    for (std::size_t j = i + 1; j < n; ++j) gens.push_back(B[i][j]);
  }
  FieldElement w = d == 2 ? FieldElement(ctx, Rational(0), Rational(1)) : FieldElement(ctx, Rational(1));
  std::vector<FieldElement> zgens;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    zgens.push_back(g);
    if (d == 2) zgens.push_back(g * w);
  }
  BigInt den = 1;
  for (const auto& g : zgens)
    for (int k = 0; k < d; ++k) den = lcm_big(den, boost::multiprecision::denominator(g.coords()[k]));
  ZMatrix rows;
  for (const auto& g : zgens) {
    ZVector v;
    for (int k = 0; k < d; ++k) v.push_back(boost::multiprecision::numerator(Rational(g.coords()[k] * den)));
    rows.push_back(std::move(v));
  }
  BigInt idx = lattice_index(rows, d);
  BigInt scale = d == 2 ? BigInt(den * den) : den;
  if (scale % idx != 0) throw std::logic_error("level ideal is not integral");
  return scale / idx;
}

long double absl(long double x) { return x < 0 ? -x : x; }

}  // namespace

std::string to_string(FormErrorKind kind) {
  switch (kind) {
    case FormErrorKind::NotSquare: return "not-square";
    case FormErrorKind::NotSymmetric: return "not-symmetric";
    case FormErrorKind::NotIntegral: return "not-integral";
    case FormErrorKind::OddDiagonal: return "odd-diagonal";
    case FormErrorKind::NotTotallyPositive: return "not-totally-positive";
  }
  return "unknown";
}

QuadraticForm QuadraticForm::from_gram(const FieldContext& ctx, const FMatrix& gram) {
  const std::size_t n = gram.size();
  if (n == 0) throw FormError(FormErrorKind::NotSquare, "empty Gram matrix");
  for (const auto& row : gram)
    if (row.size() != n) throw FormError(FormErrorKind::NotSquare, "Gram matrix is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (gram[i][j].context() != ctx) throw std::invalid_argument("Gram entry from a different field");
      if (!gram[i][j].is_integral())
        throw FormError(FormErrorKind::NotIntegral, "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not in O_F");
      if (gram[i][j] != gram[j][i])
        throw FormError(FormErrorKind::NotSymmetric, "a_" + std::to_string(i) + std::to_string(j) + " != a_" + std::to_string(j) + std::to_string(i));
    }
  for (std::size_t i = 0; i < n; ++i) {
    IntCoords a = gram[i][i].to_int();
    if (a[0] % 2 != 0 || a[1] % 2 != 0)
      throw FormError(FormErrorKind::OddDiagonal, "diagonal entry " + std::to_string(i) + " is not in 2 O_F");
  }
  for (std::size_t k = 1; k <= n; ++k) {
    FMatrix M(gram.begin(), gram.begin() + static_cast<long>(k));
    for (auto& row : M) row.resize(k);
    FieldElement minor = supnorm::determinant(M);
    for (int s = 0; s < ctx.degree(); ++s)
      if (minor.sign(s) <= 0)
        throw FormError(FormErrorKind::NotTotallyPositive,
                        "leading minor of size " + std::to_string(k) + " is not positive at embedding " + std::to_string(s),
                        s, static_cast<int>(k));
  }
  QuadraticForm q;
  q.ctx_ = ctx;
  q.gram_ = gram;
  q.igram_ = to_omatrix(gram);
  q.det_ = supnorm::determinant(gram);
  q.level_ = compute_level(ctx, gram);
  return q;
}

QuadraticForm QuadraticForm::from_gram(const FieldContext& ctx, const OMatrix& gram) {
  return from_gram(ctx, to_fmatrix(ctx, gram));
}

QuadraticForm QuadraticForm::from_integers(const std::vector<std::vector<std::int64_t>>& gram) {
  OMatrix m;
  for (const auto& row : gram) {
    OVector r;
    for (auto v : row) r.push_back({v, 0});
    m.push_back(std::move(r));
  }
  return from_gram(FieldContext::rationals(), m);
}

IntCoords QuadraticForm::value(const OVector& x) const {
  const std::size_t n = igram_.size();
  IntCoords s{0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    IntCoords half{igram_[i][i][0] / 2, igram_[i][i][1] / 2};
    s = ctx_.add(s, ctx_.mul(half, ctx_.mul(x[i], x[i])));
    for (std::size_t j = i + 1; j < n; ++j) s = ctx_.add(s, ctx_.mul(igram_[i][j], ctx_.mul(x[i], x[j])));
  }
  return s;
}

IntCoords QuadraticForm::polar(const OVector& x, const OVector& y) const {
  const std::size_t n = igram_.size();
  IntCoords s{0, 0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s = ctx_.add(s, ctx_.mul(igram_[i][j], ctx_.mul(x[i], y[j])));
  return s;
}

std::vector<std::vector<long double>> QuadraticForm::embedded_gram(int sigma) const {
  const std::size_t n = igram_.size();
  std::vector<std::vector<long double>> M(n, std::vector<long double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M[i][j] = ctx_.embed(igram_[i][j], sigma);
  return M;
}

QuadraticForm QuadraticForm::transformed(const OMatrix& U) const {
  FMatrix Uf = to_fmatrix(ctx_, U);
  return from_gram(ctx_, multiply(transpose(Uf), multiply(gram_, Uf)));
}

void quasi_diagonal(const QuadraticForm& q, std::vector<FieldElement>& h, FMatrix& c) {
  const auto& ctx = q.context();
  const std::size_t n = static_cast<std::size_t>(q.rank());
  FieldElement half(ctx, Rational(1, 2));
  h.assign(n, FieldElement(ctx, Rational(0)));
  c = fmatrix_identity(ctx, n);
  for (std::size_t i = 0; i < n; ++i) {
    FieldElement hi = half * q.gram()[i][i];
    for (std::size_t k = 0; k < i; ++k) hi -= h[k] * c[k][i] * c[k][i];
    h[i] = hi;
    for (std::size_t j = i + 1; j < n; ++j) {
      FieldElement m = half * q.gram()[i][j];
      for (std::size_t k = 0; k < i; ++k) m -= h[k] * c[k][i] * c[k][j];
      c[i][j] = m / hi;
    }
  }
}

ReducedForm reduce_form(const QuadraticForm& q) {
  const auto& ctx = q.context();
  const int d = ctx.degree();
  const std::size_t n = static_cast<std::size_t>(q.rank());
  const auto& A = q.int_gram();

  // Z-basis e_i * omega^l of O_F^n and the integral trace form on it.
  const std::size_t m = n * static_cast<std::size_t>(d);
  std::vector<IntCoords> wpow = {IntCoords{1, 0}, IntCoords{0, 1}};
  ZMatrix G(m, ZVector(m));
  for (std::size_t i = 0; i < n; ++i)
    for (int l = 0; l < d; ++l)
      for (std::size_t j = 0; j < n; ++j)
        for (int k = 0; k < d; ++k)
          G[i * d + l][j * d + k] = ctx.trace(ctx.mul(A[i][j], ctx.mul(wpow[l], wpow[k])));
  ZMatrix T = lll_gram(G);

  std::vector<OVector> candidates;
  for (const auto& row : T) {
    OVector v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = {to_int64(row[i * d]), d == 2 ? to_int64(row[i * d + 1]) : 0};
    candidates.push_back(std::move(v));
  }

  std::vector<OVector> chosen;
  auto greedy = [&](const std::vector<OVector>& pool) {
    for (const auto& v : pool) {
      if (chosen.size() == n) break;
      auto trial = chosen;
      trial.push_back(v);
      if (spans_direct_summand(ctx, trial)) chosen = std::move(trial);
    }
  };
  std::string method = "lll";
  greedy(candidates);
  if (chosen.size() < n) {
    std::vector<OVector> pairs;
    for (std::size_t a = 0; a < candidates.size(); ++a)
      for (std::size_t b = a + 1; b < candidates.size(); ++b) {
        OVector s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = ctx.add(candidates[a][i], candidates[b][i]);
        pairs.push_back(std::move(s));
      }
    greedy(pairs);
    method = "lll-pairs";
  }
  OMatrix U(n, OVector(n, IntCoords{0, 0}));
  if (chosen.size() < n) {
    method = "identity";
    for (std::size_t i = 0; i < n; ++i) U[i][i] = {1, 0};
  } else {
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) U[r][c] = chosen[c][r];
  }

  ReducedForm out;
  out.source = q;
  out.method = method;
  QuadraticForm red = q.transformed(U);

  if (d == 2) {
    // Balance the conjugates of each h_j with squares of the fundamental unit.
    std::vector<FieldElement> h;
    FMatrix c;
    quasi_diagonal(red, h, c);
    IntCoords eps = ctx.fundamental_unit();
    IntCoords eps_inv = ctx.conj(eps);
    if (ctx.fundamental_unit_norm() < 0) eps_inv = {-eps_inv[0], -eps_inv[1]};
    long double le = std::log(ctx.embed(eps, 0));
    bool changed = false;
    for (std::size_t j = 0; j < n; ++j) {
      long double delta = std::log(h[j].embedding(0)) - std::log(h[j].embedding(1));
      auto k = static_cast<int>(std::llround(-delta / (4 * le)));
      if (k == 0) continue;
      IntCoords u = k > 0 ? ctx.pow(eps, k) : ctx.pow(eps_inv, -k);
      for (std::size_t r = 0; r < n; ++r) U[r][j] = ctx.mul(U[r][j], u);
      changed = true;
    }
    if (changed) red = q.transformed(U);
  }

  out.transform = U;
  out.reduced = red;
  quasi_diagonal(red, out.h, out.c);
  out.balanced_determinant = FieldElement(ctx, Rational(1));
  for (const auto& hj : out.h) out.balanced_determinant *= hj;

  SizeReport& sr = out.size;
  sr.h1_min = INFINITY;
  for (int s = 0; s < d; ++s) {
    auto M = red.embedded_gram(s);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) sr.offdiag_over_diag = std::max(sr.offdiag_over_diag, absl(M[i][j]) / M[j][j]);
    for (std::size_t j = 0; j < n; ++j) {
      long double hj = out.h[j].embedding(s);
      sr.diag_over_h = std::max(sr.diag_over_h, M[j][j] / hj);
      sr.h_over_diag = std::max(sr.h_over_diag, hj / M[j][j]);
      if (j + 1 < n) sr.chain = std::max(sr.chain, hj / out.h[j + 1].embedding(s));
    }
    sr.h1_min = std::min(sr.h1_min, out.h[0].embedding(s));
  }
  for (std::size_t j = 0; j < n; ++j) {
    long double lo = INFINITY, hi = 0;
    for (int s = 0; s < d; ++s) {
      lo = std::min(lo, out.h[j].embedding(s));
      hi = std::max(hi, out.h[j].embedding(s));
    }
    sr.conjugate_spread = std::max(sr.conjugate_spread, hi / lo);
  }
  return out;
}

std::vector<EigenRange> eigen_range(const QuadraticForm& q) {
  std::vector<EigenRange> out;
  const int n = q.rank();
  for (int s = 0; s < q.context().degree(); ++s) {
    auto M = q.embedded_gram(s);
    Eigen::MatrixXd E(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) E(i, j) = static_cast<double>(M[i][j]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(E, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    out.push_back({ev.minCoeff(), ev.maxCoeff(), q.determinant().embedding(s)});
  }
  return out;
}

std::vector<EigenRange> eigen_range(const ReducedForm& r) { return eigen_range(r.reduced); }

SubdeterminantReport subdeterminant_check(const ReducedForm& r) {
  const auto& q = r.reduced;
  const std::size_t n = static_cast<std::size_t>(q.rank());
  if (n < 2) throw std::invalid_argument("subdeterminant_check needs rank >= 2");
  FMatrix sub(q.gram().begin(), q.gram().begin() + static_cast<long>(n - 1));
  for (auto& row : sub) row.resize(n - 1);
  SubdeterminantReport rep;
  rep.lhs = abs(determinant(sub).norm());
  rep.lhs_half = 1;
  for (std::size_t j = 0; j + 1 < n; ++j) rep.lhs_half *= abs(r.h[j].norm());
  rep.rhs = abs(q.determinant().norm()) / Rational(q.level_norm());
  rep.ratio = rep.lhs / rep.rhs;
  rep.holds = rep.lhs >= rep.rhs;
  return rep;
}

}  // namespace supnorm
