#include "supnorm/int_lattice.hpp"

#include <stdexcept>
#include <utility>

namespace supnorm {

namespace {

BigInt mod(const BigInt& a, std::int64_t p) {
  BigInt r = a % p;
  if (r < 0) r += p;
  return r;
}

BigInt inverse_mod(const BigInt& a, std::int64_t p) {
  // p is prime: a^(p-2)
  BigInt r = 1, x = mod(a, p);
  std::int64_t e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * x % p;
    x = x * x % p;
    e >>= 1;
  }
  return r;
}

}  // namespace

ZMatrix hnf_rows(ZMatrix rows, std::size_t dim) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < dim && r < rows.size(); ++c) {
    // Euclid on column c among rows r..end.
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c]))) best = i;
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        BigInt q = rows[i][c] / rows[r][c];
        for (std::size_t k = 0; k < dim; ++k) rows[i][k] -= q * rows[r][k];
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][c] == 0) continue;
    if (rows[r][c] < 0)
      for (auto& v : rows[r]) v = -v;
    for (std::size_t i = 0; i < r; ++i) {
      BigInt q = floor_div(rows[i][c], rows[r][c]);
      if (q != 0)
        for (std::size_t k = 0; k < dim; ++k) rows[i][k] -= q * rows[r][k];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

BigInt lattice_index(const ZMatrix& gens, std::size_t dim) {
  ZMatrix h = hnf_rows(gens, dim);
  if (h.size() != dim) throw std::domain_error("lattice is not of full rank");
  BigInt idx = 1;
  for (std::size_t i = 0; i < dim; ++i) idx *= h[i][i];
  return abs(idx);
}

ZMatrix lll_gram(const ZMatrix& G0, const Rational& delta) {
  const std::size_t n = G0.size();
  ZMatrix G = G0;
  ZMatrix T(n, ZVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) T[i][i] = 1;
  if (n < 2) return T;

  std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
  std::vector<Rational> B(n);
  auto gram_schmidt = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        Rational s = Rational(G[i][j]);
        for (std::size_t k = 0; k < j; ++k) s -= mu[j][k] * mu[i][k] * B[k];
        mu[i][j] = s / B[j];
      }
      Rational s = Rational(G[i][i]);
      for (std::size_t k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * B[k];
      if (s <= 0) throw std::domain_error("LLL: Gram matrix is not positive definite");
      B[i] = s;
    }
  };
  auto subtract = [&](std::size_t k, std::size_t j, const BigInt& r) {
    for (std::size_t i = 0; i < n; ++i) T[k][i] -= r * T[j][i];
    for (std::size_t i = 0; i < n; ++i) G[k][i] -= r * G[j][i];
    for (std::size_t i = 0; i < n; ++i) G[i][k] -= r * G[i][j];
  };
  auto swap_rows = [&](std::size_t a, std::size_t b) {
    std::swap(T[a], T[b]);
    std::swap(G[a], G[b]);
    for (auto& row : G) std::swap(row[a], row[b]);
  };

  gram_schmidt();
  std::size_t k = 1;
  int guard = 0;
  while (k < n) {
    if (++guard > 100000) throw std::runtime_error("LLL did not terminate");
    for (std::size_t jj = k; jj-- > 0;) {
      if (abs(mu[k][jj]) > Rational(1, 2)) {
        subtract(k, jj, round_of(mu[k][jj]));
        gram_schmidt();
      }
    }
    if (B[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
      ++k;
    } else {
      swap_rows(k, k - 1);
      gram_schmidt();
      k = k > 1 ? k - 1 : 1;
    }
  }
  return T;
}

ZMatrix nullspace_mod_p(const ZMatrix& K, std::int64_t p, std::size_t dim) {
  ZMatrix M;
  for (const auto& row : K) {
    ZVector r(dim);
    for (std::size_t j = 0; j < dim; ++j) r[j] = mod(row[j], p);
    M.push_back(std::move(r));
  }
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < dim && r < M.size(); ++c) {
    std::size_t piv = M.size();
    for (std::size_t i = r; i < M.size(); ++i)
      if (M[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv == M.size()) continue;
    std::swap(M[r], M[piv]);
    BigInt inv = inverse_mod(M[r][c], p);
    for (auto& v : M[r]) v = v * inv % p;
    for (std::size_t i = 0; i < M.size(); ++i) {
      if (i == r || M[i][c] == 0) continue;
      BigInt f = M[i][c];
      for (std::size_t k = 0; k < dim; ++k) M[i][k] = mod(M[i][k] - f * M[r][k], p);
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  std::vector<bool> is_pivot(dim, false);
  for (int c : pivot_col) is_pivot[c] = true;
  ZMatrix basis;
  for (std::size_t f = 0; f < dim; ++f) {
    if (is_pivot[f]) continue;
    ZVector v(dim, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = mod(-M[i][f], p);
    basis.push_back(std::move(v));
  }
  return basis;
}

ZMatrix congruence_lattice(const ZMatrix& K, std::int64_t p, std::size_t dim) {
  ZMatrix gens = nullspace_mod_p(K, p, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    ZVector v(dim, 0);
    v[i] = p;
    gens.push_back(std::move(v));
  }
  return hnf_rows(std::move(gens), dim);
}

BigInt determinant(const ZMatrix& M) {
  const std::size_t n = M.size();
  std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A[i][j] = Rational(M[i][j]);
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && A[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(A[piv], A[c]);
      det = -det;
    }
    det *= A[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      Rational f = A[i][c] / A[c][c];
      if (f == 0) continue;
      for (std::size_t k = c; k < n; ++k) A[i][k] -= f * A[c][k];
    }
  }
  return boost::multiprecision::numerator(det);
}

ZMatrix transpose(const ZMatrix& M) {
  if (M.empty()) return {};
  ZMatrix T(M[0].size(), ZVector(M.size()));
  for (std::size_t i = 0; i < M.size(); ++i)
    for (std::size_t j = 0; j < M[i].size(); ++j) T[j][i] = M[i][j];
  return T;
}

ZMatrix multiply(const ZMatrix& A, const ZMatrix& B) {
  ZMatrix C(A.size(), ZVector(B.empty() ? 0 : B[0].size(), 0));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t k = 0; k < B.size(); ++k)
      if (A[i][k] != 0)
        for (std::size_t j = 0; j < B[k].size(); ++j) C[i][j] += A[i][k] * B[k][j];
  return C;
}

}  // namespace supnorm
