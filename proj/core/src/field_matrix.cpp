#include "supnorm/field_matrix.hpp"

#include <stdexcept>

namespace supnorm {

FMatrix fmatrix_zero(const FieldContext& ctx, std::size_t rows, std::size_t cols) {
  return FMatrix(rows, FVector(cols, FieldElement(ctx, Rational(0))));
}

FMatrix fmatrix_identity(const FieldContext& ctx, std::size_t n) {
  FMatrix I = fmatrix_zero(ctx, n, n);
  for (std::size_t i = 0; i < n; ++i) I[i][i] = FieldElement(ctx, Rational(1));
  return I;
}

FMatrix to_fmatrix(const FieldContext& ctx, const OMatrix& M) {
  FMatrix out;
  for (const auto& row : M) {
    FVector r;
    for (const auto& x : row) r.emplace_back(ctx, x);
    out.push_back(std::move(r));
  }
  return out;
}

OMatrix to_omatrix(const FMatrix& M) {
  OMatrix out;
  for (const auto& row : M) {
    OVector r;
    for (const auto& x : row) r.push_back(x.to_int());
    out.push_back(std::move(r));
  }
  return out;
}

FMatrix multiply(const FMatrix& A, const FMatrix& B) {
  if (A.empty()) return {};
  const auto& ctx = A[0][0].context();
  FMatrix C = fmatrix_zero(ctx, A.size(), B.empty() ? 0 : B[0].size());
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t k = 0; k < B.size(); ++k) {
      if (A[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < B[k].size(); ++j) C[i][j] += A[i][k] * B[k][j];
    }
  return C;
}

FMatrix transpose(const FMatrix& A) {
  if (A.empty()) return {};
  FMatrix T(A[0].size(), FVector(A.size()));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A[i].size(); ++j) T[j][i] = A[i][j];
  return T;
}

FieldElement determinant(const FMatrix& A0) {
  const std::size_t n = A0.size();
  const auto& ctx = A0[0][0].context();
  FMatrix A = A0;
  FieldElement det(ctx, Rational(1));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && A[piv][c].is_zero()) ++piv;
    if (piv == n) return FieldElement(ctx, Rational(0));
    if (piv != c) {
      std::swap(A[piv], A[c]);
      det = -det;
    }
    det *= A[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (A[i][c].is_zero()) continue;
      FieldElement f = A[i][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[i][k] -= f * A[c][k];
    }
  }
  return det;
}

FMatrix inverse(const FMatrix& A0) {
  const std::size_t n = A0.size();
  const auto& ctx = A0[0][0].context();
  FMatrix A = A0;
  FMatrix I = fmatrix_identity(ctx, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && A[piv][c].is_zero()) ++piv;
    if (piv == n) throw std::domain_error("matrix over F is singular");
    std::swap(A[piv], A[c]);
    std::swap(I[piv], I[c]);
    FieldElement inv = FieldElement(ctx, Rational(1)) / A[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      A[c][k] *= inv;
      I[c][k] *= inv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || A[i][c].is_zero()) continue;
      FieldElement f = A[i][c];
      for (std::size_t k = 0; k < n; ++k) {
        A[i][k] -= f * A[c][k];
        I[i][k] -= f * I[c][k];
      }
    }
  }
  return I;
}

FVector solve(const FMatrix& A, const FVector& b) {
  FMatrix inv = inverse(A);
  FVector x;
  for (std::size_t i = 0; i < inv.size(); ++i) {
    FieldElement s(b[0].context(), Rational(0));
    for (std::size_t k = 0; k < b.size(); ++k) s += inv[i][k] * b[k];
    x.push_back(s);
  }
  return x;
}

}  // namespace supnorm
