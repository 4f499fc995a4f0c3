#pragma once

#include "supnorm/number_field.hpp"

#include <vector>

namespace supnorm {

using FVector = std::vector<FieldElement>;
using FMatrix = std::vector<FVector>;
using OVector = std::vector<IntCoords>;  // element of O_F^n
using OMatrix = std::vector<OVector>;

FMatrix fmatrix_zero(const FieldContext& ctx, std::size_t rows, std::size_t cols);
FMatrix fmatrix_identity(const FieldContext& ctx, std::size_t n);
FMatrix to_fmatrix(const FieldContext& ctx, const OMatrix& M);
OMatrix to_omatrix(const FMatrix& M);  // throws if an entry is not integral

FMatrix multiply(const FMatrix& A, const FMatrix& B);
FMatrix transpose(const FMatrix& A);
FieldElement determinant(const FMatrix& A);
FMatrix inverse(const FMatrix& A);  // throws std::domain_error if singular
// Solves A x = b.
FVector solve(const FMatrix& A, const FVector& b);

}  // namespace supnorm
