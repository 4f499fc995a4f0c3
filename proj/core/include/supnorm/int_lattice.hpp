#pragma once

#include "supnorm/rational.hpp"

#include <cstdint>
#include <vector>

namespace supnorm {

using ZVector = std::vector<BigInt>;
using ZMatrix = std::vector<ZVector>;  // row major

// Row-style Hermite normal form of the lattice spanned by the rows of gens
// (each of length dim).  Returns the nonzero rows, upper triangular with
// positive pivots.
ZMatrix hnf_rows(ZMatrix gens, std::size_t dim);

// Index [Z^dim : L] of the lattice spanned by gens; throws if L is not of full rank.
BigInt lattice_index(const ZMatrix& gens, std::size_t dim);

// Exact LLL reduction of the positive definite Gram matrix G (delta = 0.99 by default).
// Returns T whose rows are the reduced basis vectors in the original coordinates,
// so the reduced Gram is T G T^t.
ZMatrix lll_gram(const ZMatrix& G, const Rational& delta = Rational(99, 100));

// Basis of the nullspace of K (rows of length dim) over Z/pZ, p prime; entries in [0, p).
ZMatrix nullspace_mod_p(const ZMatrix& K, std::int64_t p, std::size_t dim);

// Basis (HNF rows) of {z in Z^dim : K z = 0 mod p}, p prime.
ZMatrix congruence_lattice(const ZMatrix& K, std::int64_t p, std::size_t dim);

BigInt determinant(const ZMatrix& M);
ZMatrix transpose(const ZMatrix& M);
ZMatrix multiply(const ZMatrix& A, const ZMatrix& B);

}  // namespace supnorm
