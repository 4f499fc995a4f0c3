#pragma once

#include "supnorm/quadratic_forms.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace supnorm {

// Coordinates in the standard basis 1, i, j, ij.
struct Quaternion {
  std::array<FieldElement, 4> x;
};

// The algebra (a, b | F): i^2 = a, j^2 = b, ij = -ji.  Both a and b must be
// totally negative.
class QuaternionAlgebra {
 public:
  QuaternionAlgebra() = default;
  QuaternionAlgebra(const FieldContext& ctx, const FieldElement& a, const FieldElement& b);
  static QuaternionAlgebra over_q(std::int64_t a, std::int64_t b);

  const FieldContext& context() const { return ctx_; }
  const FieldElement& a() const { return a_; }
  const FieldElement& b() const { return b_; }

  Quaternion make(const Rational& x0, const Rational& x1, const Rational& x2, const Rational& x3) const;
  Quaternion one() const { return make(1, 0, 0, 0); }
  Quaternion mul(const Quaternion& p, const Quaternion& q) const;
  Quaternion add(const Quaternion& p, const Quaternion& q) const;
  Quaternion scale(const FieldElement& c, const Quaternion& q) const;
  Quaternion conj(const Quaternion& q) const;
  FieldElement trace(const Quaternion& q) const;
  FieldElement norm(const Quaternion& q) const;
  // <p, q>_B = tr(p q^*)/2
  FieldElement inner(const Quaternion& p, const Quaternion& q) const;

 private:
  FieldContext ctx_;
  FieldElement a_, b_;
};

enum class OrderErrorKind { Dependent, MissingOne, NotClosed, UnsupportedPrime, NotCoprime, BadLevel };

class OrderError : public std::runtime_error {
 public:
  OrderError(OrderErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  OrderErrorKind kind() const { return kind_; }

 private:
  OrderErrorKind kind_;
};

struct ClassNumberProxy {
  std::int64_t ramified = 0;  // p
  std::int64_t level = 1;     // N
  Rational value;             // N(D_B N) prod_{p|D_B}(1 - 1/p) prod_{q|N}(1 - 1/q)^{-1}
};

struct QuaternionOrder {
  std::string name;
  QuaternionAlgebra algebra;
  std::array<Quaternion, 4> basis;
  // table[i][j] = coordinates of basis[i]*basis[j] in the basis.
  std::array<std::array<OVector, 4>, 4> table;
  QuadraticForm norm_form;   // Gram tr(g_i g_j^*), so Q(x) = nr(x)
  FieldElement disc;         // det of the norm-form Gram
  BigInt reduced_disc_norm;  // N(disc^*) = N(level of the norm form)
  bool disc_identity = false;  // |N(disc)| == N(disc^*)^2
  std::optional<ClassNumberProxy> class_number;

  // Quaternion with the given O_F coordinates in the order basis.
  Quaternion element(const OVector& x) const;
  // Coordinates of q in the order basis (exact, possibly non-integral).
  FVector coordinates(const Quaternion& q) const;
};

QuaternionOrder order_from_basis(const QuaternionAlgebra& alg, const std::array<Quaternion, 4>& basis,
                                 const std::string& name = "");

// Over Q: the maximal order of the algebra ramified at {p, infinity} for
// p in {2, 3, 5, 7, 13}, refined to an Eichler order of squarefree level N.
QuaternionOrder builtin_eichler_order(std::int64_t p, std::int64_t N);

// 1, i, j, ij in (-1, -1 | F).
QuaternionOrder lipschitz_order(const FieldContext& ctx = FieldContext::rationals());

// Norm form split as y0^2 + ternary.  With y = C x (x in order coordinates),
// y0 = tr/2 and (y1, y2, y3) are coordinates on the trace-zero sublattice O^0.
struct NormFormSplit {
  QuadraticForm quaternary;  // norm form in the order basis
  QuadraticForm ternary;     // Gram of O^0
  OMatrix trace_zero_basis;  // three vectors of O_F^4 in order coordinates
  FMatrix change;            // C, 4 x 4
  BigInt index;              // [O : O_F + O^0]
  bool gram_identity = false;  // C^t diag(2, A~) C == quaternary Gram
  std::array<std::array<std::array<long double, 4>, 4>, 2> change_embedded{};
};
NormFormSplit norm_form_split(const QuaternionOrder& order);

// A split whose quaternary form is literally diag(2) + ternary (C = identity).
NormFormSplit diagonal_split(const QuadraticForm& ternary);

std::string to_string(OrderErrorKind kind);

}  // namespace supnorm
