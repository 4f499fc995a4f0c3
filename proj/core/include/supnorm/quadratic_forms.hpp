#pragma once

#include "supnorm/field_matrix.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace supnorm {

enum class FormErrorKind { NotSquare, NotSymmetric, NotIntegral, OddDiagonal, NotTotallyPositive };

class FormError : public std::runtime_error {
 public:
  FormError(FormErrorKind kind, const std::string& what, int sigma = -1, int minor = -1)
      : std::runtime_error(what), kind_(kind), sigma_(sigma), minor_(minor) {}
  FormErrorKind kind() const { return kind_; }
  int embedding() const { return sigma_; }  // failing embedding for NotTotallyPositive
  int minor() const { return minor_; }      // size of the failing leading minor

 private:
  FormErrorKind kind_;
  int sigma_;
  int minor_;
};

// Q(x) = 1/2 x^t A x with A symmetric over O_F and diagonal in 2 O_F.
class QuadraticForm {
 public:
  QuadraticForm() = default;
  static QuadraticForm from_gram(const FieldContext& ctx, const FMatrix& gram);
  static QuadraticForm from_gram(const FieldContext& ctx, const OMatrix& gram);
  // Rational entries over Q, e.g. {{2,1},{1,2}}.
  static QuadraticForm from_integers(const std::vector<std::vector<std::int64_t>>& gram);

  const FieldContext& context() const { return ctx_; }
  int rank() const { return static_cast<int>(gram_.size()); }
  const FMatrix& gram() const { return gram_; }
  const OMatrix& int_gram() const { return igram_; }
  const FieldElement& determinant() const { return det_; }
  // Norm of the level ideal n, the inverse of the ideal generated by Q(O^#).
  const BigInt& level_norm() const { return level_; }

  IntCoords value(const OVector& x) const;
  // x^t A y = 2 <x, y>
  IntCoords polar(const OVector& x, const OVector& y) const;
  std::vector<std::vector<long double>> embedded_gram(int sigma) const;
  // U^t A U, where the columns of U are the new basis vectors.
  QuadraticForm transformed(const OMatrix& U) const;

 private:
  FieldContext ctx_;
  FMatrix gram_;
  OMatrix igram_;
  FieldElement det_;
  BigInt level_ = 1;
};

struct SizeReport {
  long double offdiag_over_diag = 0;   // max |a_ij| / a_jj over i != j and sigma
  long double diag_over_h = 0;         // max a_jj / h_j
  long double h_over_diag = 0;         // max h_j / a_jj
  long double conjugate_spread = 1;    // max_j max_sigma h_j / min_sigma h_j
  long double chain = 0;               // max_j max_sigma h_j / h_{j+1}
  long double h1_min = 0;              // min_sigma h_1
};

struct ReducedForm {
  QuadraticForm source;
  OMatrix transform;  // U, columns = reduced basis
  QuadraticForm reduced;
  // Q(Ux) = sum_j h_j (x_j + sum_{i>j} c_ji x_i)^2
  std::vector<FieldElement> h;
  FMatrix c;  // upper unit triangular
  FieldElement balanced_determinant;  // prod h_j = det(A'/2)
  SizeReport size;
  std::string method;  // "lll", "lll-pairs" or "identity"
};

ReducedForm reduce_form(const QuadraticForm& q);

// Quasi-diagonal data of q in its given basis (no basis change).
void quasi_diagonal(const QuadraticForm& q, std::vector<FieldElement>& h, FMatrix& c);

struct EigenRange {
  long double lambda_min = 0;
  long double lambda_max = 0;
  long double det = 0;  // Delta^sigma of the reduced Gram
};
std::vector<EigenRange> eigen_range(const ReducedForm& r);
std::vector<EigenRange> eigen_range(const QuadraticForm& q);

struct SubdeterminantReport {
  Rational lhs;       // N(det of the leading (n-1) block of A')
  Rational lhs_half;  // prod_{j<n} N(h_j)
  Rational rhs;       // |N(Delta)| / N(level)
  Rational ratio;     // lhs / rhs
  bool holds = false; // lhs >= rhs
};
SubdeterminantReport subdeterminant_check(const ReducedForm& r);

std::string to_string(FormErrorKind kind);

}  // namespace supnorm
