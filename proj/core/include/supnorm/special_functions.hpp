#pragma once

#include "supnorm/quaternion_orders.hpp"
#include "supnorm/rational.hpp"

#include <array>
#include <vector>

namespace supnorm {

// P_n^{(alpha, beta)}(t) by the three-term recurrence.
double jacobi_eval(int n, int alpha, int beta, double t);
// The same recurrence in exact arithmetic.
Rational jacobi_eval_exact(int n, int alpha, int beta, const Rational& t);
// Weighted L^2 norm: int_{-1}^{1} P^2 (1-t)^alpha (1+t)^beta dt.
Rational jacobi_norm_exact(int n, int alpha, int beta);

// |p_{m,l}(t)| = ((1+t)/2)^{|l|} |P_{m-|l|}^{(0,2|l|)}(t)|, requires |l| <= m, |t| <= 1.
double matrix_coeff(int m, int l, double t);
// min(1, ((|l|+1)/(m+1))^{1/2} (1-t^2)^{-1/4}), requires |t| < 1.
double decay_bound(int m, int l, double t);
double decay_margin(int m, int l, double t);
double product_coeff(const std::vector<int>& m, const std::vector<int>& l, const std::vector<double>& t);

// sin((m+1) theta) / ((m+1) sin theta) with t = cos theta.
double so4_character(int m, double t);
double so4_bound(int m, double t);  // min(1, 1/((m+1)(1-t^2)^{1/2}))

struct DecayRow {
  int m = 0, l = 0;
  double t = 0, coeff = 0, bound = 0, ratio = 0;
};
struct DecayScan {
  double max_ratio = 0;
  DecayRow argmax;
  std::vector<double> max_by_m;  // index m
};
// Grid 0 <= m <= m_max, 0 <= l <= m^{l_exponent}, t = -t_max + k * t_step.
// Rows are kept only when keep_rows is set.
DecayScan decay_scan(int m_max, double l_exponent, double t_max, double t_step, std::vector<DecayRow>* rows = nullptr);

// t_sigma = -1 + 2(<g,1>^2 + <g,x'>^2)/nr(g)^sigma for g in (a, b | F) and
// pure directions x' (coordinates on i, j, ij) with nr(x')^sigma = 1.
std::vector<double> t_parameter(const QuaternionAlgebra& alg, const Quaternion& g, const std::vector<std::array<double, 3>>& xprime);
// <x', g x' g^{-1}> computed by real quaternion arithmetic.
std::vector<double> t_parameter_rotation(const QuaternionAlgebra& alg, const Quaternion& g,
                                         const std::vector<std::array<double, 3>>& xprime);

}  // namespace supnorm
