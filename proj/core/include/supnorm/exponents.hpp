#pragma once

#include "supnorm/rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace supnorm {

// 1 + k(min(i,2) - 2 - i/2) + min(0, -1/2 - b/4)
//   + max(0, min(ik/2, 3ik/2 + b/2), min(12ik/11 + 3b/11, ik))
Rational profile_eval(const Rational& kappa, int i, const Rational& beta);

struct Affine {
  Rational slope, intercept;
  Rational at(const Rational& x) const { return slope * x + intercept; }
};

// One linear piece on [lo, hi]; lo empty means -infinity.
struct ProfilePiece {
  int i = 0;
  std::optional<Rational> lo;
  Rational hi;
  Affine f;
};
// Pieces covering (-infinity, 0] in increasing order.
std::vector<ProfilePiece> profile_pieces(const Rational& kappa, int i);

struct ArgmaxSet {
  int i = 0;
  std::optional<Rational> lo;  // empty: unbounded below
  Rational hi;                 // lo == hi for a single point
};

struct ProfileOptimum {
  Rational value;
  std::vector<ArgmaxSet> argmax;
  std::vector<Rational> max_by_i;  // index i-1
};
// Maximum over i in 1..4 and beta <= 0.
ProfileOptimum optimize_profile(const Rational& kappa);

struct PolylinePoint {
  int i = 0;
  Rational beta, value;
};
// Vertices of each f_i on [beta_min, 0]: endpoints and all breakpoints.
std::vector<PolylinePoint> figure_polyline(const Rational& kappa, const Rational& beta_min = Rational(-3));
// Linear interpolation of the polyline of f_i at beta.
Rational polyline_value(const std::vector<PolylinePoint>& pts, int i, const Rational& beta);

struct KappaScan {
  std::vector<std::pair<Rational, Rational>> values;  // (kappa, max)
  Rational best_kappa, best_value;
  bool unique = true;
};
KappaScan kappa_scan(const Rational& lo, const Rational& hi, const Rational& step);

struct BalanceResult {
  bool bounded = false;
  Rational t, value;
  std::vector<int> active;
};
// Minimises max_i (a_i t + b_i) over t >= 0 for terms L^{a_i} V^{b_i}, L = V^t.
BalanceResult balance_exponents(const std::vector<std::pair<Rational, Rational>>& terms);

struct HybridResult {
  Rational theta, saving;
};
// theta = s_V / (s_V + 2 s_lambda), saving = (1 - theta) s_V.
HybridResult hybrid_interpolate(const Rational& s_volume, const Rational& s_eigen);

}  // namespace supnorm
