#include "supnorm/enumerator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace supnorm {

namespace {

constexpr long double kWiden = 1e-6L;
constexpr long double kSlack = 1e-9L;

std::int64_t ceil_ll(long double v) { return static_cast<std::int64_t>(std::ceil(v)); }
std::int64_t floor_ll(long double v) { return static_cast<std::int64_t>(std::floor(v)); }

long double widen_lo(long double v) { return v - kWiden * (1 + std::fabs(v)); }
long double widen_hi(long double v) { return v + kWiden * (1 + std::fabs(v)); }

}  // namespace

EllipsoidEnumerator::EllipsoidEnumerator(const QuadraticForm& q, std::vector<std::array<long double, 2>> shift)
    : n_(q.rank()), d_(q.context().degree()), shift_(std::move(shift)) {
  if (shift_.empty()) shift_.assign(n_, {0.0L, 0.0L});
  if (static_cast<int>(shift_.size()) != n_) throw std::invalid_argument("shift has wrong length");
  for (int s = 0; s < d_; ++s) omega_[s] = q.context().omega(s);
  diag_.assign(d_, std::vector<long double>(n_));
  upper_.assign(d_, std::vector<std::vector<long double>>(n_, std::vector<long double>(n_, 0.0L)));
  for (int s = 0; s < d_; ++s) {
    auto g = q.embedded_gram(s);
    // 1/2 x^t A x = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2
    for (int i = 0; i < n_; ++i) {
      long double di = g[i][i] / 2;
      for (int k = 0; k < i; ++k) di -= diag_[s][k] * upper_[s][k][i] * upper_[s][k][i];
      if (!(di > 0)) throw std::domain_error("embedded Gram is not positive definite");
      diag_[s][i] = di;
      for (int j = i + 1; j < n_; ++j) {
        long double v = g[i][j] / 2;
        for (int k = 0; k < i; ++k) v -= diag_[s][k] * upper_[s][k][i] * upper_[s][k][j];
        upper_[s][i][j] = v / di;
      }
    }
  }
}

void EllipsoidEnumerator::candidates(int i, const std::vector<long double>& center, const std::vector<long double>& budget,
                                     bool solve, std::vector<IntCoords>& out) const {
  out.clear();
  std::array<long double, 2> lo{}, hi{}, root{};
  for (int s = 0; s < d_; ++s) {
    long double b = budget[s];
    if (b < 0) return;
    root[s] = std::sqrt(b / diag_[s][i]);
    long double c = center[s] - shift_[i][s];
    lo[s] = widen_lo(c - root[s]);
    hi[s] = widen_hi(c + root[s]);
  }
  if (solve) {
    if (d_ == 1) {
      long double c = center[0] - shift_[i][0];
      std::int64_t a = std::llround(c - root[0]), b = std::llround(c + root[0]);
      out.push_back({a, 0});
      if (b != a) out.push_back({b, 0});
      return;
    }
    long double dw = omega_[0] - omega_[1];
    for (int e0 = -1; e0 <= 1; e0 += 2)
      for (int e1 = -1; e1 <= 1; e1 += 2) {
        long double v0 = center[0] - shift_[i][0] + e0 * root[0];
        long double v1 = center[1] - shift_[i][1] + e1 * root[1];
        long double bb = (v0 - v1) / dw;
        std::int64_t b = std::llround(bb);
        std::int64_t a = std::llround(v0 - b * omega_[0]);
        IntCoords x{a, b};
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
      }
    return;
  }
  if (d_ == 1) {
    for (std::int64_t a = ceil_ll(lo[0]); a <= floor_ll(hi[0]); ++a) out.push_back({a, 0});
    return;
  }
  long double dw = omega_[0] - omega_[1];
  std::int64_t bmin = ceil_ll((lo[0] - hi[1]) / dw), bmax = floor_ll((hi[0] - lo[1]) / dw);
  for (std::int64_t b = bmin; b <= bmax; ++b) {
    long double amin = std::max(lo[0] - b * omega_[0], lo[1] - b * omega_[1]);
    long double amax = std::min(hi[0] - b * omega_[0], hi[1] - b * omega_[1]);
    for (std::int64_t a = ceil_ll(amin); a <= floor_ll(amax); ++a) out.push_back({a, b});
  }
}

std::vector<IntCoords> EllipsoidEnumerator::outer_values(const std::vector<long double>& r, bool exact) const {
  std::vector<IntCoords> out;
  if (n_ == 0) return out;
  std::vector<long double> center(d_, 0.0L), budget(d_);
  for (int s = 0; s < d_; ++s) {
    budget[s] = r[s] * (1 + kSlack) + kSlack;
    if (r[s] < -kSlack * (1 + std::fabs(r[s]))) return out;
  }
  candidates(n_ - 1, center, budget, exact && n_ == 1, out);
  return out;
}

std::uint64_t EllipsoidEnumerator::search(const std::vector<long double>& r, bool exact, const IntCoords& outer,
                                          const std::function<void(const OVector&)>& leaf) const {
  OVector x(n_, IntCoords{0, 0});
  x[n_ - 1] = outer;
  if (n_ == 1) {
    leaf(x);
    return 0;
  }
  // z[s][j] = x_j^s + c_j^s for assigned coordinates.
  std::vector<std::vector<long double>> z(d_, std::vector<long double>(n_, 0.0L));
  std::vector<std::vector<long double>> budget(n_, std::vector<long double>(d_));
  std::vector<std::vector<long double>> center(n_, std::vector<long double>(d_, 0.0L));
  std::vector<std::vector<IntCoords>> cand(n_);
  std::uint64_t nodes = 0;

  auto assign = [&](int i, const IntCoords& v) {
    x[i] = v;
    for (int s = 0; s < d_; ++s) z[s][i] = v[0] + v[1] * omega_[s] + shift_[i][s];
  };
  // Budget and center for level i, given levels > i assigned.
  auto prepare = [&](int i) {
    for (int s = 0; s < d_; ++s) {
      long double prev = i + 1 == n_ - 1 ? r[s] * (1 + kSlack) + kSlack : budget[i + 1][s];
      long double t = z[s][i + 1] - center[i + 1][s];
      budget[i][s] = prev - diag_[s][i + 1] * t * t;
      long double c = 0;
      for (int j = i + 1; j < n_; ++j) c -= upper_[s][i][j] * z[s][j];
      center[i][s] = c;
    }
  };
  for (int s = 0; s < d_; ++s) center[n_ - 1][s] = 0;
  assign(n_ - 1, outer);

  std::function<void(int)> rec = [&](int i) {
    prepare(i);
    for (int s = 0; s < d_; ++s) {
      long double tol = kSlack * (1 + std::fabs(r[s]));
      if (budget[i][s] < -tol) return;
      if (budget[i][s] < 0) budget[i][s] = 0;
    }
    candidates(i, center[i], budget[i], exact && i == 0, cand[i]);
    for (const auto& v : cand[i]) {
      ++nodes;
      assign(i, v);
      if (i == 0)
        leaf(x);
      else
        rec(i - 1);
    }
  };
  rec(n_ - 2);
  return nodes;
}

}  // namespace supnorm
