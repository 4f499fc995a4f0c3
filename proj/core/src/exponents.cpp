#include "supnorm/exponents.hpp"

#include <algorithm>
#include <stdexcept>

namespace supnorm {

namespace {

Rational rmin(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }

// Affine atoms of f_i in beta; f_i is built from them by min and max.
std::vector<Affine> atoms(const Rational& k, int i) {
  return {{0, 0},
          {0, Rational(i) * k / 2},
          {0, Rational(i) * k},
          {Rational(-1, 4), Rational(-1, 2)},
          {Rational(1, 2), Rational(3 * i) * k / 2},
          {Rational(3, 11), Rational(12 * i) * k / 11}};
}

std::vector<Rational> breakpoints(const Rational& kappa, int i) {
  auto a = atoms(kappa, i);
  std::vector<Rational> out;
  for (std::size_t p = 0; p < a.size(); ++p)
    for (std::size_t q = p + 1; q < a.size(); ++q) {
      if (a[p].slope == a[q].slope) continue;
      Rational x = (a[q].intercept - a[p].intercept) / (a[p].slope - a[q].slope);
      if (x < 0) out.push_back(x);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Affine through(const Rational& kappa, int i, const Rational& x0, const Rational& x1) {
  Rational v0 = profile_eval(kappa, i, x0), v1 = profile_eval(kappa, i, x1);
  Rational s = (v1 - v0) / (x1 - x0);
  return {s, v0 - s * x0};
}

}  // namespace

Rational profile_eval(const Rational& kappa, int i, const Rational& beta) {
  if (i < 1 || i > 4) throw std::invalid_argument("profile index must be in 1..4");
  Rational k = kappa;
  Rational base = 1 + k * (Rational(std::min(i, 2)) - 2 - Rational(i, 2));
  Rational m = rmin(0, Rational(-1, 2) - beta / 4);
  Rational inner1 = rmin(Rational(i) * k / 2, Rational(3 * i) * k / 2 + beta / 2);
  Rational inner2 = rmin(Rational(12 * i) * k / 11 + Rational(3, 11) * beta, Rational(i) * k);
  return base + m + rmax(0, rmax(inner1, inner2));
}

std::vector<ProfilePiece> profile_pieces(const Rational& kappa, int i) {
  auto bp = breakpoints(kappa, i);
  std::vector<ProfilePiece> out;
  if (bp.empty()) {
    out.push_back({i, std::nullopt, 0, through(kappa, i, -2, -1)});
    return out;
  }
  out.push_back({i, std::nullopt, bp.front(), through(kappa, i, bp.front() - 2, bp.front() - 1)});
  for (std::size_t k = 0; k < bp.size(); ++k) {
    Rational lo = bp[k], hi = k + 1 < bp.size() ? bp[k + 1] : Rational(0);
    if (lo == hi) continue;
    out.push_back({i, lo, hi, through(kappa, i, lo, (lo + hi) / 2)});
  }
  return out;
}

ProfileOptimum optimize_profile(const Rational& kappa) {
  ProfileOptimum opt;
  std::vector<std::vector<ProfilePiece>> all;
  bool first = true;
  for (int i = 1; i <= 4; ++i) {
    auto pieces = profile_pieces(kappa, i);
    if (pieces.front().f.slope < 0) throw std::domain_error("profile unbounded as beta -> -infinity");
    Rational best = pieces.front().f.at(pieces.front().hi);
    for (const auto& p : pieces) {
      best = rmax(best, p.f.at(p.hi));
      if (p.lo) best = rmax(best, p.f.at(*p.lo));
    }
    opt.max_by_i.push_back(best);
    if (first || best > opt.value) opt.value = best;
    first = false;
    all.push_back(std::move(pieces));
  }
  for (int i = 1; i <= 4; ++i) {
    std::vector<ArgmaxSet> sets;
    for (const auto& p : all[i - 1]) {
      if (p.f.slope == 0) {
        if (p.f.intercept == opt.value) sets.push_back({i, p.lo, p.hi});
        continue;
      }
      if (p.f.at(p.hi) == opt.value) sets.push_back({i, p.hi, p.hi});
      if (p.lo && p.f.at(*p.lo) == opt.value) sets.push_back({i, *p.lo, *p.lo});
    }
    std::sort(sets.begin(), sets.end(), [](const ArgmaxSet& a, const ArgmaxSet& b) {
      if (!a.lo || !b.lo) return !a.lo && b.lo;
      return *a.lo < *b.lo;
    });
    std::vector<ArgmaxSet> merged;
    for (const auto& s : sets) {
      if (!merged.empty() && s.lo && *s.lo <= merged.back().hi) {
        merged.back().hi = rmax(merged.back().hi, s.hi);
        continue;
      }
      merged.push_back(s);
    }
    opt.argmax.insert(opt.argmax.end(), merged.begin(), merged.end());
  }
  return opt;
}

std::vector<PolylinePoint> figure_polyline(const Rational& kappa, const Rational& beta_min) {
  std::vector<PolylinePoint> out;
  for (int i = 1; i <= 4; ++i) {
    std::vector<Rational> xs = {beta_min};
    for (const auto& b : breakpoints(kappa, i))
      if (b > beta_min) xs.push_back(b);
    xs.push_back(0);
    for (const auto& x : xs) out.push_back({i, x, profile_eval(kappa, i, x)});
  }
  return out;
}

Rational polyline_value(const std::vector<PolylinePoint>& pts, int i, const Rational& beta) {
  const PolylinePoint* prev = nullptr;
  for (const auto& p : pts) {
    if (p.i != i) continue;
    if (p.beta == beta) return p.value;
    if (prev && prev->beta < beta && beta < p.beta)
      return prev->value + (p.value - prev->value) * (beta - prev->beta) / (p.beta - prev->beta);
    prev = &p;
  }
  throw std::out_of_range("beta outside the polyline");
}

KappaScan kappa_scan(const Rational& lo, const Rational& hi, const Rational& step) {
  if (step <= 0 || hi < lo) throw std::invalid_argument("bad kappa range");
  KappaScan s;
  for (Rational k = lo; k <= hi; k += step) {
    Rational v = optimize_profile(k).value;
    s.values.emplace_back(k, v);
    if (s.values.size() == 1 || v < s.best_value) {
      s.best_value = v;
      s.best_kappa = k;
    }
  }
  int hits = 0;
  for (const auto& [k, v] : s.values)
    if (v == s.best_value) ++hits;
  s.unique = hits == 1;
  return s;
}

BalanceResult balance_exponents(const std::vector<std::pair<Rational, Rational>>& terms) {
  if (terms.empty()) throw std::invalid_argument("balance_exponents: no terms");
  BalanceResult r;
  bool any_nonneg = false;
  for (const auto& [a, b] : terms)
    if (a >= 0) any_nonneg = true;
  if (!any_nonneg) return r;  // every term decreases without bound
  auto g = [&](const Rational& t) {
    Rational m = terms[0].first * t + terms[0].second;
    for (const auto& [a, b] : terms) m = rmax(m, a * t + b);
    return m;
  };
  std::vector<Rational> cand = {0};
  for (std::size_t p = 0; p < terms.size(); ++p)
    for (std::size_t q = p + 1; q < terms.size(); ++q) {
      if (terms[p].first == terms[q].first) continue;
      Rational t = (terms[q].second - terms[p].second) / (terms[p].first - terms[q].first);
      if (t > 0) cand.push_back(t);
    }
  std::sort(cand.begin(), cand.end());
  r.bounded = true;
  r.t = cand[0];
  r.value = g(cand[0]);
  for (const auto& t : cand) {
    Rational v = g(t);
    if (v < r.value) {
      r.value = v;
      r.t = t;
    }
  }
  for (std::size_t k = 0; k < terms.size(); ++k)
    if (terms[k].first * r.t + terms[k].second == r.value) r.active.push_back(static_cast<int>(k));
  return r;
}

HybridResult hybrid_interpolate(const Rational& s_volume, const Rational& s_eigen) {
  if (s_volume <= 0 || s_eigen <= 0) throw std::invalid_argument("savings must be positive");
  HybridResult h;
  h.theta = s_volume / (s_volume + 2 * s_eigen);
  h.saving = (1 - h.theta) * s_volume;
  return h;
}

}  // namespace supnorm
