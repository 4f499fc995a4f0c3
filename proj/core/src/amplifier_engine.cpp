#include "supnorm/amplifier_engine.hpp"

#include "supnorm/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace supnorm {

std::vector<IntCoords> AmplifierSets::elements(int i) const {
  std::vector<IntCoords> out;
  for (const auto& e : sets.at(i - 1)) out.push_back(e.value);
  return out;
}

AmplifierSets build_sets(const FieldContext& ctx, const Rational& L, const std::vector<std::int64_t>& exclusions) {
  if (L < 1) throw std::invalid_argument("L must be at least 1");
  AmplifierSets s;
  s.ctx = ctx;
  s.L = L;
  s.exclusions = exclusions;
  auto primes = [&](const Rational& lo, const Rational& hi) {
    std::int64_t a = to_int64(ceil_of(lo)), b = to_int64(floor_of(hi));
    if (b < a) return std::vector<IntCoords>{};
    return principal_primes_in_cone(ctx, a, b, exclusions);
  };
  auto p1 = primes(L, 2 * L);
  auto p2 = primes(L * L, 4 * L * L);
  for (const auto& p : p1) s.sets[0].push_back({p, {p}});
  for (const auto& p : p2) s.sets[1].push_back({p, {p}});
  for (const auto& a : p1)
    for (const auto& b : p1) s.sets[2].push_back({ctx.mul(a, ctx.mul(b, b)), {a, b}});
  for (const auto& p : p2) s.sets[3].push_back({ctx.mul(p, p), {p}});
  auto key = [&](const AmplifierElement& e) {
    return std::make_tuple(std::llabs(ctx.norm(e.value)), ctx.embed(e.value, 0), e.factors);
  };
  std::stable_sort(s.sets[2].begin(), s.sets[2].end(), [&](const auto& x, const auto& y) { return key(x) < key(y); });
  return s;
}

nlohmann::json to_json(const AmplifierSets& s) {
  nlohmann::json j;
  j["field"] = s.ctx.tag();
  j["L"] = to_string(s.L);
  j["exclusions"] = s.exclusions;
  auto sets = nlohmann::json::array();
  auto sizes = nlohmann::json::array();
  for (const auto& set : s.sets) {
    auto arr = nlohmann::json::array();
    for (const auto& e : set) arr.push_back({{"value", to_string(s.ctx, e.value)}, {"norm", s.ctx.norm(e.value)}});
    sets.push_back(arr);
    sizes.push_back(set.size());
  }
  j["sets"] = sets;
  j["sizes"] = sizes;
  return j;
}

std::string to_string(CoeffMode m) {
  switch (m) {
    case CoeffMode::Matrix: return "matrix";
    case CoeffMode::Character: return "character";
    case CoeffMode::Trivial: return "trivial";
  }
  return "?";
}

CoeffMode coeff_mode_from_string(const std::string& s) {
  if (s == "matrix") return CoeffMode::Matrix;
  if (s == "character") return CoeffMode::Character;
  if (s == "trivial") return CoeffMode::Trivial;
  throw std::invalid_argument("unknown coefficient mode: " + s);
}

namespace {

struct WeightAcc {
  std::uint64_t count = 0;
  double weighted = 0;
  void merge(const WeightAcc& o) {
    count += o.count;
    weighted += o.weighted;
  }
};

}  // namespace

GeometricReport geometric_side(const GeometricQuery& q, const CountOptions& opt) {
  const auto& ctx = q.split.ternary.context();
  const int d = ctx.degree();
  if (q.split.quaternary.rank() != 4 || q.split.ternary.rank() != 3 || !q.split.gram_identity)
    throw std::invalid_argument("norm form is not of split shape y0^2 + ternary");
  if (static_cast<int>(q.m.size()) != d || static_cast<int>(q.l.size()) != d)
    throw std::invalid_argument("need one (m, l) per embedding");
  for (int s = 0; s < d; ++s)
    if (q.m[s] < 0 || std::abs(q.l[s]) > q.m[s]) throw std::invalid_argument("need |l| <= m");
  validate_directions(q.split, q.directions);
  GeometricReport r;
  r.sets = build_sets(ctx, q.L, q.exclusions);
  std::vector<IntCoords> targets;
  std::vector<int> owner;
  for (int i = 1; i <= 4; ++i)
    for (const auto& e : r.sets.elements(i)) {
      targets.push_back(e);
      owner.push_back(i);
    }
  SplitEvaluator ev(q.split, q.directions);
  RepresentationEngine eng(q.split.quaternary, opt);
  EnumStats st;
  std::vector<WeightAcc> acc;
  if (q.mode == CoeffMode::Trivial) {
    auto counts = eng.counts(targets, &st);
    for (auto c : counts) acc.push_back({c, static_cast<double>(c)});
  } else {
    acc = eng.accumulate<WeightAcc>(
        targets,
        [&](WeightAcc& a, const OVector& x) {
          thread_local std::vector<SplitValues> sv;
          ev.evaluate(x, sv);
          IntCoords v = eng.form().value(x);
          double w = 1;
          for (int s = 0; s < d; ++s) {
            long double ell = ctx.embed(v, s);
            double t = static_cast<double>(-1 + 2 * (sv[s].y0sq + sv[s].inner_sq) / ell);
            t = std::clamp(t, -1.0, 1.0);
            if (q.mode == CoeffMode::Matrix)
              w *= matrix_coeff(q.m[s], q.l[s], t);
            else
              w *= std::fabs(so4_character(q.m[s], t));
          }
          ++a.count;
          a.weighted += w;
        },
        &st);
  }
  r.nodes = st.nodes;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    r.terms.push_back({owner[k], targets[k], acc[k].count, acc[k].weighted});
    r.S_count[owner[k] - 1] += acc[k].count;
    r.S[owner[k] - 1] += acc[k].weighted;
  }
  double dim = 1;
  for (int s = 0; s < d; ++s) dim *= q.m[s] + 1;
  r.prefactor = q.mode == CoeffMode::Character ? dim * dim : dim;
  double L = static_cast<double>(to_long_double(q.L));
  double inner = 1 / L;
  for (int i = 1; i <= 4; ++i) inner += std::pow(L, -2.0 - i / 2.0) * r.S[i - 1];
  r.B = r.prefactor * inner;
  r.sqrtB = std::sqrt(r.B);
  return r;
}

nlohmann::json to_json(const GeometricReport& r) {
  nlohmann::json j;
  j["sets"] = to_json(r.sets);
  auto terms = nlohmann::json::array();
  for (const auto& t : r.terms)
    terms.push_back({{"set", t.set}, {"ell", to_string(r.sets.ctx, t.ell)}, {"count", t.count}, {"weighted", t.weighted}});
  j["terms"] = terms;
  j["S_count"] = r.S_count;
  j["S"] = r.S;
  j["prefactor"] = r.prefactor;
  j["B"] = r.B;
  j["sqrtB"] = r.sqrtB;
  j["nodes"] = r.nodes;
  return j;
}

}  // namespace supnorm
