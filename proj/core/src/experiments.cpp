#include "supnorm/experiments.hpp"

#include "supnorm/exponents.hpp"
#include "supnorm/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace supnorm {

// ---------------------------------------------------------------------------
// corpus

std::vector<CorpusEntry> corpus() {
  return {
      {"lipschitz", "order", "Q", 4, true, "Z<1, i, j, ij> in (-1, -1 | Q)"},
      {"hurwitz", "order", "Q", 4, true, "maximal order of (-1, -1 | Q)"},
      {"eichler-2-3", "order", "Q", 4, true, "Eichler order of level 3 in the algebra ramified at 2"},
      {"eichler-3-1", "order", "Q", 4, true, "maximal order of the algebra ramified at 3"},
      {"ternary-2I3", "form", "Q", 3, false, "x^2 + y^2 + z^2"},
      {"hurwitz-trace-zero", "form", "Q", 3, false, "trace-zero sublattice of the Hurwitz order"},
      {"qsqrt2-2I4", "form", "Qsqrt2", 4, true, "sum of four squares over Q(sqrt 2)"},
      {"qsqrt2-2I3", "form", "Qsqrt2", 3, false, "sum of three squares over Q(sqrt 2)"},
      {"qsqrt5-binary", "form", "Qsqrt5", 2, false, "Gram [[2, w], [w, 2]] over Q(sqrt 5)"},
  };
}

const CorpusEntry& corpus_entry(const std::string& name) {
  static const auto entries = corpus();
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw std::invalid_argument("unknown corpus entry: " + name);
}

namespace {

bool parse_pair(const std::string& s, std::int64_t& p, std::int64_t& N) {
  std::size_t dash = s.find('-');
  if (dash == std::string::npos) return false;
  try {
    std::size_t a = 0, b = 0;
    p = std::stoll(s.substr(0, dash), &a);
    N = std::stoll(s.substr(dash + 1), &b);
    return a == dash && b == s.size() - dash - 1;
  } catch (const std::exception&) {
    return false;
  }
}

QuadraticForm scaled_identity(const FieldContext& ctx, int n) {
  OMatrix A(n, OVector(n, IntCoords{0, 0}));
  for (int i = 0; i < n; ++i) A[i][i] = {2, 0};
  return QuadraticForm::from_gram(ctx, A);
}

}  // namespace

bool is_builtin_order(const std::string& name) {
  if (name == "lipschitz" || name == "hurwitz") return true;
  std::int64_t p = 0, N = 0;
  if (name.rfind("maximal-", 0) == 0) {
    try {
      std::size_t pos = 0;
      p = std::stoll(name.substr(8), &pos);
      return pos == name.size() - 8;
    } catch (const std::exception&) {
      return false;
    }
  }
  return name.rfind("eichler-", 0) == 0 && parse_pair(name.substr(8), p, N);
}

QuaternionOrder builtin_order(const std::string& name) {
  if (name == "lipschitz") return lipschitz_order();
  if (name == "hurwitz") return builtin_eichler_order(2, 1);
  std::int64_t p = 0, N = 0;
  if (name.rfind("maximal-", 0) == 0) return builtin_eichler_order(std::stoll(name.substr(8)), 1);
  if (name.rfind("eichler-", 0) == 0 && parse_pair(name.substr(8), p, N)) return builtin_eichler_order(p, N);
  throw std::invalid_argument("unknown builtin order: " + name);
}

QuadraticForm builtin_form(const std::string& name) {
  if (is_builtin_order(name)) return builtin_order(name).norm_form;
  if (name == "ternary-2I3") return scaled_identity(FieldContext::rationals(), 3);
  if (name == "hurwitz-trace-zero") return norm_form_split(builtin_order("hurwitz")).ternary;
  if (name == "qsqrt2-2I4") return scaled_identity(FieldContext::quadratic(2), 4);
  if (name == "qsqrt2-2I3") return scaled_identity(FieldContext::quadratic(2), 3);
  if (name == "qsqrt5-binary") {
    FieldContext ctx = FieldContext::quadratic(5);
    return QuadraticForm::from_gram(ctx, OMatrix{{IntCoords{2, 0}, IntCoords{0, 1}}, {IntCoords{0, 1}, IntCoords{2, 0}}});
  }
  throw std::invalid_argument("unknown builtin form: " + name);
}

NormFormSplit builtin_split(const std::string& name) {
  if (is_builtin_order(name)) return norm_form_split(builtin_order(name));
  if (name == "qsqrt2-2I4") return diagonal_split(builtin_form("qsqrt2-2I3"));
  QuadraticForm q = builtin_form(name);
  if (q.rank() == 3) return diagonal_split(q);
  throw std::invalid_argument(name + " has no y0^2 + ternary split");
}

std::vector<std::int64_t> builtin_exclusions(const std::string& name) {
  if (is_builtin_order(name)) return prime_factors(to_int64(builtin_order(name).reduced_disc_norm));
  return prime_factors(to_int64(builtin_form(name).level_norm()));
}

// ---------------------------------------------------------------------------
// config

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    c.values_[key] = value;
  }
  return c;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void Config::merge(const Config& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::require(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing required key: " + key);
  return it->second;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  if (!has(key)) return fallback;
  std::string v = get(key);
  try {
    std::size_t pos = 0;
    long long r = std::stoll(v, &pos);
    if (pos != v.size()) throw ConfigError("");
    return r;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  std::string v = get(key);
  try {
    return static_cast<double>(to_long_double(parse_rational(v)));
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

Rational Config::get_rational(const std::string& key, const Rational& fallback) const {
  if (!has(key)) return fallback;
  std::string v = get(key);
  try {
    return parse_rational(v);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a rational, got '" + v + "'");
  }
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  std::vector<std::string> out;
  if (!has(key)) return out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------------------
// lemma scans

std::vector<IntCoords> sample_targets(const FieldContext& ctx, std::int64_t full_upto, std::int64_t nmax, int samples) {
  auto all = totally_positive_in_cone(ctx, 1, std::max(full_upto, nmax));
  std::vector<IntCoords> out, rest;
  for (const auto& x : all) (std::llabs(ctx.norm(x)) <= full_upto ? out : rest).push_back(x);
  if (samples <= 0 || rest.empty()) return out;
  std::size_t n = rest.size(), k = std::min<std::size_t>(samples, n);
  // evenly spaced, always including the largest
  for (std::size_t j = 1; j <= k; ++j) out.push_back(rest[(j * n) / k - 1]);
  return out;
}

std::string to_string(LemmaKind k) {
  switch (k) {
    case LemmaKind::TernaryUniform: return "ternary-uniform";
    case LemmaKind::QuaternaryUniform: return "quaternary-uniform";
    case LemmaKind::Averaged: return "averaged";
    case LemmaKind::NearTorus: return "near-torus";
    case LemmaKind::NearEquator: return "near-equator";
  }
  return "?";
}

LemmaKind lemma_kind_from_string(const std::string& s) {
  for (auto k : all_lemma_kinds())
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown lemma kind: " + s);
}

std::vector<LemmaKind> all_lemma_kinds() {
  return {LemmaKind::TernaryUniform, LemmaKind::QuaternaryUniform, LemmaKind::Averaged, LemmaKind::NearTorus,
          LemmaKind::NearEquator};
}

namespace {

long double abs_norm_ld(const FieldContext& ctx, const IntCoords& x) {
  return static_cast<long double>(std::llabs(ctx.norm(x)));
}

std::vector<std::string> applicable(LemmaKind kind, const std::vector<std::string>& requested) {
  std::vector<std::string> out;
  for (const auto& e : corpus()) {
    if (!requested.empty() && std::find(requested.begin(), requested.end(), e.name) == requested.end()) continue;
    bool ok = false;
    switch (kind) {
      case LemmaKind::TernaryUniform: ok = e.rank == 3; break;
      case LemmaKind::QuaternaryUniform:
      case LemmaKind::Averaged: ok = e.rank == 4; break;
      case LemmaKind::NearTorus:
      case LemmaKind::NearEquator: ok = e.split; break;
    }
    if (ok) out.push_back(e.name);
  }
  return out;
}

void push_row(LemmaScan& s, const std::string& form, const std::string& stratum, const std::string& query,
              std::uint64_t count, long double bound) {
  LemmaRow r{form, stratum, query, count, bound, bound > 0 ? static_cast<long double>(count) / bound : 0};
  s.rows.push_back(r);
}

void uniform_rows(LemmaScan& s, const std::string& name, int rank, const LemmaScanOptions& opt) {
  QuadraticForm q = builtin_form(name);
  if (q.rank() != rank) return;
  const auto& ctx = q.context();
  auto targets = sample_targets(ctx, opt.full_upto, opt.nmax, opt.samples);
  auto counts = RepresentationEngine(q, opt.count).counts(targets);
  for (std::size_t k = 0; k < targets.size(); ++k) {
    long double N = abs_norm_ld(ctx, targets[k]);
    push_row(s, name, "", to_string(ctx, targets[k]), counts[k], rank == 3 ? std::sqrt(N) : N);
  }
}

void averaged_rows(LemmaScan& s, const std::string& name, const LemmaScanOptions& opt) {
  QuadraticForm q = builtin_form(name);
  const auto R = opt.averaged_radius;
  auto add = [&](AveragedMode mode, const Rational& y, const Rational& y2, const std::string& label) {
    try {
      auto rep = averaged_sum(q, mode, y, y2, opt.count);
      push_row(s, name, "", label, rep.count, rep.bound);
    } catch (const WitnessError&) {
      s.skipped.push_back(name + " " + label + ": no h_1 witness");
    }
  };
  for (std::int64_t y : {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000})
    if (y <= R) add(AveragedMode::E3, y, 1, "e3 y=" + std::to_string(y));
  for (std::int64_t y : {1, 2, 3, 5, 8, 13, 21, 34, 55})
    if (y * y <= R) add(AveragedMode::E1, y, 1, "e1 y=" + std::to_string(y));
  for (auto [y1, y2] : std::vector<std::pair<std::int64_t, std::int64_t>>{{2, 2}, {5, 3}, {10, 3}, {4, 5}, {10, 10}, {40, 5}})
    if (y1 * y2 * y2 <= R)
      add(AveragedMode::E2, y1, y2, "e2 y1=" + std::to_string(y1) + " y2=" + std::to_string(y2));
}

// A fixed generic direction, normalized per embedding.
std::vector<Vec3> generic_directions(const NormFormSplit& split) {
  std::vector<Vec3> dirs;
  for (int s = 0; s < split.ternary.context().degree(); ++s) dirs.push_back(unit_direction(split.ternary, s, {1, 2, 3}));
  return dirs;
}

struct ConstrainedAcc {
  std::uint64_t total = 0;
  std::vector<std::uint64_t> torus, equator;  // per eta
  void merge(const ConstrainedAcc& o) {
    total += o.total;
    if (torus.empty()) torus.assign(o.torus.size(), 0);
    if (equator.empty()) equator.assign(o.equator.size(), 0);
    for (std::size_t k = 0; k < o.torus.size(); ++k) torus[k] += o.torus[k];
    for (std::size_t k = 0; k < o.equator.size(); ++k) equator[k] += o.equator[k];
  }
};

// Quaternary uniform counts and both constrained counts from one enumeration.
void quaternary_rows(LemmaScan* uniform, LemmaScan* torus, LemmaScan* equator, const std::string& name,
                     const LemmaScanOptions& opt) {
  if (!torus && !equator) {
    uniform_rows(*uniform, name, 4, opt);
    return;
  }
  NormFormSplit split = builtin_split(name);
  const auto& ctx = split.ternary.context();
  const int d = ctx.degree();
  const auto& grid = constrained_eta_grid();
  std::vector<std::vector<long double>> etas;
  for (const auto& e : grid) etas.emplace_back(d, to_long_double(e));
  SplitEvaluator ev(split, generic_directions(split));
  RepresentationEngine eng(split.quaternary, opt.count);
  auto targets = sample_targets(ctx, opt.full_upto, opt.nmax, opt.samples);
  auto accs = eng.accumulate<ConstrainedAcc>(targets, [&](ConstrainedAcc& a, const OVector& x) {
    thread_local std::vector<SplitValues> sv;
    thread_local std::vector<long double> ell;
    ev.evaluate(x, sv);
    IntCoords v = eng.form().value(x);
    ell.resize(d);
    for (int s = 0; s < d; ++s) ell[s] = ctx.embed(v, s);
    a.torus.resize(etas.size());
    a.equator.resize(etas.size());
    ++a.total;
    for (std::size_t k = 0; k < etas.size(); ++k) {
      if (torus && constraint_admits(ConstraintMode::NearTorus, sv, etas[k], ell)) ++a.torus[k];
      if (equator && constraint_admits(ConstraintMode::NearEquator, sv, etas[k], ell)) ++a.equator[k];
    }
  });
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto& ell = targets[t];
    auto& a = accs[t];
    a.torus.resize(etas.size());
    a.equator.resize(etas.size());
    long double N = abs_norm_ld(ctx, ell);
    std::string label = to_string(ctx, ell);
    if (uniform) push_row(*uniform, name, "", label, a.total, N);
    for (std::size_t k = 0; k < etas.size(); ++k) {
      long double Ne = std::pow(etas[k][0], d);
      auto sum = [](const std::vector<BoundTerm>& terms) {
        long double b = 0;
        for (const auto& term : terms) b += term.value;
        return b;
      };
      std::string stratum = "eta=" + to_string(grid[k]);
      if (torus)
        push_row(*torus, name, stratum, label, a.torus[k], sum(constrained_bound_terms(ConstraintMode::NearTorus, N, Ne)));
      if (equator)
        push_row(*equator, name, stratum, label, a.equator[k],
                 sum(constrained_bound_terms(ConstraintMode::NearEquator, N, Ne)));
    }
  }
}

long double median(std::vector<long double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

void finalize(LemmaScan& s) {
  std::map<std::string, std::vector<long double>> nonzero;
  std::map<std::string, std::size_t> index;
  for (const auto& r : s.rows) {
    auto [it, fresh] = index.emplace(r.stratum, s.strata.size());
    if (fresh) s.strata.push_back(LemmaStratum{r.stratum});
    auto& st = s.strata[it->second];
    ++st.rows;
    st.max_ratio = std::max(st.max_ratio, r.ratio);
    s.max_ratio = std::max(s.max_ratio, r.ratio);
    if (r.count > 0) nonzero[r.stratum].push_back(r.ratio);
  }
  for (auto& st : s.strata) {
    st.median_ratio = median(nonzero[st.name]);
    st.guard_ok = st.max_ratio <= 10 * st.median_ratio;
    s.guard_ok = s.guard_ok && st.guard_ok;
  }
}

}  // namespace

const std::vector<Rational>& constrained_eta_grid() {
  static const std::vector<Rational> g = [] {
    std::vector<Rational> v;
    for (int k = 7; k >= 0; --k) v.emplace_back(1, 1 << k);
    return v;
  }();
  return g;
}

std::vector<LemmaScan> lemma_scans(const std::vector<LemmaKind>& kinds, const LemmaScanOptions& opt) {
  std::map<LemmaKind, LemmaScan> scans;
  for (auto k : kinds) scans[k].kind = k;
  auto get = [&](LemmaKind k) -> LemmaScan* {
    auto it = scans.find(k);
    return it == scans.end() ? nullptr : &it->second;
  };
  if (auto* s = get(LemmaKind::TernaryUniform))
    for (const auto& name : applicable(LemmaKind::TernaryUniform, opt.forms)) uniform_rows(*s, name, 3, opt);
  if (auto* s = get(LemmaKind::Averaged))
    for (const auto& name : applicable(LemmaKind::Averaged, opt.forms)) averaged_rows(*s, name, opt);
  LemmaScan* uniform = get(LemmaKind::QuaternaryUniform);
  LemmaScan* torus = get(LemmaKind::NearTorus);
  LemmaScan* equator = get(LemmaKind::NearEquator);
  if (uniform || torus || equator) {
    auto has = [](const std::vector<std::string>& v, const std::string& x) {
      return std::find(v.begin(), v.end(), x) != v.end();
    };
    auto u_names = applicable(LemmaKind::QuaternaryUniform, opt.forms);
    auto s_names = applicable(LemmaKind::NearTorus, opt.forms);
    for (const auto& e : corpus()) {
      bool u = uniform && has(u_names, e.name), sp = has(s_names, e.name);
      LemmaScan* t = torus && sp ? torus : nullptr;
      LemmaScan* q = equator && sp ? equator : nullptr;
      if (u || t || q) quaternary_rows(u ? uniform : nullptr, t, q, e.name, opt);
    }
  }
  std::vector<LemmaScan> out;
  for (auto k : kinds) {
    finalize(scans[k]);
    out.push_back(scans[k]);
  }
  return out;
}

LemmaScan lemma_scan(LemmaKind kind, const LemmaScanOptions& opt) { return lemma_scans({kind}, opt)[0]; }

nlohmann::json to_json(const LemmaScan& s, bool with_rows) {
  auto strata = nlohmann::json::array();
  for (const auto& st : s.strata)
    strata.push_back({{"stratum", st.name},
                      {"rows", st.rows},
                      {"max_ratio", static_cast<double>(st.max_ratio)},
                      {"median_ratio", static_cast<double>(st.median_ratio)},
                      {"guard_ok", st.guard_ok}});
  nlohmann::json j = {{"kind", to_string(s.kind)},
                      {"rows", s.rows.size()},
                      {"max_ratio", static_cast<double>(s.max_ratio)},
                      {"strata", strata},
                      {"guard_ok", s.guard_ok},
                      {"skipped", s.skipped}};
  if (with_rows) {
    auto rows = nlohmann::json::array();
    for (const auto& r : s.rows)
      rows.push_back({{"form", r.form},
                      {"stratum", r.stratum},
                      {"query", r.query},
                      {"count", r.count},
                      {"bound", static_cast<double>(r.bound)},
                      {"ratio", static_cast<double>(r.ratio)}});
    j["table"] = rows;
  }
  return j;
}

// ---------------------------------------------------------------------------
// commands

namespace {

struct Source {
  std::string name;
  std::optional<QuaternionOrder> order;
  QuadraticForm form;
  std::vector<std::int64_t> exclusions;
};

Source load_source(const Config& cfg) {
  Source s;
  int given = cfg.has("builtin") + cfg.has("order") + cfg.has("form");
  if (given != 1) throw ConfigError("give exactly one of builtin, order, form");
  try {
    if (cfg.has("builtin")) {
      s.name = cfg.get("builtin");
      if (is_builtin_order(s.name)) {
        s.order = builtin_order(s.name);
        s.form = s.order->norm_form;
      } else {
        corpus_entry(s.name);
        s.form = builtin_form(s.name);
      }
      s.exclusions = builtin_exclusions(s.name);
    } else if (cfg.has("order")) {
      s.order = order_from_json(read_json_file(cfg.get("order")));
      s.name = s.order->name;
      s.form = s.order->norm_form;
      s.exclusions = prime_factors(to_int64(s.order->reduced_disc_norm));
    } else {
      s.form = form_from_json(read_json_file(cfg.get("form")));
      s.name = cfg.get("form");
      s.exclusions = prime_factors(to_int64(s.form.level_norm()));
    }
  } catch (const JsonIoError& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

NormFormSplit source_split(const Source& s, const Config& cfg) {
  if (s.order) return norm_form_split(*s.order);
  if (cfg.has("builtin")) {
    try {
      return builtin_split(s.name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (s.form.rank() == 3) return diagonal_split(s.form);
  throw ConfigError("the source has no y0^2 + ternary split");
}

CountOptions count_options(const Config& cfg) {
  CountOptions o;
  o.threads = static_cast<int>(cfg.get_int("threads", 1));
  if (o.threads < 1) throw ConfigError("threads must be positive");
  std::string t = cfg.get("timing", "false");
  o.timing = t == "1" || t == "true";
  std::string st = cfg.get("strategy", "auto");
  if (st == "auto") o.strategy = CountStrategy::Auto;
  else if (st == "search") o.strategy = CountStrategy::Search;
  else if (st == "blocks") o.strategy = CountStrategy::Blocks;
  else throw ConfigError("strategy must be auto, search or blocks");
  o.h1_threshold = cfg.get_double("h1_threshold", 4);
  return o;
}

IntCoords element_key(const FieldContext& ctx, const Config& cfg, const std::string& key, const std::string& fallback) {
  try {
    FieldElement x = parse_element(ctx, cfg.get(key, fallback));
    if (!x.is_integral()) throw ConfigError(key + " must be an algebraic integer");
    return x.to_int();
  } catch (const JsonIoError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

std::vector<long double> per_embedding(const Config& cfg, const std::string& key, int d, long double fallback) {
  std::vector<long double> out;
  for (const auto& v : cfg.get_list(key)) {
    try {
      out.push_back(to_long_double(parse_rational(v)));
    } catch (const std::exception&) {
      throw ConfigError(key + ": bad number '" + v + "'");
    }
  }
  if (out.empty()) out.assign(d, fallback);
  if (out.size() == 1) out.assign(d, out[0]);
  if (static_cast<int>(out.size()) != d) throw ConfigError(key + ": need one value per embedding");
  return out;
}

std::vector<int> per_embedding_int(const Config& cfg, const std::string& key, int d) {
  std::vector<int> out;
  for (auto v : per_embedding(cfg, key, d, 0)) {
    if (v != std::floor(v)) throw ConfigError(key + ": expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

// "x,y,z" for every embedding or "x,y,z;x,y,z" per embedding.
std::vector<Vec3> directions(const NormFormSplit& split, const Config& cfg) {
  const int d = split.ternary.context().degree();
  std::string text = cfg.get("direction", "0,0,1");
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) parts.push_back(part);
  if (parts.size() == 1) parts.assign(d, parts[0]);
  if (static_cast<int>(parts.size()) != d) throw ConfigError("direction: need one vector per embedding");
  std::vector<Vec3> out;
  for (int s = 0; s < d; ++s) {
    Config tmp;
    tmp.set("v", parts[s]);
    auto v = per_embedding(tmp, "v", 3, 0);
    try {
      out.push_back(unit_direction(split.ternary, s, {v[0], v[1], v[2]}));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("direction: ") + e.what());
    }
  }
  return out;
}

std::ofstream open_out(const Config& cfg, const std::string& file) {
  std::filesystem::path dir = cfg.get("out");
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / file);
  if (!f) throw ConfigError("cannot write " + (dir / file).string());
  return f;
}

nlohmann::json elements_json(const FieldContext& ctx, const std::vector<FieldElement>& v) {
  auto j = nlohmann::json::array();
  for (const auto& x : v) j.push_back(x.to_string());
  (void)ctx;
  return j;
}

nlohmann::json matrix_json(const FMatrix& M) {
  auto j = nlohmann::json::array();
  for (const auto& row : M) {
    auto r = nlohmann::json::array();
    for (const auto& x : row) r.push_back(x.to_string());
    j.push_back(r);
  }
  return j;
}

int cmd_corpus(const Config&, std::ostream& out) {
  for (const auto& e : corpus())
    out << nlohmann::json{{"name", e.name},
                          {"kind", e.kind},
                          {"field", e.field},
                          {"rank", e.rank},
                          {"split", e.split},
                          {"description", e.description}}
                .dump()
        << '\n';
  return kExitOk;
}

int cmd_reduce(const Config& cfg, std::ostream& out, std::ostream& err) {
  Source src = load_source(cfg);
  const auto& q = src.form;
  const auto& ctx = q.context();
  ReducedForm r = reduce_form(q);
  const int n = q.rank();
  // exact checks
  FMatrix U = to_fmatrix(ctx, r.transform);
  FMatrix lhs = multiply(transpose(U), multiply(q.gram(), U));
  bool identity = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(lhs[i][j] == r.reduced.gram()[i][j])) identity = false;
  FieldElement detU = determinant(U);
  bool unit = detU.is_integral() && std::llabs(ctx.norm(detU.to_int())) == 1;
  FieldElement prod_h(ctx, 1);
  for (const auto& h : r.h) prod_h = prod_h * h;
  FMatrix half = r.reduced.gram();
  for (auto& row : half)
    for (auto& x : row) x = x * FieldElement(ctx, Rational(1, 2));
  bool product = prod_h == determinant(half);
  std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.get_int("seed", 1)));
  std::uniform_int_distribution<std::int64_t> coord(-20, 20);
  const int samples = static_cast<int>(cfg.get_int("samples", 1000));
  bool values = true;
  for (int k = 0; k < samples && values; ++k) {
    OVector x(n);
    for (auto& c : x) c = {coord(rng), ctx.degree() == 2 ? coord(rng) : 0};
    OVector Ux(n, IntCoords{0, 0});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Ux[i] = ctx.add(Ux[i], ctx.mul(r.transform[i][j], x[j]));
    values = r.reduced.value(x) == q.value(Ux);
  }
  auto sub = subdeterminant_check(r);
  auto eig = eigen_range(r);
  auto eigj = nlohmann::json::array();
  for (const auto& e : eig)
    eigj.push_back({{"lambda_min", static_cast<double>(e.lambda_min)},
                    {"lambda_max", static_cast<double>(e.lambda_max)},
                    {"det", static_cast<double>(e.det)}});
  nlohmann::json j = {
      {"source", src.name},
      {"field", ctx.tag()},
      {"rank", n},
      {"method", r.method},
      {"gram", matrix_json(q.gram())},
      {"reduced", matrix_json(r.reduced.gram())},
      {"transform", matrix_json(U)},
      {"h", elements_json(ctx, r.h)},
      {"c", matrix_json(r.c)},
      {"size",
       {{"offdiag_over_diag", static_cast<double>(r.size.offdiag_over_diag)},
        {"diag_over_h", static_cast<double>(r.size.diag_over_h)},
        {"h_over_diag", static_cast<double>(r.size.h_over_diag)},
        {"conjugate_spread", static_cast<double>(r.size.conjugate_spread)},
        {"chain", static_cast<double>(r.size.chain)},
        {"h1_min", static_cast<double>(r.size.h1_min)}}},
      {"eigen", eigj},
      {"subdeterminant",
       {{"lhs", to_string(sub.lhs)}, {"rhs", to_string(sub.rhs)}, {"ratio", to_string(sub.ratio)}, {"holds", sub.holds}}},
      {"checks", {{"identity", identity}, {"det_unit", unit}, {"product_h", product}, {"values", values}}}};
  out << j.dump() << '\n';
  if (!(identity && unit && product && values)) {
    err << "reduce: invariant violated\n";
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_count(const Config& cfg, std::ostream& out, std::ostream& err) {
  CountOptions opt = count_options(cfg);
  std::string mode = cfg.get("mode", "rep");
  CountReport rep;
  if (mode == "binary") {
    BinaryPolynomial p;
    try {
      p.ctx = FieldContext::from_tag(cfg.get("field", "Q"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    p.a = element_key(p.ctx, cfg, "a", "1");
    p.b = element_key(p.ctx, cfg, "b", "0");
    p.c = element_key(p.ctx, cfg, "c", "1");
    p.d = element_key(p.ctx, cfg, "d", "0");
    p.e = element_key(p.ctx, cfg, "e", "0");
    p.f = element_key(p.ctx, cfg, "f", "0");
    IntCoords ell = element_key(p.ctx, cfg, "ell", "0");
    try {
      rep = binary_inhomogeneous_count(p, ell, opt);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    out << to_json(rep).dump() << '\n';
    return kExitOk;
  }
  Source src = load_source(cfg);
  const auto& ctx = src.form.context();
  if (mode == "rep") {
    IntCoords ell = element_key(ctx, cfg, "ell", "1");
    rep = rep_count(src.form, ell, opt);
    out << to_json(rep).dump() << '\n';
    if (ell != IntCoords{0, 0} && rep.count % 2 != 0) {
      err << "count: odd number of representations of a nonzero target\n";
      return kExitViolation;
    }
    return kExitOk;
  }
  if (mode == "e3" || mode == "e2" || mode == "e1") {
    AveragedMode m = mode == "e3" ? AveragedMode::E3 : mode == "e2" ? AveragedMode::E2 : AveragedMode::E1;
    try {
      rep = averaged_sum(src.form, m, cfg.get_rational("y", 1), cfg.get_rational("y2", 1), opt);
    } catch (const WitnessError& e) {
      err << "count: " << e.what() << '\n';
      return kExitViolation;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    out << to_json(rep).dump() << '\n';
    return kExitOk;
  }
  ConstraintMode cm;
  try {
    cm = constraint_mode_from_string(mode);
  } catch (const std::invalid_argument&) {
    throw ConfigError("unknown count mode: " + mode);
  }
  ConstrainedCountQuery q;
  q.split = source_split(src, cfg);
  q.ell = element_key(ctx, cfg, "ell", "1");
  q.directions = directions(q.split, cfg);
  q.eta = per_embedding(cfg, "eta", ctx.degree(), 1);
  q.mode = cm;
  try {
    rep = constrained_count(q, opt);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  out << to_json(rep).dump() << '\n';
  return kExitOk;
}

int cmd_lemma_check(const Config& cfg, std::ostream& out, std::ostream& err) {
  LemmaScanOptions opt;
  opt.count = count_options(cfg);
  opt.full_upto = cfg.get_int("full", opt.full_upto);
  opt.nmax = cfg.get_int("nmax", opt.nmax);
  opt.samples = static_cast<int>(cfg.get_int("samples", opt.samples));
  opt.averaged_radius = cfg.get_int("averaged_radius", opt.averaged_radius);
  opt.forms = cfg.get_list("forms");
  for (const auto& f : opt.forms) {
    try {
      corpus_entry(f);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  std::vector<LemmaKind> kinds;
  std::string k = cfg.get("kind", "all");
  if (k == "all") {
    kinds = all_lemma_kinds();
  } else {
    try {
      kinds = {lemma_kind_from_string(k)};
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  bool ok = true;
  for (const auto& s : lemma_scans(kinds, opt)) {
    const LemmaKind kind = s.kind;
    out << to_json(s).dump() << '\n';
    if (cfg.has("out")) {
      auto f = open_out(cfg, "lemma_" + to_string(kind) + ".csv");
      f << "form,stratum,query,count,bound,ratio\n";
      for (const auto& r : s.rows)
        f << r.form << ',' << r.stratum << ',' << r.query << ',' << r.count << ',' << static_cast<double>(r.bound) << ','
          << static_cast<double>(r.ratio) << '\n';
    }
    if (!s.guard_ok) {
      err << "lemma-check: " << to_string(kind) << " ratio exceeds ten times its stratum median\n";
      ok = false;
    }
  }
  return ok ? kExitOk : kExitViolation;
}

int cmd_decay_scan(const Config& cfg, std::ostream& out, std::ostream& err) {
  int m_max = static_cast<int>(cfg.get_int("m_max", 200));
  double l_exp = cfg.get_double("l_exponent", 0.9);
  double t_max = cfg.get_double("t_max", 0.99);
  double t_step = cfg.get_double("t_step", 0.01);
  if (m_max < 0 || !(t_step > 0) || !(t_max >= 0) || !(t_max < 1)) throw ConfigError("decay-scan: bad grid");
  std::vector<DecayRow> rows;
  DecayScan s = decay_scan(m_max, l_exp, t_max, t_step, cfg.has("out") ? &rows : nullptr);
  if (cfg.has("out")) {
    auto f = open_out(cfg, "decay_scan.csv");
    f << "m,l,t,coeff,bound,ratio\n";
    char buf[160];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.6f,%.17g,%.17g,%.17g\n", r.m, r.l, r.t, r.coeff, r.bound, r.ratio);
      f << buf;
    }
  }
  nlohmann::json j = {{"m_max", m_max},
                      {"l_exponent", l_exp},
                      {"t_max", t_max},
                      {"t_step", t_step},
                      {"max_ratio", s.max_ratio},
                      {"argmax", {{"m", s.argmax.m}, {"l", s.argmax.l}, {"t", s.argmax.t}}},
                      {"max_by_m", s.max_by_m}};
  out << j.dump() << '\n';
  if (!std::isfinite(s.max_ratio)) {
    err << "decay-scan: non-finite ratio\n";
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_amplify(const Config& cfg, std::ostream& out, std::ostream&) {
  Source src = load_source(cfg);
  GeometricQuery q;
  q.split = source_split(src, cfg);
  const int d = q.split.ternary.context().degree();
  q.directions = directions(q.split, cfg);
  q.m = per_embedding_int(cfg, "m", d);
  q.l = per_embedding_int(cfg, "l", d);
  q.L = cfg.get_rational("L", 3);
  try {
    q.mode = coeff_mode_from_string(cfg.get("mode", "trivial"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.has("exclude")) {
    for (const auto& v : cfg.get_list("exclude")) {
      Config tmp;
      tmp.set("p", v);
      q.exclusions.push_back(tmp.get_int("p", 0));
    }
  } else {
    q.exclusions = src.exclusions;
  }
  GeometricReport r;
  try {
    r = geometric_side(q, count_options(cfg));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  out << to_json(r).dump() << '\n';
  return kExitOk;
}

nlohmann::json rational_json(const Rational& r) { return to_string(r); }

int cmd_exponents(const Config& cfg, std::ostream& out, std::ostream& err) {
  Rational kappa = cfg.get_rational("kappa", Rational(3, 20));
  Rational beta_min = cfg.get_rational("beta_min", -3);
  if (kappa < 0) throw ConfigError("kappa must be nonnegative");
  if (beta_min >= 0) throw ConfigError("beta_min must be negative");
  ProfileOptimum opt;
  try {
    opt = optimize_profile(kappa);
  } catch (const std::domain_error& e) {
    err << "exponents: " << e.what() << '\n';
    return kExitViolation;
  }
  auto argmax = nlohmann::json::array();
  for (const auto& a : opt.argmax)
    argmax.push_back({{"i", a.i}, {"lo", a.lo ? rational_json(*a.lo) : nlohmann::json(nullptr)}, {"hi", rational_json(a.hi)}});
  auto by_i = nlohmann::json::array();
  for (const auto& v : opt.max_by_i) by_i.push_back(rational_json(v));

  std::vector<std::pair<Rational, Rational>> terms;
  std::string text = cfg.get("terms", "-1:0,1/2:-1/2,2:-1");
  for (const auto& t : Config::parse("t=" + text).get_list("t")) {
    std::size_t colon = t.find(':');
    if (colon == std::string::npos) throw ConfigError("terms: expected a:b pairs");
    try {
      terms.emplace_back(parse_rational(t.substr(0, colon)), parse_rational(t.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ConfigError("terms: bad pair " + t);
    }
  }
  if (terms.empty()) throw ConfigError("terms: empty");
  BalanceResult bal = balance_exponents(terms);
  nlohmann::json balance = {{"bounded", bal.bounded}};
  if (bal.bounded)
    balance.update({{"t", rational_json(bal.t)},
                    {"value", rational_json(bal.value)},
                    {"sup_exponent", rational_json(bal.value / 2)},
                    {"active", bal.active}});

  Rational sv = cfg.get_rational("s_volume", Rational(1, 6)), se = cfg.get_rational("s_eigen", Rational(3, 80));
  if (sv <= 0 || se <= 0) throw ConfigError("savings must be positive");
  HybridResult h = hybrid_interpolate(sv, se);

  auto poly = figure_polyline(kappa, beta_min);
  // the polyline must reproduce the direct formula at its own vertices and midpoints
  bool consistent = true;
  for (std::size_t k = 0; k + 1 < poly.size(); ++k) {
    const auto& a = poly[k];
    const auto& b = poly[k + 1];
    if (a.i != b.i) continue;
    Rational mid = (a.beta + b.beta) / 2;
    if (polyline_value(poly, a.i, mid) != profile_eval(kappa, a.i, mid)) consistent = false;
  }
  nlohmann::json j = {{"kappa", rational_json(kappa)},
                      {"max", rational_json(opt.value)},
                      {"argmax", argmax},
                      {"max_by_i", by_i},
                      {"balance", balance},
                      {"hybrid",
                       {{"s_volume", rational_json(sv)},
                        {"s_eigen", rational_json(se)},
                        {"theta", rational_json(h.theta)},
                        {"saving", rational_json(h.saving)},
                        {"at_least_1/20", h.saving >= Rational(1, 20)}}},
                      {"polyline_consistent", consistent}};
  std::ostringstream csv;
  csv << "i,beta,value\n";
  for (const auto& p : poly) csv << p.i << ',' << to_string(p.beta) << ',' << to_string(p.value) << '\n';
  if (cfg.has("out")) {
    open_out(cfg, "exponents.json") << j.dump(2) << '\n';
    open_out(cfg, "figure1.csv") << csv.str();
    out << j.dump() << '\n';
  } else {
    out << j.dump() << '\n' << csv.str();
  }
  if (!consistent) {
    err << "exponents: polyline disagrees with the direct formula\n";
    return kExitViolation;
  }
  return kExitOk;
}

}  // namespace

std::vector<std::string> commands() { return {"reduce", "count", "lemma-check", "decay-scan", "amplify", "exponents", "corpus"}; }

int run(const std::string& command, const Config& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (command == "corpus") return cmd_corpus(cfg, out);
    if (command == "reduce") return cmd_reduce(cfg, out, err);
    if (command == "count") return cmd_count(cfg, out, err);
    if (command == "lemma-check") return cmd_lemma_check(cfg, out, err);
    if (command == "decay-scan") return cmd_decay_scan(cfg, out, err);
    if (command == "amplify") return cmd_amplify(cfg, out, err);
    if (command == "exponents") return cmd_exponents(cfg, out, err);
    err << "unknown command: " << command << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << command << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const FormError& e) {
    err << command << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const OrderError& e) {
    err << command << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << command << ": " << e.what() << '\n';
    return kExitViolation;
  }
}

}  // namespace supnorm
