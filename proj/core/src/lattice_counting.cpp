#include "supnorm/lattice_counting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace supnorm {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0, bool timing) {
  if (!timing) return 0;
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct CountAcc {
  std::uint64_t n = 0;
  void merge(const CountAcc& o) { n += o.n; }
};

struct ListAcc {
  std::vector<OVector> v;
  void merge(const ListAcc& o) { v.insert(v.end(), o.v.begin(), o.v.end()); }
};

long double abs_norm(const FieldContext& ctx, const IntCoords& x) {
  return std::fabs(static_cast<long double>(ctx.norm(x)));
}

void finish(CountReport& r) {
  r.bound = 0;
  for (const auto& t : r.bound_terms) r.bound += t.value;
  if (r.bound > 0) r.ratio = static_cast<long double>(r.count) / r.bound;
}

std::string elem(const FieldContext& ctx, const IntCoords& x) { return to_string(ctx, x); }

long double quad3(const Mat3& A, const Vec3& u, const Vec3& v) {
  long double s = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += u[i] * A[i][j] * v[j];
  return s / 2;
}

void check_eigen(const Mat3& A, long double min_eigen) {
  Eigen::Matrix3d M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = static_cast<double>(A[i][j]);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(M);
  if (es.eigenvalues().minCoeff() < static_cast<double>(min_eigen))
    throw std::invalid_argument("ternary form has an eigenvalue below the lower bound");
}

bool near(long double a, long double b) { return std::fabs(a - b) <= 1e-9L * (1 + std::fabs(b)); }

long double euclid(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace

nlohmann::json to_json(const CountReport& r) {
  nlohmann::json j;
  j["query"] = r.query;
  j["count"] = r.count;
  j["nodes"] = r.nodes;
  auto terms = nlohmann::json::array();
  for (const auto& t : r.bound_terms) terms.push_back({{"name", t.name}, {"value", static_cast<double>(t.value)}});
  j["bound_terms"] = terms;
  if (!r.alternatives.empty()) {
    auto alt = nlohmann::json::array();
    for (const auto& t : r.alternatives) alt.push_back({{"name", t.name}, {"value", static_cast<double>(t.value)}});
    j["alternatives"] = alt;
  }
  j["bound"] = static_cast<double>(r.bound);
  j["ratio"] = r.ratio ? nlohmann::json(static_cast<double>(*r.ratio)) : nlohmann::json(nullptr);
  j["wall_ms"] = r.wall_ms;
  return j;
}

// ---- RepresentationEngine ----

RepresentationEngine::RepresentationEngine(const QuadraticForm& q, const CountOptions& opt)
    : q_(q), opt_(opt), work_(q) {
  const int n = q.rank();
  if (opt.reduce && n >= 2) {
    ReducedForm r = reduce_form(q);
    bool identity = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (r.transform[i][j] != IntCoords{i == j ? 1 : 0, 0}) identity = false;
    if (!identity) {
      work_ = r.reduced;
      basis_ = r.transform;
    }
  }
  enum_ = EllipsoidEnumerator(work_);
  const auto& w = work_;
  bool want = opt.strategy == CountStrategy::Blocks || (opt.strategy == CountStrategy::Auto && n >= 3);
  if (!want || n < 2) return;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!w.gram()[i][j].is_zero()) parent[find(i)] = find(j);
  std::map<int, std::vector<int>> comps;
  for (int i = 0; i < n; ++i) comps[find(i)].push_back(i);
  if (comps.size() < 2) return;
  std::vector<std::vector<int>> list;
  for (auto& [root, c] : comps) list.push_back(c);
  std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  for (const auto& c : list) {
    int g = block_index_[0].size() <= block_index_[1].size() ? 0 : 1;
    block_index_[g].insert(block_index_[g].end(), c.begin(), c.end());
  }
  for (int g = 0; g < 2; ++g) {
    std::sort(block_index_[g].begin(), block_index_[g].end());
    FMatrix sub;
    for (int i : block_index_[g]) {
      FVector row;
      for (int j : block_index_[g]) row.push_back(w.gram()[i][j]);
      sub.push_back(row);
    }
    block_form_[g] = QuadraticForm::from_gram(w.context(), sub);
    block_enum_[g] = EllipsoidEnumerator(block_form_[g]);
  }
}

RepresentationEngine::~RepresentationEngine() = default;

OVector RepresentationEngine::to_source(const OVector& y) const {
  const auto& ctx = q_.context();
  const std::size_t n = y.size();
  OVector x(n, IntCoords{0, 0});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (y[j] != IntCoords{0, 0} && basis_[i][j] != IntCoords{0, 0}) x[i] = ctx.add(x[i], ctx.mul(basis_[i][j], y[j]));
  return x;
}
RepresentationEngine::RepresentationEngine(RepresentationEngine&&) noexcept = default;

bool RepresentationEngine::admissible(const IntCoords& ell) const {
  const auto& ctx = q_.context();
  for (int s = 0; s < ctx.degree(); ++s)
    if (ctx.sign(ell, s) < 0) return false;
  return true;
}

std::vector<long double> RepresentationEngine::radius(const IntCoords& ell) const {
  const auto& ctx = q_.context();
  std::vector<long double> r(ctx.degree());
  for (int s = 0; s < ctx.degree(); ++s) r[s] = ctx.embed(ell, s);
  return r;
}

std::vector<std::vector<OVector>> RepresentationEngine::search_target(const IntCoords& ell, int threads,
                                                                      EnumStats* stats) const {
  auto r = radius(ell);
  return enum_.map_jobs<std::vector<OVector>>(
      r, true, threads,
      [&](std::vector<OVector>& acc, const OVector& x) {
        if (work_.value(x) == ell) acc.push_back(x);
      },
      stats);
}

std::unique_ptr<BlockTables> RepresentationEngine::build_blocks(const std::vector<IntCoords>& ells, EnumStats* stats) const {
  const auto& ctx = work_.context();
  const int d = ctx.degree();
  std::vector<long double> R(d, 0.0L);
  for (const auto& e : ells)
    if (admissible(e))
      for (int s = 0; s < d; ++s) R[s] = std::max(R[s], ctx.embed(e, s));
  auto t = std::make_unique<BlockTables>();
  for (int g = 0; g < 2; ++g) {
    const auto& form = block_form_[g];
    using Item = std::pair<IntCoords, OVector>;
    auto parts = block_enum_[g].map_jobs<std::vector<Item>>(
        R, false, opt_.threads,
        [&](std::vector<Item>& acc, const OVector& x) {
          IntCoords v = form.value(x);
          for (int s = 0; s < d; ++s)
            if (ctx.embed(v, s) > R[s] * (1 + 1e-9L) + 1e-9L) return;
          acc.emplace_back(v, x);
        },
        stats);
    for (const auto& part : parts)
      for (const auto& [v, x] : part) {
        auto& b = t->bucket[g][v];
        b.insert(b.end(), x.begin(), x.end());
      }
  }
  return t;
}

void RepresentationEngine::block_visit(const BlockTables& t, const IntCoords& ell, const Sink& sink) const {
  const auto& ctx = q_.context();
  const std::size_t g0 = block_index_[0].size(), g1 = block_index_[1].size();
  OVector x(work_.rank());
  for (const auto& [v1, list1] : t.bucket[0]) {
    if (ctx.degree() == 1 && v1[0] > ell[0]) break;
    auto it = t.bucket[1].find(ctx.sub(ell, v1));
    if (it == t.bucket[1].end()) continue;
    const auto& list2 = it->second;
    for (std::size_t a = 0; a < list1.size(); a += g0) {
      for (std::size_t i = 0; i < g0; ++i) x[block_index_[0][i]] = list1[a + i];
      for (std::size_t b = 0; b < list2.size(); b += g1) {
        for (std::size_t i = 0; i < g1; ++i) x[block_index_[1][i]] = list2[b + i];
        sink(x);
      }
    }
  }
}

std::vector<OVector> RepresentationEngine::representations(const IntCoords& ell, EnumStats* stats) const {
  auto acc = accumulate<ListAcc>({ell}, [](ListAcc& a, const OVector& x) { a.v.push_back(x); }, stats);
  auto out = std::move(acc[0].v);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t RepresentationEngine::count(const IntCoords& ell, EnumStats* stats) const { return counts({ell}, stats)[0]; }

std::vector<std::uint64_t> RepresentationEngine::counts(const std::vector<IntCoords>& ells, EnumStats* stats) const {
  auto visit = [](CountAcc& a, const OVector&) { ++a.n; };
  auto acc = accumulate_impl<CountAcc, false>(ells, visit, stats);
  std::vector<std::uint64_t> out;
  for (const auto& a : acc) out.push_back(a.n);
  return out;
}

std::map<IntCoords, std::uint64_t> RepresentationEngine::value_histogram(const std::vector<long double>& r,
                                                                         EnumStats* stats) const {
  using Hist = std::map<IntCoords, std::uint64_t>;
  auto parts = enum_.map_jobs<Hist>(r, false, opt_.threads, [&](Hist& h, const OVector& x) { ++h[work_.value(x)]; }, stats);
  Hist out;
  for (const auto& p : parts)
    for (const auto& [v, c] : p) out[v] += c;
  return out;
}

std::vector<OVector> enumerate_representations(const QuadraticForm& q, const IntCoords& ell, const CountOptions& opt) {
  return RepresentationEngine(q, opt).representations(ell);
}

CountReport rep_count(const QuadraticForm& q, const IntCoords& ell, const CountOptions& opt) {
  auto t0 = Clock::now();
  const auto& ctx = q.context();
  CountReport r;
  r.query = {{"op", "rep_count"}, {"field", ctx.tag()}, {"rank", q.rank()}, {"ell", elem(ctx, ell)}};
  EnumStats st;
  r.count = RepresentationEngine(q, opt).count(ell, &st);
  r.nodes = st.nodes;
  long double N = abs_norm(ctx, ell);
  int n = q.rank();
  if (n <= 2)
    r.bound_terms.push_back({"one", 1});
  else if (n == 3)
    r.bound_terms.push_back({"norm_ell^(1/2)", std::sqrt(N)});
  else if (n == 4)
    r.bound_terms.push_back({"norm_ell", N});
  else
    r.bound_terms.push_back({"norm_ell^(n/2-1)", std::pow(N, n / 2.0L - 1)});
  finish(r);
  r.wall_ms = elapsed_ms(t0, opt.timing);
  return r;
}

// ---- averaged sums ----

std::string to_string(AveragedMode m) {
  switch (m) {
    case AveragedMode::E3: return "e3";
    case AveragedMode::E2: return "e2";
    case AveragedMode::E1: return "e1";
  }
  return "?";
}

namespace {

// 0 <= l^sigma <= Y^{1/d} for every sigma, exactly.
bool in_range(const FieldContext& ctx, const IntCoords& l, const Rational& Y) {
  for (int s = 0; s < ctx.degree(); ++s)
    if (ctx.sign(l, s) < 0) return false;
  if (ctx.degree() == 1) return Rational(l[0]) <= Y;
  FieldElement diff = FieldElement(ctx, Y) - FieldElement(ctx, ctx.mul(l, l));
  return diff.sign(0) >= 0 && diff.sign(1) >= 0;
}

// The totally nonnegative square root of v, if v is a square of one.
std::optional<IntCoords> nonneg_sqrt(const FieldContext& ctx, const IntCoords& v) {
  const int d = ctx.degree();
  std::array<long double, 2> r{};
  for (int s = 0; s < d; ++s) {
    long double e = ctx.embed(v, s);
    if (e < 0) return std::nullopt;
    r[s] = std::sqrt(e);
  }
  IntCoords l{};
  if (d == 1) {
    l = {std::llround(r[0]), 0};
  } else {
    long double b = (r[0] - r[1]) / (ctx.omega(0) - ctx.omega(1));
    l[1] = std::llround(b);
    l[0] = std::llround(r[0] - l[1] * ctx.omega(0));
  }
  for (int s = 0; s < d; ++s)
    if (ctx.sign(l, s) < 0) return std::nullopt;
  if (ctx.mul(l, l) != v) return std::nullopt;
  return l;
}

long double root_d(const Rational& y, int d) { return std::pow(to_long_double(y), 1.0L / d); }

// Totally positive l with l^sigma <= Y^{1/d}.
std::vector<IntCoords> positive_in_range(const FieldContext& ctx, const Rational& Y) {
  long double A = root_d(Y, ctx.degree()) * (1 + 1e-9L) + 1e-9L;
  std::vector<IntCoords> out;
  for (const auto& x : integers_in_box(ctx, std::vector<long double>(ctx.degree(), A)))
    if (ctx.is_totally_positive(x) && in_range(ctx, x, Y)) out.push_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

CountReport averaged_sum(const QuadraticForm& q, AveragedMode mode, const Rational& y, const Rational& y2,
                         const CountOptions& opt) {
  auto t0 = Clock::now();
  if (q.rank() != 4) throw std::invalid_argument("averaged sums need a quaternary form");
  if (y <= 0 || y2 <= 0) throw std::invalid_argument("y must be positive");
  const auto& ctx = q.context();
  const int d = ctx.degree();
  CountReport r;
  r.query = {{"op", "averaged_sum"}, {"field", ctx.tag()}, {"mode", to_string(mode)}, {"y", to_string(y)}};
  if (mode == AveragedMode::E2) r.query["y2"] = to_string(y2);
  if (mode != AveragedMode::E3) {
    auto red = reduce_form(q);
    long double h1 = 0;
    for (int s = 0; s < d; ++s) h1 = std::max(h1, red.h[0].embedding(s));
    r.query["h1"] = static_cast<double>(h1);
    if (h1 > opt.h1_threshold)
      throw WitnessError("h_1 = " + std::to_string(static_cast<double>(h1)) + " exceeds the witness threshold");
  }
  RepresentationEngine eng(q, opt);
  EnumStats st;
  std::uint64_t total = 0;
  if (mode == AveragedMode::E3) {
    auto hist = eng.value_histogram(std::vector<long double>(d, root_d(y, d)), &st);
    for (const auto& [v, c] : hist)
      if (in_range(ctx, v, y)) total += c;
  } else if (mode == AveragedMode::E1) {
    auto hist = eng.value_histogram(std::vector<long double>(d, root_d(y * y, d)), &st);
    for (const auto& [v, c] : hist) {
      auto l = nonneg_sqrt(ctx, v);
      if (l && in_range(ctx, *l, y)) total += c;
    }
  } else {
    Rational P = y * y2 * y2;
    auto hist = eng.value_histogram(std::vector<long double>(d, root_d(P, d)), &st);
    auto list1 = positive_in_range(ctx, y);
    auto list2 = positive_in_range(ctx, y2);
    std::uint64_t n1 = list1.size() + 1, n2 = list2.size() + 1;
    for (const auto& [v, c] : hist) {
      if (v == IntCoords{0, 0}) {
        total += c * (n1 + n2 - 1);
        continue;
      }
      for (const auto& l2 : list2) {
        FieldElement quo = FieldElement(ctx, v) / FieldElement(ctx, ctx.mul(l2, l2));
        if (!quo.is_integral()) continue;
        if (in_range(ctx, quo.to_int(), y)) total += c;
      }
    }
  }
  r.count = total;
  r.nodes = st.nodes;
  long double ND = std::fabs(to_long_double(q.determinant().norm()));
  long double Nn = static_cast<long double>(to_long_double(Rational(q.level_norm())));
  long double V2 = std::sqrt(ND), V1 = std::sqrt(ND / Nn);
  long double yy = to_long_double(y);
  if (mode == AveragedMode::E3) {
    r.bound_terms = {{"y^2/N(D)^(1/2)", yy * yy / V2}, {"y^(3/2)/(N(D)/N(n))^(1/2)", std::pow(yy, 1.5L) / V1}, {"y", yy}};
  } else if (mode == AveragedMode::E1) {
    r.bound_terms = {{"y^3/N(D)^(1/2)", yy * yy * yy / V2}, {"y^2/(N(D)/N(n))^(1/2)", yy * yy / V1}, {"y", yy}};
  } else {
    long double P = yy * to_long_double(y2) * to_long_double(y2);
    r.bound_terms = {{"y1*P^(3/2)/N(D)^(1/2)", yy * std::pow(P, 1.5L) / V2},
                     {"y1*P/(N(D)/N(n))^(1/2)", yy * P / V1},
                     {"y1*P^(1/2)", yy * std::sqrt(P)}};
  }
  finish(r);
  r.wall_ms = elapsed_ms(t0, opt.timing);
  return r;
}

// ---- binary inhomogeneous ----

IntCoords BinaryPolynomial::value(const IntCoords& x, const IntCoords& y) const {
  const auto& k = ctx;
  IntCoords v = k.mul(a, k.mul(x, x));
  v = k.add(v, k.mul(b, k.mul(x, y)));
  v = k.add(v, k.mul(c, k.mul(y, y)));
  v = k.add(v, k.mul(d, x));
  v = k.add(v, k.mul(e, y));
  return k.add(v, f);
}

long double BinaryPolynomial::height() const {
  long double h = 0;
  for (int s = 0; s < ctx.degree(); ++s)
    for (const auto& co : {a, b, c, d, e, f}) h += std::fabs(ctx.embed(co, s));
  return h;
}

CountReport binary_inhomogeneous_count(const BinaryPolynomial& p, const IntCoords& ell, const CountOptions& opt) {
  auto t0 = Clock::now();
  const auto& ctx = p.ctx;
  CountReport r;
  r.query = {{"op", "binary_inhomogeneous"}, {"field", ctx.tag()}, {"ell", elem(ctx, ell)},
             {"height", static_cast<double>(p.height())}};
  OMatrix A = {{ctx.add(p.a, p.a), p.b}, {p.b, ctx.add(p.c, p.c)}};
  QuadraticForm qf;
  try {
    qf = QuadraticForm::from_gram(ctx, A);
  } catch (const FormError&) {
    throw std::invalid_argument("quadratic part is not totally positive definite");
  }
  FMatrix Af = to_fmatrix(ctx, A);
  FVector lin = {FieldElement(ctx, p.d), FieldElement(ctx, p.e)};
  FVector c = solve(Af, lin);
  FieldElement R = FieldElement(ctx, ell) - FieldElement(ctx, p.f) +
                   FieldElement(ctx, Rational(1, 2)) * (lin[0] * c[0] + lin[1] * c[1]);
  r.bound_terms.push_back({"one", 1});
  bool feasible = true;
  for (int s = 0; s < ctx.degree(); ++s)
    if (R.sign(s) < 0) feasible = false;
  if (feasible) {
    std::vector<std::array<long double, 2>> shift(2);
    for (int i = 0; i < 2; ++i)
      for (int s = 0; s < ctx.degree(); ++s) shift[i][s] = c[i].embedding(s);
    EllipsoidEnumerator en(qf, shift);
    std::vector<long double> rad(ctx.degree());
    for (int s = 0; s < ctx.degree(); ++s) rad[s] = R.embedding(s);
    EnumStats st;
    auto parts = en.map_jobs<CountAcc>(
        rad, true, opt.threads,
        [&](CountAcc& acc, const OVector& x) {
          if (p.value(x[0], x[1]) == ell) ++acc.n;
        },
        &st);
    for (const auto& a : parts) r.count += a.n;
    r.nodes = st.nodes;
  }
  finish(r);
  r.wall_ms = elapsed_ms(t0, opt.timing);
  return r;
}

// ---- archimedean geometry ----

ArchResult arch_geometry_a(const Mat3& A, const Vec3& x, const Vec3& y, long double eta, long double min_eigen) {
  check_eigen(A, min_eigen);
  if (!near(quad3(A, x, x), 1) || !near(quad3(A, y, y), 1)) throw std::invalid_argument("x and y must satisfy Q = 1");
  if (eta <= 0) throw std::invalid_argument("eta must be positive");
  long double ip = quad3(A, y, x);
  if (ip * ip < 1 - eta - 1e-9L) throw std::invalid_argument("<y, x>^2 < 1 - eta");
  Vec3 dm{y[0] - x[0], y[1] - x[1], y[2] - x[2]}, dp{y[0] + x[0], y[1] + x[1], y[2] + x[2]};
  return {std::min(euclid(dm), euclid(dp)), std::sqrt(eta)};
}

ArchResult arch_geometry_b(const Mat3& A, const std::array<Vec3, 3>& ys, const Vec3& x, long double ell, long double eta,
                           long double min_eigen) {
  check_eigen(A, min_eigen);
  if (ell <= 0 || eta <= 0) throw std::invalid_argument("ell and eta must be positive");
  if (!near(quad3(A, x, x), 1)) throw std::invalid_argument("x must satisfy Q = 1");
  for (const auto& y : ys) {
    if (!near(quad3(A, y, y), ell)) throw std::invalid_argument("y_i must satisfy Q = ell");
    if (std::fabs(quad3(A, y, x)) > std::sqrt(ell * eta) * (1 + 1e-9L) + 1e-12L)
      throw std::invalid_argument("|<y_i, x>| exceeds (ell eta)^(1/2)");
  }
  const auto& a = ys[0];
  const auto& b = ys[1];
  const auto& c = ys[2];
  long double det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
  return {std::fabs(det), std::pow(ell, 1.5L) * std::sqrt(eta)};
}

ArchResult arch_geometry_c(const Mat3& A, const Vec3& y, long double ell, long double min_eigen) {
  check_eigen(A, min_eigen);
  if (ell < 0) throw std::invalid_argument("ell must be nonnegative");
  if (!near(quad3(A, y, y), ell)) throw std::invalid_argument("y must satisfy Q = ell");
  return {euclid(y), std::sqrt(ell)};
}

// ---- constrained counts ----

std::string to_string(ConstraintMode m) {
  switch (m) {
    case ConstraintMode::NearTorus: return "near-torus";
    case ConstraintMode::NearEquator: return "near-equator";
    case ConstraintMode::Unconstrained: return "unconstrained";
  }
  return "?";
}

ConstraintMode constraint_mode_from_string(const std::string& s) {
  if (s == "near-torus") return ConstraintMode::NearTorus;
  if (s == "near-equator") return ConstraintMode::NearEquator;
  if (s == "unconstrained") return ConstraintMode::Unconstrained;
  throw std::invalid_argument("unknown constraint mode: " + s);
}

Vec3 unit_direction(const QuadraticForm& ternary, int sigma, const Vec3& v) {
  auto g = ternary.embedded_gram(sigma);
  Mat3 A{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A[i][j] = g[i][j];
  long double q = quad3(A, v, v);
  if (!(q > 0)) throw std::invalid_argument("zero direction");
  long double s = std::sqrt(q);
  return {v[0] / s, v[1] / s, v[2] / s};
}

SplitEvaluator::SplitEvaluator(const NormFormSplit& split, const std::vector<Vec3>& directions)
    : ctx_(split.ternary.context()), change_(split.change_embedded), dir_(directions) {
  for (int s = 0; s < ctx_.degree(); ++s) {
    auto g = split.ternary.embedded_gram(s);
    Mat3 A{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A[i][j] = g[i][j];
    gram_.push_back(A);
  }
}

void SplitEvaluator::evaluate(const OVector& x, std::vector<SplitValues>& out) const {
  const int d = ctx_.degree();
  out.resize(d);
  for (int s = 0; s < d; ++s) {
    std::array<long double, 4> xs{}, y{};
    for (int i = 0; i < 4; ++i) xs[i] = ctx_.embed(x[i], s);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) y[r] += change_[s][r][c] * xs[c];
    Vec3 yt{y[1], y[2], y[3]};
    long double ip = quad3(gram_[s], yt, dir_[s]);
    out[s] = {y[0] * y[0], ip * ip, quad3(gram_[s], yt, yt)};
  }
}

void validate_directions(const NormFormSplit& split, const std::vector<Vec3>& directions) {
  const auto& ctx = split.ternary.context();
  const int d = ctx.degree();
  if (split.ternary.rank() != 3 || split.quaternary.rank() != 4) throw std::invalid_argument("malformed split");
  if (static_cast<int>(directions.size()) != d) throw std::invalid_argument("need one direction per embedding");
  for (int s = 0; s < d; ++s) {
    auto g = split.ternary.embedded_gram(s);
    Mat3 A{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A[i][j] = g[i][j];
    if (std::fabs(quad3(A, directions[s], directions[s]) - 1) > 1e-9L)
      throw std::invalid_argument("direction not unit-normalized");
  }
}

namespace {

void validate(const ConstrainedCountQuery& q) { validate_directions(q.split, q.directions); }

std::vector<std::vector<SplitValues>> split_values(const ConstrainedCountQuery& q, const std::vector<OVector>& reps) {
  SplitEvaluator ev(q.split, q.directions);
  std::vector<std::vector<SplitValues>> out(reps.size());
  for (std::size_t k = 0; k < reps.size(); ++k) ev.evaluate(reps[k], out[k]);
  return out;
}

}  // namespace

bool constraint_admits(ConstraintMode mode, const std::vector<SplitValues>& v, const std::vector<long double>& eta,
              const std::vector<long double>& ell) {
  for (std::size_t s = 0; s < v.size(); ++s) {
    long double lhs = 0;
    if (mode == ConstraintMode::NearTorus)
      lhs = v[s].y0sq + v[s].inner_sq;
    else if (mode == ConstraintMode::NearEquator)
      lhs = v[s].ternary - v[s].inner_sq;
    else
      continue;
    long double rhs = eta[s] * ell[s];
    if (lhs > rhs + 1e-9L * (1 + std::fabs(rhs) + ell[s])) return false;
  }
  return true;
}

std::vector<std::uint64_t> constrained_counts(const ConstrainedCountQuery& q, const std::vector<std::vector<long double>>& etas,
                                              const CountOptions& opt) {
  validate(q);
  const auto& ctx = q.split.ternary.context();
  for (const auto& eta : etas) {
    if (static_cast<int>(eta.size()) != ctx.degree()) throw std::invalid_argument("need one eta per embedding");
    for (auto e : eta)
      if (!(e > 0)) throw std::invalid_argument("eta must be positive");
  }
  auto reps = RepresentationEngine(q.split.quaternary, opt).representations(q.ell);
  auto vals = split_values(q, reps);
  std::vector<long double> ell(ctx.degree());
  for (int s = 0; s < ctx.degree(); ++s) ell[s] = ctx.embed(q.ell, s);
  std::vector<std::uint64_t> out;
  for (const auto& eta : etas) {
    std::uint64_t n = 0;
    for (const auto& v : vals)
      if (constraint_admits(q.mode, v, eta, ell)) ++n;
    out.push_back(n);
  }
  return out;
}

std::vector<BoundTerm> constrained_bound_terms(ConstraintMode mode, long double Nl, long double Ne,
                                               std::vector<BoundTerm>* alternatives) {
  std::vector<BoundTerm> terms, alt;
  if (mode == ConstraintMode::NearTorus) {
    long double a = std::pow(Nl, 1.5L) * std::sqrt(Ne), b = std::sqrt(Nl);
    terms = {{"N(eta)^(1/2)N(l)", std::sqrt(Ne) * Nl}, {"one", 1}, {"min", std::min(a, b)}};
    alt = {{"N(l)^(3/2)N(eta)^(1/2)", a}, {"N(l)^(1/2)", b}};
  } else if (mode == ConstraintMode::NearEquator) {
    long double a = std::pow(Ne, 3.0L / 11) * std::pow(Nl, 12.0L / 11), b = Nl;
    terms = {{"one", 1}, {"min", std::min(a, b)}};
    alt = {{"N(eta)^(3/11)N(l)^(12/11)", a}, {"N(l)", b}};
  } else {
    terms = {{"N(l)", Nl}};
  }
  if (alternatives) *alternatives = alt;
  return terms;
}

CountReport constrained_count(const ConstrainedCountQuery& q, const CountOptions& opt) {
  auto t0 = Clock::now();
  validate(q);
  const auto& ctx = q.split.ternary.context();
  if (static_cast<int>(q.eta.size()) != ctx.degree()) throw std::invalid_argument("need one eta per embedding");
  for (auto e : q.eta)
    if (!(e > 0)) throw std::invalid_argument("eta must be positive");
  CountReport r;
  auto etas = nlohmann::json::array();
  for (auto e : q.eta) etas.push_back(static_cast<double>(e));
  r.query = {{"op", "constrained_count"}, {"field", ctx.tag()}, {"ell", elem(ctx, q.ell)},
             {"mode", to_string(q.mode)}, {"eta", etas}};
  EnumStats st;
  auto reps = RepresentationEngine(q.split.quaternary, opt).representations(q.ell, &st);
  auto vals = split_values(q, reps);
  std::vector<long double> ell(ctx.degree());
  for (int s = 0; s < ctx.degree(); ++s) ell[s] = ctx.embed(q.ell, s);
  for (const auto& v : vals)
    if (constraint_admits(q.mode, v, q.eta, ell)) ++r.count;
  r.nodes = st.nodes;
  long double Ne = 1;
  for (auto e : q.eta) Ne *= e;
  r.bound_terms = constrained_bound_terms(q.mode, abs_norm(ctx, q.ell), Ne, &r.alternatives);
  finish(r);
  r.wall_ms = elapsed_ms(t0, opt.timing);
  return r;
}

}  // namespace supnorm
