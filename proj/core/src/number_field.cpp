#include "supnorm/number_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace supnorm {

struct FieldContext::Data {
  std::string tag;
  int d = 1;
  std::int64_t D = 1;
  std::int64_t t = 0;
  std::int64_t n = 0;
  std::int64_t disc = 1;
  long double omega[2] = {0, 0};
  IntCoords eps{1, 0};
  int eps_norm = 1;
  IntCoords eta{1, 0};
  long double log_eta = 0;
};

namespace {

__extension__ typedef __int128 i128;

std::int64_t isqrt64(std::int64_t v) {
  if (v < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
  while (r > 0 && static_cast<i128>(r) * r > v) --r;
  while (static_cast<i128>(r + 1) * (r + 1) <= v) ++r;
  return r;
}

bool squarefree(std::int64_t D) {
  for (std::int64_t p = 2; p * p <= D; ++p)
    if (D % (p * p) == 0) return false;
  return true;
}

std::int64_t checked(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("O_F coordinate overflow");
  return static_cast<std::int64_t>(v);
}

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
  i128 r = 1, x = ((b % m) + m) % m;
  while (e > 0) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<std::int64_t>(r);
}

std::shared_ptr<const FieldContext::Data> rational_data() {
  static const auto data = [] {
    auto d = std::make_shared<FieldContext::Data>();
    d->tag = "Q";
    return std::shared_ptr<const FieldContext::Data>(d);
  }();
  return data;
}

// Norm of a + b*omega.
i128 raw_norm(const FieldContext::Data& f, i128 a, i128 b) { return a * a + f.t * a * b - f.n * b * b; }

// Smallest unit > 1 from the continued fraction of omega = (P0 + sqrt D)/Q0.
IntCoords find_fundamental_unit(const FieldContext::Data& f) {
  std::int64_t s = isqrt64(f.D);
  i128 P = f.t == 1 ? 1 : 0;
  i128 Q = f.t == 1 ? 2 : 1;
  i128 p1 = 1, p2 = 0, q1 = 0, q2 = 1;
  for (int k = 0; k < 400; ++k) {
    i128 a = (P + s) / Q;
    i128 p = a * p1 + p2;
    i128 q = a * q1 + q2;
    if (p > (i128(1) << 62) || q > (i128(1) << 62)) break;
    i128 N = raw_norm(f, p, -q);
    if (N == 1 || N == -1) return {checked(p - q * f.t), checked(q)};
    p2 = p1; p1 = p;
    q2 = q1; q1 = q;
    P = a * Q - P;
    Q = (f.D - P * P) / Q;
  }
  throw std::runtime_error("fundamental unit too large for 64-bit coordinates (D=" + std::to_string(f.D) + ")");
}

}  // namespace

FieldContext::FieldContext() : data_(rational_data()) {}

FieldContext FieldContext::rationals() { return FieldContext(rational_data()); }

FieldContext FieldContext::quadratic(std::int64_t D) {
  if (D < 2 || !squarefree(D)) throw std::invalid_argument("QsqrtD needs a squarefree D > 1, got " + std::to_string(D));
  auto f = std::make_shared<Data>();
  f->d = 2;
  f->D = D;
  if (D % 4 == 1) {
    f->t = 1;
    f->n = (D - 1) / 4;
    f->disc = D;
  } else {
    f->t = 0;
    f->n = D;
    f->disc = 4 * D;
  }
  f->tag = (D == 2 || D == 5) ? "Qsqrt" + std::to_string(D) : "QsqrtD:D=" + std::to_string(D);
  long double r = std::sqrt(static_cast<long double>(D));
  f->omega[0] = (f->t + r) / 2;
  f->omega[1] = (f->t - r) / 2;
  if (f->t == 0) {
    f->omega[0] = r;
    f->omega[1] = -r;
  }
  f->eps = find_fundamental_unit(*f);
  f->eps_norm = static_cast<int>(raw_norm(*f, f->eps[0], f->eps[1]));
  // Catalog entries double as a check on the continued-fraction search.
  if (D == 2 && f->eps != IntCoords{1, 1}) throw std::logic_error("unit search disagrees with 1+sqrt2");
  if (D == 5 && f->eps != IntCoords{0, 1}) throw std::logic_error("unit search disagrees with (1+sqrt5)/2");
  FieldContext tmp{std::shared_ptr<const Data>(f)};
  f->eta = f->eps_norm == 1 ? f->eps : tmp.mul(f->eps, f->eps);
  f->log_eta = std::log(tmp.embed(f->eta, 0));
  return FieldContext(std::shared_ptr<const Data>(f));
}

FieldContext FieldContext::from_tag(std::string_view tag) {
  if (tag == "Q") return rationals();
  if (tag == "Qsqrt2") return quadratic(2);
  if (tag == "Qsqrt5") return quadratic(5);
  constexpr std::string_view prefix = "QsqrtD:D=";
  if (tag.substr(0, prefix.size()) == prefix) {
    auto rest = std::string(tag.substr(prefix.size()));
    std::size_t pos = 0;
    long long D = 0;
    try {
      D = std::stoll(rest, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != rest.size()) throw std::invalid_argument("bad field tag: " + std::string(tag));
    return quadratic(D);
  }
  throw std::invalid_argument("unknown field tag: " + std::string(tag));
}

const std::string& FieldContext::tag() const { return data_->tag; }
int FieldContext::degree() const { return data_->d; }
std::int64_t FieldContext::radicand() const { return data_->D; }
std::int64_t FieldContext::discriminant() const { return data_->disc; }
std::int64_t FieldContext::omega_trace() const { return data_->t; }
std::int64_t FieldContext::omega_norm_term() const { return data_->n; }
long double FieldContext::omega(int sigma) const { return data_->omega[sigma]; }
IntCoords FieldContext::fundamental_unit() const { return data_->eps; }
int FieldContext::fundamental_unit_norm() const { return data_->eps_norm; }
IntCoords FieldContext::positive_unit() const { return data_->eta; }
long double FieldContext::log_positive_unit() const { return data_->log_eta; }

IntCoords FieldContext::add(const IntCoords& x, const IntCoords& y) const { return {x[0] + y[0], x[1] + y[1]}; }
IntCoords FieldContext::sub(const IntCoords& x, const IntCoords& y) const { return {x[0] - y[0], x[1] - y[1]}; }

IntCoords FieldContext::mul(const IntCoords& x, const IntCoords& y) const {
  const auto& f = *data_;
  i128 bd = static_cast<i128>(x[1]) * y[1];
  return {checked(static_cast<i128>(x[0]) * y[0] + f.n * bd),
          checked(static_cast<i128>(x[0]) * y[1] + static_cast<i128>(x[1]) * y[0] + f.t * bd)};
}

IntCoords FieldContext::conj(const IntCoords& x) const { return {x[0] + data_->t * x[1], -x[1]}; }

IntCoords FieldContext::pow(IntCoords x, int k) const {
  IntCoords r{1, 0};
  for (int i = 0; i < k; ++i) r = mul(r, x);
  return r;
}

std::int64_t FieldContext::norm(const IntCoords& x) const {
  if (data_->d == 1) return x[0];
  return checked(raw_norm(*data_, x[0], x[1]));
}

std::int64_t FieldContext::trace(const IntCoords& x) const {
  if (data_->d == 1) return x[0];
  return 2 * x[0] + data_->t * x[1];
}

long double FieldContext::embed(const IntCoords& x, int sigma) const {
  return static_cast<long double>(x[0]) + static_cast<long double>(x[1]) * data_->omega[sigma];
}

int FieldContext::sign(const IntCoords& x, int sigma) const {
  if (data_->d == 1 || x[1] == 0) return (x[0] > 0) - (x[0] < 0);
  // x^sigma = (p + q sqrt(disc))/2 with p = 2a + t b, q = +-b and disc = t^2 + 4n.
  i128 p = 2 * static_cast<i128>(x[0]) + data_->t * static_cast<i128>(x[1]);
  i128 q = sigma == 0 ? x[1] : -x[1];
  int sp = (p > 0) - (p < 0);
  int sq = (q > 0) - (q < 0);
  if (sp == 0) return sq;
  if (sp == sq) return sp;
  return p * p > q * q * data_->disc ? sp : sq;
}

bool FieldContext::is_totally_positive(const IntCoords& x) const {
  for (int s = 0; s < data_->d; ++s)
    if (sign(x, s) <= 0) return false;
  return true;
}

bool FieldContext::is_inert(std::int64_t p) const {
  if (!is_prime(p)) return false;
  if (data_->d == 1) return true;
  std::int64_t disc = data_->disc;
  if (p == 2) return (disc % 8 + 8) % 8 == 5;
  if (disc % p == 0) return false;
  return powmod(disc, (p - 1) / 2, p) == p - 1;
}

bool FieldContext::operator==(const FieldContext& other) const {
  return data_ == other.data_ || (data_->d == other.data_->d && data_->D == other.data_->D);
}

// ---------------------------------------------------------------------------

FieldElement::FieldElement(const FieldContext& ctx, Rational c0, Rational c1) : ctx_(ctx), c_{std::move(c0), std::move(c1)} {
  if (ctx.degree() == 1 && c_[1] != 0) throw std::invalid_argument("second coordinate must vanish over Q");
  refresh();
}

FieldElement::FieldElement(const FieldContext& ctx, const IntCoords& x)
    : FieldElement(ctx, Rational(x[0]), Rational(ctx.degree() == 1 ? 0 : x[1])) {}

void FieldElement::refresh() {
  long double a = to_long_double(c_[0]);
  long double b = to_long_double(c_[1]);
  for (int s = 0; s < ctx_.degree(); ++s) emb_[s] = a + b * ctx_.omega(s);
}

std::vector<long double> FieldElement::embeddings() const { return {emb_.begin(), emb_.begin() + ctx_.degree()}; }

FieldElement FieldElement::operator+(const FieldElement& o) const { return {ctx_, c_[0] + o.c_[0], c_[1] + o.c_[1]}; }
FieldElement FieldElement::operator-(const FieldElement& o) const { return {ctx_, c_[0] - o.c_[0], c_[1] - o.c_[1]}; }
FieldElement FieldElement::operator-() const { return {ctx_, -c_[0], -c_[1]}; }

FieldElement FieldElement::operator*(const FieldElement& o) const {
  Rational bd = c_[1] * o.c_[1];
  return {ctx_, c_[0] * o.c_[0] + ctx_.omega_norm_term() * bd,
          c_[0] * o.c_[1] + c_[1] * o.c_[0] + ctx_.omega_trace() * bd};
}

FieldElement FieldElement::conjugate() const {
  if (ctx_.degree() == 1) return *this;
  return {ctx_, c_[0] + ctx_.omega_trace() * c_[1], -c_[1]};
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  if (o.is_zero()) throw std::domain_error("division by zero in F");
  Rational N = o.norm();
  if (ctx_.degree() == 1) return {ctx_, c_[0] / o.c_[0]};
  FieldElement num = *this * o.conjugate();
  return {ctx_, num.c_[0] / N, num.c_[1] / N};
}

bool FieldElement::operator==(const FieldElement& o) const { return ctx_ == o.ctx_ && c_ == o.c_; }

Rational FieldElement::norm() const {
  if (ctx_.degree() == 1) return c_[0];
  return c_[0] * c_[0] + ctx_.omega_trace() * c_[0] * c_[1] - ctx_.omega_norm_term() * c_[1] * c_[1];
}

Rational FieldElement::trace() const {
  if (ctx_.degree() == 1) return c_[0];
  return 2 * c_[0] + ctx_.omega_trace() * c_[1];
}

int FieldElement::sign(int sigma) const {
  if (ctx_.degree() == 1 || c_[1] == 0) return c_[0].sign();
  Rational p = 2 * c_[0] + ctx_.omega_trace() * c_[1];
  Rational q = sigma == 0 ? c_[1] : Rational(-c_[1]);
  int sp = p.sign(), sq = q.sign();
  if (sp == 0) return sq;
  if (sp == sq) return sp;
  return p * p > q * q * ctx_.discriminant() ? sp : sq;
}

bool FieldElement::is_totally_positive() const {
  for (int s = 0; s < ctx_.degree(); ++s)
    if (sign(s) <= 0) return false;
  return true;
}

bool FieldElement::is_integral() const {
  return boost::multiprecision::denominator(c_[0]) == 1 && boost::multiprecision::denominator(c_[1]) == 1;
}

IntCoords FieldElement::to_int() const {
  if (!is_integral()) throw std::domain_error("element is not an algebraic integer: " + to_string());
  return {to_int64(boost::multiprecision::numerator(c_[0])), to_int64(boost::multiprecision::numerator(c_[1]))};
}

std::string FieldElement::to_string() const {
  if (ctx_.degree() == 1 || c_[1] == 0) return supnorm::to_string(c_[0]);
  std::string s = c_[0] == 0 ? "" : supnorm::to_string(c_[0]);
  std::string b = supnorm::to_string(c_[1]);
  if (!s.empty() && c_[1] > 0) s += "+";
  return s + b + "*w";
}

Evaluation evaluate(const FieldElement& x) { return {x.embeddings(), x.norm()}; }

std::string to_string(const FieldContext& ctx, const IntCoords& x) { return FieldElement(ctx, x).to_string(); }

// ---------------------------------------------------------------------------

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::int64_t p = 3; p * p <= n; p += 2)
    if (n % p == 0) return false;
  return true;
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  n = n < 0 ? -n : n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<FieldElement> units_in_box(const FieldContext& ctx, const std::vector<long double>& A) {
  if (static_cast<int>(A.size()) != ctx.degree()) throw std::invalid_argument("units_in_box: wrong number of bounds");
  std::vector<FieldElement> out;
  const long double slack = 1 + 1e-12L;
  if (ctx.degree() == 1) {
    if (1 <= A[0] * slack) {
      out.emplace_back(ctx, Rational(1));
      out.emplace_back(ctx, Rational(-1));
    }
    return out;
  }
  IntCoords eps = ctx.fundamental_unit();
  long double le = std::log(ctx.embed(eps, 0));
  long double hi = std::log(A[0]) / le;
  long double lo = -std::log(A[1]) / le;
  if (lo > hi + 1) return out;
  IntCoords inv = ctx.conj(eps);
  if (ctx.fundamental_unit_norm() < 0) inv = {-inv[0], -inv[1]};
  for (auto k = static_cast<long long>(std::floor(lo)) - 1; k <= static_cast<long long>(std::ceil(hi)) + 1; ++k) {
    IntCoords u = k >= 0 ? ctx.pow(eps, static_cast<int>(k)) : ctx.pow(inv, static_cast<int>(-k));
    if (std::fabs(ctx.embed(u, 0)) <= A[0] * slack && std::fabs(ctx.embed(u, 1)) <= A[1] * slack) {
      out.emplace_back(ctx, u);
      out.emplace_back(ctx, IntCoords{-u[0], -u[1]});
    }
  }
  return out;
}

std::vector<IntCoords> integers_in_box(const FieldContext& ctx, const std::vector<long double>& A) {
  if (static_cast<int>(A.size()) != ctx.degree()) throw std::invalid_argument("integers_in_box: wrong number of bounds");
  std::vector<IntCoords> out;
  const long double slack = 1 + 1e-12L;
  if (ctx.degree() == 1) {
    auto m = static_cast<std::int64_t>(std::floor(A[0] * slack));
    for (std::int64_t a = -m; a <= m; ++a)
      if (a != 0) out.push_back({a, 0});
    return out;
  }
  long double w0 = ctx.omega(0), w1 = ctx.omega(1);
  long double A0 = A[0] * slack, A1 = A[1] * slack;
  auto bmax = static_cast<std::int64_t>(std::floor((A0 + A1) / (w0 - w1)));
  for (std::int64_t b = -bmax; b <= bmax; ++b) {
    long double lo = std::max(-A0 - b * w0, -A1 - b * w1);
    long double hi = std::min(A0 - b * w0, A1 - b * w1);
    for (auto a = static_cast<std::int64_t>(std::ceil(lo)); a <= static_cast<std::int64_t>(std::floor(hi)); ++a) {
      IntCoords x{a, b};
      if (a == 0 && b == 0) continue;
      if (std::fabs(ctx.embed(x, 0)) <= A0 && std::fabs(ctx.embed(x, 1)) <= A1) out.push_back(x);
    }
  }
  return out;
}

long double cone_coordinate(const FieldContext& ctx, const IntCoords& y) {
  if (ctx.degree() == 1) return 0;
  return (std::log(ctx.embed(y, 0)) - std::log(ctx.embed(y, 1))) / (2 * ctx.log_positive_unit());
}

bool in_cone(const FieldContext& ctx, const IntCoords& y) {
  if (!ctx.is_totally_positive(y)) return false;
  if (ctx.degree() == 1) return true;
  IntCoords eta = ctx.positive_unit();
  // s < 1/2  <=>  y1 < eta1 y2;   s >= -1/2  <=>  eta1 y1 >= y2.
  bool upper = ctx.sign(ctx.sub(ctx.mul(eta, ctx.conj(y)), y), 0) > 0;
  bool lower = ctx.sign(ctx.sub(ctx.mul(eta, y), ctx.conj(y)), 0) >= 0;
  return upper && lower;
}

ConeReduction cone_reduce(const FieldContext& ctx, const IntCoords& x) {
  if (!ctx.is_totally_positive(x)) throw std::invalid_argument("cone_reduce: element is not totally positive");
  ConeReduction r;
  r.unit = {1, 0};
  r.representative = x;
  if (ctx.degree() == 1) return r;
  IntCoords eta = ctx.positive_unit();
  IntCoords eta_inv = ctx.conj(eta);
  auto k = -static_cast<int>(std::floor(cone_coordinate(ctx, x) + 0.5L));
  auto apply = [&](int step) {
    r.representative = ctx.mul(r.representative, step > 0 ? eta : eta_inv);
    r.exponent += step;
  };
  for (int i = 0; i < std::abs(k); ++i) apply(k > 0 ? 1 : -1);
  IntCoords y = r.representative;
  for (int guard = 0; guard < 8 && !in_cone(ctx, r.representative); ++guard) {
    y = r.representative;
    bool upper = ctx.sign(ctx.sub(ctx.mul(eta, ctx.conj(y)), y), 0) > 0;
    apply(upper ? 1 : -1);
  }
  if (!in_cone(ctx, r.representative)) throw std::logic_error("cone_reduce failed to converge");
  r.unit = r.exponent >= 0 ? ctx.pow(eta, r.exponent) : ctx.pow(eta_inv, -r.exponent);
  return r;
}

namespace {

void sort_by_norm(const FieldContext& ctx, std::vector<IntCoords>& v) {
  std::sort(v.begin(), v.end(), [&](const IntCoords& u, const IntCoords& w) {
    std::int64_t nu = ctx.norm(u), nw = ctx.norm(w);
    if (nu != nw) return nu < nw;
    long double u0 = ctx.embed(u, 0), w0 = ctx.embed(w, 0);
    if (u0 != w0) return u0 < w0;
    return ctx.embed(u, 1) < ctx.embed(w, 1);
  });
}

}  // namespace

std::vector<IntCoords> principal_primes_in_cone(const FieldContext& ctx, std::int64_t nmin, std::int64_t nmax,
                                                const std::vector<std::int64_t>& avoid) {
  std::vector<IntCoords> out;
  if (nmax < 2 || nmin > nmax) return out;
  auto coprime = [&](std::int64_t p) {
    return std::all_of(avoid.begin(), avoid.end(), [&](std::int64_t a) { return std::gcd(p, a) == 1; });
  };
  if (ctx.degree() == 1) {
    for (std::int64_t p = std::max<std::int64_t>(2, nmin); p <= nmax; ++p)
      if (is_prime(p) && coprime(p)) out.push_back({p, 0});
    return out;
  }
  long double eta1 = ctx.embed(ctx.positive_unit(), 0);
  long double a = std::sqrt(static_cast<long double>(nmax) * eta1) * (1 + 1e-9L);
  for (const auto& x : integers_in_box(ctx, {a, a})) {
    if (!in_cone(ctx, x)) continue;
    std::int64_t N = ctx.norm(x);
    if (N < nmin || N > nmax) continue;
    std::int64_t p = 0;
    if (is_prime(N)) {
      p = N;
    } else {
      std::int64_t r = isqrt64(N);
      if (r * r == N && ctx.is_inert(r)) p = r;
    }
    if (p != 0 && coprime(p)) out.push_back(x);
  }
  sort_by_norm(ctx, out);
  return out;
}

std::vector<IntCoords> totally_positive_in_cone(const FieldContext& ctx, std::int64_t nmin, std::int64_t nmax) {
  std::vector<IntCoords> out;
  if (nmax < 1 || nmin > nmax) return out;
  if (ctx.degree() == 1) {
    for (std::int64_t n = std::max<std::int64_t>(1, nmin); n <= nmax; ++n) out.push_back({n, 0});
    return out;
  }
  long double eta1 = ctx.embed(ctx.positive_unit(), 0);
  long double a = std::sqrt(static_cast<long double>(nmax) * eta1) * (1 + 1e-9L);
  for (const auto& x : integers_in_box(ctx, {a, a})) {
    if (!in_cone(ctx, x)) continue;
    std::int64_t N = ctx.norm(x);
    if (N >= nmin && N <= nmax) out.push_back(x);
  }
  sort_by_norm(ctx, out);
  return out;
}

}  // namespace supnorm
