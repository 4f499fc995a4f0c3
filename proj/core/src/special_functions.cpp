#include "supnorm/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace supnorm {

namespace {

template <class T>
T jacobi_rec(int n, int alpha, int beta, const T& t) {
  if (n < 0 || alpha < 0 || beta < 0) throw std::invalid_argument("jacobi: negative parameter");
  T p0 = 1;
  if (n == 0) return p0;
  T ab = alpha + beta;
  T p1 = T(alpha + 1) + (ab + 2) * (t - 1) / 2;
  for (int k = 2; k <= n; ++k) {
    T c = 2 * k + ab;
    T a1 = 2 * T(k) * (k + ab) * (c - 2);
    T a2 = (c - 1) * (T(alpha) * alpha - T(beta) * beta);
    T a3 = (c - 1) * c * (c - 2);
    T a4 = 2 * T(k + alpha - 1) * (k + beta - 1) * c;
    T p2 = ((a2 + a3 * t) * p1 - a4 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

BigInt factorial(int n) {
  BigInt f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

struct RealQ {
  double x[4];
};

RealQ rmul(const RealQ& p, const RealQ& q, double a, double b) {
  const double* x = p.x;
  const double* y = q.x;
  return {{x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - a * b * x[3] * y[3],
           x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2],
           x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1],
           x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]}};
}

double rinner(const RealQ& p, const RealQ& q, double a, double b) {
  return p.x[0] * q.x[0] - a * p.x[1] * q.x[1] - b * p.x[2] * q.x[2] + a * b * p.x[3] * q.x[3];
}

}  // namespace

double jacobi_eval(int n, int alpha, int beta, double t) {
  return static_cast<double>(jacobi_rec<long double>(n, alpha, beta, t));
}

Rational jacobi_eval_exact(int n, int alpha, int beta, const Rational& t) { return jacobi_rec<Rational>(n, alpha, beta, t); }

Rational jacobi_norm_exact(int n, int alpha, int beta) {
  if (n < 0 || alpha < 0 || beta < 0) throw std::invalid_argument("jacobi: negative parameter");
  Rational r = Rational(BigInt(1) << (alpha + beta + 1), 2 * n + alpha + beta + 1);
  return r * Rational(factorial(n + alpha) * factorial(n + beta), factorial(n + alpha + beta) * factorial(n));
}

double matrix_coeff(int m, int l, double t) {
  int al = std::abs(l);
  if (m < 0 || al > m) throw std::invalid_argument("matrix_coeff: need |l| <= m");
  if (t < -1 || t > 1) throw std::invalid_argument("matrix_coeff: t outside [-1, 1]");
  long double h = std::pow((1.0L + t) / 2, al);
  long double p = jacobi_rec<long double>(m - al, 0, 2 * al, t);
  return static_cast<double>(h * std::fabs(p));
}

double decay_bound(int m, int l, double t) {
  if (!(t * t < 1)) throw std::invalid_argument("decay bound degenerates at t = +-1");
  double v = std::sqrt((std::abs(l) + 1.0) / (m + 1.0)) * std::pow(1 - t * t, -0.25);
  return std::min(1.0, v);
}

double decay_margin(int m, int l, double t) { return matrix_coeff(m, l, t) / decay_bound(m, l, t); }

double product_coeff(const std::vector<int>& m, const std::vector<int>& l, const std::vector<double>& t) {
  if (m.size() != l.size() || m.size() != t.size()) throw std::invalid_argument("product_coeff: length mismatch");
  double p = 1;
  for (std::size_t s = 0; s < m.size(); ++s) p *= matrix_coeff(m[s], l[s], t[s]);
  return p;
}

double so4_character(int m, double t) {
  if (m < 0) throw std::invalid_argument("so4_character: m < 0");
  if (t < -1 || t > 1) throw std::invalid_argument("so4_character: t outside [-1, 1]");
  // U_m(t) / (m + 1)
  long double u0 = 1, u1 = 2.0L * t;
  if (m == 0) return 1;
  for (int k = 2; k <= m; ++k) {
    long double u2 = 2.0L * t * u1 - u0;
    u0 = u1;
    u1 = u2;
  }
  return static_cast<double>(u1 / (m + 1));
}

double so4_bound(int m, double t) {
  double s = 1 - t * t;
  if (s <= 0) return 1;
  return std::min(1.0, 1.0 / ((m + 1) * std::sqrt(s)));
}

DecayScan decay_scan(int m_max, double l_exponent, double t_max, double t_step, std::vector<DecayRow>* rows) {
  DecayScan scan;
  scan.max_by_m.assign(m_max + 1, 0.0);
  int nt = static_cast<int>(std::llround(2 * t_max / t_step));
  for (int m = 0; m <= m_max; ++m) {
    int lmax = std::min(m, static_cast<int>(std::floor(std::pow(static_cast<double>(m), l_exponent) + 1e-12)));
    for (int l = 0; l <= lmax; ++l)
      for (int k = 0; k <= nt; ++k) {
        double t = -t_max + k * t_step;
        DecayRow row;
        row.m = m;
        row.l = l;
        row.t = t;
        row.coeff = matrix_coeff(m, l, t);
        row.bound = decay_bound(m, l, t);
        row.ratio = row.coeff / row.bound;
        if (row.ratio > scan.max_by_m[m]) scan.max_by_m[m] = row.ratio;
        if (row.ratio > scan.max_ratio) {
          scan.max_ratio = row.ratio;
          scan.argmax = row;
        }
        if (rows) rows->push_back(row);
      }
  }
  return scan;
}

std::vector<double> t_parameter(const QuaternionAlgebra& alg, const Quaternion& g, const std::vector<std::array<double, 3>>& xprime) {
  const auto& ctx = alg.context();
  if (static_cast<int>(xprime.size()) != ctx.degree()) throw std::invalid_argument("need one direction per embedding");
  FieldElement ell = alg.norm(g);
  std::vector<double> out;
  for (int s = 0; s < ctx.degree(); ++s) {
    double l = static_cast<double>(ell.embedding(s));
    if (!(l > 0)) throw std::invalid_argument("t_parameter: nr(g) must be totally positive");
    double a = static_cast<double>(alg.a().embedding(s)), b = static_cast<double>(alg.b().embedding(s));
    double g0 = static_cast<double>(g.x[0].embedding(s));
    const auto& x = xprime[s];
    double ip = -a * static_cast<double>(g.x[1].embedding(s)) * x[0] - b * static_cast<double>(g.x[2].embedding(s)) * x[1] +
                a * b * static_cast<double>(g.x[3].embedding(s)) * x[2];
    out.push_back(-1 + 2 * (g0 * g0 + ip * ip) / l);
  }
  return out;
}

std::vector<double> t_parameter_rotation(const QuaternionAlgebra& alg, const Quaternion& g,
                                         const std::vector<std::array<double, 3>>& xprime) {
  const auto& ctx = alg.context();
  if (static_cast<int>(xprime.size()) != ctx.degree()) throw std::invalid_argument("need one direction per embedding");
  std::vector<double> out;
  for (int s = 0; s < ctx.degree(); ++s) {
    double a = static_cast<double>(alg.a().embedding(s)), b = static_cast<double>(alg.b().embedding(s));
    RealQ gq{}, gc{}, xq{0, xprime[s][0], xprime[s][1], xprime[s][2]};
    for (int k = 0; k < 4; ++k) gq.x[k] = static_cast<double>(g.x[k].embedding(s));
    double n = rinner(gq, gq, a, b);
    if (!(n > 0)) throw std::invalid_argument("t_parameter: nr(g) must be totally positive");
    gc = {{gq.x[0] / n, -gq.x[1] / n, -gq.x[2] / n, -gq.x[3] / n}};
    RealQ w = rmul(rmul(gq, xq, a, b), gc, a, b);
    out.push_back(rinner(xq, w, a, b));
  }
  return out;
}

}  // namespace supnorm
