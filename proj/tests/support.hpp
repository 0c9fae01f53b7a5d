#pragma once

// Test-side oracles and generators. Nothing here calls into the library's
// own exact-arithmetic helpers, so the oracles stay independent.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Z = boost::multiprecision::cpp_int;
using Q = boost::multiprecision::cpp_rational;

inline Q q(std::int64_t n, std::int64_t d = 1) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  return Q(n, d);
}

// Exact value of a double.
inline Q exact(double v) {
  int e = 0;
  const double m = std::frexp(v, &e);
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  Q r(mant);
  const int shift = e - 53;
  if (shift >= 0) {
    r *= Q(Z(1) << shift);
  } else {
    r /= Q(Z(1) << -shift);
  }
  return r;
}

inline Z floor_q(const Q& r) {
  const Z n = numerator(r);
  const Z d = denominator(r);
  Z f = n / d;  // truncates toward zero
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

inline double to_d(const Q& r) { return r.convert_to<double>(); }

struct QStep {
  Z digit;
  Q image;
};

// a = floor(1/x + 1 - alpha), T x = 1/x - a; digit 0 at x = 0.
inline QStep step(const Q& alpha, const Q& x) {
  if (x == 0) return {Z(0), Q(0)};
  const Q inv = 1 / x;
  const Z a = floor_q(inv + 1 - alpha);
  return {a, inv - Q(a)};
}

inline std::vector<std::int64_t> digits(const Q& alpha, Q x, std::size_t n) {
  std::vector<std::int64_t> out;
  for (std::size_t k = 0; k < n && x != 0; ++k) {
    const QStep s = step(alpha, x);
    out.push_back(s.digit.convert_to<std::int64_t>());
    x = s.image;
  }
  return out;
}

// Value of [0; a_1, ..., a_n + tail] by backward evaluation 1/(a_k + ...).
inline Q value_of(const std::vector<std::int64_t>& w, const Q& tail) {
  Q v = tail;
  for (auto it = w.rbegin(); it != w.rend(); ++it) v = 1 / (Q(*it) + v);
  return v;
}

struct QConvergents {
  Z p_prev{1}, p{0}, q_prev{0}, q{1};
};

// Matrix product of (0 1; 1 a_k), written out directly.
inline QConvergents convergents(const std::vector<std::int64_t>& w) {
  QConvergents c;
  for (std::int64_t a : w) {
    const Z np = Z(a) * c.p + c.p_prev;
    const Z nq = Z(a) * c.q + c.q_prev;
    c.p_prev = c.p;
    c.q_prev = c.q;
    c.p = np;
    c.q = nq;
  }
  return c;
}

}  // namespace oracle

// Hand-rolled generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
  }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  // alpha in [1/2, 1], with the special values 1/2, g and 1 overrepresented.
  double alpha();
  // x in [alpha-1, alpha).
  double point(double alpha) {
    double x = uniform(alpha - 1.0, alpha);
    return x >= alpha ? alpha - 1.0 : x;
  }
  // Exact dyadic x = alpha - 1 + U / 2^bits inside [alpha-1, alpha) for dyadic alpha.
  oracle::Q dyadic_point(const oracle::Q& alpha, int bits = 256) {
    oracle::Z u = 0;
    for (int i = 0; i < bits; i += 64) u = (u << 64) + oracle::Z(eng_());
    u >>= ((bits + 63) / 64 * 64 - bits);
    return alpha - 1 + oracle::Q(u) / oracle::Q(oracle::Z(1) << bits);
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

inline constexpr double kG = 0.61803398874989484820;

inline double Gen::alpha() {
  const double u = uniform(0.0, 1.0);
  if (u < 0.05) return 0.5;
  if (u < 0.10) return kG;
  if (u < 0.15) return 1.0;
  return uniform(0.5, 1.0);
}
