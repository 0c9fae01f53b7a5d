#pragma once

// One-dimensional Tanaka-Ito alpha-continued fraction map
//
//   T_alpha(x) = 1/x - floor(1/x + 1 - alpha),   x in [alpha-1, alpha), x != 0,
//   T_alpha(0) = 0,
//
// together with its digit function, orbits, expansions and the x -> -x,
// alpha -> 1-alpha symmetry. Only alpha in [1/2, 1] is a first-class
// parameter; smaller alpha is reached through the symmetry.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "alphacf/errors.hpp"

namespace alphacf {

using Digit = std::int64_t;

// g = (sqrt(5)-1)/2 and G = 1/g = g+1.
inline constexpr double kGolden = 0.61803398874989484820;
inline constexpr double kGoldenRatio = 1.61803398874989484820;

// |x| below this is treated as 0: digit 0, orbit terminates.
inline constexpr double kZeroThreshold = 1e-12;
// Digits larger than this in magnitude terminate an orbit.
inline constexpr double kDigitCap = 1e15;

class AlphaParam {
 public:
  // Throws ParameterError unless 1/2 <= alpha <= 1.
  static AlphaParam make(double alpha);

  double value() const { return alpha_; }
  double lower() const { return alpha_ - 1.0; }
  double upper() const { return alpha_; }

  // alpha in (g, 1]: digits a >= 1 or a <= -3.
  // alpha in [1/2, g]: nonzero digits satisfy |a| >= 2.
  bool extended() const { return alpha_ > kGolden; }

  // d = -a_1(alpha-1) and b = floor(T_alpha(alpha-1) + alpha); only for alpha in (g, 1).
  std::optional<Digit> d() const { return d_; }
  std::optional<Digit> b() const { return b_; }
  // T_alpha(alpha-1), defined for every alpha in range.
  double t_lower() const { return t_lower_; }

  bool contains(double x) const { return x >= alpha_ - 1.0 && x < alpha_; }

  friend bool operator==(const AlphaParam& a, const AlphaParam& b) { return a.alpha_ == b.alpha_; }

 private:
  explicit AlphaParam(double alpha) : alpha_(alpha) {}

  double alpha_;
  double t_lower_ = 0.0;
  std::optional<Digit> d_;
  std::optional<Digit> b_;
};

struct Step {
  Digit digit;    // 0 when x is (numerically) zero or the digit exceeds the cap
  double image;   // T_alpha(x); 0 when digit == 0
};

struct OrbitPoint {
  double x;
  std::size_t k;
  bool terminated;
};

struct DigitSeq {
  std::vector<Digit> digits;
  double alpha;
  bool terminated = false;  // expansion ended because an iterate hit 0
};

namespace raw {

// One application of the map formula for an arbitrary real parameter,
// without range validation. Applies the floor post-correction so that the
// image lies in [alpha-1, alpha).
inline Step step(double alpha, double x) {
  if (std::fabs(x) < kZeroThreshold) return {0, 0.0};
  const double inv = 1.0 / x;
  const double fl = std::floor(inv + 1.0 - alpha);
  if (std::fabs(fl) > kDigitCap) return {0, 0.0};
  auto a = static_cast<Digit>(fl);
  double t = inv - static_cast<double>(a);
  if (t >= alpha) {
    ++a;
    t = inv - static_cast<double>(a);
  } else if (t < alpha - 1.0) {
    --a;
    t = inv - static_cast<double>(a);
  }
  return {a, t};
}

}  // namespace raw

[[noreturn]] void throw_outside_domain(const AlphaParam& alpha, double x);

inline Step step(const AlphaParam& alpha, double x) {
  if (!alpha.contains(x)) throw_outside_domain(alpha, x);
  return raw::step(alpha.value(), x);
}

Digit digit(const AlphaParam& alpha, double x);
double t_alpha(const AlphaParam& alpha, double x);

// (x, T x, ..., T^n x). Once an iterate is zero the remaining points are 0
// and flagged terminated.
std::vector<OrbitPoint> orbit(const AlphaParam& alpha, double x, std::size_t n);

// First n digits of x; fewer when the orbit reaches 0.
DigitSeq expand(const AlphaParam& alpha, double x, std::size_t n);

struct Conjugate {
  double alpha;  // 1 - alpha, possibly outside [1/2, 1]
  double x;      // -x
};

Conjugate symmetry_conjugate(const AlphaParam& alpha, double x);

// True when the digit sequence obeys the digit-range rules for its alpha.
bool digits_in_range(const AlphaParam& alpha, const std::vector<Digit>& digits);

}  // namespace alphacf
