#include "alphacf/cf_core.hpp"

#include <sstream>

namespace alphacf {

AlphaParam AlphaParam::make(double alpha) {
  if (!(alpha >= 0.5 && alpha <= 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "alpha must lie in [1/2, 1], got " << alpha;
    throw ParameterError(os.str());
  }
  AlphaParam p(alpha);
  const Step s = raw::step(alpha, alpha - 1.0);
  p.t_lower_ = s.image;
  if (alpha > kGolden && alpha < 1.0) {
    p.d_ = -s.digit;
    p.b_ = static_cast<Digit>(std::floor(s.image + alpha));
  }
  return p;
}

void throw_outside_domain(const AlphaParam& alpha, double x) {
  std::ostringstream os;
  os.precision(17);
  os << "x = " << x << " outside [" << alpha.lower() << ", " << alpha.upper() << ")";
  throw DomainError(os.str());
}

Digit digit(const AlphaParam& alpha, double x) { return step(alpha, x).digit; }

double t_alpha(const AlphaParam& alpha, double x) { return step(alpha, x).image; }

std::vector<OrbitPoint> orbit(const AlphaParam& alpha, double x, std::size_t n) {
  if (!alpha.contains(x)) throw_outside_domain(alpha, x);
  std::vector<OrbitPoint> out;
  out.reserve(n + 1);
  double cur = x;
  for (std::size_t k = 0; k <= n; ++k) {
    if (std::fabs(cur) < kZeroThreshold) {
      // 0 is a fixed point; pad so the caller still sees n+1 points.
      for (; k <= n; ++k) out.push_back({0.0, k, true});
      break;
    }
    out.push_back({cur, k, false});
    if (k == n) break;
    const Step s = raw::step(alpha.value(), cur);
    cur = s.digit == 0 ? 0.0 : s.image;
  }
  return out;
}

DigitSeq expand(const AlphaParam& alpha, double x, std::size_t n) {
  if (!alpha.contains(x)) throw_outside_domain(alpha, x);
  DigitSeq seq{{}, alpha.value(), false};
  seq.digits.reserve(n);
  double cur = x;
  for (std::size_t k = 0; k < n; ++k) {
    const Step s = raw::step(alpha.value(), cur);
    if (s.digit == 0) {
      seq.terminated = true;
      break;
    }
    seq.digits.push_back(s.digit);
    cur = s.image;
  }
  return seq;
}

Conjugate symmetry_conjugate(const AlphaParam& alpha, double x) {
  if (!alpha.contains(x)) throw_outside_domain(alpha, x);
  return {1.0 - alpha.value(), -x};
}

bool digits_in_range(const AlphaParam& alpha, const std::vector<Digit>& digits) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const Digit a = digits[i];
    if (a == 0) {
      if (i + 1 != digits.size()) return false;
      continue;
    }
    if (alpha.extended()) {
      if (!(a >= 1 || a <= -3)) return false;
    } else if (a > -2 && a < 2) {
      return false;
    }
  }
  return true;
}

}  // namespace alphacf
