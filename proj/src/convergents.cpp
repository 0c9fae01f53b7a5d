#include "alphacf/convergents.hpp"

#include <cmath>

namespace alphacf {

namespace {

long double to_ld(const BigInt& v) { return v.convert_to<long double>(); }

}  // namespace

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("cannot convert a non-finite value to a rational");
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  // mant * 2^53 is an integer for every finite double.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r{BigInt(scaled)};
  if (exp > 0) {
    r *= Rational(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= Rational(BigInt(1) << -exp);
  }
  return r;
}

ConvergentState push_digit(const ConvergentState& state, Digit a) {
  if (a == 0) throw ParameterError("push_digit: digit must be nonzero");
  ConvergentState next;
  next.p_prev = state.p_cur;
  next.q_prev = state.q_cur;
  next.p_cur = a * state.p_cur + state.p_prev;
  next.q_cur = a * state.q_cur + state.q_prev;
  next.n = state.n + 1;
  return next;
}

ConvergentState convergents_of(std::span<const Digit> digits) {
  ConvergentState s;
  for (Digit a : digits) s = push_digit(s, a);
  return s;
}

Rational convergent_value(const ConvergentState& state) {
  if (state.q_cur == 0) throw SingularityError("convergent_value: q_n is zero");
  return make_rational(state.p_cur, state.q_cur);
}

double reconstruct(const ConvergentState& state, double tail) {
  const long double t = tail;
  const long double den = to_ld(state.q_prev) * t + to_ld(state.q_cur);
  if (den == 0.0L) throw SingularityError("reconstruct: zero denominator");
  return static_cast<double>((to_ld(state.p_prev) * t + to_ld(state.p_cur)) / den);
}

Rational reconstruct(const ConvergentState& state, const Rational& tail) {
  const Rational den = Rational(state.q_prev) * tail + Rational(state.q_cur);
  if (den == 0) throw SingularityError("reconstruct: zero denominator");
  return (Rational(state.p_prev) * tail + Rational(state.p_cur)) / den;
}

double approx_error(const ConvergentState& state, double tail) {
  const long double t = tail;
  const long double q = to_ld(state.q_cur);
  const long double den = q * (to_ld(state.q_prev) * t + q);
  if (den == 0.0L) throw SingularityError("approx_error: zero denominator");
  return static_cast<double>(std::fabs(t / den));
}

Rational approx_error(const ConvergentState& state, const Rational& tail) {
  const Rational den = Rational(state.q_cur) * (Rational(state.q_prev) * tail + Rational(state.q_cur));
  if (den == 0) throw SingularityError("approx_error: zero denominator");
  return boost::multiprecision::abs(tail / den);
}

double psi_derivative(const ConvergentState& state, double y) {
  const long double den = to_ld(state.q_prev) * static_cast<long double>(y) + to_ld(state.q_cur);
  if (den == 0.0L) throw SingularityError("psi_derivative: zero denominator");
  return static_cast<double>(1.0L / (den * den));
}

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw SingularityError("make_rational: zero denominator");
  return den < 0 ? Rational(-num, -den) : Rational(num, den);
}

BigInt floor_of(const Rational& r) {
  const BigInt& n = numerator(r);
  const BigInt& d = denominator(r);  // always positive
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

BigInt ceil_of(const Rational& r) {
  const BigInt f = floor_of(r);
  return Rational(f) == r ? f : f + 1;
}

ExactStep exact_step(const Rational& alpha, const Rational& x) {
  if (x == 0) return {BigInt(0), Rational(0)};
  const Rational inv = 1 / x;
  BigInt a = floor_of(inv + 1 - alpha);
  return {a, inv - a};
}

LogConvergentState push_digit_log(const LogConvergentState& state, Digit a) {
  const double s = static_cast<double>(a) + state.ratio;
  if (std::fabs(s) < 1e-300) throw SingularityError("push_digit_log: a + ratio vanishes");
  return {state.log_q + std::log(std::fabs(s)), 1.0 / s, state.n + 1};
}

}  // namespace alphacf
