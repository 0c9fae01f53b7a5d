#pragma once

// Convergents p_n/q_n of an alpha-expansion.
//
// The exact path keeps the matrix
//
//   ( p_{n-1}  p_n )   ( 0 1 )       ( 0 1 )
//   ( q_{n-1}  q_n ) = ( 1 a_1 ) ... ( 1 a_n )
//
// over arbitrary-precision integers. The log path keeps only log|q_n| and
// q_{n-1}/q_n, which is what long entropy runs need.

#include <boost/multiprecision/cpp_int.hpp>
#include <span>
#include <vector>

#include "alphacf/cf_core.hpp"

namespace alphacf {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact rational value of a double (every finite double is a dyadic rational).
Rational to_rational(double x);

// num/den for any nonzero den (the rational type rejects negative ones).
Rational make_rational(const BigInt& num, const BigInt& den);

BigInt floor_of(const Rational& r);
BigInt ceil_of(const Rational& r);

struct ExactStep {
  BigInt digit;    // 0 for x == 0
  Rational image;
};

// T_alpha in exact arithmetic for rational alpha and x in [alpha-1, alpha).
ExactStep exact_step(const Rational& alpha, const Rational& x);

struct ConvergentState {
  BigInt p_prev{1};
  BigInt p_cur{0};
  BigInt q_prev{0};
  BigInt q_cur{1};
  std::size_t n = 0;

  // p_{n-1} q_n - p_n q_{n-1}; always +-1.
  BigInt determinant() const { return p_prev * q_cur - p_cur * q_prev; }
};

// Throws ParameterError for a == 0.
ConvergentState push_digit(const ConvergentState& state, Digit a);
ConvergentState convergents_of(std::span<const Digit> digits);

// p_n / q_n. Throws SingularityError when q_n == 0.
Rational convergent_value(const ConvergentState& state);

// (p_{n-1} t + p_n) / (q_{n-1} t + q_n): recovers x from its first n digits
// and the tail t = T^n x. Throws SingularityError on a zero denominator.
double reconstruct(const ConvergentState& state, double tail);
Rational reconstruct(const ConvergentState& state, const Rational& tail);

// |x - p_n/q_n| = |t| / |q_n (q_{n-1} t + q_n)|, evaluated directly rather
// than by subtraction.
double approx_error(const ConvergentState& state, double tail);
Rational approx_error(const ConvergentState& state, const Rational& tail);

// |psi'(y)| = 1 / (q_{n-1} y + q_n)^2 for the local inverse psi of T^n on the
// cylinder of the state's digits.
double psi_derivative(const ConvergentState& state, double y);

struct LogConvergentState {
  double log_q = 0.0;  // log |q_n|
  double ratio = 0.0;  // q_{n-1} / q_n
  std::size_t n = 0;
};

// log_q += log|a + ratio|, ratio = 1/(a + ratio).
// Throws SingularityError if |a + ratio| < 1e-300.
LogConvergentState push_digit_log(const LogConvergentState& state, Digit a);

}  // namespace alphacf
