#pragma once

// Cylinder sets <a_1, ..., a_n> = { x : a_k(x) = a_k, k = 1..n }, their
// images under T^n, fullness, the non-full sets B_n and the jump
// transformation x -> T^{N(x)} x.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "alphacf/cf_core.hpp"
#include "alphacf/convergents.hpp"

namespace alphacf {

// Rational pullback is the default; the double path loses resolution once
// a cylinder is a few ulps wide.
enum class Arithmetic {
  exact,
  floating,
};

struct CylinderSpec {
  std::vector<Digit> word;
  double alpha = 0.0;
  bool admissible = false;
  // Closure of the cylinder interval and of its image T^n(cylinder).
  double lo = 0.0;
  double hi = 0.0;
  double image_lo = 0.0;
  double image_hi = 0.0;
  // Lebesgue measure, computed without cancellation on the exact path.
  double length = 0.0;
  bool full = false;
  // 1-based position at which the branch-by-branch pullback was first cut
  // short by the domain; empty when it never was.
  std::optional<std::size_t> truncated_at;
  bool exact = false;
};

// Pulls [alpha-1, alpha) back through the inverse branches of the word.
// An inadmissible word yields admissible == false, not an exception.
CylinderSpec cylinder_of(const AlphaParam& alpha, std::span<const Digit> word,
                         Arithmetic arith = Arithmetic::exact);

bool is_full(const CylinderSpec& spec);

// Secondary fullness test: maps the cylinder endpoints forward with the
// inverse Moebius map of the word and checks that they span [alpha-1, alpha].
bool endpoint_image_full(const CylinderSpec& spec, double tol = 1e-9);

struct CylinderSearch {
  double max_length = 0.0;
  std::vector<Digit> argmax;
  std::size_t nodes = 0;
  bool exhausted_budget = false;
};

// Largest admissible cylinder of length n, by branch and bound over all
// digits: extensions never grow a cylinder, and a child is bounded by the
// parent's maximal |psi'| times its branch length. `budget` caps the number
// of examined children; the result is exact unless exhausted_budget is set.
CylinderSearch max_cylinder_measure(const AlphaParam& alpha, std::size_t n, std::size_t budget = 2'000'000);

struct NonFullSet {
  double measure = 0.0;
  std::vector<std::vector<Digit>> words;  // sorted, unique
};

// One-sided digit expansions of the domain endpoints: alpha approached from
// below and alpha-1 approached from above, up to n digits each.
std::vector<Digit> upper_endpoint_digits(const AlphaParam& alpha, std::size_t n);
std::vector<Digit> lower_endpoint_digits(const AlphaParam& alpha, std::size_t n);

// B_n: union of the length-n cylinders none of whose prefixes is full.
// Candidates are concatenations of prefixes of the two endpoint expansions.
// Requires 1 <= n <= 20.
NonFullSet nonfull_union_measure(const AlphaParam& alpha, std::size_t n);

struct JumpRecord {
  double x = 0.0;
  std::size_t N = 0;  // 0 when no full prefix was found within the bound
  double image = 0.0;
};

inline constexpr std::size_t kDefaultJumpBound = 50;

JumpRecord jump(const AlphaParam& alpha, double x, std::size_t search_bound = kDefaultJumpBound);

}  // namespace alphacf
