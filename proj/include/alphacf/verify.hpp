#pragma once

// Randomized and exhaustive checks of the inequalities and identities the
// library relies on. Each check returns a report; a suite passes when it ran
// at least one trial and found no violation.

#include <cstdint>
#include <string>
#include <vector>

namespace alphacf {

struct VerifyReport {
  std::string suite;
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::string counterexample;  // first violation found
  std::string detail;

  bool passed() const { return trials > 0 && violations == 0; }
};

// |q_n| > |q_{n-1}| for alpha in [1/2, g]; -1/2 < q_{n-1}/q_n < 2 with
// ratio >= 1 only after a digit 1 for alpha in (g, 1]. Every prefix of
// random expansions of length up to max_n is checked in exact integers.
VerifyReport verify_q_ratio(std::size_t trials, std::uint64_t seed, std::size_t max_n = 40);

// 1/(9 q_n^2) < |psi'(y)| < 1/(g^4 q_n^2) for y in the image of random
// cylinders.
VerifyReport verify_distortion(std::size_t trials, std::uint64_t seed, std::size_t max_n = 30);

// Largest cylinder of length n <= max_n is at most g^(2(n-1))/2.
VerifyReport verify_cylinder_size(const std::vector<double>& alphas, std::size_t max_n = 12);

// lambda(B_n) <= (2 g^2)^(n-1)/4, B_n has at most 2^n words and does not
// grow with n.
VerifyReport verify_nonfull(const std::vector<double>& alphas, std::size_t max_n = 12);

struct ContainmentOptions {
  std::vector<double> alphas{0.65, 0.7, 0.8, 0.9, 0.95};
  std::size_t resolution = 1000;
  std::size_t iters = 100;
  std::size_t seeds_per_column = 0;  // 0 selects the library default
  double min_coverage = 0.999;
};

// Every orbit point of the mask construction lies in X_alpha, and at least
// min_coverage of the cells inside Y_alpha and inside the inclusion
// rectangle are marked.
VerifyReport verify_containment(const ContainmentOptions& options);

// Transfer relations between T_alpha and T_beta for random g <= alpha <= beta <= 1.
VerifyReport verify_transfer(std::size_t trials, std::uint64_t seed);

// Determinant +-1, exact reconstruction and exact error formula for random
// words of length up to max_n, plus agreement of the double path within
// 1e-12 relative.
VerifyReport verify_identities(std::size_t trials, std::uint64_t seed, std::size_t max_n = 30);

// Suite names accepted by run_suite, "all" last.
const std::vector<std::string>& suite_names();

struct SuiteOptions {
  std::size_t samples = 0;  // 0 selects each suite's default trial count
  std::uint64_t seed = 7;
  std::size_t resolution = 1000;
  std::size_t iters = 100;
};

// Throws ParameterError for an unknown name.
std::vector<VerifyReport> run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace alphacf
