#pragma once

// Invariant density of T_alpha, entropy estimators and the sweep of
// h(T_alpha) * mu_hat(Omega_alpha) over alpha. All logarithms are natural.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "alphacf/cf_core.hpp"
#include "alphacf/region_mask.hpp"

namespace alphacf {

// Piecewise-constant density on [alpha-1, alpha] over uniform columns.
struct DensityProfile {
  double alpha = 0.0;
  double lower = 0.0;
  double dx = 0.0;
  std::vector<double> x;   // column centres
  std::vector<double> xi;  // density per column, sum(xi) * dx == 1
  double mu_hat_total = 0.0;

  std::size_t columns() const { return xi.size(); }
  double integral() const;
  // Integral of the density over [a, b].
  double mass(double a, double b) const;
  // Inverse CDF; u in [0, 1).
  double sample(double u) const;

  // Profile of an explicit density f on `columns` columns, normalized.
  static DensityProfile from_function(const AlphaParam& alpha, std::size_t columns,
                                      const std::function<double(double)>& f);
};

// xi(x) proportional to the fiber integral over occupied cells of column x,
//   sum (y1 - y0) / ((1 + x y0)(1 + x y1)),
// at the column centre, normalized to unit mass. Throws DomainError for an
// empty mask.
DensityProfile density_profile(const RegionMask& mask);

enum class EntropyMethod { qn_growth, birkhoff_rokhlin, quadrature_rokhlin };

const char* to_string(EntropyMethod m);

struct EntropyEstimate {
  double value = 0.0;      // nats
  double std_error = 0.0;
  EntropyMethod method = EntropyMethod::qn_growth;
  std::size_t n = 0;        // orbit length (columns for quadrature)
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// 2 log|q_n| / n averaged over `samples` orbits from uniform (or, when
// `start` is given, density-distributed) starting points. Orbits reaching 0
// are discarded and redrawn. Requires n >= 1000 and samples >= 1.
EntropyEstimate entropy_qn(const AlphaParam& alpha, std::size_t samples, std::size_t n, std::uint64_t seed,
                           const DensityProfile* start = nullptr);

// Time average of -2 log|T^k x| over k < n, averaged over samples.
EntropyEstimate entropy_birkhoff(const AlphaParam& alpha, std::size_t samples, std::size_t n,
                                 std::uint64_t seed, const DensityProfile* start = nullptr);

// Integral of -2 log|x| against the profile; each column is integrated
// analytically, which also handles the column that contains 0.
EntropyEstimate entropy_quadrature(const DensityProfile& profile);

// Time average of the indicator of [a, b) along one orbit of length n, with
// a batch-means standard error.
struct BirkhoffAverage {
  double mean = 0.0;
  double std_error = 0.0;
};
BirkhoffAverage birkhoff_indicator(const AlphaParam& alpha, double x0, std::size_t n, double a, double b);

struct SweepConfig {
  std::size_t resolution = 500;
  std::size_t iters = 100;
  std::size_t seeds_per_column = kDefaultSeedsPerColumn;
  std::size_t samples = 200;
  std::size_t n = 10'000;
  std::uint64_t seed = 7;
};

struct SweepRow {
  double alpha = 0.0;
  EntropyEstimate h;
  double mu_hat = 0.0;
  // Discretization uncertainty of mu_hat (half the boundary-cell mass).
  double mu_hat_error = 0.0;
  double product = 0.0;
  double product_error = 0.0;
  bool golden = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool monotone = false;
};

// The 11-point grid 0.50, 0.55, ..., 1.00 with g inserted in order.
std::vector<double> default_sweep_alphas(std::size_t steps = 11);

// Requires alphas sorted and inside [1/2, 1].
SweepResult product_sweep(const std::vector<double>& alphas, const SweepConfig& config);

// True when products never increase by more than twice the combined error
// of the pair.
bool non_increasing(const std::vector<SweepRow>& rows);

// CSV `alpha,h,stderr_h,mu_hat,product,method,n,samples,seed`.
void write_sweep_csv(const SweepResult& result, std::ostream& os);

}  // namespace alphacf
