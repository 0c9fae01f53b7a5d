#include <gtest/gtest.h>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>

#include "alphacf/ergodic_stats.hpp"
#include "alphacf/parallel.hpp"
#include "support.hpp"

using namespace alphacf;

namespace {

const double kPi2 = boost::math::constants::pi_sqr<double>();
const double kLogGolden = std::log((1.0 + std::sqrt(5.0)) / 2.0);
const double kH1 = kPi2 / (6.0 * std::log(2.0));
const double kHalf = kPi2 / (6.0 * kLogGolden);

struct EnvThreads {
  explicit EnvThreads(const char* v) {
    if (const char* old = std::getenv("ALPHACF_THREADS")) saved = old;
    ::setenv("ALPHACF_THREADS", v, 1);
  }
  ~EnvThreads() {
    if (saved.empty()) {
      ::unsetenv("ALPHACF_THREADS");
    } else {
      ::setenv("ALPHACF_THREADS", saved.c_str(), 1);
    }
  }
  std::string saved;
};

// Fiber integral of dy/(1+xy)^2 over [y0, y1].
double fiber(double x, double y0, double y1) { return (y1 - y0) / ((1.0 + x * y0) * (1.0 + x * y1)); }

// Density of the nearest-integer map from its known domain.
double half_density(double x) {
  const double g = kG;
  return x < 0 ? fiber(x, -g, g * g) : fiber(x, -g * g, g);
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

const DensityProfile& mask_profile(double a) {
  static std::map<double, DensityProfile> cache;
  auto it = cache.find(a);
  if (it == cache.end()) {
    const AlphaParam p = AlphaParam::make(a);
    it = cache.emplace(a, density_profile(build_omega(p, 1000, 1000, 100))).first;
  }
  return it->second;
}

}  // namespace

TEST(Oracle, RokhlinIntegralsByQuadrature) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double gauss = ts.integrate([](double x) { return -2.0 * std::log(x) / ((1.0 + x) * std::log(2.0)); }, 0.0, 1.0);
  EXPECT_NEAR(gauss, kH1, 1e-12);
  EXPECT_NEAR(kH1, 2.3731, 1e-4);
  const double mass = ts.integrate(half_density, -0.5, 0.0) + ts.integrate(half_density, 0.0, 0.5);
  EXPECT_NEAR(mass, 2.0 * kLogGolden, 1e-12);
  const auto f = [&](double x) { return -2.0 * std::log(std::fabs(x)) * half_density(x) / mass; };
  const double h = ts.integrate(f, -0.5, 0.0) + ts.integrate(f, 0.0, 0.5);
  EXPECT_NEAR(h, kHalf, 1e-10);
  EXPECT_NEAR(kHalf, 3.4183, 1e-4);
}

TEST(DensityProfile, GaussFromFullMask) {
  const RegionMask mask = build_omega(AlphaParam::make(1.0), 1000, 1000, 100);
  const DensityProfile p = density_profile(mask);
  ASSERT_EQ(p.columns(), 1000u);
  double worst = 0.0;
  for (std::size_t i = 0; i < p.columns(); ++i) {
    const double gauss = 1.0 / ((1.0 + p.x[i]) * std::log(2.0));
    worst = std::max(worst, std::fabs(p.xi[i] - gauss) / gauss);
  }
  EXPECT_LT(worst, 0.02);
  EXPECT_NEAR(p.integral(), 1.0, 1e-6);
  EXPECT_NEAR(p.mu_hat_total, std::log(2.0), 0.01 * std::log(2.0));
}

TEST(DensityProfile, NormalizedAndPositive) {
  for (double a : {0.5, 0.55, 0.6, kG, 0.7, 0.8, 0.9, 1.0}) {
    const AlphaParam p = AlphaParam::make(a);
    const DensityProfile d = density_profile(build_omega(p, 300, 300, 100));
    EXPECT_NEAR(d.integral(), 1.0, 1e-6) << a;
    EXPECT_GT(*std::min_element(d.xi.begin(), d.xi.end()), 0.0) << a;
    EXPECT_DOUBLE_EQ(d.lower, a - 1.0);
    EXPECT_NEAR(d.mass(d.lower, a), 1.0, 1e-6);
    EXPECT_NEAR(d.mass(d.lower, 0.0) + d.mass(0.0, a), 1.0, 1e-12);
  }
}

TEST(DensityProfile, DensityComparableToLebesgue) {
  for (double a : {0.5, 0.65, 0.8, 1.0}) {
    const DensityProfile& d = mask_profile(a);
    const auto [lo, hi] = std::minmax_element(d.xi.begin(), d.xi.end());
    EXPECT_GT(*lo, 0.1) << a;
    EXPECT_LT(*hi, 10.0) << a;
  }
}

TEST(DensityProfile, HalfMatchesKnownDensity) {
  const DensityProfile& d = mask_profile(0.5);
  const DensityProfile exact = DensityProfile::from_function(AlphaParam::make(0.5), 1000, half_density);
  double worst = 0.0;
  for (std::size_t i = 0; i < d.columns(); ++i) worst = std::max(worst, rel(d.xi[i], exact.xi[i]));
  EXPECT_LT(worst, 0.03);
  EXPECT_NEAR(exact.mu_hat_total, 2.0 * kLogGolden, 1e-6);
}

TEST(DensityProfile, SampleInvertsCdf) {
  const DensityProfile d =
      DensityProfile::from_function(AlphaParam::make(1.0), 100, [](double x) { return 1.0 / (1.0 + x); });
  EXPECT_DOUBLE_EQ(d.sample(0.0), 0.0);
  for (double u : {0.1, 0.25, 0.5, 0.9, 0.999}) {
    const double x = d.sample(u);
    EXPECT_NEAR(d.mass(0.0, x), u, 1e-12) << u;
  }
  EXPECT_LT(d.sample(std::nextafter(1.0, 0.0)), 1.0);
}

TEST(DensityProfile, Errors) {
  const AlphaParam p = AlphaParam::make(0.7);
  const RegionMask empty = RegionMask::for_alpha(p, 20, 20);
  EXPECT_THROW(density_profile(empty), DomainError);
  EXPECT_THROW(DensityProfile::from_function(p, 0, [](double) { return 1.0; }), ParameterError);
  EXPECT_THROW(DensityProfile::from_function(p, 10, [](double) { return -1.0; }), ParameterError);
  EXPECT_THROW(DensityProfile::from_function(p, 10, [](double) { return NAN; }), ParameterError);
  EXPECT_THROW(DensityProfile::from_function(p, 10, [](double) { return 0.0; }), DomainError);
}

TEST(EntropyQuadrature, GaussDensity) {
  const DensityProfile d =
      DensityProfile::from_function(AlphaParam::make(1.0), 1000, [](double x) { return 1.0 / (1.0 + x); });
  const EntropyEstimate e = entropy_quadrature(d);
  EXPECT_LT(rel(e.value, kH1), 0.005);
  EXPECT_EQ(e.method, EntropyMethod::quadrature_rokhlin);
  EXPECT_EQ(e.n, 1000u);
  EXPECT_GT(e.std_error, 0.0);
}

TEST(EntropyQuadrature, HalfDensityContainsZeroColumn) {
  // 999 columns put 0 strictly inside the middle column.
  const DensityProfile d = DensityProfile::from_function(AlphaParam::make(0.5), 999, half_density);
  const EntropyEstimate e = entropy_quadrature(d);
  EXPECT_TRUE(std::isfinite(e.value));
  EXPECT_LT(rel(e.value, kHalf), 0.005);
}

TEST(EntropyQuadrature, UniformDensity) {
  // -2 int_0^1 log x dx = 2.
  const DensityProfile d = DensityProfile::from_function(AlphaParam::make(1.0), 7, [](double) { return 1.0; });
  EXPECT_NEAR(entropy_quadrature(d).value, 2.0, 1e-12);
  const DensityProfile h = DensityProfile::from_function(AlphaParam::make(0.5), 8, [](double) { return 1.0; });
  EXPECT_NEAR(entropy_quadrature(h).value, 2.0 * (1.0 + std::log(2.0)), 1e-12);
}

TEST(EntropyQn, AlphaOne) {
  const EntropyEstimate e = entropy_qn(AlphaParam::make(1.0), 200, 10000, 7);
  EXPECT_LT(std::fabs(e.value - kH1), 3.0 * e.std_error) << e.value << " +- " << e.std_error;
  EXPECT_GT(e.std_error, 0.0);
  EXPECT_EQ(e.method, EntropyMethod::qn_growth);
  EXPECT_EQ(e.n, 10000u);
  EXPECT_EQ(e.samples, 200u);
  EXPECT_EQ(e.seed, 7u);
}

TEST(EntropyQn, AlphaHalf) {
  const EntropyEstimate e = entropy_qn(AlphaParam::make(0.5), 200, 10000, 7);
  EXPECT_LT(std::fabs(e.value - kHalf), 3.0 * e.std_error) << e.value << " +- " << e.std_error;
}

TEST(EntropyBirkhoff, AlphaOne) {
  const EntropyEstimate e = entropy_birkhoff(AlphaParam::make(1.0), 200, 10000, 7);
  EXPECT_LT(std::fabs(e.value - kH1), 3.0 * e.std_error) << e.value << " +- " << e.std_error;
  EXPECT_GT(e.std_error, 0.0);
  EXPECT_EQ(e.method, EntropyMethod::birkhoff_rokhlin);
}

TEST(EntropyBirkhoff, AlphaHalf) {
  const EntropyEstimate e = entropy_birkhoff(AlphaParam::make(0.5), 200, 10000, 7);
  EXPECT_LT(std::fabs(e.value - kHalf), 3.0 * e.std_error) << e.value << " +- " << e.std_error;
}

TEST(Entropy, SingleSampleHasError) {
  const EntropyEstimate e = entropy_qn(AlphaParam::make(0.8), 1, 2000, 3);
  EXPECT_GT(e.value, 0.0);
  EXPECT_GT(e.std_error, 0.0);
}

TEST(Entropy, Deterministic) {
  const AlphaParam p = AlphaParam::make(0.75);
  const EntropyEstimate a = entropy_qn(p, 50, 2000, 11);
  const EntropyEstimate b = entropy_qn(p, 50, 2000, 11);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  const EntropyEstimate c = entropy_qn(p, 50, 2000, 12);
  EXPECT_NE(a.value, c.value);
  const EntropyEstimate d = entropy_birkhoff(p, 50, 2000, 11);
  EXPECT_EQ(d.value, entropy_birkhoff(p, 50, 2000, 11).value);
}

TEST(Entropy, IndependentOfThreadCount) {
  const AlphaParam p = AlphaParam::make(0.66);
  EntropyEstimate one, four;
  {
    EnvThreads env("1");
    one = entropy_qn(p, 64, 2000, 5);
  }
  {
    EnvThreads env("4");
    four = entropy_qn(p, 64, 2000, 5);
  }
  EXPECT_EQ(one.value, four.value);
  EXPECT_EQ(one.std_error, four.std_error);
}

TEST(Entropy, ParameterErrors) {
  const AlphaParam p = AlphaParam::make(0.7);
  EXPECT_THROW(entropy_qn(p, 10, 999, 1), ParameterError);
  EXPECT_THROW(entropy_qn(p, 0, 1000, 1), ParameterError);
  EXPECT_THROW(entropy_birkhoff(p, 10, 999, 1), ParameterError);
  EXPECT_THROW(entropy_birkhoff(p, 0, 1000, 1), ParameterError);
  const DensityProfile other = DensityProfile::from_function(AlphaParam::make(0.8), 10, [](double) { return 1.0; });
  EXPECT_THROW(entropy_qn(p, 10, 1000, 1, &other), ParameterError);
}

TEST(Property, DoublingNChangesLittle) {
  for (double a : {0.6, 0.75, 0.9}) {
    const AlphaParam p = AlphaParam::make(a);
    const EntropyEstimate q1 = entropy_qn(p, 200, 10000, 7);
    const EntropyEstimate q2 = entropy_qn(p, 200, 20000, 7);
    EXPECT_LT(std::fabs(q2.value - q1.value), 2.0 * q1.std_error) << a;
    const EntropyEstimate b1 = entropy_birkhoff(p, 200, 10000, 7);
    const EntropyEstimate b2 = entropy_birkhoff(p, 200, 20000, 7);
    EXPECT_LT(std::fabs(b2.value - b1.value), 2.0 * b1.std_error) << a;
  }
}

TEST(Property, EstimatorsAgree) {
  for (double a : {0.55, 0.7, 0.9}) {
    const AlphaParam p = AlphaParam::make(a);
    const EntropyEstimate q = entropy_qn(p, 200, 10000, 7);
    const EntropyEstimate b = entropy_birkhoff(p, 200, 10000, 8);
    EXPECT_LT(rel(b.value, q.value), 0.01) << a;
  }
  for (double a : {0.55, 0.65, 0.7, 0.8, 0.9}) {
    const AlphaParam p = AlphaParam::make(a);
    const EntropyEstimate q = entropy_qn(p, 200, 10000, 7);
    const EntropyEstimate r = entropy_quadrature(mask_profile(a));
    EXPECT_LT(rel(r.value, q.value), 0.02) << a;
  }
}

TEST(Property, PlateauBelowGolden) {
  const EntropyEstimate g = entropy_qn(AlphaParam::make(kGolden), 200, 10000, 7);
  const EntropyEstimate s = entropy_qn(AlphaParam::make(0.6), 200, 10000, 8);
  EXPECT_LT(std::fabs(g.value - s.value), 3.0 * std::hypot(g.std_error, s.std_error));
  EXPECT_LT(std::fabs(g.value - kHalf), 3.0 * g.std_error);
}

TEST(Property, StartDistributionIrrelevant) {
  for (double a : {0.7, 0.9}) {
    const AlphaParam p = AlphaParam::make(a);
    const DensityProfile& d = mask_profile(a);
    const EntropyEstimate u = entropy_qn(p, 200, 10000, 21);
    const EntropyEstimate w = entropy_qn(p, 200, 10000, 22, &d);
    EXPECT_LT(std::fabs(u.value - w.value), 3.0 * std::hypot(u.std_error, w.std_error)) << a;
    const EntropyEstimate ub = entropy_birkhoff(p, 200, 10000, 21);
    const EntropyEstimate wb = entropy_birkhoff(p, 200, 10000, 22, &d);
    EXPECT_LT(std::fabs(ub.value - wb.value), 3.0 * std::hypot(ub.std_error, wb.std_error)) << a;
  }
}

TEST(Property, BirkhoffIndicatorErgodic) {
  struct Case {
    double alpha, a, b;
  };
  for (const Case c : {Case{0.5, 0.1, 0.3}, Case{0.7, -0.2, 0.1}, Case{0.9, 0.4, 0.6}}) {
    const AlphaParam p = AlphaParam::make(c.alpha);
    const double target = mask_profile(c.alpha).mass(c.a, c.b);
    Gen gen(static_cast<std::uint64_t>(c.alpha * 1000));
    std::vector<BirkhoffAverage> runs;
    double pooled = 0.0;
    for (int i = 0; i < 20; ++i) {
      runs.push_back(birkhoff_indicator(p, gen.point(c.alpha), 100000, c.a, c.b));
      pooled += runs.back().mean / 20.0;
    }
    // Each run against the mean of the other 19.
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const double rest = (20.0 * pooled - runs[i].mean) / 19.0;
      double var = 0.0;
      for (std::size_t j = 0; j < runs.size(); ++j) {
        if (j != i) var += runs[j].std_error * runs[j].std_error;
      }
      const double err = std::hypot(runs[i].std_error, std::sqrt(var) / 19.0);
      EXPECT_LT(std::fabs(runs[i].mean - rest), 3.0 * err) << c.alpha << " " << i;
    }
    EXPECT_LT(rel(pooled, target), 0.05) << c.alpha << " " << pooled << " " << target;
  }
}

TEST(BirkhoffIndicator, Errors) {
  const AlphaParam p = AlphaParam::make(0.7);
  EXPECT_THROW(birkhoff_indicator(p, 0.1, 5, 0.0, 0.5), ParameterError);
  EXPECT_THROW(birkhoff_indicator(p, 0.8, 1000, 0.0, 0.5), DomainError);
  EXPECT_THROW(birkhoff_indicator(AlphaParam::make(1.0), 0.5, 1000, 0.0, 0.5), DomainError);
  const BirkhoffAverage all = birkhoff_indicator(p, 0.123, 1000, -0.3, 0.7);
  EXPECT_DOUBLE_EQ(all.mean, 1.0);
}

TEST(Product, StableUnderResolutionDoubling) {
  // h does not depend on the grid, so the product ratio is the mu_hat ratio.
  for (double a : default_sweep_alphas()) {
    const AlphaParam p = AlphaParam::make(a);
    const double m500 = mu_hat_mask(build_omega(p, 500, 500, 100));
    const double m1000 = mu_hat_mask(build_omega(p, 1000, 1000, 100));
    EXPECT_LT(rel(m500, m1000), 0.01) << a << " " << m500 << " " << m1000;
  }
}

TEST(Sweep, DefaultAlphas) {
  const std::vector<double> a = default_sweep_alphas();
  ASSERT_EQ(a.size(), 12u);
  EXPECT_DOUBLE_EQ(a.front(), 0.5);
  EXPECT_DOUBLE_EQ(a.back(), 1.0);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(std::count(a.begin(), a.end(), kGolden), 1);
  EXPECT_NEAR(a[2], 0.6, 1e-15);
  EXPECT_EQ(a[3], kGolden);
  EXPECT_EQ(default_sweep_alphas(2).size(), 3u);
  EXPECT_THROW(default_sweep_alphas(1), ParameterError);
}

TEST(Sweep, NonIncreasing) {
  auto row = [](double product, double err) {
    SweepRow r;
    r.product = product;
    r.product_error = err;
    return r;
  };
  EXPECT_TRUE(non_increasing({row(3.0, 0.01), row(2.9, 0.01), row(2.0, 0.01)}));
  EXPECT_TRUE(non_increasing({row(3.0, 0.01), row(3.02, 0.01)}));
  EXPECT_FALSE(non_increasing({row(3.0, 0.01), row(3.1, 0.01)}));
  EXPECT_FALSE(non_increasing({row(3.0, 0.01), row(2.5, 0.01), row(3.1, 0.01)}));
  EXPECT_TRUE(non_increasing({}));
}

TEST(Sweep, SmallSweepAndCsv) {
  SweepConfig cfg;
  cfg.resolution = 200;
  cfg.samples = 50;
  cfg.n = 2000;
  const SweepResult r = product_sweep({0.5, 0.75, 1.0}, cfg);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_TRUE(r.monotone);
  for (const SweepRow& row : r.rows) {
    EXPECT_NEAR(row.product, row.h.value * row.mu_hat, 1e-12);
    EXPECT_GT(row.product_error, 0.0);
    EXPECT_FALSE(row.golden);
  }
  EXPECT_LT(rel(r.rows[0].product, kPi2 / 3.0), 0.05);
  EXPECT_LT(rel(r.rows[2].product, kPi2 / 6.0), 0.05);

  std::ostringstream os;
  write_sweep_csv(r, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "alpha,h,stderr_h,mu_hat,product,method,n,samples,seed");
  for (const SweepRow& row : r.rows) {
    std::getline(is, line);
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string s; std::getline(ls, s, ',');) f.push_back(s);
    ASSERT_EQ(f.size(), 9u) << line;
    EXPECT_EQ(std::stod(f[0]), row.alpha);
    EXPECT_EQ(std::stod(f[1]), row.h.value);
    EXPECT_EQ(std::stod(f[4]), row.product);
    EXPECT_EQ(f[5], "qn");
    EXPECT_EQ(f[6], "2000");
    EXPECT_EQ(f[7], "50");
    EXPECT_EQ(f[8], "7");
  }
  std::getline(is, line);
  EXPECT_EQ(line, "monotone: true");
  EXPECT_FALSE(std::getline(is, line));
}

TEST(Sweep, Errors) {
  SweepConfig cfg;
  EXPECT_THROW(product_sweep({}, cfg), ParameterError);
  EXPECT_THROW(product_sweep({0.7, 0.6}, cfg), ParameterError);
  EXPECT_THROW(product_sweep({0.7, 0.7}, cfg), ParameterError);
}
