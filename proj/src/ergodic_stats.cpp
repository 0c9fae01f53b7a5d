#include "alphacf/ergodic_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "alphacf/convergents.hpp"
#include "alphacf/errors.hpp"
#include "alphacf/parallel.hpp"
#include "alphacf/rng.hpp"

namespace alphacf {

namespace {

constexpr std::size_t kBatches = 20;

// Antiderivative of -2 log|x|.
double neg2log_antiderivative(double x) {
  if (x == 0.0) return 0.0;
  return -2.0 * (x * std::log(std::fabs(x)) - x);
}

struct MeanError {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanError mean_and_error(const std::vector<double>& v) {
  MeanError out;
  if (v.empty()) return out;
  double sum = 0.0;
  for (double x : v) sum += x;
  out.mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) return out;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.std_error = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  return out;
}

// Per-orbit increments of both estimators, accumulated by batch.
struct OrbitSums {
  std::vector<double> qn;
  std::vector<double> birkhoff;
};

double draw_start(const AlphaParam& alpha, SampleStream& rng, const DensityProfile* start) {
  if (start) return start->sample(rng.uniform());
  return alpha.lower() + rng.uniform();
}

OrbitSums run_orbit(const AlphaParam& alpha, std::size_t n, std::uint64_t seed, std::size_t index,
                    const DensityProfile* start) {
  SampleStream rng(seed, index);
  const std::size_t batch = std::max<std::size_t>(1, n / kBatches);
  for (;;) {
    OrbitSums sums{std::vector<double>(kBatches, 0.0), std::vector<double>(kBatches, 0.0)};
    double x = draw_start(alpha, rng, start);
    LogConvergentState state;
    bool terminated = false;
    for (std::size_t k = 0; k < n; ++k) {
      const Step s = raw::step(alpha.value(), x);
      if (s.digit == 0) {
        terminated = true;
        break;
      }
      const double before = state.log_q;
      state = push_digit_log(state, s.digit);
      const std::size_t b = std::min(k / batch, kBatches - 1);
      sums.qn[b] += state.log_q - before;
      sums.birkhoff[b] += -2.0 * std::log(std::fabs(x));
      x = s.image;
    }
    if (!terminated) return sums;
  }
}

std::vector<OrbitSums> run_orbits(const AlphaParam& alpha, std::size_t samples, std::size_t n,
                                  std::uint64_t seed, const DensityProfile* start) {
  if (n < 1000) throw ParameterError("entropy: orbit length n must be >= 1000");
  if (samples < 1) throw ParameterError("entropy: samples must be >= 1");
  if (start && std::fabs(start->alpha - alpha.value()) > 1e-15)
    throw ParameterError("entropy: start density belongs to a different alpha");
  std::vector<OrbitSums> out(samples);
  parallel_chunks(samples, samples, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = run_orbit(alpha, n, seed, i, start);
  });
  return out;
}

EntropyEstimate summarize(const std::vector<OrbitSums>& orbits, bool qn, std::size_t n, std::uint64_t seed,
                          EntropyMethod method) {
  // qn: 2 log q_n / n; birkhoff: already carries the factor 2.
  const double factor = qn ? 2.0 : 1.0;
  std::vector<double> per_sample;
  per_sample.reserve(orbits.size());
  for (const OrbitSums& o : orbits) {
    const auto& v = qn ? o.qn : o.birkhoff;
    double s = 0.0;
    for (double b : v) s += b;
    per_sample.push_back(factor * s / static_cast<double>(n));
  }
  MeanError me = mean_and_error(per_sample);
  if (orbits.size() == 1) {
    // Batch means within the single orbit.
    const auto& v = qn ? orbits[0].qn : orbits[0].birkhoff;
    const std::size_t batch = std::max<std::size_t>(1, n / kBatches);
    std::vector<double> means;
    for (std::size_t b = 0; b < kBatches; ++b) {
      const std::size_t len = b + 1 == kBatches ? n - batch * (kBatches - 1) : batch;
      if (len > 0) means.push_back(factor * v[b] / static_cast<double>(len));
    }
    me.std_error = mean_and_error(means).std_error;
  }
  EntropyEstimate e;
  e.value = me.mean;
  e.std_error = me.std_error;
  e.method = method;
  e.n = n;
  e.samples = orbits.size();
  e.seed = seed;
  return e;
}

}  // namespace

double DensityProfile::integral() const {
  double s = 0.0;
  for (double v : xi) s += v;
  return s * dx;
}

double DensityProfile::mass(double a, double b) const {
  if (b < a) std::swap(a, b);
  double total = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double c0 = lower + static_cast<double>(i) * dx;
    const double lo = std::max(a, c0);
    const double hi = std::min(b, c0 + dx);
    if (hi > lo) total += xi[i] * (hi - lo);
  }
  return total;
}

double DensityProfile::sample(double u) const {
  double acc = 0.0;
  const double target = u * integral();
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double m = xi[i] * dx;
    if (acc + m > target && m > 0.0) {
      return lower + (static_cast<double>(i) + (target - acc) / m) * dx;
    }
    acc += m;
  }
  return lower + static_cast<double>(xi.size()) * dx * (1.0 - 0x1.0p-53);
}

DensityProfile DensityProfile::from_function(const AlphaParam& alpha, std::size_t columns,
                                             const std::function<double(double)>& f) {
  if (columns == 0) throw ParameterError("DensityProfile: columns must be positive");
  DensityProfile p;
  p.alpha = alpha.value();
  p.lower = alpha.lower();
  p.dx = 1.0 / static_cast<double>(columns);
  double sum = 0.0;
  for (std::size_t i = 0; i < columns; ++i) {
    const double c = p.lower + (static_cast<double>(i) + 0.5) * p.dx;
    const double v = f(c);
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("DensityProfile: density must be finite and >= 0");
    p.x.push_back(c);
    p.xi.push_back(v);
    sum += v;
  }
  if (sum <= 0.0) throw DomainError("DensityProfile: density vanishes identically");
  p.mu_hat_total = sum * p.dx;
  for (double& v : p.xi) v /= p.mu_hat_total;
  return p;
}

DensityProfile density_profile(const RegionMask& mask) {
  if (mask.count() == 0) throw DomainError("density_profile: mask is empty");
  DensityProfile p;
  const Rect& box = mask.box();
  p.lower = box.x0;
  p.alpha = box.x1;
  p.dx = mask.dx();
  double sum = 0.0;
  for (std::size_t ix = 0; ix < mask.nx(); ++ix) {
    const double x = mask.cell_center(ix, 0).x;
    double fiber = 0.0;
    for (std::size_t iy = 0; iy < mask.ny(); ++iy) {
      if (!mask.occupied(ix, iy)) continue;
      const Rect c = mask.cell_rect(ix, iy);
      fiber += (c.y1 - c.y0) / ((1.0 + x * c.y0) * (1.0 + x * c.y1));
    }
    p.x.push_back(x);
    p.xi.push_back(fiber);
    sum += fiber;
  }
  p.mu_hat_total = sum * p.dx;
  for (double& v : p.xi) v /= p.mu_hat_total;
  return p;
}

const char* to_string(EntropyMethod m) {
  switch (m) {
    case EntropyMethod::qn_growth: return "qn";
    case EntropyMethod::birkhoff_rokhlin: return "birkhoff";
    case EntropyMethod::quadrature_rokhlin: return "quadrature";
  }
  return "?";
}

EntropyEstimate entropy_qn(const AlphaParam& alpha, std::size_t samples, std::size_t n, std::uint64_t seed,
                           const DensityProfile* start) {
  return summarize(run_orbits(alpha, samples, n, seed, start), true, n, seed, EntropyMethod::qn_growth);
}

EntropyEstimate entropy_birkhoff(const AlphaParam& alpha, std::size_t samples, std::size_t n,
                                 std::uint64_t seed, const DensityProfile* start) {
  return summarize(run_orbits(alpha, samples, n, seed, start), false, n, seed, EntropyMethod::birkhoff_rokhlin);
}

EntropyEstimate entropy_quadrature(const DensityProfile& profile) {
  double h = 0.0;
  for (std::size_t i = 0; i < profile.xi.size(); ++i) {
    const double a = profile.lower + static_cast<double>(i) * profile.dx;
    const double b = a + profile.dx;
    h += profile.xi[i] * (neg2log_antiderivative(b) - neg2log_antiderivative(a));
  }
  EntropyEstimate e;
  e.value = h;
  // Column-resolution error: difference between midpoint and exact column
  // integration is of order dx^2 h''; report dx as a conservative scale.
  e.std_error = profile.dx;
  e.method = EntropyMethod::quadrature_rokhlin;
  e.n = profile.xi.size();
  e.samples = 1;
  return e;
}

BirkhoffAverage birkhoff_indicator(const AlphaParam& alpha, double x0, std::size_t n, double a, double b) {
  if (n < kBatches) throw ParameterError("birkhoff_indicator: n too small");
  if (!alpha.contains(x0)) throw DomainError("birkhoff_indicator: start point outside [alpha-1, alpha)");
  const std::size_t batch = n / kBatches;
  std::vector<double> hits(kBatches, 0.0);
  std::vector<double> lens(kBatches, 0.0);
  double x = x0;
  std::size_t total_hits = 0;
  std::size_t k = 0;
  for (; k < n; ++k) {
    const std::size_t bi = std::min(k / batch, kBatches - 1);
    const bool in = x >= a && x < b;
    hits[bi] += in ? 1.0 : 0.0;
    lens[bi] += 1.0;
    total_hits += in;
    const Step s = raw::step(alpha.value(), x);
    if (s.digit == 0) throw DomainError("birkhoff_indicator: orbit terminates at 0");
    x = s.image;
  }
  std::vector<double> means;
  for (std::size_t i = 0; i < kBatches; ++i) means.push_back(hits[i] / lens[i]);
  BirkhoffAverage out;
  out.mean = static_cast<double>(total_hits) / static_cast<double>(n);
  out.std_error = mean_and_error(means).std_error;
  return out;
}

std::vector<double> default_sweep_alphas(std::size_t steps) {
  if (steps < 2) throw ParameterError("sweep: need at least 2 steps");
  std::vector<double> a;
  for (std::size_t i = 0; i < steps; ++i) a.push_back(0.5 + 0.5 * static_cast<double>(i) / static_cast<double>(steps - 1));
  a.push_back(kGolden);
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end(), [](double u, double v) { return std::fabs(u - v) < 1e-15; }), a.end());
  return a;
}

bool non_increasing(const std::vector<SweepRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const double slack = 2.0 * std::hypot(rows[i].product_error, rows[j].product_error);
      if (rows[j].product > rows[i].product + slack) return false;
    }
  }
  return true;
}

SweepResult product_sweep(const std::vector<double>& alphas, const SweepConfig& config) {
  if (alphas.empty()) throw ParameterError("sweep: empty alpha list");
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    if (!(alphas[i] > alphas[i - 1])) throw ParameterError("sweep: alphas must be strictly increasing");
  }
  SweepResult result;
  for (double a : alphas) {
    const AlphaParam alpha = AlphaParam::make(a);
    const RegionMask mask = build_omega(alpha, config.resolution, config.resolution, config.iters,
                                        config.seeds_per_column);
    SweepRow row;
    row.alpha = a;
    row.golden = std::fabs(a - kGolden) < 1e-15;
    row.mu_hat = mu_hat_mask(mask);
    row.mu_hat_error = 0.5 * boundary_mass(mask);
    row.h = entropy_qn(alpha, config.samples, config.n, config.seed);
    row.product = row.h.value * row.mu_hat;
    row.product_error = std::hypot(row.h.std_error * row.mu_hat, row.h.value * row.mu_hat_error);
    result.rows.push_back(row);
  }
  result.monotone = non_increasing(result.rows);
  return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& os) {
  os << "alpha,h,stderr_h,mu_hat,product,method,n,samples,seed\n";
  char buf[320];
  for (const SweepRow& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%s,%zu,%zu,%llu\n", r.alpha, r.h.value,
                  r.h.std_error, r.mu_hat, r.product, to_string(r.h.method), r.h.n, r.h.samples,
                  static_cast<unsigned long long>(r.h.seed));
    os << buf;
  }
  os << "monotone: " << (result.monotone ? "true" : "false") << "\n";
}

}  // namespace alphacf
