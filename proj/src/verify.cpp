#include "alphacf/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "alphacf/cf_core.hpp"
#include "alphacf/convergents.hpp"
#include "alphacf/cylinders.hpp"
#include "alphacf/errors.hpp"
#include "alphacf/natural_ext.hpp"
#include "alphacf/region_mask.hpp"
#include "alphacf/rng.hpp"

namespace alphacf {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_word(const std::vector<Digit>& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(w[i]);
  }
  return s + ")";
}

void record(VerifyReport& r, const std::string& what) {
  if (r.violations++ == 0) r.counterexample = what;
}

// Random alpha: mostly uniform on [1/2, 1], sometimes one of the special
// values 1/2, g, 1.
double draw_alpha(SampleStream& rng) {
  const double u = rng.uniform();
  if (u < 0.03) return 0.5;
  if (u < 0.06) return kGolden;
  if (u < 0.09) return 1.0;
  return 0.5 + 0.5 * rng.uniform();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace

VerifyReport verify_q_ratio(std::size_t trials, std::uint64_t seed, std::size_t max_n) {
  VerifyReport rep;
  rep.suite = "q-ratio";
  std::size_t skipped = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    SampleStream rng(seed, t);
    const AlphaParam alpha = AlphaParam::make(draw_alpha(rng));
    const double x = alpha.lower() + rng.uniform();
    const auto n = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_n));
    const DigitSeq seq = expand(alpha, x, n);
    ++rep.trials;
    ConvergentState st;
    for (std::size_t k = 0; k < seq.digits.size(); ++k) {
      const Digit a = seq.digits[k];
      st = push_digit(st, a);
      bool ok;
      if (!alpha.extended()) {
        ok = abs(st.q_cur) > abs(st.q_prev);
      } else {
        const Rational r = make_rational(st.q_prev, st.q_cur);
        ok = r > Rational(-1, 2) && r < 2 && (r < 1 || a == 1);
      }
      if (ok) continue;
      // Only admissible words are covered by the lemma.
      const std::vector<Digit> prefix(seq.digits.begin(), seq.digits.begin() + static_cast<std::ptrdiff_t>(k + 1));
      if (!cylinder_of(alpha, prefix).admissible) {
        ++skipped;
        break;
      }
      record(rep, "alpha=" + fmt_double(alpha.value()) + " x=" + fmt_double(x) + " word=" + fmt_word(prefix) +
                      " q_prev=" + st.q_prev.str() + " q=" + st.q_cur.str());
      break;
    }
  }
  rep.detail = "inadmissible words skipped: " + std::to_string(skipped);
  return rep;
}

VerifyReport verify_distortion(std::size_t trials, std::uint64_t seed, std::size_t max_n) {
  VerifyReport rep;
  rep.suite = "distortion";
  const double upper = 1.0 / std::pow(kGolden, 4);
  double lo_seen = INFINITY;
  double hi_seen = 0.0;
  std::size_t skipped = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    SampleStream rng(seed, t);
    const AlphaParam alpha = AlphaParam::make(draw_alpha(rng));
    const double x = alpha.lower() + rng.uniform();
    const auto n = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_n));
    const DigitSeq seq = expand(alpha, x, n);
    if (seq.digits.empty()) {
      ++skipped;
      continue;
    }
    const CylinderSpec cyl = cylinder_of(alpha, seq.digits);
    if (!cyl.admissible) {
      ++skipped;
      continue;
    }
    const ConvergentState st = convergents_of(seq.digits);
    const double r = to_double(make_rational(st.q_prev, st.q_cur));
    const double y = cyl.image_lo + rng.uniform() * (cyl.image_hi - cyl.image_lo);
    // |psi'(y)| q_n^2 = 1 / (1 + y q_{n-1}/q_n)^2
    const double s = 1.0 + y * r;
    const double v = 1.0 / (s * s);
    ++rep.trials;
    lo_seen = std::min(lo_seen, v);
    hi_seen = std::max(hi_seen, v);
    if (!(v > 1.0 / 9.0 && v < upper)) {
      record(rep, "alpha=" + fmt_double(alpha.value()) + " word=" + fmt_word(seq.digits) + " y=" + fmt_double(y) +
                      " |psi'| q_n^2=" + fmt_double(v));
    }
  }
  rep.detail = "|psi'| q_n^2 range [" + fmt_double(lo_seen) + ", " + fmt_double(hi_seen) + "], bounds (1/9, " +
               fmt_double(upper) + "); skipped " + std::to_string(skipped);
  return rep;
}

VerifyReport verify_cylinder_size(const std::vector<double>& alphas, std::size_t max_n) {
  VerifyReport rep;
  rep.suite = "cylinder-size";
  std::ostringstream detail;
  for (double a : alphas) {
    const AlphaParam alpha = AlphaParam::make(a);
    double worst = 0.0;
    for (std::size_t n = 1; n <= max_n; ++n) {
      const CylinderSearch s = max_cylinder_measure(alpha, n);
      const double bound = std::pow(kGolden, 2.0 * static_cast<double>(n - 1)) / 2.0;
      ++rep.trials;
      worst = std::max(worst, s.max_length / bound);
      if (s.exhausted_budget) {
        record(rep, "alpha=" + fmt_double(a) + " n=" + std::to_string(n) + ": search budget exhausted");
      } else if (s.max_length > bound * (1.0 + 1e-12)) {
        record(rep, "alpha=" + fmt_double(a) + " n=" + std::to_string(n) + " word=" + fmt_word(s.argmax) +
                        " length=" + fmt_double(s.max_length) + " bound=" + fmt_double(bound));
      }
    }
    detail << "alpha=" << fmt_double(a) << " max length/bound=" << fmt_double(worst) << "; ";
  }
  rep.detail = detail.str();
  return rep;
}

VerifyReport verify_nonfull(const std::vector<double>& alphas, std::size_t max_n) {
  VerifyReport rep;
  rep.suite = "nonfull";
  std::ostringstream detail;
  for (double a : alphas) {
    const AlphaParam alpha = AlphaParam::make(a);
    double prev = INFINITY;
    std::size_t most = 0;
    for (std::size_t n = 1; n <= max_n; ++n) {
      const NonFullSet b = nonfull_union_measure(alpha, n);
      const double bound = std::pow(2.0 * kGolden * kGolden, static_cast<double>(n - 1)) / 4.0;
      ++rep.trials;
      most = std::max(most, b.words.size());
      const std::string where = "alpha=" + fmt_double(a) + " n=" + std::to_string(n);
      if (b.measure > bound) {
        record(rep, where + " lambda(B_n)=" + fmt_double(b.measure) + " bound=" + fmt_double(bound));
      } else if (b.words.size() > (std::size_t{1} << n)) {
        record(rep, where + " words=" + std::to_string(b.words.size()));
      } else if (b.measure > prev * (1.0 + 1e-12)) {
        record(rep, where + " lambda(B_n) grew from " + fmt_double(prev) + " to " + fmt_double(b.measure));
      }
      prev = b.measure;
    }
    detail << "alpha=" << fmt_double(a) << " max words=" << most << "; ";
  }
  rep.detail = detail.str();
  return rep;
}

VerifyReport verify_containment(const ContainmentOptions& opt) {
  VerifyReport rep;
  rep.suite = "containment";
  const std::size_t seeds = opt.seeds_per_column ? opt.seeds_per_column : kDefaultSeedsPerColumn;
  std::ostringstream detail;
  for (double a : opt.alphas) {
    const AlphaParam alpha = AlphaParam::make(a);
    const RectRegion outer = x_region(alpha);
    const RectRegion inner = y_region(alpha);
    const Rect incl = inner_rectangle(alpha);
    std::size_t points = 0;
    for_each_orbit_point(alpha, opt.resolution, seeds, opt.iters, [&](PlanarPoint p) {
      ++points;
      if (!outer.contains(p, 1e-12)) {
        record(rep, "alpha=" + fmt_double(a) + " orbit point (" + fmt_double(p.x) + ", " + fmt_double(p.y) +
                        ") outside X_alpha");
      }
      return true;
    });
    rep.trials += points;

    const RegionMask mask = build_omega(alpha, opt.resolution, opt.resolution, opt.iters, seeds);
    std::size_t y_cells = 0, y_marked = 0, r_cells = 0, r_marked = 0;
    for (std::size_t iy = 0; iy < mask.ny(); ++iy) {
      for (std::size_t ix = 0; ix < mask.nx(); ++ix) {
        const Rect c = mask.cell_rect(ix, iy);
        const bool marked = mask.occupied(ix, iy);
        if (inner.covers(c)) {
          ++y_cells;
          y_marked += marked;
        }
        if (incl.contains(c)) {
          ++r_cells;
          r_marked += marked;
        }
      }
    }
    const double y_cov = y_cells ? static_cast<double>(y_marked) / static_cast<double>(y_cells) : 1.0;
    const double r_cov = r_cells ? static_cast<double>(r_marked) / static_cast<double>(r_cells) : 1.0;
    rep.trials += 2;
    if (y_cov < opt.min_coverage) {
      record(rep, "alpha=" + fmt_double(a) + " Y_alpha coverage " + fmt_double(y_cov) + " (" +
                      std::to_string(y_marked) + "/" + std::to_string(y_cells) + ")");
    }
    if (r_cov < opt.min_coverage) {
      record(rep, "alpha=" + fmt_double(a) + " inclusion rectangle coverage " + fmt_double(r_cov) + " (" +
                      std::to_string(r_marked) + "/" + std::to_string(r_cells) + ")");
    }
    detail << "alpha=" << fmt_double(a) << " points=" << points << " Y coverage=" << fmt_double(y_cov) << " ("
           << y_cells << " cells) rectangle coverage=" << fmt_double(r_cov) << " (" << r_cells << " cells); ";
  }
  rep.detail = detail.str();
  return rep;
}

VerifyReport verify_transfer(std::size_t trials, std::uint64_t seed) {
  VerifyReport rep;
  rep.suite = "transfer";
  constexpr int kCases = 7;
  std::size_t per_case[kCases] = {};
  for (std::size_t t = 0; t < trials; ++t) {
    SampleStream rng(seed, t);
    const int which = static_cast<int>(t % kCases);
    const double av = kGolden + (1.0 - kGolden) * rng.uniform();
    const double bv = av + (1.0 - av) * rng.uniform();
    const AlphaParam alpha = AlphaParam::make(av);
    const AlphaParam beta = AlphaParam::make(bv);
    bool found = false;
    double x = 0.0, z = 0.0;
    for (int tries = 0; tries < 1000 && !found; ++tries) {
      x = alpha.lower() + rng.uniform();
      switch (which) {
        case 0: z = x; break;
        case 1: z = x / (x + 1.0); break;
        case 2: z = x / (1.0 - x); break;
        case 3: z = -x; break;
        case 4: z = -x / (x + 1.0); break;
        case 5: z = x + 1.0; break;
        default: z = 1.0 - x; break;
      }
      found = x != 0.0 && beta.contains(z);
    }
    if (!found) continue;
    ++rep.trials;
    ++per_case[which];
    try {
      const TransferResult r = transfer_check(alpha, beta, x, z);
      if (r.conclusion == TransferConclusion::violated) {
        record(rep, "alpha=" + fmt_double(av) + " beta=" + fmt_double(bv) + " x=" + fmt_double(x) +
                        " z=" + fmt_double(z) + " hypothesis=" + to_string(r.hypothesis) +
                        " T_alpha(x)=" + fmt_double(r.t_alpha_x) + " T_beta(z)=" + fmt_double(r.t_beta_z));
      }
    } catch (const DomainError& e) {
      record(rep, "alpha=" + fmt_double(av) + " beta=" + fmt_double(bv) + " x=" + fmt_double(x) +
                      " z=" + fmt_double(z) + ": " + e.what());
    }
  }
  std::ostringstream detail;
  detail << "trials per case:";
  for (std::size_t c : per_case) detail << ' ' << c;
  rep.detail = detail.str();
  return rep;
}

VerifyReport verify_identities(std::size_t trials, std::uint64_t seed, std::size_t max_n) {
  VerifyReport rep;
  rep.suite = "identities";
  double worst_rel = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    SampleStream rng(seed, t);
    const double av = draw_alpha(rng);
    const AlphaParam alpha = AlphaParam::make(av);
    const Rational ar = to_rational(av);
    // x = alpha - 1 + U / 2^256 with U uniform on [0, 2^256).
    BigInt u = 0;
    for (int i = 0; i < 4; ++i) u = (u << 64) + rng.next();
    const Rational x = ar - 1 + Rational(u, BigInt(1) << 256);
    const auto n = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_n));

    ConvergentState st;
    Rational tail = x;
    std::vector<Digit> word;
    bool ok = true;
    std::string why;
    for (std::size_t k = 0; k < n; ++k) {
      const ExactStep s = exact_step(ar, tail);
      if (s.digit == 0) break;
      word.push_back(s.digit.convert_to<Digit>());
      st = push_digit(st, word.back());
      tail = s.image;
      const BigInt expect = (k % 2 == 0) ? BigInt(-1) : BigInt(1);
      if (st.determinant() != expect) {
        ok = false;
        why = "determinant " + st.determinant().str();
        break;
      }
    }
    ++rep.trials;
    if (ok && !digits_in_range(alpha, word)) {
      ok = false;
      why = "digit outside the allowed range";
    }
    if (ok && reconstruct(st, tail) != x) {
      ok = false;
      why = "exact reconstruction differs from x";
    }
    const Rational diff = x - convergent_value(st);
    if (ok && approx_error(st, tail) != (diff < 0 ? Rational(-diff) : diff)) {
      ok = false;
      why = "exact error formula differs from |x - p_n/q_n|";
    }
    if (ok) {
      const double td = to_double(tail);
      const double xd = to_double(x);
      const double rd = reconstruct(st, td);
      const double ed = approx_error(st, td);
      const double ee = to_double(diff < 0 ? Rational(-diff) : diff);
      const double rel_x = std::fabs(rd - xd) / std::max(std::fabs(xd), 1e-300);
      const double rel_e = ee == 0.0 ? std::fabs(ed) : std::fabs(ed - ee) / ee;
      worst_rel = std::max({worst_rel, rel_x, rel_e});
      if (rel_x > 1e-12 || rel_e > 1e-12) {
        ok = false;
        why = "double path relative error " + fmt_double(std::max(rel_x, rel_e));
      }
    }
    if (!ok) record(rep, "alpha=" + fmt_double(av) + " word=" + fmt_word(word) + ": " + why);
  }
  rep.detail = "worst double-path relative error " + fmt_double(worst_rel);
  return rep;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"q-ratio",     "distortion", "cylinder-size", "nonfull",
                                              "containment", "transfer",   "identities",    "all"};
  return names;
}

std::vector<VerifyReport> run_suite(const std::string& name, const SuiteOptions& o) {
  const auto count = [&](std::size_t def) { return o.samples ? o.samples : def; };
  const std::vector<double> cyl_alphas{0.5, kGolden, 0.75, 1.0};
  std::vector<VerifyReport> out;
  const bool all = name == "all";
  bool known = all;
  if (all || name == "q-ratio") {
    known = true;
    out.push_back(verify_q_ratio(count(100'000), o.seed));
  }
  if (all || name == "distortion") {
    known = true;
    out.push_back(verify_distortion(count(10'000), o.seed));
  }
  if (all || name == "cylinder-size") {
    known = true;
    out.push_back(verify_cylinder_size(cyl_alphas, 12));
  }
  if (all || name == "nonfull") {
    known = true;
    out.push_back(verify_nonfull(cyl_alphas, 12));
  }
  if (all || name == "containment") {
    known = true;
    ContainmentOptions c;
    c.resolution = o.resolution;
    c.iters = o.iters;
    out.push_back(verify_containment(c));
  }
  if (all || name == "transfer") {
    known = true;
    out.push_back(verify_transfer(count(700'000), o.seed));
  }
  if (all || name == "identities") {
    known = true;
    out.push_back(verify_identities(count(1000), o.seed));
  }
  if (!known) throw ParameterError("unknown verify suite '" + name + "'");
  return out;
}

}  // namespace alphacf
