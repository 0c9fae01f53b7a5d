#include "alphacf/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "alphacf/cf_core.hpp"
#include "alphacf/convergents.hpp"
#include "alphacf/errors.hpp"
#include "alphacf/ergodic_stats.hpp"
#include "alphacf/natural_ext.hpp"
#include "alphacf/region_mask.hpp"
#include "alphacf/verify.hpp"

namespace alphacf {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// "g" selects the golden section parameter exactly.
double parse_alpha(const std::string& s) {
  if (s == "g") return kGolden;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ParameterError("alpha: not a number: " + s);
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  return f;
}

void close_out(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw IoError("write failed: " + path);
}

void require_positive(std::size_t v, const char* name) {
  if (v == 0) throw ParameterError(std::string(name) + " must be >= 1");
}

struct Options {
  std::string alpha = "1";
  double x = 0.0;
  std::size_t n = 10;
  std::size_t resolution = 1000;
  std::size_t iters = 100;
  std::size_t seeds = kDefaultSeedsPerColumn;
  std::size_t samples = 200;
  std::uint64_t seed = 7;
  std::size_t steps = 11;
  std::string method = "qn";
  std::string out;
  std::string suite = "all";
  bool overlay = false;
};

void cmd_expand(const Options& o, std::ostream& out) {
  const AlphaParam alpha = AlphaParam::make(parse_alpha(o.alpha));
  require_positive(o.n, "n");
  const std::vector<OrbitPoint> pts = orbit(alpha, o.x, o.n);
  const DigitSeq seq = expand(alpha, o.x, o.n);
  out << "k,digit,convergent,value,tail,error\n";
  ConvergentState st;
  for (std::size_t k = 0; k < seq.digits.size(); ++k) {
    st = push_digit(st, seq.digits[k]);
    const Rational c = convergent_value(st);
    const double tail = pts[k + 1].x;
    out << k + 1 << ',' << seq.digits[k] << ',' << numerator(c) << '/' << denominator(c) << ','
        << num(c.convert_to<double>()) << ',' << num(tail) << ',' << num(approx_error(st, tail)) << '\n';
  }
  if (pts.back().terminated) out << "# terminated\n";
}

void cmd_orbit(const Options& o, std::ostream& out) {
  const AlphaParam alpha = AlphaParam::make(parse_alpha(o.alpha));
  require_positive(o.n, "n");
  out << "k,x,y,digit\n";
  PlanarPoint p{o.x, 0.0};
  for (std::size_t k = 0; k <= o.n; ++k) {
    const Digit a = digit(alpha, p.x);
    out << k << ',' << num(p.x) << ',' << num(p.y) << ',' << a << '\n';
    if (a == 0) {
      out << "# terminated\n";
      break;
    }
    if (k < o.n) p = nat_ext_step(alpha, p);
  }
}

void write_overlay(const AlphaParam& alpha, std::ostream& os) {
  os << "region,index,x0,x1,y0,y1\n";
  auto emit = [&](const char* name, const std::vector<Rect>& rects) {
    for (std::size_t i = 0; i < rects.size(); ++i) {
      const Rect& r = rects[i];
      os << name << ',' << i << ',' << num(r.x0) << ',' << num(r.x1) << ',' << num(r.y0) << ',' << num(r.y1)
         << '\n';
    }
  };
  if (alpha.value() == kGolden) {
    emit("omega_g", omega_g_region().rects);
    return;
  }
  if (!(alpha.extended() && alpha.value() < 1.0)) {
    throw ParameterError("overlay: defined for alpha = g and alpha in (g, 1)");
  }
  emit("X", x_region(alpha).rects);
  emit("Y", y_region(alpha).rects);
  emit("inner", {inner_rectangle(alpha)});
}

void cmd_domain(const Options& o, std::ostream& out) {
  const AlphaParam alpha = AlphaParam::make(parse_alpha(o.alpha));
  require_positive(o.iters, "iters");
  require_positive(o.seeds, "seeds");
  const std::string prefix = o.out.empty() ? "domain" : o.out;
  if (o.overlay) {
    // Validate before the expensive build.
    std::ostringstream probe;
    write_overlay(alpha, probe);
  }
  const RegionMask mask = build_omega(alpha, o.resolution, o.resolution, o.iters, o.seeds);
  {
    const std::string path = prefix + ".pgm";
    std::ofstream f = open_out(path);
    write_pgm(mask, f);
    close_out(f, path);
  }
  {
    const std::string path = prefix + "_cells.csv";
    std::ofstream f = open_out(path);
    write_cells_csv(mask, f);
    close_out(f, path);
  }
  if (o.overlay) {
    const std::string path = prefix + "_overlay.csv";
    std::ofstream f = open_out(path);
    write_overlay(alpha, f);
    close_out(f, path);
  }
  out << "alpha,mu_hat,cells,resolution,iters\n"
      << num(alpha.value()) << ',' << num(mu_hat_mask(mask)) << ',' << mask.count() << ',' << o.resolution << ','
      << o.iters << '\n';
}

void cmd_entropy(const Options& o, std::ostream& out) {
  const AlphaParam alpha = AlphaParam::make(parse_alpha(o.alpha));
  EntropyEstimate e;
  if (o.method == "qn") {
    e = entropy_qn(alpha, o.samples, o.n, o.seed);
  } else if (o.method == "birkhoff") {
    e = entropy_birkhoff(alpha, o.samples, o.n, o.seed);
  } else {
    const RegionMask mask = build_omega(alpha, o.resolution, o.resolution, o.iters, o.seeds);
    e = entropy_quadrature(density_profile(mask));
  }
  out << "alpha,method,value,stderr,n,samples,seed\n"
      << num(alpha.value()) << ',' << to_string(e.method) << ',' << num(e.value) << ',' << num(e.std_error) << ','
      << e.n << ',' << e.samples << ',' << e.seed << '\n';
}

void cmd_sweep(const Options& o, std::ostream& out) {
  SweepConfig cfg;
  cfg.resolution = o.resolution;
  cfg.iters = o.iters;
  cfg.seeds_per_column = o.seeds;
  cfg.samples = o.samples;
  cfg.n = o.n;
  cfg.seed = o.seed;
  if (o.steps < 2) throw ParameterError("steps must be >= 2");
  const SweepResult res = product_sweep(default_sweep_alphas(o.steps), cfg);
  if (o.out.empty()) {
    write_sweep_csv(res, out);
    return;
  }
  std::ofstream f = open_out(o.out);
  write_sweep_csv(res, f);
  close_out(f, o.out);
  out << "monotone: " << (res.monotone ? "true" : "false") << '\n';
}

int cmd_verify(const Options& o, std::ostream& out) {
  SuiteOptions so;
  so.samples = o.samples;
  so.seed = o.seed;
  so.resolution = o.resolution;
  so.iters = o.iters;
  const std::vector<VerifyReport> reports = run_suite(o.suite, so);
  out << "suite,trials,violations,status\n";
  bool ok = true;
  for (const VerifyReport& r : reports) {
    out << r.suite << ',' << r.trials << ',' << r.violations << ',' << (r.passed() ? "pass" : "fail") << '\n';
    ok = ok && r.passed();
  }
  for (const VerifyReport& r : reports) {
    if (!r.counterexample.empty()) out << "# counterexample " << r.suite << ": " << r.counterexample << '\n';
  }
  return ok ? kExitOk : kExitVerify;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"alpha-continued fraction maps, natural extensions and entropy (natural logarithms throughout)",
               "alphacf"};
  app.require_subcommand(1);
  Options o;
  // Defaults that differ from the shared ones per command.
  std::size_t sweep_res = 500;
  std::size_t entropy_res = 500;
  std::size_t expand_n = 10;
  std::size_t stat_n = 10'000;
  std::size_t verify_samples = 0;

  auto add_alpha = [&](CLI::App* c) {
    c->add_option("--alpha", o.alpha, "parameter in [0.5, 1], or g")->required();
  };

  CLI::App* expand_cmd = app.add_subcommand("expand", "digits, convergents p/q and errors of x");
  add_alpha(expand_cmd);
  expand_cmd->add_option("--x", o.x, "point in [alpha-1, alpha)")->required();
  expand_cmd->add_option("--n", expand_n, "number of digits");

  CLI::App* orbit_cmd = app.add_subcommand("orbit", "natural extension orbit of (x, 0)");
  add_alpha(orbit_cmd);
  orbit_cmd->add_option("--x", o.x, "point in [alpha-1, alpha)")->required();
  orbit_cmd->add_option("--n", expand_n, "number of steps");

  CLI::App* domain_cmd = app.add_subcommand("domain", "rasterize the natural extension domain");
  add_alpha(domain_cmd);
  domain_cmd->add_option("--res", o.resolution, "grid cells per axis")->check(CLI::Range(16, 20000));
  domain_cmd->add_option("--iters", o.iters, "iterations per seed");
  domain_cmd->add_option("--seeds", o.seeds, "seeds per x-column");
  domain_cmd->add_option("--out", o.out, "output prefix (default: domain)");
  domain_cmd->add_flag("--overlay", o.overlay, "also write the bounding rectangles");

  CLI::App* entropy_cmd = app.add_subcommand("entropy", "estimate h(T_alpha) in nats");
  add_alpha(entropy_cmd);
  entropy_cmd->add_option("--method", o.method, "qn, birkhoff or quadrature")
      ->check(CLI::IsMember({"qn", "birkhoff", "quadrature"}));
  entropy_cmd->add_option("--n", stat_n, "orbit length");
  entropy_cmd->add_option("--samples", o.samples, "number of orbits");
  entropy_cmd->add_option("--seed", o.seed, "random seed");
  entropy_cmd->add_option("--res", entropy_res, "grid resolution for quadrature")->check(CLI::Range(16, 20000));
  entropy_cmd->add_option("--iters", o.iters, "iterations per seed for quadrature");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "h * mu_hat over alpha in [0.5, 1]");
  sweep_cmd->add_option("--steps", o.steps, "grid points from 0.5 to 1 (g is added)");
  sweep_cmd->add_option("--seed", o.seed, "random seed");
  sweep_cmd->add_option("--res", sweep_res, "grid resolution")->check(CLI::Range(16, 20000));
  sweep_cmd->add_option("--iters", o.iters, "iterations per seed");
  sweep_cmd->add_option("--samples", o.samples, "orbits per entropy estimate");
  sweep_cmd->add_option("--n", stat_n, "orbit length");
  sweep_cmd->add_option("--out", o.out, "CSV path (default: stdout)");

  CLI::App* verify_cmd = app.add_subcommand("verify", "randomized and exhaustive checks of the inequalities");
  std::string suites;
  for (const std::string& s : suite_names()) suites += (suites.empty() ? "" : ", ") + s;
  verify_cmd->add_option("--suite", o.suite, suites)->check(CLI::IsMember(suite_names()));
  verify_cmd->add_option("--samples", verify_samples, "trials (0: suite default)");
  verify_cmd->add_option("--seed", o.seed, "random seed");
  verify_cmd->add_option("--res", o.resolution, "grid resolution for containment")->check(CLI::Range(16, 20000));
  verify_cmd->add_option("--iters", o.iters, "iterations per seed for containment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*expand_cmd) {
      o.n = expand_n;
      cmd_expand(o, out);
    } else if (*orbit_cmd) {
      o.n = expand_n;
      cmd_orbit(o, out);
    } else if (*domain_cmd) {
      cmd_domain(o, out);
    } else if (*entropy_cmd) {
      o.n = stat_n;
      o.resolution = entropy_res;
      cmd_entropy(o, out);
    } else if (*sweep_cmd) {
      o.n = stat_n;
      o.resolution = sweep_res;
      cmd_sweep(o, out);
    } else if (*verify_cmd) {
      o.samples = verify_samples;
      return cmd_verify(o, out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SingularityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace alphacf
