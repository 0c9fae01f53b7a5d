#include "alphacf/cylinders.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

namespace alphacf {

namespace {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

constexpr double kFloatTol = 1e-12;

// Comparison policy: exact for rationals, tolerant for doubles.
bool less(const Rational& a, const Rational& b) { return a < b; }
bool less(double a, double b) { return a < b - kFloatTol * (1.0 + std::fabs(b)); }
// Nondegeneracy of an interval: a few ulps relative to its endpoints.
constexpr double kWidthTol = 16 * std::numeric_limits<double>::epsilon();
bool nondegenerate(const Rational& a, const Rational& b) { return a < b; }
bool nondegenerate(double a, double b) { return a < b - kWidthTol * std::max(std::fabs(a), std::fabs(b)); }

double to_double(const Rational& r) { return r.convert_to<double>(); }
double to_double(double r) { return r; }

template <class Num>
Num from_double(double x);
template <>
Rational from_double<Rational>(double x) {
  return to_rational(x);
}
template <>
double from_double<double>(double x) {
  return x;
}

template <class Num>
struct Interval {
  Num lo;
  Num hi;
};

template <class Num>
struct Frame {
  Num lower;  // alpha - 1
  Num upper;  // alpha
  explicit Frame(const AlphaParam& alpha)
      : lower(from_double<Num>(alpha.value()) - Num(1)), upper(from_double<Num>(alpha.value())) {}
};

// T_a maps J ∩ closure(branch a) onto the returned interval; empty optional
// when the intersection has no interior.
template <class Num>
std::optional<Interval<Num>> forward_branch(const Frame<Num>& f, const Interval<Num>& j, Digit a) {
  const Num an(a);
  const Num s_hi = an + f.upper;       // 1/x at the left end of the branch
  const Num s_lo = an + f.upper - 1;   // 1/x at the right end
  if (s_hi * s_lo <= 0) return std::nullopt;
  Num klo = Num(1) / s_hi;
  Num khi = Num(1) / s_lo;
  if (klo < j.lo) klo = j.lo;
  if (khi > j.hi) khi = j.hi;
  if (!nondegenerate(klo, khi)) return std::nullopt;
  return Interval<Num>{Num(1) / khi - an, Num(1) / klo - an};
}

template <class Num>
CylinderSpec build(const AlphaParam& alpha, std::span<const Digit> word, bool exact) {
  CylinderSpec spec;
  spec.word.assign(word.begin(), word.end());
  spec.alpha = alpha.value();
  spec.exact = exact;
  const Frame<Num> f(alpha);

  // Pullback: I <- psi_a(I) ∩ [alpha-1, alpha], last digit first.
  Interval<Num> cyl{f.lower, f.upper};
  for (std::size_t k = word.size(); k-- > 0;) {
    const Num an(word[k]);
    const Num den_hi = cyl.hi + an;
    const Num den_lo = cyl.lo + an;
    if (den_hi * den_lo <= 0) return spec;
    Num lo = Num(1) / den_hi;
    Num hi = Num(1) / den_lo;
    bool cut = false;
    if (less(lo, f.lower)) {
      lo = f.lower;
      cut = true;
    } else if (lo < f.lower) {
      lo = f.lower;
    }
    if (less(f.upper, hi)) {
      hi = f.upper;
      cut = true;
    } else if (hi > f.upper) {
      hi = f.upper;
    }
    if (!nondegenerate(lo, hi)) return spec;
    if (cut && !spec.truncated_at) spec.truncated_at = k + 1;
    cyl = {lo, hi};
  }

  // Forward image T^n(cylinder).
  Interval<Num> img{f.lower, f.upper};
  for (Digit a : word) {
    auto next = forward_branch(f, img, a);
    if (!next) return spec;
    img = *next;
  }

  spec.admissible = true;
  spec.lo = to_double(cyl.lo);
  spec.hi = to_double(cyl.hi);
  spec.length = to_double(cyl.hi - cyl.lo);
  spec.image_lo = to_double(img.lo);
  spec.image_hi = to_double(img.hi);
  spec.full = !spec.truncated_at.has_value();
  return spec;
}



// Digit of the branch at c approached from below (from_below) or above;
// empty at c = 0 and beyond the digit cap.
std::optional<Digit> one_sided_digit(const Rational& alpha, const Rational& c, bool from_below) {
  if (c == 0) return std::nullopt;
  const Rational v = Rational(1) / c + 1 - alpha;
  const BigInt a = from_below ? floor_of(v) : ceil_of(v) - 1;
  if (a == 0 || boost::multiprecision::abs(a) > BigInt(static_cast<std::int64_t>(kDigitCap))) return std::nullopt;
  return a.convert_to<Digit>();
}

// One-sided expansion starting at c; `from_below` selects lim x -> c-.
std::vector<Digit> one_sided_digits(const AlphaParam& alpha, Rational c, bool from_below, std::size_t n) {
  const Rational a_r = to_rational(alpha.value());
  std::vector<Digit> out;
  while (out.size() < n) {
    const auto a = one_sided_digit(a_r, c, from_below);
    if (!a) break;
    out.push_back(*a);
    c = Rational(1) / c - Rational(*a);
    // T is decreasing on each branch, so the side flips.
    from_below = !from_below;
  }
  return out;
}

}  // namespace

CylinderSpec cylinder_of(const AlphaParam& alpha, std::span<const Digit> word, Arithmetic arith) {
  if (word.empty()) throw ParameterError("cylinder_of: empty word");
  if (std::find(word.begin(), word.end(), Digit{0}) != word.end()) {
    throw ParameterError("cylinder_of: digits must be nonzero");
  }
  return arith == Arithmetic::exact ? build<Rational>(alpha, word, true) : build<double>(alpha, word, false);
}

bool is_full(const CylinderSpec& spec) { return spec.admissible && spec.full; }

bool endpoint_image_full(const CylinderSpec& spec, double tol) {
  if (!spec.admissible) return false;
  const ConvergentState st = convergents_of(spec.word);
  // T^n x = (q_n x - p_n) / (-q_{n-1} x + p_{n-1})
  const auto fwd = [&](double x) {
    const long double lx = x;
    const long double num = st.q_cur.convert_to<long double>() * lx - st.p_cur.convert_to<long double>();
    const long double den = -st.q_prev.convert_to<long double>() * lx + st.p_prev.convert_to<long double>();
    return static_cast<double>(num / den);
  };
  const double u = fwd(spec.lo);
  const double v = fwd(spec.hi);
  const double lo = std::min(u, v);
  const double hi = std::max(u, v);
  return std::fabs(lo - (spec.alpha - 1.0)) <= tol && std::fabs(hi - spec.alpha) <= tol;
}

CylinderSearch max_cylinder_measure(const AlphaParam& alpha, std::size_t n, std::size_t budget) {
  if (n == 0) throw ParameterError("max_cylinder_measure: n must be >= 1");
  CylinderSearch result;
  const Frame<double> f(alpha);
  const double am = alpha.value();
  std::vector<Digit> word;

  struct Child {
    Digit a;
    Interval<double> image;
    long double qp, qc;
    double length;
  };

  // Length of ⟨w, a⟩ for the node with image img and denominators (qp, qc).
  const auto child_of = [&](const Interval<double>& img, long double qp, long double qc,
                            Digit a) -> std::optional<Child> {
    const double an = static_cast<double>(a);
    const double klo = std::max(1.0 / (an + am), img.lo);
    const double khi = std::min(1.0 / (an + am - 1.0), img.hi);
    if (!(klo < khi)) return std::nullopt;
    const long double dl = qp * klo + qc;
    const long double dh = qp * khi + qc;
    const auto len = static_cast<double>((static_cast<long double>(khi) - klo) / std::fabs(dl * dh));
    return Child{a, {1.0 / khi - an, 1.0 / klo - an}, qc, an * qc + qp, len};
  };

  // Children in order of increasing |a| on each side. A child is no longer
  // than max|psi_w'| times its branch length, and branch lengths shrink with
  // |a|, so the scan stops once that bound drops to `floor`.
  const auto children_of = [&](const Interval<double>& img, long double qp, long double qc, double floor,
                               Digit cap) {
    std::vector<Child> out;
    const long double el = std::fabs(qp * img.lo + qc);
    const long double eh = std::fabs(qp * img.hi + qc);
    const long double dmin = std::min(el, eh);
    const long double slope = 1.0L / (dmin * dmin);
    const auto scan = [&](double first, double last, double step) {
      for (double a = first; step > 0 ? a <= last : a >= last; a += step) {
        if (std::fabs(a) > static_cast<double>(cap)) break;
        const double branch = 1.0 / ((a + am) * (a + am - 1.0));
        if (std::fabs(a) >= 2.0 && static_cast<double>(slope * branch) <= floor) break;
        if (++result.nodes > budget) {
          result.exhausted_budget = true;
          return;
        }
        if (auto c = child_of(img, qp, qc, static_cast<Digit>(a)); c && c->length > floor) out.push_back(*c);
      }
    };
    const double big = kDigitCap;
    if (img.hi > 0.0) {
      const double first = std::max(std::floor(1.0 / img.hi + 1.0 - am), 1.0);
      const double last = img.lo > 0.0 ? std::ceil(1.0 / img.lo + 1.0 - am) - 1.0 : big;
      scan(first, last, 1.0);
    }
    if (img.lo < 0.0 && !result.exhausted_budget) {
      const double first = std::min(std::ceil(1.0 / img.lo + 1.0 - am) - 1.0, -1.0);
      const double last = img.hi < 0.0 ? std::floor(1.0 / img.hi + 1.0 - am) : -big;
      scan(first, last, -1.0);
    }
    std::sort(out.begin(), out.end(), [](const Child& x, const Child& y) { return x.length > y.length; });
    return out;
  };

  // best[m] is the exact maximum over words of length m. A node at depth k
  // with parent bound B = max|psi_w'| has descendants of length n no longer
  // than B * best[n - k], since their images lie in length-(n-k) cylinders.
  std::vector<double> best(n + 1, 0.0);
  best[0] = f.upper - f.lower;
  for (std::size_t m = 1; m <= n; ++m) {
    result.max_length = 0.0;
    result.argmax.clear();
    // Greedy dive over small digits gives a positive starting bound.
    {
      Interval<double> img{f.lower, f.upper};
      long double qp = 0.0L, qc = 1.0L;
      double len = 0.0;
      std::vector<Digit> dive;
      for (std::size_t k = 0; k < m; ++k) {
        const auto kids = children_of(img, qp, qc, 0.0, 64);
        if (kids.empty()) break;
        dive.push_back(kids.front().a);
        img = kids.front().image;
        qp = kids.front().qp;
        qc = kids.front().qc;
        len = kids.front().length;
      }
      if (dive.size() == m) {
        result.max_length = len;
        result.argmax = dive;
      }
    }
    std::function<void(const Interval<double>&, long double, long double)> visit =
        [&](const Interval<double>& img, long double qp, long double qc) {
          for (const Child& c : children_of(img, qp, qc, result.max_length, static_cast<Digit>(kDigitCap))) {
            if (result.exhausted_budget) return;
            if (c.length <= result.max_length) break;
            word.push_back(c.a);
            if (word.size() == m) {
              result.max_length = c.length;
              result.argmax = word;
            } else {
              const long double el = std::fabs(c.qp * c.image.lo + c.qc);
              const long double eh = std::fabs(c.qp * c.image.hi + c.qc);
              const long double dmin = std::min(el, eh);
              const auto reach = static_cast<double>(best[m - word.size()] / (dmin * dmin));
              if (reach > result.max_length) visit(c.image, c.qp, c.qc);
            }
            word.pop_back();
          }
        };
    visit({f.lower, f.upper}, 0.0L, 1.0L);
    best[m] = result.max_length;
    if (result.exhausted_budget) break;
  }
  return result;
}

std::vector<Digit> upper_endpoint_digits(const AlphaParam& alpha, std::size_t n) {
  return one_sided_digits(alpha, to_rational(alpha.value()), true, n);
}

std::vector<Digit> lower_endpoint_digits(const AlphaParam& alpha, std::size_t n) {
  return one_sided_digits(alpha, to_rational(alpha.value()) - 1, false, n);
}

NonFullSet nonfull_union_measure(const AlphaParam& alpha, std::size_t n) {
  if (n < 1 || n > 20) throw ParameterError("nonfull_union_measure: n must lie in [1, 20]");
  const Frame<Rational> f(alpha);

  // Depth-first over forward images. A branch lying inside the current image
  // is mapped onto the whole domain, so only the branches at the two image
  // endpoints can continue a non-full word. The endpoints are one-sided
  // iterates of alpha and alpha-1, so the words are concatenations of
  // prefixes of the two endpoint expansions.
  NonFullSet out;
  std::vector<double> lengths;
  std::vector<Digit> word;
  ConvergentState st;
  std::function<void(const Interval<Rational>&)> extend = [&](const Interval<Rational>& img) {
    if (word.size() == n) {
      out.words.push_back(word);
      // |cylinder| = |J| / |(q_{n-1} lo + q_n)(q_{n-1} hi + q_n)| for image J = [lo, hi].
      const Rational qp(st.q_prev);
      const Rational qc(st.q_cur);
      // Each length is exact before rounding; an exact running sum would
      // carry the lcm of all denominators.
      const Rational len = (img.hi - img.lo) / boost::multiprecision::abs((qp * img.lo + qc) * (qp * img.hi + qc));
      lengths.push_back(len.convert_to<double>());
      return;
    }
    std::set<Digit> digits;
    if (auto a = one_sided_digit(f.upper, img.lo, false)) digits.insert(*a);
    if (auto a = one_sided_digit(f.upper, img.hi, true)) digits.insert(*a);
    for (Digit a : digits) {
      auto next = forward_branch(f, img, a);
      if (!next || (next->lo == f.lower && next->hi == f.upper)) continue;
      const ConvergentState saved = st;
      st = push_digit(st, a);
      word.push_back(a);
      extend(*next);
      word.pop_back();
      st = saved;
    }
  };
  extend({f.lower, f.upper});

  std::sort(out.words.begin(), out.words.end());
  std::sort(lengths.begin(), lengths.end());
  out.measure = 0.0;
  for (double l : lengths) out.measure += l;
  return out;
}

JumpRecord jump(const AlphaParam& alpha, double x, std::size_t search_bound) {
  if (!alpha.contains(x)) throw_outside_domain(alpha, x);
  JumpRecord rec{x, 0, x};
  const Frame<Rational> fr(alpha);
  Interval<Rational> img{fr.lower, fr.upper};
  double cur = x;
  for (std::size_t k = 1; k <= search_bound; ++k) {
    const Step s = raw::step(alpha.value(), cur);
    if (s.digit == 0) break;
    auto next = forward_branch(fr, img, s.digit);
    if (!next) break;
    img = *next;
    const bool full = img.lo == fr.lower && img.hi == fr.upper;
    cur = s.image;
    if (full) {
      rec.N = k;
      rec.image = cur;
      break;
    }
  }
  return rec;
}

}  // namespace alphacf
