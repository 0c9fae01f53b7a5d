#include "alphacf/natural_ext.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <optional>
#include <sstream>

#include "alphacf/region_mask.hpp"

namespace alphacf {

namespace {

constexpr double kYTol = 1e-12;

void require_between_g_and_one(const AlphaParam& alpha, const char* what) {
  if (!(alpha.value() > kGolden && alpha.value() < 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": alpha must lie in (g, 1), got " << alpha.value();
    throw ParameterError(os.str());
  }
}

}  // namespace

bool RectRegion::contains(PlanarPoint p, double tol) const {
  return std::any_of(rects.begin(), rects.end(), [&](const Rect& r) { return r.contains(p, tol); });
}

bool RectRegion::covers(const Rect& r) const {
  return std::any_of(rects.begin(), rects.end(), [&](const Rect& q) { return q.contains(r); });
}

bool RectRegion::intersects(const Rect& r) const {
  return std::any_of(rects.begin(), rects.end(), [&](const Rect& q) { return q.intersects(r); });
}

double RectRegion::mu_hat() const {
  double total = 0.0;
  for (const Rect& r : rects) total += mu_hat_rect(r);
  return total;
}

YRange y_range(const AlphaParam& alpha) {
  if (alpha.value() >= kGolden) return {kYMin, kYMax};
  return {-1.0, 1.0};
}

PlanarPoint nat_ext_step(const AlphaParam& alpha, PlanarPoint p) {
  if (!alpha.contains(p.x)) throw_outside_domain(alpha, p.x);
  const YRange yr = y_range(alpha);
  if (!(p.y >= yr.lo - kYTol && p.y <= yr.hi + kYTol)) {
    std::ostringstream os;
    os.precision(17);
    os << "y = " << p.y << " outside [" << yr.lo << ", " << yr.hi << "]";
    throw DomainError(os.str());
  }
  const Step s = raw::step(alpha.value(), p.x);
  if (s.digit == 0) return {0.0, 0.0};
  const double den = p.y + static_cast<double>(s.digit);
  if (std::fabs(den) < 1e-12) throw SingularityError("nat_ext_step: y + a vanishes");
  return {s.image, 1.0 / den};
}

PlanarPoint nat_ext_inverse(const AlphaParam& alpha, PlanarPoint p, const RegionMask* hint) {
  if (!alpha.contains(p.x) && p.x != alpha.upper()) throw_outside_domain(alpha, p.x);
  if (std::fabs(p.y) < kZeroThreshold) throw DomainError("nat_ext_inverse: y' must be nonzero");
  const double inv = 1.0 / p.y;
  std::vector<PlanarPoint> cands;
  const YRange yr = y_range(alpha);
  const auto a_lo = static_cast<Digit>(std::ceil(inv - yr.hi - kYTol));
  const auto a_hi = static_cast<Digit>(std::floor(inv - yr.lo + kYTol));
  for (Digit a = a_lo; a <= a_hi; ++a) {
    if (a == 0) continue;
    const double den = p.x + static_cast<double>(a);
    if (den == 0.0) continue;
    const PlanarPoint q{1.0 / den, inv - static_cast<double>(a)};
    if (!alpha.contains(q.x)) continue;
    if (raw::step(alpha.value(), q.x).digit != a) continue;
    cands.push_back(q);
  }
  if (cands.empty()) throw DomainError("nat_ext_inverse: no digit maps a preimage onto this point");

  const auto keep = [&](auto pred) {
    std::vector<PlanarPoint> kept;
    std::copy_if(cands.begin(), cands.end(), std::back_inserter(kept), pred);
    if (!kept.empty()) cands = std::move(kept);
  };
  if (cands.size() > 1) {
    if (alpha.value() == 1.0) {
      keep([](const PlanarPoint& q) { return q.y >= -kYTol && q.y <= 1.0 + kYTol; });
    } else if (alpha.extended()) {
      const RectRegion outer = x_region(alpha);
      keep([&](const PlanarPoint& q) { return outer.contains(q, 1e-9); });
    } else if (alpha.value() == kGolden) {
      const RectRegion omega = omega_g_region();
      keep([&](const PlanarPoint& q) { return omega.contains(q, 1e-9); });
    } else if (alpha.value() == 0.5) {
      // Omega_{1/2} = [-1/2, 0) x [-g, g^2] ∪ [0, 1/2) x [-g^2, g].
      constexpr double g2 = 1.0 - kGolden;
      keep([](const PlanarPoint& q) {
        return q.x < 0.0 ? q.y >= -kGolden - 1e-9 && q.y <= g2 + 1e-9 : q.y >= -g2 - 1e-9 && q.y <= kGolden + 1e-9;
      });
    } else {
      keep([](const PlanarPoint& q) { return std::fabs(q.y) <= kGolden + 1e-9; });
    }
  }
  if (cands.size() > 1 && hint != nullptr) {
    keep([&](const PlanarPoint& q) {
      const auto cell = hint->cell_of(q);
      return cell && hint->occupied(cell->first, cell->second);
    });
  }
  if (cands.size() > 1) throw DomainError("nat_ext_inverse: preimage digit is ambiguous");
  return cands.front();
}

RectRegion x_region(const AlphaParam& alpha) {
  require_between_g_and_one(alpha, "x_region");
  const double a = alpha.value();
  const auto d = static_cast<double>(*alpha.d());
  const double y_lo = 1.0 / (2.0 - kSqrt2 - d);
  const double y_mid = 1.0 / (1.0 - kSqrt2 - d);
  return {{
      {a - 1.0, alpha.t_lower(), y_lo, y_mid},
      {a - 1.0, a, y_mid, 2.0 - kSqrt2},
      {1.0 / a - 1.0, a, 2.0 - kSqrt2, kSqrt2},
  }};
}

RectRegion y_region(const AlphaParam& alpha) {
  require_between_g_and_one(alpha, "y_region");
  const double a = alpha.value();
  const auto d = static_cast<double>(*alpha.d());
  const auto b = static_cast<double>(*alpha.b());
  const double y_mid = 1.0 / (d + kSqrt2 - 2.0 - b);
  RectRegion out{{{a - 1.0, b - alpha.t_lower(), 1.0 / (d + kSqrt2 - 1.0 - b), y_mid}}};
  const Rect upper{a - 1.0, a, y_mid, kSqrt2 - 1.0};
  if (upper.y1 - upper.y0 > 1e-12) out.rects.push_back(upper);
  return out;
}

Rect inner_rectangle(const AlphaParam& alpha) {
  require_between_g_and_one(alpha, "inner_rectangle");
  const double a = alpha.value();
  return {a - 1.0, std::min(a, 1.0 / (1.0 - a) - 3.0), 1.0 - 1.0 / kSqrt2, kSqrt2 - 1.0};
}

RectRegion omega_g_region() {
  constexpr double g = kGolden;
  constexpr double g2 = 1.0 - kGolden;
  const double mid = 1.0 / kSqrt2 - 1.0;
  return {{
      {-g2, g2, 1.0 - kSqrt2, mid},
      {-g2, g, mid, 2.0 - kSqrt2},
  }};
}

bool omega_g_exact(PlanarPoint p) { return omega_g_region().contains(p); }

double mu_hat_rect(const Rect& r) {
  if (!(r.x0 <= r.x1 && r.y0 <= r.y1)) throw DomainError("mu_hat_rect: malformed rectangle");
  // 1 + xy is bilinear, so its minimum over the rectangle sits at a corner.
  const double c00 = 1.0 + r.x0 * r.y0;
  const double c01 = 1.0 + r.x0 * r.y1;
  const double c10 = 1.0 + r.x1 * r.y0;
  const double c11 = 1.0 + r.x1 * r.y1;
  if (std::min({c00, c01, c10, c11}) <= 0.0) throw DomainError("mu_hat_rect: 1 + xy <= 0 on the rectangle");
  return std::log1p((r.x1 - r.x0) * (r.y1 - r.y0) / (c10 * c01));
}

std::array<PlanarPoint, 4> s_set(PlanarPoint p) {
  if (p.y == 1.0 || p.y == -1.0) throw SingularityError("s_set: y must differ from +-1");
  return {{{p.x, p.y}, {-p.x, -p.y}, {p.x + 1.0, p.y / (1.0 - p.y)}, {1.0 - p.x, -p.y / (p.y + 1.0)}}};
}

TransferResult transfer_check(const AlphaParam& alpha, const AlphaParam& beta, double x, double z,
                              double conclusion_tol) {
  if (!(alpha.value() >= kGolden && alpha.value() <= beta.value())) {
    throw ParameterError("transfer_check: requires g <= alpha <= beta <= 1");
  }
  if (!alpha.contains(x)) throw_outside_domain(alpha, x);
  if (!beta.contains(z)) throw_outside_domain(beta, z);

  constexpr double tol = 1e-12;
  const auto near = [](double v, double target, double t) { return std::fabs(v - target) <= t; };

  const TransferHypothesis order[] = {
      TransferHypothesis::equal,    TransferHypothesis::reciprocal_minus,   TransferHypothesis::reciprocal_plus,
      TransferHypothesis::negated,  TransferHypothesis::reciprocal_negated, TransferHypothesis::shifted,
      TransferHypothesis::reflected};
  const auto holds = [&](TransferHypothesis h) {
    switch (h) {
      case TransferHypothesis::equal: return near(x, z, tol);
      case TransferHypothesis::reciprocal_minus: return near((x + 1.0) * (1.0 - z), 1.0, tol);
      case TransferHypothesis::reciprocal_plus: return near((1.0 - x) * (z + 1.0), 1.0, tol);
      case TransferHypothesis::negated: return near(x + z, 0.0, tol);
      case TransferHypothesis::reciprocal_negated: return near((x + 1.0) * (z + 1.0), 1.0, tol);
      case TransferHypothesis::shifted: return near(z - x, 1.0, tol);
      case TransferHypothesis::reflected: return near(x + z, 1.0, tol);
    }
    return false;
  };

  const double tx = t_alpha(alpha, x);
  const double tz = t_alpha(beta, z);
  // The images carry the rounding of 1/x and 1/z, so the tolerance grows
  // with them; it stays below 1/4, which still separates 0 from 1.
  const double scale = std::max({1.0, std::fabs(x) > 0.0 ? 1.0 / std::fabs(x) : 1.0,
                                 std::fabs(z) > 0.0 ? 1.0 / std::fabs(z) : 1.0});
  const double ctol = std::min(0.25, conclusion_tol * scale);

  const auto conclude = [&](TransferHypothesis h) {
    switch (h) {
      case TransferHypothesis::equal:
      case TransferHypothesis::reciprocal_minus:
      case TransferHypothesis::reciprocal_plus:
        if (near(tz - tx, 0.0, ctol)) return TransferConclusion::difference_zero;
        if (near(tz - tx, 1.0, ctol)) return TransferConclusion::difference_one;
        break;
      case TransferHypothesis::negated:
      case TransferHypothesis::reciprocal_negated:
        if (near(tx + tz, 0.0, ctol)) return TransferConclusion::sum_zero;
        if (near(tx + tz, 1.0, ctol)) return TransferConclusion::sum_one;
        break;
      case TransferHypothesis::shifted:
        if (near((x + 1.0) * (tz + 1.0), 1.0, ctol)) return TransferConclusion::shift_product;
        break;
      case TransferHypothesis::reflected:
        if (x > 1.0 / (alpha.value() + 1.0)) {
          if (near((tx + 1.0) * (1.0 - z), 1.0, ctol)) return TransferConclusion::reflect_alpha;
        } else if (z > 1.0 / (beta.value() + 1.0)) {
          if (near((1.0 - x) * (tz + 1.0), 1.0, ctol)) return TransferConclusion::reflect_beta;
        } else if (near((tx + 1.0) * (tz + 1.0), 1.0, ctol)) {
          return TransferConclusion::reflect_both;
        }
        break;
    }
    return TransferConclusion::violated;
  };

  // When several hypotheses hold at once, any of their conclusions is accepted.
  std::optional<TransferResult> first;
  for (TransferHypothesis h : order) {
    if (!holds(h)) continue;
    const TransferResult r{h, conclude(h), tx, tz};
    if (r.conclusion != TransferConclusion::violated) return r;
    if (!first) first = r;
  }
  if (!first) throw DomainError("transfer_check: (x, z) satisfies none of the transfer hypotheses");
  return *first;
}

const char* to_string(TransferHypothesis h) {
  switch (h) {
    case TransferHypothesis::equal: return "x=z";
    case TransferHypothesis::reciprocal_minus: return "(x+1)(1-z)=1";
    case TransferHypothesis::reciprocal_plus: return "(1-x)(z+1)=1";
    case TransferHypothesis::negated: return "x+z=0";
    case TransferHypothesis::reciprocal_negated: return "(x+1)(z+1)=1";
    case TransferHypothesis::shifted: return "z-x=1";
    case TransferHypothesis::reflected: return "x+z=1";
  }
  return "?";
}

const char* to_string(TransferConclusion c) {
  switch (c) {
    case TransferConclusion::difference_zero: return "Tz-Tx=0";
    case TransferConclusion::difference_one: return "Tz-Tx=1";
    case TransferConclusion::sum_zero: return "Tx+Tz=0";
    case TransferConclusion::sum_one: return "Tx+Tz=1";
    case TransferConclusion::shift_product: return "(x+1)(Tz+1)=1";
    case TransferConclusion::reflect_alpha: return "(Tx+1)(1-z)=1";
    case TransferConclusion::reflect_beta: return "(1-x)(Tz+1)=1";
    case TransferConclusion::reflect_both: return "(Tx+1)(Tz+1)=1";
    case TransferConclusion::violated: return "violated";
  }
  return "?";
}

}  // namespace alphacf
