#pragma once

// Planar natural extension
//
//   T(x, y) = (T_alpha x, 1 / (y + a_1(x))),   T(0, y) = (0, 0),
//
// its invariant measure dx dy / (1 + xy)^2, the explicit rectangle unions
// X_alpha (outer bound), Y_alpha (inner bound) and Omega_g, the four-point
// S-set and the transfer relations between alpha- and beta-expansions.

#include <array>
#include <numbers>
#include <vector>

#include "alphacf/cf_core.hpp"

namespace alphacf {

inline constexpr double kSqrt2 = std::numbers::sqrt2;
// For alpha >= g every natural extension domain lies in
// [alpha-1, alpha] x [1-sqrt2, sqrt2].
inline constexpr double kYMin = 1.0 - kSqrt2;
inline constexpr double kYMax = kSqrt2;

struct YRange {
  double lo = 0.0;
  double hi = 0.0;
};

// Vertical extent of the bounding box of Omega_alpha: [1-sqrt2, sqrt2] for
// alpha >= g. Below g all digits satisfy |a| >= 2, so |y| <= 1 is invariant
// and the box is [-1, 1]; orbits there do leave [1-sqrt2, sqrt2] (y reaches
// -g near alpha = 1/2).
YRange y_range(const AlphaParam& alpha);

struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

struct Rect {
  double x0 = 0.0;
  double x1 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;

  bool empty() const { return !(x0 < x1 && y0 < y1); }
  bool contains(PlanarPoint p, double tol = 0.0) const {
    return p.x >= x0 - tol && p.x <= x1 + tol && p.y >= y0 - tol && p.y <= y1 + tol;
  }
  bool contains(const Rect& r) const { return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1; }
  bool intersects(const Rect& r) const { return r.x0 <= x1 && r.x1 >= x0 && r.y0 <= y1 && r.y1 >= y0; }
};

// Union of closed axis-aligned rectangles overlapping at most on boundaries.
struct RectRegion {
  std::vector<Rect> rects;

  bool contains(PlanarPoint p, double tol = 0.0) const;
  // True when r lies inside a single member rectangle.
  bool covers(const Rect& r) const;
  bool intersects(const Rect& r) const;
  double mu_hat() const;
};

// Throws DomainError for x outside [alpha-1, alpha) or y outside
// y_range(alpha); SingularityError when |y + a| < 1e-12.
PlanarPoint nat_ext_step(const AlphaParam& alpha, PlanarPoint p);

class RegionMask;

// Inverse of nat_ext_step. The digit a is recovered from y' = 1/(y + a)
// together with x = 1/(x' + a) lying in the a-branch. Up to three digits can
// survive; they are filtered by the exact domain for alpha in {1/2, g, 1},
// by X_alpha above g, and then by the occupied cells of `hint` if given (a
// heuristic: it errs when the mask misses the true cell). Throws DomainError
// when no digit fits or the choice stays ambiguous. y is recovered to about
// |a| ulps.
PlanarPoint nat_ext_inverse(const AlphaParam& alpha, PlanarPoint p, const RegionMask* hint = nullptr);

// Outer bound X_alpha (three rectangles); alpha in (g, 1).
RectRegion x_region(const AlphaParam& alpha);
// Inner bound Y_alpha; alpha in (g, 1). The second rectangle is dropped when
// its height is below 1e-12 (b = 0 makes it empty up to rounding).
RectRegion y_region(const AlphaParam& alpha);
// [alpha-1, min(alpha, 1/(1-alpha) - 3)] x [1 - 1/sqrt2, sqrt2 - 1]; alpha in (g, 1).
Rect inner_rectangle(const AlphaParam& alpha);

// Omega_g = [-g^2, g^2] x [1-sqrt2, 1/sqrt2-1] ∪ [-g^2, g] x [1/sqrt2-1, 2-sqrt2].
RectRegion omega_g_region();
bool omega_g_exact(PlanarPoint p);

// Integral of 1/(1+xy)^2 over r:
//   log((1+x1 y1)(1+x0 y0)) - log((1+x1 y0)(1+x0 y1))
//     = log1p((x1-x0)(y1-y0) / ((1+x1 y0)(1+x0 y1))).
// Throws DomainError if 1 + xy <= 0 somewhere on r.
double mu_hat_rect(const Rect& r);

// {(x,y), (-x,-y), (x+1, y/(1-y)), (1-x, -y/(y+1))}; SingularityError at y = +-1.
std::array<PlanarPoint, 4> s_set(PlanarPoint p);

enum class TransferHypothesis {
  equal,                 // x = z
  reciprocal_minus,      // (x+1)(1-z) = 1
  reciprocal_plus,       // (1-x)(z+1) = 1
  negated,               // x + z = 0
  reciprocal_negated,    // (x+1)(z+1) = 1
  shifted,               // z - x = 1
  reflected,             // x + z = 1
};

enum class TransferConclusion {
  difference_zero,   // T_beta(z) - T_alpha(x) = 0
  difference_one,    // T_beta(z) - T_alpha(x) = 1
  sum_zero,          // T_alpha(x) + T_beta(z) = 0
  sum_one,           // T_alpha(x) + T_beta(z) = 1
  shift_product,     // (x+1)(T_beta(z)+1) = 1
  reflect_alpha,     // (T_alpha(x)+1)(1-z) = 1, when x > 1/(alpha+1)
  reflect_beta,      // (1-x)(T_beta(z)+1) = 1, when z > 1/(beta+1)
  reflect_both,      // (T_alpha(x)+1)(T_beta(z)+1) = 1 otherwise
  violated,          // none of the expected conclusions holds
};

struct TransferResult {
  TransferHypothesis hypothesis;
  TransferConclusion conclusion;
  double t_alpha_x;
  double t_beta_z;
};

// Detects which relations between x and z hold (within 1e-12) and which
// conclusion follows; when several hold, the first one whose conclusion is
// met is reported. Conclusions are compared with tolerance
// min(1/4, conclusion_tol * max(1, 1/|x|, 1/|z|)). Requires
// g <= alpha <= beta <= 1, x in [alpha-1, alpha), z in [beta-1, beta).
// Throws DomainError when no hypothesis holds.
TransferResult transfer_check(const AlphaParam& alpha, const AlphaParam& beta, double x, double z,
                              double conclusion_tol = 1e-9);

const char* to_string(TransferHypothesis h);
const char* to_string(TransferConclusion c);

}  // namespace alphacf
