#pragma once

// Uniform occupancy grid approximating Omega_alpha from forward orbits of
// the seed segment [alpha-1, alpha) x {0}.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "alphacf/natural_ext.hpp"

namespace alphacf {

class RegionMask {
 public:
  RegionMask(Rect box, std::size_t nx, std::size_t ny);

  // Grid over [alpha-1, alpha] x y_range(alpha).
  static RegionMask for_alpha(const AlphaParam& alpha, std::size_t nx, std::size_t ny);

  const Rect& box() const { return box_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }

  // Cell (ix, iy); iy = 0 is the bottom row (smallest y).
  Rect cell_rect(std::size_t ix, std::size_t iy) const;
  PlanarPoint cell_center(std::size_t ix, std::size_t iy) const;
  std::optional<std::pair<std::size_t, std::size_t>> cell_of(PlanarPoint p) const;

  bool occupied(std::size_t ix, std::size_t iy) const {
    const std::size_t i = iy * nx_ + ix;
    return (bits_[i >> 6] >> (i & 63)) & 1u;
  }
  void mark(std::size_t ix, std::size_t iy) {
    const std::size_t i = iy * nx_ + ix;
    bits_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  // Thread-safe idempotent mark; concurrent callers need no ordering.
  void mark_concurrent(std::size_t ix, std::size_t iy);
  // Returns false when p lies outside the box.
  bool mark_point(PlanarPoint p);

  std::size_t count() const;
  void fill();

  std::size_t iterations = 0;       // orbit length used to build the mask
  std::uint64_t points = 0;         // orbit points visited
  std::uint64_t outside = 0;        // orbit points that fell outside the box

  friend bool operator==(const RegionMask& a, const RegionMask& b) {
    return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.bits_ == b.bits_;
  }

 private:
  Rect box_;
  std::size_t nx_;
  std::size_t ny_;
  double dx_;
  double dy_;
  std::vector<std::uint64_t> bits_;
};

// Default seeds per x-column.
inline constexpr std::size_t kDefaultSeedsPerColumn = 128;

// Marks every cell visited by the first `iters` iterates of seeds placed on
// y = 0, `seeds_per_column` stratified seeds in each x-column. Requires
// nx, ny >= 16 and iters >= 1. Deterministic and independent of the thread
// count.
RegionMask build_omega(const AlphaParam& alpha, std::size_t nx, std::size_t ny, std::size_t iters,
                       std::size_t seeds_per_column = kDefaultSeedsPerColumn);

// Visits the orbit points that build_omega would mark, seed by seed, in a
// fixed order. Stops early once `visit` returns false.
template <class Visitor>
void for_each_orbit_point(const AlphaParam& alpha, std::size_t columns, std::size_t seeds_per_column,
                          std::size_t iters, Visitor&& visit);

// Sum of mu_hat_rect over occupied cells.
double mu_hat_mask(const RegionMask& mask);

// mu_hat of occupied cells that have an unoccupied 4-neighbour (or touch the
// box edge); a measure of the discretization uncertainty of mu_hat_mask.
double boundary_mass(const RegionMask& mask);

// Binary PGM (P5), 255 = occupied. Rows run top to bottom, so y increases
// upward in the rendered image; the header comment records this.
void write_pgm(const RegionMask& mask, std::ostream& os);
// CSV `ix,iy,x,y` of occupied cells with cell-centre coordinates.
void write_cells_csv(const RegionMask& mask, std::ostream& os);

// ---- implementation ----

namespace detail {
// Seed j of column i: x = lower + (i + (j + 1/2)/s) * width / columns.
inline double seed_x(const AlphaParam& alpha, std::size_t columns, std::size_t s, std::size_t i, std::size_t j) {
  const double t = (static_cast<double>(i) + (static_cast<double>(j) + 0.5) / static_cast<double>(s)) /
                   static_cast<double>(columns);
  return alpha.lower() + t;
}
}  // namespace detail

template <class Visitor>
void for_each_orbit_point(const AlphaParam& alpha, std::size_t columns, std::size_t seeds_per_column,
                          std::size_t iters, Visitor&& visit) {
  for (std::size_t i = 0; i < columns; ++i) {
    for (std::size_t j = 0; j < seeds_per_column; ++j) {
      PlanarPoint p{detail::seed_x(alpha, columns, seeds_per_column, i, j), 0.0};
      if (!alpha.contains(p.x)) continue;
      if (!visit(p)) return;
      for (std::size_t k = 0; k < iters; ++k) {
        const Step s = raw::step(alpha.value(), p.x);
        if (s.digit == 0) {
          p = {0.0, 0.0};
          if (!visit(p)) return;
          break;
        }
        p = {s.image, 1.0 / (p.y + static_cast<double>(s.digit))};
        if (!visit(p)) return;
      }
    }
  }
}

}  // namespace alphacf
