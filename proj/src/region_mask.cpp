#include "alphacf/region_mask.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <ostream>

#include "alphacf/parallel.hpp"

namespace alphacf {

RegionMask::RegionMask(Rect box, std::size_t nx, std::size_t ny)
    : box_(box),
      nx_(nx),
      ny_(ny),
      dx_((box.x1 - box.x0) / static_cast<double>(nx)),
      dy_((box.y1 - box.y0) / static_cast<double>(ny)),
      bits_((nx * ny + 63) / 64, 0) {
  if (nx == 0 || ny == 0) throw ParameterError("RegionMask: grid must be nonempty");
  if (box.empty()) throw ParameterError("RegionMask: bounding box must have positive area");
}

RegionMask RegionMask::for_alpha(const AlphaParam& alpha, std::size_t nx, std::size_t ny) {
  const YRange yr = y_range(alpha);
  return RegionMask({alpha.lower(), alpha.upper(), yr.lo, yr.hi}, nx, ny);
}

Rect RegionMask::cell_rect(std::size_t ix, std::size_t iy) const {
  // Last row/column end exactly on the box edge.
  const double x0 = box_.x0 + static_cast<double>(ix) * dx_;
  const double y0 = box_.y0 + static_cast<double>(iy) * dy_;
  const double x1 = ix + 1 == nx_ ? box_.x1 : box_.x0 + static_cast<double>(ix + 1) * dx_;
  const double y1 = iy + 1 == ny_ ? box_.y1 : box_.y0 + static_cast<double>(iy + 1) * dy_;
  return {x0, x1, y0, y1};
}

PlanarPoint RegionMask::cell_center(std::size_t ix, std::size_t iy) const {
  const Rect r = cell_rect(ix, iy);
  return {0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1)};
}

std::optional<std::pair<std::size_t, std::size_t>> RegionMask::cell_of(PlanarPoint p) const {
  if (!(p.x >= box_.x0 && p.x <= box_.x1 && p.y >= box_.y0 && p.y <= box_.y1)) return std::nullopt;
  auto ix = static_cast<std::size_t>((p.x - box_.x0) / dx_);
  auto iy = static_cast<std::size_t>((p.y - box_.y0) / dy_);
  if (ix >= nx_) ix = nx_ - 1;
  if (iy >= ny_) iy = ny_ - 1;
  return std::pair{ix, iy};
}

void RegionMask::mark_concurrent(std::size_t ix, std::size_t iy) {
  const std::size_t i = iy * nx_ + ix;
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  std::atomic_ref<std::uint64_t> word(bits_[i >> 6]);
  if ((word.load(std::memory_order_relaxed) & bit) == 0) word.fetch_or(bit, std::memory_order_relaxed);
}

bool RegionMask::mark_point(PlanarPoint p) {
  const auto cell = cell_of(p);
  if (!cell) return false;
  mark(cell->first, cell->second);
  return true;
}

std::size_t RegionMask::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : bits_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

void RegionMask::fill() {
  for (std::size_t iy = 0; iy < ny_; ++iy) {
    for (std::size_t ix = 0; ix < nx_; ++ix) mark(ix, iy);
  }
}

RegionMask build_omega(const AlphaParam& alpha, std::size_t nx, std::size_t ny, std::size_t iters,
                       std::size_t seeds_per_column) {
  if (nx < 16 || ny < 16) throw ParameterError("build_omega: grid must be at least 16 x 16");
  if (iters < 1) throw ParameterError("build_omega: iters must be >= 1");
  if (seeds_per_column < 1) throw ParameterError("build_omega: seeds_per_column must be >= 1");

  RegionMask mask = RegionMask::for_alpha(alpha, nx, ny);
  std::atomic<std::uint64_t> points{0};
  std::atomic<std::uint64_t> outside{0};
  // One chunk per group of columns; marks are idempotent so the outcome
  // does not depend on scheduling.
  parallel_chunks(nx, std::min<std::size_t>(nx, 64), [&](std::size_t begin, std::size_t end) {
    std::uint64_t local_points = 0;
    std::uint64_t local_outside = 0;
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < seeds_per_column; ++j) {
        PlanarPoint p{detail::seed_x(alpha, nx, seeds_per_column, i, j), 0.0};
        if (!alpha.contains(p.x)) continue;
        for (std::size_t k = 0;; ++k) {
          ++local_points;
          if (const auto cell = mask.cell_of(p)) {
            mask.mark_concurrent(cell->first, cell->second);
          } else {
            ++local_outside;
          }
          if (k == iters) break;
          const Step s = raw::step(alpha.value(), p.x);
          if (s.digit == 0) {
            if (p.x != 0.0 || p.y != 0.0) {
              ++local_points;
              if (const auto cell = mask.cell_of({0.0, 0.0})) mask.mark_concurrent(cell->first, cell->second);
            }
            break;
          }
          p = {s.image, 1.0 / (p.y + static_cast<double>(s.digit))};
        }
      }
    }
    points += local_points;
    outside += local_outside;
  });
  mask.iterations = iters;
  mask.points = points.load();
  mask.outside = outside.load();
  return mask;
}

double mu_hat_mask(const RegionMask& mask) {
  // Neumaier summation keeps the total reproducible to ~1e-16 relative.
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t iy = 0; iy < mask.ny(); ++iy) {
    for (std::size_t ix = 0; ix < mask.nx(); ++ix) {
      if (!mask.occupied(ix, iy)) continue;
      const double v = mu_hat_rect(mask.cell_rect(ix, iy));
      const double t = sum + v;
      comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
      sum = t;
    }
  }
  return sum + comp;
}

double boundary_mass(const RegionMask& mask) {
  double total = 0.0;
  const std::size_t nx = mask.nx();
  const std::size_t ny = mask.ny();
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      if (!mask.occupied(ix, iy)) continue;
      const bool edge = ix == 0 || iy == 0 || ix + 1 == nx || iy + 1 == ny || !mask.occupied(ix - 1, iy) ||
                        !mask.occupied(ix + 1, iy) || !mask.occupied(ix, iy - 1) || !mask.occupied(ix, iy + 1);
      if (edge) total += mu_hat_rect(mask.cell_rect(ix, iy));
    }
  }
  return total;
}

void write_pgm(const RegionMask& mask, std::ostream& os) {
  const Rect& b = mask.box();
  os << "P5\n";
  os << "# alphacf occupancy mask, 255 = occupied; first row is the top (largest y), y increases upward\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "# box x=[%.17g,%.17g] y=[%.17g,%.17g]\n", b.x0, b.x1, b.y0, b.y1);
  os << buf;
  os << mask.nx() << ' ' << mask.ny() << "\n255\n";
  std::string row(mask.nx(), '\0');
  for (std::size_t r = 0; r < mask.ny(); ++r) {
    const std::size_t iy = mask.ny() - 1 - r;
    for (std::size_t ix = 0; ix < mask.nx(); ++ix) row[ix] = mask.occupied(ix, iy) ? static_cast<char>(255) : '\0';
    os.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_cells_csv(const RegionMask& mask, std::ostream& os) {
  os << "ix,iy,x,y\n";
  char buf[128];
  for (std::size_t iy = 0; iy < mask.ny(); ++iy) {
    for (std::size_t ix = 0; ix < mask.nx(); ++ix) {
      if (!mask.occupied(ix, iy)) continue;
      const PlanarPoint c = mask.cell_center(ix, iy);
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", ix, iy, c.x, c.y);
      os << buf;
    }
  }
}

}  // namespace alphacf
