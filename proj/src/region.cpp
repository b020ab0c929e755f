#include "r2f/region.hpp"

#include <cmath>
#include <string>

#include "r2f/errors.hpp"

namespace r2f::region {

Map2D::Map2D(int h, int w, double fill)
    : height(h),
      width(w),
      values(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill) {
  if (h < 1 || w < 1) {
    fail(ErrorKind::argument, "map dimensions must be positive");
  }
}

double Map2D::total() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

Latent::Latent(int h, int w, int c, double fill)
    : height(h),
      width(w),
      channels(c),
      values(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
                 static_cast<std::size_t>(c),
             fill) {
  if (h < 1 || w < 1 || c < 1) {
    fail(ErrorKind::argument, "latent dimensions must be positive");
  }
}

bool Latent::all_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Region region_from_bbox(const mapping::BBox& box, const Grid& grid) {
  mapping::validate(box);
  if (grid.height < 1 || grid.width < 1) {
    fail(ErrorKind::argument, "grid dimensions must be positive");
  }
  CellRect cells{grid.width, grid.height, -1, -1};
  for (int y = 0; y < grid.height; ++y) {
    const double cy = (y + 0.5) / grid.height;
    if (cy < box.y0 || cy >= box.y1) continue;
    for (int x = 0; x < grid.width; ++x) {
      const double cx = (x + 0.5) / grid.width;
      if (cx < box.x0 || cx >= box.x1) continue;
      cells.x0 = std::min(cells.x0, x);
      cells.x1 = std::max(cells.x1, x);
      cells.y0 = std::min(cells.y0, y);
      cells.y1 = std::max(cells.y1, y);
    }
  }
  if (cells.x1 < 0) {
    fail(ErrorKind::precondition,
         "bounding box contains no cell center on a " +
             std::to_string(grid.width) + "x" + std::to_string(grid.height) +
             " grid");
  }
  return Region{grid, cells};
}

Region centered_region(const Region& r) {
  const int w = r.cells.width();
  const int h = r.cells.height();
  const int x0 = (r.grid.width - w) / 2;
  const int y0 = (r.grid.height - h) / 2;
  return Region{r.grid, CellRect{x0, y0, x0 + w - 1, y0 + h - 1}};
}

Map2D bbox_mask(const Region& r) {
  Map2D mask(r.grid.height, r.grid.width, 0.0);
  for (int y = r.cells.y0; y <= r.cells.y1; ++y) {
    for (int x = r.cells.x0; x <= r.cells.x1; ++x) {
      mask.at(y, x) = 1.0;
    }
  }
  return mask;
}

void validate(const ControlConfig& cfg, int T) {
  if (cfg.T_CA < 0 || cfg.N_CA < 0 || cfg.T_LF < 0 || cfg.eta < 0.0) {
    fail(ErrorKind::argument, "control parameters must be nonnegative");
  }
  if (cfg.T_CA > T || cfg.T_LF > T) {
    fail(ErrorKind::argument,
         "control step counts cannot exceed the schedule length");
  }
}

}  // namespace r2f::region
