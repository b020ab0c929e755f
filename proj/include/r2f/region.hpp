#pragma once

#include <cstddef>
#include <vector>

#include "r2f/mapping.hpp"

namespace r2f::region {

struct Grid {
  int height = 1;
  int width = 1;
};

// Dense H x W array; used for both attention maps (nonnegative, positive
// total) and masks (entries in [0,1]).
struct Map2D {
  int height = 0;
  int width = 0;
  std::vector<double> values;  // row-major, y then x

  Map2D() = default;
  Map2D(int h, int w, double fill = 0.0);

  double& at(int y, int x) { return values[index(y, x)]; }
  double at(int y, int x) const { return values[index(y, x)]; }
  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
  double total() const;
};

// Dense H x W x C latent.
struct Latent {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> values;  // row-major, y then x then channel

  Latent() = default;
  Latent(int h, int w, int c, double fill = 0.0);

  double& at(int y, int x, int ch) { return values[index(y, x, ch)]; }
  double at(int y, int x, int ch) const { return values[index(y, x, ch)]; }
  std::size_t index(int y, int x, int ch) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels) +
           static_cast<std::size_t>(ch);
  }
  bool same_shape(const Latent& other) const {
    return height == other.height && width == other.width &&
           channels == other.channels;
  }
  bool all_finite() const;
};

// Inclusive rectangle of member cells.
struct CellRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
  bool contains(int x, int y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }
};

// A normalized bounding box resolved onto a grid by cell-center containment
// (a cell belongs to the region iff its center lies in [x0,x1) x [y0,y1)).
struct Region {
  Grid grid;
  CellRect cells;

  bool contains(int x, int y) const { return cells.contains(x, y); }
  int cell_count() const { return cells.width() * cells.height(); }
};

Region region_from_bbox(const mapping::BBox& box, const Grid& grid);

// Same-size copy of the region centered on the grid.
Region centered_region(const Region& r);

// Binary mask: 1 on member cells, 0 elsewhere.
Map2D bbox_mask(const Region& r);

struct ControlConfig {
  int T_CA = 10;    // steps with cross-attention control (t > T - T_CA)
  int N_CA = 5;     // gradient iterations per controlled step
  double eta = 30;  // gradient step coefficient
  int T_LF = 20;    // steps with latent fusion (t > T - T_LF)
};

void validate(const ControlConfig& cfg, int T);

}  // namespace r2f::region
