#include "r2f/region_ops.hpp"

#include <algorithm>
#include <cmath>

#include "r2f/errors.hpp"

namespace r2f::region {

Latent latent_fusion(const Latent& z, const std::vector<Overlay>& overlays) {
  Latent out = z;
  for (const auto& [overlay, mask] : overlays) {
    if (!overlay.same_shape(z)) {
      fail(ErrorKind::shape, "overlay latent shape mismatch");
    }
    if (mask.height != z.height || mask.width != z.width) {
      fail(ErrorKind::shape, "overlay mask shape mismatch");
    }
    for (int y = 0; y < z.height; ++y) {
      for (int x = 0; x < z.width; ++x) {
        const double m = mask.at(y, x);
        for (int ch = 0; ch < z.channels; ++ch) {
          out.at(y, x, ch) =
              out.at(y, x, ch) * (1.0 - m) + overlay.at(y, x, ch) * m;
        }
      }
    }
  }
  return out;
}

CellRect tight_support(const Map2D& m) {
  CellRect rect{m.width, m.height, -1, -1};
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      if (m.at(y, x) > 0.0) {
        rect.x0 = std::min(rect.x0, x);
        rect.x1 = std::max(rect.x1, x);
        rect.y0 = std::min(rect.y0, y);
        rect.y1 = std::max(rect.y1, y);
      }
    }
  }
  if (rect.x1 < 0) {
    fail(ErrorKind::precondition, "mask has no positive cell");
  }
  return rect;
}

namespace {

// Bilinear sample at fractional cell coordinates, clamped to the source box
// so edges replicate instead of bleeding zeros.
double sample_clamped(const Map2D& m, const CellRect& box, double u, double v) {
  u = std::clamp(u, static_cast<double>(box.x0), static_cast<double>(box.x1));
  v = std::clamp(v, static_cast<double>(box.y0), static_cast<double>(box.y1));
  const int x_low = std::clamp(static_cast<int>(std::floor(u)), box.x0, box.x1);
  const int y_low = std::clamp(static_cast<int>(std::floor(v)), box.y0, box.y1);
  const int x_high = std::min(x_low + 1, box.x1);
  const int y_high = std::min(y_low + 1, box.y1);
  const double fx = u - x_low;
  const double fy = v - y_low;
  const double top = m.at(y_low, x_low) * (1.0 - fx) + m.at(y_low, x_high) * fx;
  const double bottom =
      m.at(y_high, x_low) * (1.0 - fx) + m.at(y_high, x_high) * fx;
  return top * (1.0 - fy) + bottom * fy;
}

double sample_clamped(const Latent& z, int ch, const CellRect& box, double u,
                      double v) {
  u = std::clamp(u, static_cast<double>(box.x0), static_cast<double>(box.x1));
  v = std::clamp(v, static_cast<double>(box.y0), static_cast<double>(box.y1));
  const int x_low = std::clamp(static_cast<int>(std::floor(u)), box.x0, box.x1);
  const int y_low = std::clamp(static_cast<int>(std::floor(v)), box.y0, box.y1);
  const int x_high = std::min(x_low + 1, box.x1);
  const int y_high = std::min(y_low + 1, box.y1);
  const double fx = u - x_low;
  const double fy = v - y_low;
  const double top =
      z.at(y_low, x_low, ch) * (1.0 - fx) + z.at(y_low, x_high, ch) * fx;
  const double bottom =
      z.at(y_high, x_low, ch) * (1.0 - fx) + z.at(y_high, x_high, ch) * fx;
  return top * (1.0 - fy) + bottom * fy;
}

// Source coordinate for a target cell under the half-cell-center box-to-box
// affine map. Identical boxes give back the cell's own coordinate exactly.
double back_map(int target, int target_lo, int target_size, int source_lo,
                int source_size) {
  const double scale =
      static_cast<double>(source_size) / static_cast<double>(target_size);
  return source_lo - 0.5 + (target - target_lo + 0.5) * scale;
}

}  // namespace

Map2D refine_mask(const Map2D& m, const Region& r) {
  if (m.height != r.grid.height || m.width != r.grid.width) {
    fail(ErrorKind::shape, "mask does not match the region's grid");
  }
  const CellRect source = tight_support(m);
  const CellRect& target = r.cells;
  Map2D out(m.height, m.width, 0.0);
  for (int y = target.y0; y <= target.y1; ++y) {
    const double v =
        back_map(y, target.y0, target.height(), source.y0, source.height());
    for (int x = target.x0; x <= target.x1; ++x) {
      const double u =
          back_map(x, target.x0, target.width(), source.x0, source.width());
      out.at(y, x) = std::clamp(sample_clamped(m, source, u, v), 0.0, 1.0);
    }
  }
  return out;
}

Latent refine_latent(const Latent& z, const CellRect& source, const Region& r) {
  if (z.height != r.grid.height || z.width != r.grid.width) {
    fail(ErrorKind::shape, "latent does not match the region's grid");
  }
  if (source.x0 < 0 || source.y0 < 0 || source.x1 >= z.width ||
      source.y1 >= z.height || source.x1 < source.x0 ||
      source.y1 < source.y0) {
    fail(ErrorKind::precondition, "source rectangle lies outside the latent");
  }
  const CellRect& target = r.cells;
  Latent out(z.height, z.width, z.channels, 0.0);
  for (int y = target.y0; y <= target.y1; ++y) {
    const double v =
        back_map(y, target.y0, target.height(), source.y0, source.height());
    for (int x = target.x0; x <= target.x1; ++x) {
      const double u =
          back_map(x, target.x0, target.width(), source.x0, source.width());
      for (int ch = 0; ch < z.channels; ++ch) {
        out.at(y, x, ch) = sample_clamped(z, ch, source, u, v);
      }
    }
  }
  return out;
}

std::vector<Latent> refine_latents(const std::vector<Latent>& latents,
                                   const CellRect& source, const Region& r) {
  std::vector<Latent> out;
  out.reserve(latents.size());
  for (const auto& z : latents) {
    out.push_back(refine_latent(z, source, r));
  }
  return out;
}

}  // namespace r2f::region
