#pragma once

#include <utility>
#include <vector>

#include "r2f/region.hpp"

namespace r2f::region {

using Overlay = std::pair<Latent, Map2D>;  // (per-object latent, its mask)

// Masked overwrite z <- z * (1 - M) + overlay * M, applied sequentially with
// the mask broadcast across channels.
Latent latent_fusion(const Latent& z, const std::vector<Overlay>& overlays);

// Tight bounding rectangle of the cells where the map is positive.
CellRect tight_support(const Map2D& m);

// Maps the mask's tight support box onto the region's cell rectangle
// (bilinear, edge-clamped, half-cell-center alignment; an identical source
// and target rectangle reproduces the input bit-exactly). Output is zero
// outside the region, so its support is contained in R and a box-symmetric
// mask lands its centroid on R's center.
Map2D refine_mask(const Map2D& m, const Region& r);

// The same geometric transform applied per channel, with the source box
// given explicitly (the pre-refinement mask's support). Cells outside the
// region are zeroed.
Latent refine_latent(const Latent& z, const CellRect& source, const Region& r);
std::vector<Latent> refine_latents(const std::vector<Latent>& latents,
                                   const CellRect& source, const Region& r);

}  // namespace r2f::region
