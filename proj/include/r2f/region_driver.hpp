#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "r2f/region_energy.hpp"
#include "r2f/region_ops.hpp"
#include "r2f/schedule.hpp"

namespace r2f::region {

// Abstract per-step sampler z_{t-1} = p(z_t, directive, t). The stream id
// decorrelates noise between the composite chain (stream 0) and per-object
// chains (stream = object index).
using Denoiser = std::function<Latent(const Latent&, const schedule::StepDirective&,
                                      int t, std::uint32_t stream)>;

// Synthetic stand-in for detection/segmentation: maps the generated latent
// and its generation region to the object's mask.
using MaskProvider = std::function<Map2D(const Latent&, const std::string& key,
                                         const Region& generation_region)>;

// Toy denoiser: contraction by 0.9 toward a directive-derived target pattern
// (weighted by blend weights) plus seeded Gaussian noise of scale 0.05.
Denoiser make_pattern_denoiser(std::uint64_t seed);

// Shipped mask provider: the generation region's box mask.
MaskProvider bbox_mask_provider();

// Standard-normal latent, deterministic in (seed, stream).
Latent init_latent(const Grid& grid, int channels, std::uint64_t seed,
                   std::uint32_t stream);

struct ObjectEnergy {
  std::string key;
  double energy = 0.0;
};

struct StepRecord {
  int t = 0;
  std::string directive;
  bool controlled = false;
  std::vector<ObjectEnergy> per_object;  // post-control; empty when uncontrolled
};

struct RunResult {
  Latent final_latent;
  // Attention energies measured on the raw composite latent at t = T, before
  // any control was applied.
  std::vector<ObjectEnergy> initial_energies;
  std::vector<StepRecord> steps;  // t = T down to 1
};

struct RunOptions {
  // Generate each object inside a grid-centered copy of its box, then shift
  // the refined mask/latents back to the real region.
  bool center_objects = true;
  schedule::Parity parity = schedule::Parity::frequent_first;
};

// Full two-stage control flow: per-object generation (scheduled prompts,
// cross-attention control, mask extraction and refinement), then the
// composite loop (scheduled prompt, control while t > T - T_CA, denoise,
// latent fusion while t > T - T_LF).
RunResult run_r2f_plus(const mapping::RegionAwarePlan& plan, int T,
                       const ControlConfig& cfg, const Denoiser& denoiser,
                       const AttentionProducer& producer,
                       const MaskProvider& mask_provider, std::uint64_t seed,
                       const Grid& grid, int channels,
                       const RunOptions& options = {});

// One JSON record per step: {"t", "directive", "per_object":[{key, energy}]}
// with per_object present only on controlled steps.
std::string diagnostics_jsonl(const RunResult& result);

}  // namespace r2f::region
