#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "r2f/sampler.hpp"

namespace r2f::gaussian {

struct SweepResult {
  std::vector<double> alphas;
  std::vector<double> w2_closed;
  std::optional<std::vector<double>> w2_empirical;
  double rare_only_w2 = 0.0;
};

std::vector<double> uniform_grid(int points);  // points >= 2, spans [0,1]

// Closed-form W2(lerp(alpha), target) over the grid, with an optional
// empirical overlay (Langevin sampling of the interpolated score, Gaussian
// fit, W2 to target).
SweepResult alpha_sweep(const Gaussian& rare, const Gaussian& freq,
                        const Gaussian& target,
                        const std::vector<double>& alphas,
                        const std::optional<SamplerConfig>& cfg = std::nullopt);

// CSV with header alpha,w2_closed,w2_empirical; 17 significant digits so
// values round-trip exactly. The empirical column is left empty when absent.
std::string to_csv(const SweepResult& result);

// Sidecar document carrying the sweep's full parameter set.
nlohmann::json sweep_sidecar(const Gaussian& rare, const Gaussian& freq,
                             const Gaussian& target, int alpha_points,
                             const std::optional<SamplerConfig>& cfg);

}  // namespace r2f::gaussian
