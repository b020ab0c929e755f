#include "r2f/sweep.hpp"

#include <cmath>

#include "r2f/errors.hpp"
#include "r2f/text.hpp"

namespace r2f::gaussian {

std::vector<double> uniform_grid(int points) {
  if (points < 2) {
    fail(ErrorKind::argument, "grid needs at least two points");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) {
    grid[static_cast<std::size_t>(j)] =
        static_cast<double>(j) / static_cast<double>(points - 1);
  }
  grid.back() = 1.0;
  return grid;
}

SweepResult alpha_sweep(const Gaussian& rare, const Gaussian& freq,
                        const Gaussian& target,
                        const std::vector<double>& alphas,
                        const std::optional<SamplerConfig>& cfg) {
  SweepResult result;
  result.alphas = alphas;
  result.w2_closed.reserve(alphas.size());
  if (cfg) result.w2_empirical.emplace();
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    const double alpha = alphas[j];
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      fail(ErrorKind::range, "alpha grid point " + std::to_string(j) +
                                 " lies outside [0,1]");
    }
    try {
      const Gaussian mixed = lerp_distribution(alpha, rare, freq);
      result.w2_closed.push_back(w2_gaussian(mixed, target));
      if (cfg) {
        const auto samples =
            langevin_sample(ScoreField::lerp(alpha, rare, freq), *cfg);
        result.w2_empirical->push_back(
            w2_gaussian(fit_gaussian(samples), target));
      }
    } catch (const Error& e) {
      fail(e.kind(), "at alpha index " + std::to_string(j) + " (alpha=" +
                         text::format_double(alpha) + "): " + e.message());
    }
  }
  result.rare_only_w2 = w2_gaussian(rare, target);
  return result;
}

std::string to_csv(const SweepResult& result) {
  std::string out = "alpha,w2_closed,w2_empirical\n";
  for (std::size_t j = 0; j < result.alphas.size(); ++j) {
    out += text::format_double(result.alphas[j]);
    out += ',';
    out += text::format_double(result.w2_closed[j]);
    out += ',';
    if (result.w2_empirical) {
      out += text::format_double((*result.w2_empirical)[j]);
    }
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::json gaussian_to_json(const Gaussian& g) {
  nlohmann::json doc;
  doc["mean"] = std::vector<double>(g.mean().data(),
                                    g.mean().data() + g.mean().size());
  auto& cov = doc["covariance"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < g.dim(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(g.dim()));
    for (Eigen::Index k = 0; k < g.dim(); ++k) {
      row[static_cast<std::size_t>(k)] = g.covariance()(i, k);
    }
    cov.push_back(row);
  }
  return doc;
}

}  // namespace

nlohmann::json sweep_sidecar(const Gaussian& rare, const Gaussian& freq,
                             const Gaussian& target, int alpha_points,
                             const std::optional<SamplerConfig>& cfg) {
  nlohmann::json doc;
  doc["rare"] = gaussian_to_json(rare);
  doc["freq"] = gaussian_to_json(freq);
  doc["target"] = gaussian_to_json(target);
  doc["sigma"] = std::sqrt(rare.covariance()(0, 0));
  doc["alpha_points"] = alpha_points;
  if (cfg) {
    doc["empirical"] = {{"step_size", cfg->step_size},
                        {"n_steps", cfg->n_steps},
                        {"n_particles", cfg->n_particles},
                        {"burn_in", cfg->burn_in},
                        {"seed", cfg->seed}};
  }
  return doc;
}

}  // namespace r2f::gaussian
