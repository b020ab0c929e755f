#include "r2f/sampler.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "r2f/errors.hpp"
#include "r2f/rng.hpp"

namespace r2f::gaussian {

ScoreField ScoreField::gaussian(Gaussian g) {
  const auto dim = g.dim();
  return ScoreField(dim, [g = std::move(g)](std::size_t, const Eigen::VectorXd& x) {
    return gaussian_score(g, x);
  });
}

ScoreField ScoreField::lerp(double alpha, Gaussian rare, Gaussian freq) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    fail(ErrorKind::range, "alpha " + std::to_string(alpha) + " outside [0,1]");
  }
  const auto dim = rare.dim();
  return ScoreField(dim, [alpha, rare = std::move(rare), freq = std::move(freq)](
                             std::size_t, const Eigen::VectorXd& x) {
    return lerp_score(alpha, rare, freq, x);
  });
}

ScoreField ScoreField::switched(std::function<std::size_t(std::size_t)> selector,
                                std::vector<ScoreField> fields) {
  if (fields.empty()) {
    fail(ErrorKind::argument, "switched field needs at least one member");
  }
  const auto dim = fields.front().dim();
  for (const auto& f : fields) {
    if (f.dim() != dim) {
      fail(ErrorKind::shape, "switched field members have mixed dimensions");
    }
  }
  return ScoreField(
      dim, [selector = std::move(selector), fields = std::move(fields)](
               std::size_t step, const Eigen::VectorXd& x) {
        const std::size_t index = selector(step);
        if (index >= fields.size()) {
          fail(ErrorKind::range, "field selector returned index " +
                                     std::to_string(index) + " for " +
                                     std::to_string(fields.size()) + " fields");
        }
        return fields[index].at_step(step, x);
      });
}

ScoreField ScoreField::zero(Eigen::Index dim) {
  return ScoreField(dim, [dim](std::size_t, const Eigen::VectorXd&) {
    return Eigen::VectorXd::Zero(dim).eval();
  });
}

namespace {

void check_config(const SamplerConfig& cfg) {
  if (!(cfg.step_size > 0.0)) {
    fail(ErrorKind::argument, "step size must be positive");
  }
  if (cfg.n_steps < 1 || cfg.n_particles < 1) {
    fail(ErrorKind::argument, "need at least one step and one particle");
  }
  if (cfg.burn_in < 0 || cfg.burn_in >= cfg.n_steps) {
    fail(ErrorKind::argument, "burn-in must lie in [0, n_steps)");
  }
}

Eigen::MatrixXd run_chains(const ScoreField& field, const SamplerConfig& cfg) {
  check_config(cfg);
  const Eigen::Index d = field.dim();
  const double h = cfg.step_size;
  const double noise_scale = std::sqrt(h);
  Eigen::MatrixXd states = Eigen::MatrixXd::Zero(cfg.n_particles, d);

  Eigen::VectorXd x(d);
  for (int p = 0; p < cfg.n_particles; ++p) {
    x.setZero();
    for (int k = 0; k < cfg.n_steps; ++k) {
      x += (h / 2.0) * field.at_step(static_cast<std::size_t>(k), x);
      for (Eigen::Index i = 0; i < d; i += 2) {
        const auto [g0, g1] = rng::gaussian_pair(
            cfg.seed, 0, static_cast<std::uint32_t>(p),
            static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(i / 2));
        x(i) += noise_scale * g0;
        if (i + 1 < d) x(i + 1) += noise_scale * g1;
      }
      if (!x.allFinite()) {
        fail(ErrorKind::divergence,
             "chain " + std::to_string(p) + " diverged at step " +
                 std::to_string(k));
      }
    }
    states.row(p) = x;
  }
  return states;
}

}  // namespace

Eigen::MatrixXd langevin_sample(const ScoreField& field,
                                const SamplerConfig& cfg) {
  return run_chains(field, cfg);
}

Eigen::MatrixXd alternating_sample(const ScoreField& rare,
                                   const ScoreField& freq, int stop_step,
                                   const SamplerConfig& cfg) {
  if (stop_step < 0 || stop_step > cfg.n_steps) {
    fail(ErrorKind::argument, "stop step must lie in [0, n_steps]");
  }
  if (rare.dim() != freq.dim()) {
    fail(ErrorKind::shape, "rare and frequent fields have mixed dimensions");
  }
  const auto selector = [stop_step](std::size_t step) -> std::size_t {
    const bool frequent =
        step < static_cast<std::size_t>(stop_step) && step % 2 == 0;
    return frequent ? 1 : 0;
  };
  return run_chains(ScoreField::switched(selector, {rare, freq}), cfg);
}

Gaussian fit_gaussian(const Eigen::MatrixXd& samples) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index d = samples.cols();
  if (n <= d) {
    fail(ErrorKind::precondition,
         "need more samples than dimensions to fit a Gaussian");
  }
  const Eigen::VectorXd mean = samples.colwise().mean();
  const Eigen::MatrixXd centered = samples.rowwise() - mean.transpose();
  Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n);
  cov = ((cov + cov.transpose()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    fail(ErrorKind::numeric, "sample covariance is degenerate");
  }
  return Gaussian(mean, cov);
}

}  // namespace r2f::gaussian
