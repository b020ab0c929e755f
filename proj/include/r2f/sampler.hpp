#pragma once

#include <cstdint>
#include <functional>

#include "r2f/gaussian.hpp"

namespace r2f::gaussian {

// Evaluable score field. Plain fields ignore the step index; switched fields
// route each step to one of their members.
class ScoreField {
 public:
  static ScoreField gaussian(Gaussian g);
  static ScoreField lerp(double alpha, Gaussian rare, Gaussian freq);
  static ScoreField switched(std::function<std::size_t(std::size_t)> selector,
                             std::vector<ScoreField> fields);
  static ScoreField zero(Eigen::Index dim);

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const {
    return eval_(0, x);
  }
  Eigen::VectorXd at_step(std::size_t step, const Eigen::VectorXd& x) const {
    return eval_(step, x);
  }
  Eigen::Index dim() const { return dim_; }

 private:
  using Eval = std::function<Eigen::VectorXd(std::size_t, const Eigen::VectorXd&)>;
  ScoreField(Eigen::Index dim, Eval eval) : dim_(dim), eval_(std::move(eval)) {}

  Eigen::Index dim_ = 0;
  Eval eval_;
};

struct SamplerConfig {
  double step_size = 0.05;
  int n_steps = 1000;
  int n_particles = 1000;
  int burn_in = 0;  // must stay below n_steps
  std::uint64_t seed = 42;
};

// Unadjusted Langevin dynamics: x <- x + (h/2) s(x) + sqrt(h) xi, all
// particles started at the origin; returns each particle's final state as a
// row. Bit-reproducible for a fixed seed.
Eigen::MatrixXd langevin_sample(const ScoreField& field,
                                const SamplerConfig& cfg);

// Langevin dynamics alternating between the frequent field (even steps) and
// the rare field (odd steps) while the step index is below stop_step, and
// rare-only afterward. stop_step = 0 reduces exactly to
// langevin_sample(rare).
Eigen::MatrixXd alternating_sample(const ScoreField& rare,
                                   const ScoreField& freq, int stop_step,
                                   const SamplerConfig& cfg);

// Maximum-likelihood fit (covariance normalized by n).
Gaussian fit_gaussian(const Eigen::MatrixXd& samples);

}  // namespace r2f::gaussian
