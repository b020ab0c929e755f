#pragma once

#include <Eigen/Dense>

namespace r2f::gaussian {

// Multivariate normal with cached precision and a diagonal fast path.
class Gaussian {
 public:
  Gaussian(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

  static Gaussian diagonal(Eigen::VectorXd mean, Eigen::VectorXd variances);
  static Gaussian standard(Eigen::Index dim);

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  const Eigen::MatrixXd& precision() const { return precision_; }
  bool is_diagonal() const { return diagonal_; }
  Eigen::Index dim() const { return mean_.size(); }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd precision_;
  bool diagonal_ = false;
};

// Score of the Gaussian density at x: -precision * (x - mean).
Eigen::VectorXd gaussian_score(const Gaussian& g, const Eigen::VectorXd& x);

// Convex combination of the two scores, alpha weighting the rare side.
Eigen::VectorXd lerp_score(double alpha, const Gaussian& rare,
                           const Gaussian& freq, const Eigen::VectorXd& x);

// The Gaussian whose score equals lerp_score(alpha, rare, freq, .):
// precision-weighted combination of the two inputs.
Gaussian lerp_distribution(double alpha, const Gaussian& rare,
                           const Gaussian& freq);

// 2-Wasserstein distance between Gaussians (closed form). Diagonal pairs use
// the per-axis formula; the general path goes through matrix square roots.
double w2_gaussian(const Gaussian& a, const Gaussian& b);

// Symmetric PSD square root via eigendecomposition (eigenvalue floor 1e-12).
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& m);

// Whether interpolated guidance is guaranteed to beat the rare-only estimate:
// sigma >= 1 + sqrt(|mu_freq - mu_rare|^2 + 0.2), boundary inclusive, where
// sigma is the rare estimate's first-coordinate standard deviation.
bool lerp_improvement_condition(double sigma, const Eigen::VectorXd& mu_rare,
                                const Eigen::VectorXd& mu_freq);

}  // namespace r2f::gaussian
