#include "r2f/gaussian.hpp"

#include <cmath>
#include <string>

#include "r2f/errors.hpp"

namespace r2f::gaussian {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kEigenFloor = 1e-12;

bool off_diagonal_zero(const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j && m(i, j) != 0.0) return false;
    }
  }
  return true;
}

}  // namespace

Gaussian::Gaussian(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  if (covariance_.rows() != covariance_.cols() ||
      covariance_.rows() != mean_.size()) {
    fail(ErrorKind::shape, "covariance must be square and match the mean");
  }
  const double asym = (covariance_ - covariance_.transpose())
                          .cwiseAbs()
                          .maxCoeff();
  if (asym > kSymmetryTol) {
    fail(ErrorKind::numeric, "covariance asymmetric by " + std::to_string(asym));
  }
  covariance_ = ((covariance_ + covariance_.transpose()) / 2.0).eval();
  diagonal_ = off_diagonal_zero(covariance_);
  if (diagonal_) {
    for (Eigen::Index i = 0; i < covariance_.rows(); ++i) {
      if (!(covariance_(i, i) > 0.0)) {
        fail(ErrorKind::numeric, "covariance is not positive definite");
      }
    }
    precision_ = Eigen::MatrixXd::Zero(covariance_.rows(), covariance_.cols());
    for (Eigen::Index i = 0; i < covariance_.rows(); ++i) {
      precision_(i, i) = 1.0 / covariance_(i, i);
    }
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance_);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    fail(ErrorKind::numeric, "covariance is not positive definite");
  }
  precision_ = eig.eigenvectors() *
               eig.eigenvalues().cwiseInverse().asDiagonal() *
               eig.eigenvectors().transpose();
}

Gaussian Gaussian::diagonal(Eigen::VectorXd mean, Eigen::VectorXd variances) {
  if (mean.size() != variances.size()) {
    fail(ErrorKind::shape, "mean and variance dimensions differ");
  }
  Eigen::MatrixXd cov = variances.asDiagonal();
  return Gaussian(std::move(mean), std::move(cov));
}

Gaussian Gaussian::standard(Eigen::Index dim) {
  return Gaussian(Eigen::VectorXd::Zero(dim),
                  Eigen::MatrixXd::Identity(dim, dim));
}

Eigen::VectorXd gaussian_score(const Gaussian& g, const Eigen::VectorXd& x) {
  if (x.size() != g.dim()) {
    fail(ErrorKind::shape, "probe point dimension mismatch");
  }
  if (!x.allFinite()) {
    fail(ErrorKind::argument, "probe point must be finite");
  }
  return -(g.precision() * (x - g.mean()));
}

Eigen::VectorXd lerp_score(double alpha, const Gaussian& rare,
                           const Gaussian& freq, const Eigen::VectorXd& x) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    fail(ErrorKind::range, "alpha " + std::to_string(alpha) + " outside [0,1]");
  }
  return alpha * gaussian_score(rare, x) + (1.0 - alpha) * gaussian_score(freq, x);
}

Gaussian lerp_distribution(double alpha, const Gaussian& rare,
                           const Gaussian& freq) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    fail(ErrorKind::range, "alpha " + std::to_string(alpha) + " outside [0,1]");
  }
  if (rare.dim() != freq.dim()) {
    fail(ErrorKind::shape, "distribution dimensions differ");
  }
  if (alpha == 0.0) return freq;
  if (alpha == 1.0) return rare;
  if (rare.is_diagonal() && freq.is_diagonal()) {
    Eigen::VectorXd variances(rare.dim());
    Eigen::VectorXd mean(rare.dim());
    for (Eigen::Index i = 0; i < rare.dim(); ++i) {
      const double precision = alpha * rare.precision()(i, i) +
                               (1.0 - alpha) * freq.precision()(i, i);
      variances(i) = 1.0 / precision;
      mean(i) = variances(i) *
                (alpha * rare.precision()(i, i) * rare.mean()(i) +
                 (1.0 - alpha) * freq.precision()(i, i) * freq.mean()(i));
    }
    return Gaussian::diagonal(std::move(mean), std::move(variances));
  }
  const Eigen::MatrixXd precision =
      alpha * rare.precision() + (1.0 - alpha) * freq.precision();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(precision);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    fail(ErrorKind::numeric, "interpolated precision is not positive definite");
  }
  const Eigen::MatrixXd covariance = eig.eigenvectors() *
                                     eig.eigenvalues().cwiseInverse().asDiagonal() *
                                     eig.eigenvectors().transpose();
  const Eigen::VectorXd mean =
      covariance * (alpha * rare.precision() * rare.mean() +
                    (1.0 - alpha) * freq.precision() * freq.mean());
  return Gaussian(mean, ((covariance + covariance.transpose()) / 2.0).eval());
}

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  if (eig.info() != Eigen::Success) {
    fail(ErrorKind::numeric, "eigendecomposition failed in matrix square root");
  }
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (eig.eigenvalues().minCoeff() < -1e-9 * scale) {
    fail(ErrorKind::numeric,
         "matrix square root of a non-positive-semidefinite matrix");
  }
  Eigen::VectorXd roots = eig.eigenvalues();
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    roots(i) = std::sqrt(std::max(roots(i), kEigenFloor));
  }
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

double w2_gaussian(const Gaussian& a, const Gaussian& b) {
  if (a.dim() != b.dim()) {
    fail(ErrorKind::shape, "distribution dimensions differ");
  }
  const double mean_sq = (a.mean() - b.mean()).squaredNorm();
  double trace_term = 0.0;
  if (a.is_diagonal() && b.is_diagonal()) {
    for (Eigen::Index i = 0; i < a.dim(); ++i) {
      const double d = std::sqrt(a.covariance()(i, i)) -
                       std::sqrt(b.covariance()(i, i));
      trace_term += d * d;
    }
  } else {
    const Eigen::MatrixXd root_a = spd_sqrt(a.covariance());
    const Eigen::MatrixXd cross =
        spd_sqrt(root_a * b.covariance() * root_a);
    trace_term =
        (a.covariance() + b.covariance() - 2.0 * cross).trace();
    trace_term = std::max(trace_term, 0.0);
  }
  return std::sqrt(mean_sq + trace_term);
}

bool lerp_improvement_condition(double sigma, const Eigen::VectorXd& mu_rare,
                                const Eigen::VectorXd& mu_freq) {
  if (!(sigma > 0.0)) {
    fail(ErrorKind::precondition, "sigma must be positive");
  }
  if (mu_rare.size() != mu_freq.size()) {
    fail(ErrorKind::shape, "mean dimensions differ");
  }
  const double gap_sq = (mu_freq - mu_rare).squaredNorm();
  return sigma >= 1.0 + std::sqrt(gap_sq + 0.2);
}

}  // namespace r2f::gaussian
