#pragma once

// The Gaussian limit process K(t) on a grid: sampling, path functionals,
// and the RKHS constants of the functional law of the iterated logarithm.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "modwalk/covariance.hpp"
#include "modwalk/parallel.hpp"

namespace modwalk {

struct GaussianPathBatch {
  std::vector<double> grid;
  /// paths[m][i] = K_m(grid[i]).
  std::vector<std::vector<double>> paths;
  std::uint64_t seed = 0;
};

/// Path m is factor * z with z drawn from derive_seed(seed, m, kGaussianPath).
/// Throws InvalidState when the covariance is not factorized.
GaussianPathBatch sample_paths(const CovarianceGrid& cov, std::int64_t M,
                               std::uint64_t seed, Exec exec = Exec::parallel);

/// max - min of the path, i.e. the sup of |y(t) - y(s)| over grid pairs.
double functional_sup_increment(std::span<const double> path);

/// L^p norm over [0,1] of the path. p = 1, 2 integrate the piecewise-linear
/// interpolant exactly, p = infinity is max |y|, other p >= 1 use the
/// trapezoid rule on |y|^p. An empty grid means equispaced on [0,1].
double functional_lp(std::span<const double> path, double p,
                     std::span<const double> grid = {});

struct LinearSup {
  double value = 0.0;          ///< sqrt(c^T Gamma c)
  std::vector<double> argmax;  ///< Gamma c / value; empty when value = 0
};

/// sup of <c, y> over the ellipsoid {Gamma x : <x, Gamma x> <= 1}.
/// Throws NumericalFailure if c^T Gamma c < -1e-12 (scaled).
LinearSup rkhs_linear_sup(const CovarianceGrid& cov, std::span<const double> c);

struct LilConstants {
  double extreme = 0.0;  ///< max_{s<t} sqrt(Gamma(s,s) - 2 Gamma(s,t) + Gamma(t,t))
  double star = 0.0;     ///< max_t sqrt(Gamma(t,t))
  double l2 = 0.0;       ///< sqrt(top eigenvalue of the kernel as an operator)
};

LilConstants lil_constants(const CovarianceGrid& cov);

/// The finite-grid section {Sigma x : <x, Sigma x> <= 1} of the RKHS ball.
class EllipsoidLimitSet {
 public:
  explicit EllipsoidLimitSet(Eigen::MatrixXd sigma);

  const Eigen::MatrixXd& sigma() const noexcept { return sigma_; }
  /// y^T Sigma^+ y when y lies in the range of Sigma, +inf otherwise.
  double gauge(const Eigen::VectorXd& y) const;
  bool contains(const Eigen::VectorXd& y, double tol = 1e-10) const;

 private:
  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd basis_;      // eigenvectors with positive eigenvalues
  Eigen::VectorXd inv_eigs_;   // their reciprocals
  double range_tol_ = 0.0;
};

}  // namespace modwalk
