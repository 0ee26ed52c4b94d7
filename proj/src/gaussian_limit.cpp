#include "modwalk/gaussian_limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modwalk/error.hpp"
#include "modwalk/rng.hpp"

namespace modwalk {

GaussianPathBatch sample_paths(const CovarianceGrid& cov, std::int64_t M,
                               std::uint64_t seed, Exec exec) {
  if (!cov.factorized()) {
    throw InvalidState("sample_paths: covariance is not factorized");
  }
  if (M < 1) throw InvalidInput("sample_paths: M must be >= 1");
  GaussianPathBatch batch;
  batch.grid.assign(cov.grid().begin(), cov.grid().end());
  batch.seed = seed;
  batch.paths.resize(static_cast<std::size_t>(M));
  const Eigen::MatrixXd& L = cov.factor();
  const auto n = L.rows();
  auto one = [&](std::int64_t m) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(m),
                        stream::kGaussianPath));
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
    const Eigen::VectorXd y = L.triangularView<Eigen::Lower>() * z;
    batch.paths[static_cast<std::size_t>(m)].assign(y.data(), y.data() + n);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t m = 0; m < M; ++m) one(m);
  } else {
    for (std::int64_t m = 0; m < M; ++m) one(m);
  }
  return batch;
}

double functional_sup_increment(std::span<const double> path) {
  if (path.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(path.begin(), path.end());
  return *hi - *lo;
}

double functional_lp(std::span<const double> path, double p,
                     std::span<const double> grid) {
  const std::size_t n = path.size();
  if (n == 0) return 0.0;
  if (std::isinf(p) && p > 0) {
    double m = 0.0;
    for (double y : path) m = std::max(m, std::abs(y));
    return m;
  }
  if (!(p >= 1.0)) throw InvalidInput("functional_lp needs p >= 1");
  if (!grid.empty() && grid.size() != n) {
    throw InvalidInput("functional_lp: grid and path differ in length");
  }
  if (n == 1) return 0.0;
  auto t = [&](std::size_t i) {
    return grid.empty() ? static_cast<double>(i) / static_cast<double>(n - 1)
                        : grid[i];
  };
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = t(i + 1) - t(i);
    const double a = path[i], b = path[i + 1];
    if (p == 1.0) {
      // integral of |linear| over the cell, splitting at a sign change.
      if ((a >= 0.0) == (b >= 0.0)) {
        acc += h * std::abs(a + b) / 2.0;
      } else {
        acc += h * (a * a + b * b) / (2.0 * (std::abs(a) + std::abs(b)));
      }
    } else if (p == 2.0) {
      acc += h * (a * a + a * b + b * b) / 3.0;
    } else {
      acc += h * (std::pow(std::abs(a), p) + std::pow(std::abs(b), p)) / 2.0;
    }
  }
  return std::pow(acc, 1.0 / p);
}

LinearSup rkhs_linear_sup(const CovarianceGrid& cov,
                          std::span<const double> c) {
  const auto n = static_cast<Eigen::Index>(cov.size());
  if (static_cast<Eigen::Index>(c.size()) != n) {
    throw InvalidInput("rkhs_linear_sup: vector does not match the grid");
  }
  const Eigen::Map<const Eigen::VectorXd> cv(c.data(), n);
  const Eigen::VectorXd g = cov.matrix() * cv;
  const double q = cv.dot(g);
  const double scale = cov.matrix().cwiseAbs().maxCoeff() * cv.squaredNorm();
  if (q < -1e-12 * std::max(scale, 1e-300)) {
    throw NumericalFailure("rkhs_linear_sup: c^T Gamma c = " +
                           std::to_string(q) + " < 0");
  }
  LinearSup out;
  if (q <= 0.0) return out;
  out.value = std::sqrt(q);
  out.argmax.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    out.argmax[static_cast<std::size_t>(i)] = g(i) / out.value;
  }
  return out;
}

LilConstants lil_constants(const CovarianceGrid& cov) {
  const Eigen::MatrixXd& G = cov.matrix();
  const auto n = G.rows();
  LilConstants out;
  double ext2 = 0.0, star2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    star2 = std::max(star2, G(i, i));
    for (Eigen::Index j = i + 1; j < n; ++j) {
      ext2 = std::max(ext2, G(i, i) - 2.0 * G(i, j) + G(j, j));
    }
  }
  out.extreme = std::sqrt(std::max(ext2, 0.0));
  out.star = std::sqrt(std::max(star2, 0.0));

  // Operator norm of the kernel with trapezoid weights W: the top
  // eigenvalue of W^{1/2} Gamma W^{1/2}.
  const auto grid = cov.grid();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double h = grid[static_cast<std::size_t>(i + 1)] -
                     grid[static_cast<std::size_t>(i)];
    w(i) += h / 2.0;
    w(i + 1) += h / 2.0;
  }
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXd K = sw.asDiagonal() * G * sw.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("lil_constants: eigenvalue computation failed");
  }
  out.l2 = std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
  return out;
}

EllipsoidLimitSet::EllipsoidLimitSet(Eigen::MatrixXd sigma)
    : sigma_(std::move(sigma)) {
  if (sigma_.rows() != sigma_.cols()) {
    throw InvalidInput("ellipsoid needs a square matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (sigma_ + sigma_.transpose()));
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("ellipsoid: eigen-decomposition failed");
  }
  const double top =
      sigma_.size() ? std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 0.0)
                    : 0.0;
  range_tol_ = 1e-10 * std::max(top, 1e-300);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > range_tol_) keep.push_back(i);
  }
  basis_.resize(sigma_.rows(), static_cast<Eigen::Index>(keep.size()));
  inv_eigs_.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    basis_.col(col) = es.eigenvectors().col(keep[k]);
    inv_eigs_(col) = 1.0 / es.eigenvalues()(keep[k]);
  }
}

double EllipsoidLimitSet::gauge(const Eigen::VectorXd& y) const {
  if (y.size() != sigma_.rows()) {
    throw InvalidInput("ellipsoid: vector has the wrong dimension");
  }
  const Eigen::VectorXd coef = basis_.transpose() * y;
  const Eigen::VectorXd residual = y - basis_ * coef;
  if (residual.norm() > 1e-9 * std::max(1.0, y.norm())) {
    return std::numeric_limits<double>::infinity();
  }
  return coef.cwiseProduct(coef).dot(inv_eigs_);
}

bool EllipsoidLimitSet::contains(const Eigen::VectorXd& y, double tol) const {
  return gauge(y) <= 1.0 + tol;
}

}  // namespace modwalk
