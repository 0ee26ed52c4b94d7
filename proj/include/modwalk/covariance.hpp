#pragma once

// The limit covariance
//   C(f,g) = E f(U)g(U) + sum_{k>=1} [E f(U)g(U+S_k) + E g(U)f(U+S_k)]
// by direct summation over exact laws (series) and through the
// characteristic values phi_h (spectral), plus the kernel
// Gamma(s,t) = C(f_[0,s), f_[0,t)) on a grid.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "modwalk/bv_function.hpp"
#include "modwalk/exact_law.hpp"
#include "modwalk/parallel.hpp"
#include "modwalk/step_model.hpp"

namespace modwalk {

enum class CovMethod { series, spectral };
enum class SeriesEngine { exact, mc };

struct CovarianceResult {
  double value = 0.0;
  CovMethod method = CovMethod::spectral;
  /// Bound (spectral: estimate) on the omitted tail; +inf when no finite
  /// bound is available.
  double truncation_bound = 0.0;
  /// Series: lags summed. Spectral: frequency cutoff H.
  std::int64_t terms_used = 0;
  /// Standard error of the Monte Carlo engine; 0 otherwise.
  double stat_error = 0.0;
  /// Frequencies with 1 - |phi_h| < 1e-12 met while summing.
  std::vector<std::int64_t> ill_conditioned;
};

struct SeriesOptions {
  double mass_tol = kDefaultMassTol;
  std::int64_t mc_paths = 20000;
  std::uint64_t seed = 0;
};

/// Truncated series through lag K. The exact engine needs a lattice or the
/// continuous step; its truncation bound uses a power-law fit of psi(k) at
/// the powers of two <= K and is infinite unless the fitted slope is < -1.
CovarianceResult c_series(const StepDistribution& dist,
                          const PeriodicBVFunction& f,
                          const PeriodicBVFunction& g, std::int64_t K,
                          SeriesEngine engine = SeriesEngine::exact,
                          const SeriesOptions& opts = {});

inline constexpr std::int64_t kSpectralMaxH = std::int64_t{1} << 16;

/// E f(U)g(U) exactly plus the lagged part
///   4 sum_{h>=1} Re(conj(fhat_h) ghat_h) Re(phi_h / (1 - phi_h)),
/// doubling H from 64 until the tail estimate drops below tol or H reaches
/// max_H. For f = g this is the series sum_h |fhat_h|^2 (1-|phi_h|^2)/|1-phi_h|^2.
CovarianceResult c_spectral(const StepDistribution& dist,
                            const PeriodicBVFunction& f,
                            const PeriodicBVFunction& g, double tol = 1e-6,
                            std::int64_t max_H = kSpectralMaxH,
                            Exec exec = Exec::parallel);

/// sqrt(max(C(f,f), 0)) by the spectral method.
double sigma(const StepDistribution& dist, const PeriodicBVFunction& f,
             double tol = 1e-6);

class CovarianceGrid {
 public:
  /// Grid must start at 0, end at 1, and increase strictly; `matrix` must
  /// be square of the grid's size. Symmetrizes, zeroes the rows of t = 0
  /// and t = 1, clips negative eigenvalues and factorizes.
  CovarianceGrid(std::vector<double> grid, Eigen::MatrixXd matrix);

  std::span<const double> grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  /// Lower triangular, factor * factor^T ~= matrix.
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }
  bool factorized() const noexcept { return factor_.size() > 0; }
  double jitter_used() const noexcept { return jitter_; }
  /// Smallest eigenvalue before clipping (interior block).
  double min_eigenvalue() const noexcept { return min_eig_; }
  double reconstruction_error() const noexcept { return recon_err_; }

  double truncation_bound = 0.0;
  std::int64_t H = 0;
  std::vector<std::int64_t> ill_conditioned;

 private:
  std::vector<double> grid_;
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd factor_;
  double jitter_ = 0.0;
  double min_eig_ = 0.0;
  double recon_err_ = 0.0;
};

/// 0, 1/(n-1), ..., 1.
std::vector<double> equispaced_grid(std::size_t n);

/// min(s,t) - st on the grid.
CovarianceGrid brownian_bridge_grid(std::vector<double> grid);

/// Gamma(s,t) on the grid, from the spectral method with one common
/// cutoff H chosen for tolerance tol (V = 2 for every indicator).
CovarianceGrid gamma_grid(const StepDistribution& dist,
                          std::vector<double> grid, double tol = 1e-6,
                          std::int64_t max_H = kSpectralMaxH,
                          Exec exec = Exec::parallel);

}  // namespace modwalk
