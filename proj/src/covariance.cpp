#include "modwalk/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "modwalk/error.hpp"
#include "modwalk/rng.hpp"
#include "modwalk/walk_sim.hpp"

namespace modwalk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kIllEps = 1e-12;

// Re(phi / (1 - phi)) from w = 1 - phi: (Re w - |w|^2) / |w|^2.
double lag_factor(const CharacteristicValue& c) {
  const std::complex<double> w = c.one_minus_phi;
  const double n2 = std::norm(w);
  if (n2 == 0.0) return std::numeric_limits<double>::infinity();
  return (w.real() - n2) / n2;
}

struct SpectralPlan {
  std::int64_t H = 0;
  double tail = 0.0;
  std::vector<double> R;  // R[h-1] = Re(phi_h / (1 - phi_h))
  std::vector<std::int64_t> ill;
};

// Extends R through h = hi and returns (max |phi|, min eps) over (lo, hi].
std::pair<double, double> extend_plan(SpectralPlan& plan,
                                      const StepDistribution& dist,
                                      std::int64_t lo, std::int64_t hi,
                                      Exec exec) {
  std::vector<CharacteristicValue> chunk(static_cast<std::size_t>(hi - lo));
  auto one = [&](std::int64_t h) {
    chunk[static_cast<std::size_t>(h - lo - 1)] = char_coeff(dist, h);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t h = lo + 1; h <= hi; ++h) one(h);
  } else {
    for (std::int64_t h = lo + 1; h <= hi; ++h) one(h);
  }
  double phi_max = 0.0, eps_min = 1.0;
  for (const auto& c : chunk) {
    plan.R.push_back(lag_factor(c));
    phi_max = std::max(phi_max, std::abs(c.phi));
    eps_min = std::min(eps_min, c.eps);
    if (c.eps < kIllEps) plan.ill.push_back(c.h);
  }
  return {phi_max, eps_min};
}

// Doubles H from 64 until the lag tail estimate
//   4 sum_{h>H} |fhat_h||ghat_h| |phi_h|/(1-|phi_h|)
//     <= VV / (pi^2 H) * max|phi| / min eps   (over the octave (H, 2H])
// is below tol, or H reaches max_H.
SpectralPlan plan_spectral(const StepDistribution& dist, double VV, double tol,
                           std::int64_t max_H, Exec exec) {
  SpectralPlan plan;
  std::int64_t H = std::min<std::int64_t>(64, max_H);
  extend_plan(plan, dist, 0, H, exec);
  while (true) {
    const auto [phi_max, eps_min] = extend_plan(plan, dist, H, 2 * H, exec);
    plan.tail = (VV == 0.0 || phi_max == 0.0)
                    ? 0.0
                    : VV / (kPi * kPi * static_cast<double>(H)) * phi_max /
                          eps_min;
    if (plan.tail < tol || H >= max_H) break;
    H *= 2;
  }
  plan.H = H;
  plan.R.resize(static_cast<std::size_t>(H));
  std::erase_if(plan.ill, [H](std::int64_t h) { return h > H; });
  return plan;
}

}  // namespace

CovarianceResult c_spectral(const StepDistribution& dist,
                            const PeriodicBVFunction& f,
                            const PeriodicBVFunction& g, double tol,
                            std::int64_t max_H, Exec exec) {
  if (!(tol > 0.0)) throw InvalidInput("c_spectral: tol must be > 0");
  if (max_H < 1) throw InvalidInput("c_spectral: max_H must be >= 1");
  CovarianceResult out;
  out.method = CovMethod::spectral;
  if (f.is_zero() || g.is_zero()) return out;

  const double stationary = inner_product(f, g);
  SpectralPlan plan;
  if (!f.is_piecewise() || !g.is_piecewise()) {
    // A trig polynomial cuts the sum off exactly at its degree.
    const std::int64_t deg = !f.is_piecewise() && !g.is_piecewise()
                                 ? std::min(f.degree(), g.degree())
                                 : (!f.is_piecewise() ? f.degree() : g.degree());
    extend_plan(plan, dist, 0, deg, exec);
    plan.H = deg;
  } else {
    plan = plan_spectral(dist, f.total_variation() * g.total_variation(), tol,
                         max_H, exec);
  }
  double lag = 0.0;
  for (std::int64_t h = 1; h <= plan.H; ++h) {
    const double w = (std::conj(f.fourier_coeff(h)) * g.fourier_coeff(h)).real();
    if (w == 0.0) continue;
    lag += 4.0 * w * plan.R[static_cast<std::size_t>(h - 1)];
  }
  out.value = stationary + lag;
  out.truncation_bound = plan.tail;
  out.terms_used = plan.H;
  out.ill_conditioned = std::move(plan.ill);
  return out;
}

double sigma(const StepDistribution& dist, const PeriodicBVFunction& f,
             double tol) {
  return std::sqrt(std::max(c_spectral(dist, f, f, tol).value, 0.0));
}

CovarianceResult c_series(const StepDistribution& dist,
                          const PeriodicBVFunction& f,
                          const PeriodicBVFunction& g, std::int64_t K,
                          SeriesEngine engine, const SeriesOptions& opts) {
  if (K < 0) throw InvalidInput("c_series: K must be >= 0");
  CovarianceResult out;
  out.method = CovMethod::series;
  out.terms_used = K;
  if (f.is_zero() || g.is_zero()) return out;
  const double stationary = inner_product(f, g);
  // E f(U) g(U+x) + E g(U) f(U+x) = G(x) + G(-x), G = lag_correlation(f, g).
  auto pair_term = [&](double x) {
    return lag_correlation(f, g, x) + lag_correlation(f, g, -x);
  };

  if (engine == SeriesEngine::mc) {
    if (opts.mc_paths < 2) throw InvalidInput("c_series: mc_paths must be >= 2");
    out.truncation_bound = std::numeric_limits<double>::infinity();
    if (K == 0) {
      out.value = stationary;
      return out;
    }
    const auto M = opts.mc_paths;
    std::vector<double> y(static_cast<std::size_t>(M));
#pragma omp parallel
    {
      std::vector<double> path(static_cast<std::size_t>(K));
#pragma omp for schedule(static)
      for (std::int64_t j = 0; j < M; ++j) {
        fill_path(dist,
                  derive_seed(opts.seed, static_cast<std::uint64_t>(j),
                              stream::kMonteCarloSeries),
                  path);
        double s = 0.0;
        for (double x : path) s += pair_term(x);
        y[static_cast<std::size_t>(j)] = s;
      }
    }
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(M);
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= static_cast<double>(M - 1);
    out.value = stationary + mean;
    out.stat_error = std::sqrt(var / static_cast<double>(M));
    return out;
  }

  if (!dist.is_lattice()) {
    // {S_k} is exactly uniform, and E G(U) = fhat(0) ghat(0) = 0.
    out.value = stationary;
    return out;
  }
  if (K == 0) {
    out.value = stationary;
    out.truncation_bound = std::numeric_limits<double>::infinity();
    return out;
  }
  const IrrationalAlpha& alpha = *dist.alpha();
  double lag = 0.0, deficit_slack = 0.0;
  std::vector<std::int64_t> fit_k;
  std::vector<double> fit_psi;
  const double g_sup = f.l2_norm() * g.l2_norm();  // |G| <= ||f||_2 ||g||_2
  for_each_power(dist, K, opts.mass_tol,
                 [&](std::int64_t k, const IntegerLaw& law) {
                   double s = 0.0;
                   for (std::size_t i = 0; i < law.pmf.size(); ++i) {
                     if (law.pmf[i] == 0.0) continue;
                     const auto n = law.min_value + static_cast<std::int64_t>(i);
                     s += law.pmf[i] * pair_term(alpha.frac_multiple(n));
                   }
                   lag += s;
                   deficit_slack += 2.0 * g_sup * law.mass_deficit;
                   if (k >= 4 && (k & (k - 1)) == 0) {
                     fit_k.push_back(k);
                     fit_psi.push_back(AtomicLaw::from_integer_law(law, alpha)
                                           .kolmogorov_distance());
                   }
                 });
  out.value = stationary + lag;
  out.truncation_bound = std::numeric_limits<double>::infinity();
  if (fit_k.size() >= 3) {
    const DecayEstimate est = fit_decay(fit_k, fit_psi);
    if (est.slope < -1.0) {
      const double B = g.total_variation() * f.l1_norm() +
                       f.total_variation() * g.l1_norm();
      const double s1 = est.slope + 1.0;
      out.truncation_bound = B * std::exp(est.intercept) *
                                 std::pow(static_cast<double>(K), s1) / -s1 +
                             deficit_slack;
    }
  }
  return out;
}

CovarianceGrid::CovarianceGrid(std::vector<double> grid, Eigen::MatrixXd m)
    : grid_(std::move(grid)) {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (n < 2 || grid_.front() != 0.0 || grid_.back() != 1.0) {
    throw InvalidInput("covariance grid must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) {
      throw InvalidInput("covariance grid must increase strictly");
    }
  }
  if (m.rows() != n || m.cols() != n) {
    throw InvalidInput("covariance matrix does not match the grid");
  }
  matrix_ = 0.5 * (m + m.transpose());
  matrix_.row(0).setZero();
  matrix_.col(0).setZero();
  matrix_.row(n - 1).setZero();
  matrix_.col(n - 1).setZero();

  factor_ = Eigen::MatrixXd::Zero(n, n);
  const Eigen::Index r = n - 2;
  if (r == 0) return;
  Eigen::MatrixXd inner = matrix_.block(1, 1, r, r);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inner);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("eigen-decomposition of the covariance failed");
  }
  min_eig_ = es.eigenvalues().minCoeff();
  if (min_eig_ < 0.0) {
    inner = es.eigenvectors() *
            es.eigenvalues().cwiseMax(0.0).asDiagonal() *
            es.eigenvectors().transpose();
    inner = 0.5 * (inner + inner.transpose()).eval();
    matrix_.block(1, 1, r, r) = inner;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(inner);
  double jitter = 1e-12 * std::max(inner.trace(), 1e-300);
  for (int attempt = 0; llt.info() != Eigen::Success; ++attempt) {
    if (attempt == 12) {
      throw NumericalFailure("covariance factorization failed after jitter");
    }
    jitter_ = jitter;
    llt.compute(inner + jitter * Eigen::MatrixXd::Identity(r, r));
    jitter *= 10.0;
  }
  factor_.block(1, 1, r, r) = llt.matrixL();
  recon_err_ = (factor_ * factor_.transpose() - matrix_).norm();
  if (recon_err_ > 1e-8) {
    throw NumericalFailure("covariance factor reproduces the matrix only to " +
                           std::to_string(recon_err_));
  }
}

std::vector<double> equispaced_grid(std::size_t n) {
  if (n < 2) throw InvalidInput("a grid needs at least two points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  }
  g.back() = 1.0;
  return g;
}

namespace {

Eigen::MatrixXd bridge_matrix(const std::vector<double>& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double s = grid[static_cast<std::size_t>(i)];
      const double t = grid[static_cast<std::size_t>(j)];
      m(i, j) = std::min(s, t) - s * t;
    }
  }
  return m;
}

bool is_equispaced(const std::vector<double>& grid) {
  const double m = static_cast<double>(grid.size() - 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] != static_cast<double>(i) / m) return false;
  }
  return true;
}

}  // namespace

CovarianceGrid brownian_bridge_grid(std::vector<double> grid) {
  Eigen::MatrixXd m = bridge_matrix(grid);
  return CovarianceGrid(std::move(grid), std::move(m));
}

CovarianceGrid gamma_grid(const StepDistribution& dist,
                          std::vector<double> grid, double tol,
                          std::int64_t max_H, Exec exec) {
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0) {
    throw InvalidInput("gamma_grid: grid must start at 0 and end at 1");
  }
  // Stationary part <f_s, f_t> = min(s,t) - st; every indicator has V = 2.
  Eigen::MatrixXd m = bridge_matrix(grid);
  const SpectralPlan plan = plan_spectral(dist, 4.0, tol, max_H, exec);
  const auto n = static_cast<Eigen::Index>(grid.size());

  // Lag part: sum_h w_h Re[(1 - e(hs))(1 - e(-ht))], w_h = R_h / (pi h)^2,
  // which is A(0) - A(s) - A(t) + A(s-t) with A(x) = sum_h w_h cos(2 pi h x).
  std::vector<double> w(static_cast<std::size_t>(plan.H));
  bool any = false;
  for (std::int64_t h = 1; h <= plan.H; ++h) {
    const double r = plan.R[static_cast<std::size_t>(h - 1)];
    w[static_cast<std::size_t>(h - 1)] =
        r / (kPi * kPi * static_cast<double>(h) * static_cast<double>(h));
    any = any || r != 0.0;
  }
  if (any && is_equispaced(grid)) {
    const std::int64_t q = n - 1;
    std::vector<double> cos_table(static_cast<std::size_t>(q));
    for (std::int64_t j = 0; j < q; ++j) {
      cos_table[static_cast<std::size_t>(j)] =
          std::cos(2.0 * kPi * static_cast<double>(j) / static_cast<double>(q));
    }
    std::vector<double> A(static_cast<std::size_t>(q + 1), 0.0);
    auto fill = [&](std::int64_t j) {
      double s = 0.0;
      for (std::int64_t h = 1; h <= plan.H; ++h) {
        s += w[static_cast<std::size_t>(h - 1)] *
             cos_table[static_cast<std::size_t>((h * j) % q)];
      }
      A[static_cast<std::size_t>(j)] = s;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
      for (std::int64_t j = 0; j <= q; ++j) fill(j);
    } else {
      for (std::int64_t j = 0; j <= q; ++j) fill(j);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        m(i, j) += A[0] - A[static_cast<std::size_t>(i)] -
                   A[static_cast<std::size_t>(j)] +
                   A[static_cast<std::size_t>(std::abs(i - j))];
      }
    }
  } else if (any) {
    // B W B^T in chunks of frequencies, B = [1 - cos(2 pi h t), -sin(2 pi h t)].
    constexpr std::int64_t kChunk = 2048;
    for (std::int64_t h0 = 1; h0 <= plan.H; h0 += kChunk) {
      const std::int64_t h1 = std::min(plan.H, h0 + kChunk - 1);
      const auto c = static_cast<Eigen::Index>(h1 - h0 + 1);
      Eigen::MatrixXd B(n, 2 * c), BW(n, 2 * c);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double t = grid[static_cast<std::size_t>(i)];
        for (Eigen::Index k = 0; k < c; ++k) {
          const auto h = h0 + k;
          const double th =
              2.0 * kPi * (static_cast<double>(h) * t -
                           std::floor(static_cast<double>(h) * t));
          const double wh = w[static_cast<std::size_t>(h - 1)];
          B(i, 2 * k) = 1.0 - std::cos(th);
          B(i, 2 * k + 1) = -std::sin(th);
          BW(i, 2 * k) = wh * B(i, 2 * k);
          BW(i, 2 * k + 1) = wh * B(i, 2 * k + 1);
        }
      }
      m.noalias() += BW * B.transpose();
    }
  }
  CovarianceGrid out(std::move(grid), std::move(m));
  out.truncation_bound = plan.tail;
  out.H = plan.H;
  out.ill_conditioned = plan.ill;
  return out;
}

}  // namespace modwalk
