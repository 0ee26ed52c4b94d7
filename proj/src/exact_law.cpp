#include "modwalk/exact_law.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "modwalk/error.hpp"

namespace modwalk {

namespace {

using cplx = std::complex<double>;

cplx ipow(cplx z, std::int64_t n) {
  cplx r(1.0, 0.0);
  while (n > 0) {
    if (n & 1) r *= z;
    z *= z;
    n >>= 1;
  }
  return r;
}

void require_lattice(const StepDistribution& dist, const char* what) {
  if (!dist.is_lattice()) {
    throw Unsupported(std::string(what) +
                      ": exact laws need a lattice step distribution");
  }
}

void check_mass_tol(double mass_tol) {
  if (!(mass_tol >= 0.0 && mass_tol <= 1e-6)) {
    throw InvalidInput("mass_tol must lie in [0, 1e-6]");
  }
}

}  // namespace

IntegerLaw convolve_step(const IntegerLaw& law, const StepDistribution& dist,
                         double drop_allowance, Exec exec,
                         std::size_t support_budget) {
  require_lattice(dist, "convolve_step");
  const auto atoms = dist.atoms();
  const std::int64_t lo = law.min_value + atoms.front().value;
  const std::int64_t hi = law.max_value() + atoms.back().value;
  const auto size = static_cast<std::size_t>(hi - lo + 1);
  if (size > support_budget) {
    throw ResourceLimit("law support would reach " + std::to_string(size) +
                        " entries (budget " + std::to_string(support_budget) +
                        "); lower k or raise mass_tol");
  }
  IntegerLaw out;
  out.min_value = lo;
  out.mass_deficit = law.mass_deficit;
  out.pmf.assign(size, 0.0);

  const auto n_in = static_cast<std::int64_t>(law.pmf.size());
  auto gather = [&](std::int64_t j) {
    // out[lo + j] = sum_a p_a * law[lo + j - v_a]
    double s = 0.0;
    for (const StepAtom& a : atoms) {
      const std::int64_t src = lo + j - a.value - law.min_value;
      if (src >= 0 && src < n_in) {
        s += a.prob * law.pmf[static_cast<std::size_t>(src)];
      }
    }
    out.pmf[static_cast<std::size_t>(j)] = s;
  };
  const auto n_out = static_cast<std::int64_t>(size);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n_out; ++j) gather(j);
  } else {
    for (std::int64_t j = 0; j < n_out; ++j) gather(j);
  }

  // Trim the lighter end first while the allowance lasts.
  std::size_t first = 0, last = size;
  double dropped = 0.0;
  while (last - first > 1) {
    const double a = out.pmf[first], b = out.pmf[last - 1];
    const double m = std::min(a, b);
    if (dropped + m > drop_allowance && m != 0.0) break;
    dropped += m;
    if (a <= b) {
      ++first;
    } else {
      --last;
    }
  }
  if (first > 0 || last < size) {
    out.pmf.erase(out.pmf.begin() + static_cast<std::ptrdiff_t>(last),
                  out.pmf.end());
    out.pmf.erase(out.pmf.begin(),
                  out.pmf.begin() + static_cast<std::ptrdiff_t>(first));
    out.min_value += static_cast<std::int64_t>(first);
  }
  out.mass_deficit += dropped;
  return out;
}

void for_each_power(
    const StepDistribution& dist, std::int64_t K, double mass_tol,
    const std::function<void(std::int64_t, const IntegerLaw&)>& visit,
    Exec exec) {
  require_lattice(dist, "for_each_power");
  check_mass_tol(mass_tol);
  IntegerLaw law;
  law.pmf = {1.0};
  for (std::int64_t j = 1; j <= K; ++j) {
    const double allowance =
        mass_tol * static_cast<double>(j) / static_cast<double>(K) -
        law.mass_deficit;
    law = convolve_step(law, dist, std::max(allowance, 0.0), exec);
    visit(j, law);
  }
}

IntegerLaw integer_law_power(const StepDistribution& dist, std::int64_t k,
                             double mass_tol, Exec exec,
                             std::size_t support_budget) {
  require_lattice(dist, "integer_law_power");
  check_mass_tol(mass_tol);
  if (k < 0) throw InvalidInput("integer_law_power: k must be >= 0");
  IntegerLaw law;
  law.pmf = {1.0};
  for (std::int64_t j = 1; j <= k; ++j) {
    const double allowance =
        mass_tol * static_cast<double>(j) / static_cast<double>(k) -
        law.mass_deficit;
    law = convolve_step(law, dist, std::max(allowance, 0.0), exec,
                        support_budget);
  }
  return law;
}

AtomicLaw AtomicLaw::from_points(std::vector<double> positions,
                                 std::vector<double> probs,
                                 double mass_deficit) {
  if (positions.size() != probs.size() || positions.empty()) {
    throw InvalidInput("atomic law needs one probability per position");
  }
  std::vector<std::size_t> order(positions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return positions[a] < positions[b];
  });
  AtomicLaw law;
  double total = mass_deficit;
  for (std::size_t i : order) {
    const double x = positions[i], p = probs[i];
    if (!(x >= 0.0 && x < 1.0)) {
      throw InvalidInput("atom positions must lie in [0,1)");
    }
    if (!(p >= 0.0)) throw InvalidInput("atom probabilities must be >= 0");
    total += p;
    if (p == 0.0) continue;
    if (!law.positions_.empty() && law.positions_.back() == x) {
      law.probs_.back() += p;
    } else {
      law.positions_.push_back(x);
      law.probs_.push_back(p);
    }
  }
  if (law.positions_.empty()) throw InvalidInput("atomic law has no mass");
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidInput("atomic law mass is " + std::to_string(total) +
                       ", not 1");
  }
  law.mass_deficit_ = mass_deficit;
  law.finish();
  return law;
}

AtomicLaw AtomicLaw::dirac(double x) { return from_points({x}, {1.0}); }

AtomicLaw AtomicLaw::from_integer_law(const IntegerLaw& ilaw,
                                      const IrrationalAlpha& alpha) {
  struct Entry {
    double x;
    double p;
    std::int64_t n;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < ilaw.pmf.size(); ++i) {
    if (ilaw.pmf[i] == 0.0) continue;
    const std::int64_t n = ilaw.min_value + static_cast<std::int64_t>(i);
    entries.push_back({alpha.frac_multiple(n), ilaw.pmf[i], n});
  }
  if (entries.empty()) throw InvalidInput("integer law has no mass");
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.x < b.x; });
  AtomicLaw law;
  for (const Entry& e : entries) {
    // Distinct n give distinct {n alpha}; a collision can only be a
    // rounding artefact for astronomically large n.
    if (!law.positions_.empty() && law.positions_.back() == e.x) {
      law.probs_.back() += e.p;
      continue;
    }
    law.positions_.push_back(e.x);
    law.probs_.push_back(e.p);
    law.keys_.push_back(e.n);
  }
  law.mass_deficit_ = ilaw.mass_deficit;
  law.finish();
  return law;
}

void AtomicLaw::finish() {
  cum_.resize(probs_.size());
  double c = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    c += probs_[i];
    cum_[i] = c;
  }
  key_order_.resize(keys_.size());
  std::iota(key_order_.begin(), key_order_.end(), std::size_t{0});
  std::sort(key_order_.begin(), key_order_.end(),
            [&](std::size_t a, std::size_t b) { return keys_[a] < keys_[b]; });
}

double AtomicLaw::cdf(double t) const noexcept {
  const auto it = std::upper_bound(positions_.begin(), positions_.end(), t);
  if (it == positions_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - positions_.begin()) - 1];
}

double AtomicLaw::cdf_left(double t) const noexcept {
  const auto it = std::lower_bound(positions_.begin(), positions_.end(), t);
  if (it == positions_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - positions_.begin()) - 1];
}

std::size_t AtomicLaw::index_of(double x) const noexcept {
  const auto it = std::lower_bound(positions_.begin(), positions_.end(), x);
  if (it == positions_.end() || *it != x) return npos;
  return static_cast<std::size_t>(it - positions_.begin());
}

std::size_t AtomicLaw::index_of_key(std::int64_t n) const noexcept {
  const auto it = std::lower_bound(
      key_order_.begin(), key_order_.end(), n,
      [&](std::size_t i, std::int64_t v) { return keys_[i] < v; });
  if (it == key_order_.end() || keys_[*it] != n) return npos;
  return *it;
}

double AtomicLaw::kolmogorov_distance() const noexcept {
  double d = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const double a = positions_[i];
    d = std::max({d, std::abs(cum_[i] - a), std::abs(prev - a)});
    prev = cum_[i];
  }
  return std::max(d, std::abs(1.0 - prev));
}

double AtomicLaw::expectation(const PeriodicBVFunction& f) const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    s += probs_[i] * f.evaluate(positions_[i]);
  }
  return s;
}

AtomicLaw pmf_power(const StepDistribution& dist, std::int64_t k,
                    double mass_tol, Exec exec) {
  if (k < 1) throw InvalidInput("pmf_power: k must be >= 1");
  return AtomicLaw::from_integer_law(
      integer_law_power(dist, k, mass_tol, exec), *dist.alpha());
}

PsiValue psi_exact(const StepDistribution& dist, std::int64_t k,
                   double mass_tol) {
  if (k < 1) throw InvalidInput("psi_exact: k must be >= 1");
  if (!dist.is_lattice()) return {};
  const AtomicLaw law = pmf_power(dist, k, mass_tol);
  return {law.kolmogorov_distance(), law.mass_deficit()};
}

double expected_f(const StepDistribution& dist, const PeriodicBVFunction& f,
                  std::int64_t k, double mass_tol) {
  if (k < 1) throw InvalidInput("expected_f: k must be >= 1");
  if (!dist.is_lattice()) return 0.0;
  return pmf_power(dist, k, mass_tol).expectation(f);
}

namespace {

// Heuristic size of the |h| > H part: |fhat(h)| <= V/(2 pi |h|) and the
// lag series multiplies |fhat(h)|^2 by at most (1+|phi|)/(1-|phi|) <= 2/eps.
double spectral_tail(double V, double eps_min, std::int64_t H) {
  if (V == 0.0) return 0.0;
  const double hsum = 2.0 / static_cast<double>(H);  // sum_{|h|>H} h^-2
  return V * V / (4.0 * std::numbers::pi * std::numbers::pi) * hsum * 2.0 / eps_min;
}

double window_variance_at(const StepDistribution& dist,
                          const PeriodicBVFunction& f, std::int64_t M,
                          std::int64_t N, std::int64_t H,
                          std::vector<std::int64_t>& ill, Exec exec) {
  const auto table = char_table(dist, 2 * H, exec);
  const auto idx = [H](std::int64_t h) {
    return static_cast<std::size_t>(h + 2 * H);
  };
  std::vector<cplx> phi(static_cast<std::size_t>(4 * H + 1));
  std::vector<cplx> omp(phi.size());  // 1 - phi
  phi[idx(0)] = 1.0;
  omp[idx(0)] = 0.0;
  for (std::int64_t h = 1; h <= 2 * H; ++h) {
    const auto& c = table[static_cast<std::size_t>(h - 1)];
    phi[idx(h)] = c.phi;
    phi[idx(-h)] = std::conj(c.phi);
    omp[idx(h)] = c.one_minus_phi;
    omp[idx(-h)] = std::conj(c.one_minus_phi);
    if (c.eps < 1e-12) ill.push_back(h);
  }
  std::vector<cplx> pow_m1(phi.size()), pow_n(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    pow_m1[i] = ipow(phi[i], M + 1);
    pow_n[i] = ipow(phi[i], N);
  }
  // sum_{k=M+1}^{M+N} a^k for a = phi_h.
  std::vector<cplx> geo(phi.size());
  for (std::int64_t h = -2 * H; h <= 2 * H; ++h) {
    const std::size_t i = idx(h);
    geo[i] = (h == 0) ? cplx(static_cast<double>(N), 0.0)
                      : pow_m1[i] * (1.0 - pow_n[i]) / omp[i];
  }

  std::vector<cplx> fh(static_cast<std::size_t>(2 * H + 1));
  for (std::int64_t h = -H; h <= H; ++h) {
    fh[static_cast<std::size_t>(h + H)] = f.fourier_coeff(h);
  }

  // Per-h partial sums, reduced in h order for a schedule-free result.
  std::vector<double> partial(static_cast<std::size_t>(2 * H + 1), 0.0);
  auto row = [&](std::int64_t h) {
    const cplx fa = fh[static_cast<std::size_t>(h + H)];
    if (fa == cplx{}) return;
    double s = 0.0;
    for (std::int64_t hp = -H; hp <= H; ++hp) {
      const cplx fb = fh[static_cast<std::size_t>(hp + H)];
      if (fb == cplx{}) continue;
      const std::size_t ia = idx(h + hp), ib = idx(hp);
      const cplx a = phi[ia], b = phi[ib];
      const cplx diag = geo[ia];
      // sum_{k=M+1}^{T} a^k b^{T-k} = a^{M+1} (a^N - b^N) / (a - b)
      cplx mixed;
      const cplx amb = a - b;
      if (pow_m1[ia] == cplx{}) {
        mixed = 0.0;
      } else if (std::abs(amb) > 1e-9 * (1.0 + std::abs(a))) {
        mixed = pow_m1[ia] * (pow_n[ia] - pow_n[ib]) / amb;
      } else {
        // Horner form of sum_i a^i b^{N-1-i}; rare near-coincidences only.
        cplx acc(0.0, 0.0), ai(1.0, 0.0);
        for (std::int64_t i = 0; i < N; ++i) {
          acc = acc * b + ai;
          ai *= a;
        }
        mixed = pow_m1[ia] * acc;
      }
      const cplx off = b / omp[ib] * (diag - mixed);
      s += (fa * fb * (diag + 2.0 * off)).real();
    }
    partial[static_cast<std::size_t>(h + H)] = s;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t h = -H; h <= H; ++h) row(h);
  } else {
    for (std::int64_t h = -H; h <= H; ++h) row(h);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  // The stationary part of the diagonal, N * sum_h |fhat(h)|^2, is known
  // exactly; add back the frequencies beyond H.
  double parseval = 0.0;
  for (const cplx& c : fh) parseval += std::norm(c);
  const double l2 = f.l2_norm();
  total += static_cast<double>(N) * std::max(l2 * l2 - parseval, 0.0);
  return total;
}

}  // namespace

WindowVariance window_variance_spectral(const StepDistribution& dist,
                                        const PeriodicBVFunction& f,
                                        std::int64_t M, std::int64_t N,
                                        std::int64_t H, Exec exec) {
  if (M < 0 || N < 1) {
    throw InvalidInput("window_variance_spectral: need M >= 0 and N >= 1");
  }
  if (H < 0) throw InvalidInput("window_variance_spectral: H must be >= 0");
  WindowVariance out;
  if (f.is_zero()) return out;

  if (!f.is_piecewise()) {
    out.H = (H == 0) ? f.degree() : H;
    out.value = window_variance_at(dist, f, M, N, out.H, out.ill_conditioned,
                                   exec);
    out.tail_estimate = (out.H >= f.degree()) ? 0.0 : INFINITY;
    return out;
  }

  const double V = f.total_variation();
  auto tail_for = [&](std::int64_t h) {
    double eps_min = 1.0;
    for (std::int64_t j = h + 1; j <= 2 * h; ++j) {
      eps_min = std::min(eps_min, char_coeff(dist, j).eps);
    }
    return static_cast<double>(N) * spectral_tail(V, eps_min, h);
  };
  if (H == 0) {
    H = 64;
    while (H < kWindowVarianceMaxH && tail_for(H) >= 1e-8) H *= 2;
  }
  out.H = H;
  out.tail_estimate = tail_for(H);
  out.value = window_variance_at(dist, f, M, N, H, out.ill_conditioned, exec);
  return out;
}

DecayEstimate fit_decay(std::vector<std::int64_t> ks,
                        std::vector<double> psi_values) {
  if (ks.size() != psi_values.size() || ks.size() < 2) {
    throw InvalidInput("fit_decay needs at least two (k, psi) pairs");
  }
  for (std::size_t i = 1; i < ks.size(); ++i) {
    if (ks[i] <= ks[i - 1]) throw InvalidInput("ks must be increasing");
  }
  DecayEstimate est;
  est.ks = std::move(ks);
  est.psi_values = std::move(psi_values);
  const auto zeros = std::count(est.psi_values.begin(), est.psi_values.end(),
                                0.0);
  if (static_cast<std::size_t>(zeros) == est.psi_values.size()) {
    est.exact_zero = true;
    return est;
  }
  if (zeros > 0) {
    throw Unsupported("psi vanishes at some but not all k; no power-law fit");
  }
  const double n = static_cast<double>(est.ks.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < est.ks.size(); ++i) {
    const double x = std::log(static_cast<double>(est.ks[i]));
    const double y = std::log(est.psi_values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  est.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  est.intercept = (sy - est.slope * sx) / n;
  est.delta_hat = -est.slope - 1.0;
  return est;
}

DecayEstimate psi_decay(const StepDistribution& dist,
                        std::span<const std::int64_t> ks, double mass_tol) {
  if (dist.is_degenerate()) {
    throw Unsupported(
        "psi of a Dirac step does not decay (single Weyl orbit); no slope");
  }
  std::vector<double> values;
  values.reserve(ks.size());
  for (std::int64_t k : ks) values.push_back(psi_exact(dist, k, mass_tol).value);
  return fit_decay({ks.begin(), ks.end()}, std::move(values));
}

}  // namespace modwalk
