#include "modwalk/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modwalk/error.hpp"
#include "modwalk/rng.hpp"

namespace modwalk {

namespace {

// integral_lo^hi |a - u|^p du
double abs_power_integral(double a, double lo, double hi, double p) {
  const auto A = [p](double v) {
    const double m = std::pow(std::abs(v), p + 1.0) / (p + 1.0);
    return v < 0.0 ? -m : m;
  };
  return A(a - lo) - A(a - hi);
}

}  // namespace

double QuantileView::cdf(double t) const noexcept {
  if (!law_) return std::clamp(t, 0.0, 1.0);
  return law_->cdf(t);
}

double QuantileView::cdf_left(double t) const noexcept {
  if (!law_) return std::clamp(t, 0.0, 1.0);
  return law_->cdf_left(t);
}

double QuantileView::quantile(double x) const noexcept {
  if (!law_) return x;
  const auto cum = law_->cumulative();
  const auto it = std::lower_bound(cum.begin(), cum.end(), x);
  const auto i = std::min(static_cast<std::size_t>(it - cum.begin()),
                          cum.size() - 1);
  return law_->positions()[i];
}

double QuantileView::kolmogorov_distance() const noexcept {
  return law_ ? law_->kolmogorov_distance() : 0.0;
}

KoksmaGap koksma_gap(const PeriodicBVFunction& f, const QuantileView& law) {
  if (law.is_uniform()) return {};
  return {std::abs(law.atomic()->expectation(f)),
          f.total_variation() * law.kolmogorov_distance()};
}

double couple_to_uniform(const QuantileView& law, double xi, double x) {
  if (!(xi >= 0.0 && xi < 1.0)) {
    throw InvalidInput("couple_to_uniform: xi must lie in [0,1)");
  }
  if (law.is_uniform()) return x;
  const AtomicLaw& a = *law.atomic();
  const std::size_t i = a.index_of(x);
  if (i == AtomicLaw::npos) {
    throw InvalidInput("couple_to_uniform: x is not an atom of the law");
  }
  const double hi = a.cumulative()[i];
  const double lo = (i == 0) ? 0.0 : a.cumulative()[i - 1];
  return std::clamp(lo + xi * (hi - lo), lo, hi);
}

double wasserstein_p(const QuantileView& a, const QuantileView& b, double p) {
  const bool inf = std::isinf(p) && p > 0;
  if (!inf && !(p >= 1.0)) {
    throw InvalidInput("wasserstein_p needs p >= 1 or p = infinity");
  }
  if (a.is_uniform() && b.is_uniform()) return 0.0;

  if (a.is_uniform() || b.is_uniform()) {
    const AtomicLaw& law = a.is_uniform() ? *b.atomic() : *a.atomic();
    double acc = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < law.size(); ++i) {
      const double x = law.positions()[i], c = law.cumulative()[i];
      if (inf) {
        acc = std::max({acc, std::abs(x - prev), std::abs(x - c)});
      } else {
        acc += abs_power_integral(x, prev, c, p);
      }
      prev = c;
    }
    return inf ? acc : std::pow(acc, 1.0 / p);
  }

  // Merge the two staircase quantile functions.
  const AtomicLaw& A = *a.atomic();
  const AtomicLaw& B = *b.atomic();
  std::size_t i = 0, j = 0;
  double u = 0.0, acc = 0.0;
  while (i < A.size() && j < B.size()) {
    const double ca = A.cumulative()[i], cb = B.cumulative()[j];
    const double next = std::min(ca, cb);
    const double d = std::abs(A.positions()[i] - B.positions()[j]);
    if (next > u) {
      acc = inf ? std::max(acc, d) : acc + (next - u) * std::pow(d, p);
      u = next;
    }
    if (ca <= next) ++i;
    if (cb <= next) ++j;
  }
  return inf ? acc : std::pow(acc, 1.0 / p);
}

BlockScheme BlockScheme::power_law(double delta, std::int64_t blocks,
                                   std::int64_t M) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidInput("block scheme needs 0 < delta < 1");
  }
  if (blocks < 1) throw InvalidInput("block scheme needs at least one block");
  const double c = 1.0 - delta / 2.0;
  const double cp = (c + delta / 2.0) / (1.0 + delta);
  BlockScheme s;
  s.M = M;
  for (std::int64_t i = 1; i <= blocks; ++i) {
    const double x = static_cast<double>(i);
    s.H.push_back(static_cast<std::int64_t>(std::ceil(std::pow(x, c))));
    s.J.push_back(static_cast<std::int64_t>(std::ceil(std::pow(x, cp))));
  }
  return s;
}

BlockScheme BlockScheme::constant(std::int64_t block, std::int64_t gap,
                                  std::int64_t blocks, std::int64_t M) {
  BlockScheme s;
  s.M = M;
  s.H.assign(static_cast<std::size_t>(std::max<std::int64_t>(blocks, 0)), block);
  s.J.assign(s.H.size(), gap);
  s.validate();
  return s;
}

std::int64_t BlockScheme::total_length() const noexcept {
  std::int64_t n = M;
  for (auto h : H) n += h;
  for (auto j : J) n += j;
  return n;
}

void BlockScheme::validate() const {
  if (H.empty() || H.size() != J.size()) {
    throw InvalidInput("block scheme needs equally many blocks and gaps");
  }
  if (M < 0) throw InvalidInput("block scheme offset must be >= 0");
  for (std::size_t i = 0; i < H.size(); ++i) {
    if (H[i] < 1 || J[i] < 1) {
      throw InvalidInput("block and gap sizes must be >= 1");
    }
  }
}

BlockCouplingResult block_couple(const StepDistribution& dist,
                                 const BlockScheme& scheme, std::uint64_t seed,
                                 const BlockCouplingOptions& opts) {
  scheme.validate();
  if (dist.is_lattice() && dist.is_degenerate()) {
    throw Unsupported("block coupling needs a nondegenerate step");
  }
  Rng walk(derive_seed(seed, 0, stream::kReplicate));
  Rng aux(derive_seed(seed, 0, stream::kCouplingAux));
  const bool lattice = dist.is_lattice();
  const IrrationalAlpha* alpha = dist.alpha();

  // Walk state: integer S for lattice steps, a double-double torus point
  // for the continuous one.
  std::int64_t S = 0;
  double pos = 0.0;
  auto step = [&]() -> std::int64_t {
    if (lattice) {
      const std::int64_t x = dist.atoms()[dist.sample_atom(walk)].value;
      if (__builtin_add_overflow(S, x, &S)) {
        throw ResourceLimit("S_k overflowed 64 bits in block coupling");
      }
      return x;
    }
    pos += walk.uniform01();
    pos -= std::floor(pos);
    return 0;
  };
  auto point = [&]() { return lattice ? alpha->frac_multiple(S) : pos; };

  BlockCouplingResult out;
  const std::size_t R = scheme.H.size();
  out.deltas.reserve(R);
  out.psi_bounds.reserve(R);
  out.first_components.reserve(R);
  if (opts.f) out.block_sums.reserve(R);

  for (std::int64_t k = 0; k < scheme.M; ++k) step();

  // Exact law of S_l, advanced incrementally as gap sizes grow.
  IntegerLaw ilaw;
  ilaw.pmf = {1.0};
  std::int64_t law_len = 0;
  std::optional<QuantileView> gap_law;

  double shift = 0.0;  // delta_{n-1}; zero before the first gap
  for (std::size_t n = 0; n < R; ++n) {
    double sum = 0.0;
    std::vector<double> block;
    if (opts.keep_blocks) block.reserve(static_cast<std::size_t>(scheme.H[n]));
    for (std::int64_t k = 0; k < scheme.H[n]; ++k) {
      step();
      double y = point() - shift;
      y -= std::floor(y);
      if (y >= 1.0) y = 0.0;
      if (k == 0) out.first_components.push_back(y);
      if (opts.f) sum += opts.f->evaluate(y);
      if (opts.keep_blocks) block.push_back(y);
    }
    if (opts.f) out.block_sums.push_back(sum);
    if (opts.keep_blocks) out.blocks.push_back(std::move(block));

    // Gap J_n: the torus value of its sum, coupled to a uniform.
    const std::int64_t len = scheme.J[n];
    std::int64_t gap_int = 0;
    double gap_pos = 0.0;
    for (std::int64_t k = 0; k < len; ++k) {
      const double before = pos;
      gap_int += step();
      if (!lattice) {
        gap_pos += pos - before;
        gap_pos -= std::floor(gap_pos);
      }
    }
    const double xi = aux.uniform01();
    double x, u, psi;
    if (lattice) {
      if (len < law_len) {
        ilaw = IntegerLaw{};
        ilaw.pmf = {1.0};
        law_len = 0;
        gap_law.reset();
      }
      if (len != law_len || !gap_law) {
        while (law_len < len) {
          ilaw = convolve_step(ilaw, dist, 0.0);
          ++law_len;
        }
        gap_law.emplace(AtomicLaw::from_integer_law(ilaw, *alpha));
      }
      x = alpha->frac_multiple(gap_int);
      u = couple_to_uniform(*gap_law, xi, x);
      psi = gap_law->kolmogorov_distance();
    } else {
      x = gap_pos;
      u = x;
      psi = 0.0;
    }
    const double delta = x - u;
    out.deltas.push_back(delta);
    out.psi_bounds.push_back(psi);
    if (std::abs(delta) > psi) ++out.violations;
    shift = delta;
  }
  out.n_total = scheme.total_length();
  return out;
}

}  // namespace modwalk
