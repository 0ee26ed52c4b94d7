#include "modwalk/step_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "modwalk/dd.hpp"
#include "modwalk/error.hpp"

namespace modwalk {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

StepDistribution StepDistribution::lattice(std::vector<StepAtom> atoms,
                                           IrrationalAlpha alpha) {
  std::sort(atoms.begin(), atoms.end(),
            [](const StepAtom& a, const StepAtom& b) { return a.value < b.value; });
  std::vector<StepAtom> merged;
  double total = 0.0;
  for (const StepAtom& a : atoms) {
    if (!(a.prob >= 0.0) || !std::isfinite(a.prob)) {
      throw InvalidInput("step probabilities must be finite and nonnegative");
    }
    total += a.prob;
    if (a.prob == 0.0) continue;
    if (!merged.empty() && merged.back().value == a.value) {
      merged.back().prob += a.prob;
    } else {
      merged.push_back(a);
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidInput("step probabilities sum to " + std::to_string(total) +
                       ", not 1");
  }
  if (merged.size() < 2) {
    throw InvalidInput(
        "step law is degenerate: need two atoms with mass (use dirac())");
  }
  for (StepAtom& a : merged) a.prob /= total;

  StepDistribution d;
  d.kind_ = Kind::lattice;
  d.atoms_ = std::move(merged);
  d.alpha_ = std::make_shared<const IrrationalAlpha>(std::move(alpha));
  d.finish();
  return d;
}

StepDistribution StepDistribution::heavy_tail(double beta, std::int64_t cutoff,
                                              IrrationalAlpha alpha) {
  if (!(beta > 0.0 && beta <= 2.0)) {
    throw InvalidInput("heavy-tail index beta must lie in (0, 2]");
  }
  if (cutoff < 1 || cutoff > (std::int64_t{1} << 26)) {
    throw InvalidInput("heavy-tail cutoff must lie in [1, 2^26]");
  }
  std::vector<double> w(static_cast<std::size_t>(cutoff));
  double total = 0.0;
  // Sum the small weights first.
  for (std::int64_t n = cutoff; n >= 1; --n) {
    const double x = std::pow(static_cast<double>(n), -(beta + 1.0));
    w[static_cast<std::size_t>(n - 1)] = x;
    total += 2.0 * x;
  }
  StepDistribution d;
  d.kind_ = Kind::heavy_tail_lattice;
  d.beta_ = beta;
  d.cutoff_ = cutoff;
  d.atoms_.reserve(2 * w.size());
  for (std::int64_t n = cutoff; n >= 1; --n) {
    d.atoms_.push_back({-n, w[static_cast<std::size_t>(n - 1)] / total});
  }
  for (std::int64_t n = 1; n <= cutoff; ++n) {
    d.atoms_.push_back({n, w[static_cast<std::size_t>(n - 1)] / total});
  }
  d.alpha_ = std::make_shared<const IrrationalAlpha>(std::move(alpha));
  d.finish();
  return d;
}

StepDistribution StepDistribution::continuous_uniform() {
  StepDistribution d;
  d.kind_ = Kind::continuous_uniform;
  d.symmetric_ = true;
  return d;
}

StepDistribution StepDistribution::dirac(std::int64_t value,
                                         IrrationalAlpha alpha) {
  StepDistribution d;
  d.kind_ = Kind::lattice;
  d.atoms_ = {{value, 1.0}};
  d.alpha_ = std::make_shared<const IrrationalAlpha>(std::move(alpha));
  d.finish();
  return d;
}

StepDistribution StepDistribution::pm_one_golden() {
  return lattice({{-1, 0.5}, {1, 0.5}}, IrrationalAlpha::golden());
}

void StepDistribution::finish() {
  cdf_.resize(atoms_.size());
  inc_hi_.resize(atoms_.size());
  inc_lo_.resize(atoms_.size());
  double c = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    c += atoms_[i].prob;
    cdf_[i] = c;
    const auto [hi, lo] = alpha_->frac_multiple_dd(atoms_[i].value);
    inc_hi_[i] = hi;
    inc_lo_[i] = lo;
  }
  cdf_.back() = 1.0;
  symmetric_ = true;
  for (std::size_t i = 0, j = atoms_.size() - 1; i < atoms_.size(); ++i, --j) {
    if (atoms_[i].value != -atoms_[j].value ||
        atoms_[i].prob != atoms_[j].prob) {
      symmetric_ = false;
      break;
    }
  }
}

std::size_t StepDistribution::sample_atom(Rng& rng) const noexcept {
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf_.begin()),
                  cdf_.size() - 1);
}

double StepDistribution::sample_step(Rng& rng) const noexcept {
  if (kind_ == Kind::continuous_uniform) return rng.uniform01();
  return inc_hi_[sample_atom(rng)];
}

double StepDistribution::mean_increment() const noexcept {
  if (kind_ == Kind::continuous_uniform) return 0.5;
  double s = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    s += atoms_[i].prob * (inc_hi_[i] + inc_lo_[i]);
  }
  return s;
}

double StepDistribution::tail_probability(double t) const noexcept {
  double s = 0.0;
  for (const StepAtom& a : atoms_) {
    if (std::abs(static_cast<double>(a.value)) > t) s += a.prob;
  }
  return s;
}

std::string StepDistribution::id() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::continuous_uniform:
      return "uniform";
    case Kind::heavy_tail_lattice:
      os << "heavy_tail(beta=" << beta_ << ",cutoff=" << cutoff_ << ")";
      break;
    case Kind::lattice:
      os << "lattice(";
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        os << (i ? "," : "") << atoms_[i].value << ':' << atoms_[i].prob;
      }
      os << ")";
      break;
  }
  os << "*" << alpha_->id();
  return os.str();
}

CharacteristicValue char_coeff(const StepDistribution& dist, std::int64_t h) {
  CharacteristicValue out;
  out.h = h;
  if (h == 0) return out;
  if (!dist.is_lattice()) {
    out.phi = {0.0, 0.0};
    out.one_minus_phi = {1.0, 0.0};
    out.eps = 1.0;
    return out;
  }
  const IrrationalAlpha& alpha = *dist.alpha();
  const auto atoms = dist.atoms();
  // 1 - e^{i theta} = 2 sin^2(theta/2) - i sin(theta), theta = 2 pi y with
  // y the signed offset of h*n*alpha from the nearest integer.
  auto one_minus_e = [](double yy) {
    const double s = std::sin(kPi * yy);
    return std::complex<double>(2.0 * s * s, -std::sin(2.0 * kPi * yy));
  };
  const bool small = atoms.size() <= 64;
  std::vector<double> y(small ? atoms.size() : 0);
  std::complex<double> acc{0.0, 0.0};
  if (small) {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const auto [hi, lo] = alpha.frac_multiple_dd(h * atoms[i].value);
      y[i] = dd::signed_offset(hi, lo);
      acc += atoms[i].prob * one_minus_e(y[i]);
    }
  } else {
    // Runs of consecutive atoms: u_{n+1} = u_n + d (1 - u_n) with
    // u_n = 1 - e(h n alpha), d = u_1. No cancellation when all are small;
    // re-anchored exactly every kAnchor atoms.
    constexpr std::size_t kAnchor = 128;
    const auto [dh, dl] = alpha.frac_multiple_dd(h);
    const std::complex<double> d = one_minus_e(dd::signed_offset(dh, dl));
    double ur = 0.0, ui = 0.0, ar = 0.0, ai = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (i % kAnchor == 0 || atoms[i].value != atoms[i - 1].value + 1) {
        const auto [hi, lo] = alpha.frac_multiple_dd(h * atoms[i].value);
        const auto u = one_minus_e(dd::signed_offset(hi, lo));
        ur = u.real();
        ui = u.imag();
      } else {
        // Spelled out: std::complex multiplication is not inlined.
        const double wr = 1.0 - ur, wi = -ui;
        const double nr = ur + (d.real() * wr - d.imag() * wi);
        ui += d.real() * wi + d.imag() * wr;
        ur = nr;
      }
      ar += atoms[i].prob * ur;
      ai += atoms[i].prob * ui;
    }
    acc = {ar, ai};
  }
  const double re = acc.real(), im = acc.imag();
  out.one_minus_phi = {re, im};
  out.phi = {1.0 - re, -im};

  // 1 - |phi|^2 = sum_{m,n} p_m p_n 2 sin^2(pi (y_m - y_n)), free of
  // cancellation; used while the double sum is cheap.
  double one_minus_abs2;
  if (small) {
    one_minus_abs2 = 0.0;
    for (std::size_t m = 0; m < atoms.size(); ++m) {
      for (std::size_t n = m + 1; n < atoms.size(); ++n) {
        const double s = std::sin(kPi * (y[m] - y[n]));
        one_minus_abs2 += 4.0 * atoms[m].prob * atoms[n].prob * s * s;
      }
    }
  } else {
    one_minus_abs2 = 2.0 * re - (re * re + im * im);
  }
  out.eps = one_minus_abs2 / (1.0 + std::abs(out.phi));
  return out;
}

std::vector<CharacteristicValue> char_table(const StepDistribution& dist,
                                            std::int64_t H, Exec exec) {
  if (H < 0) throw InvalidInput("char_table: H must be >= 0");
  std::vector<CharacteristicValue> out(static_cast<std::size_t>(H));
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t h = 1; h <= H; ++h) {
      out[static_cast<std::size_t>(h - 1)] = char_coeff(dist, h);
    }
  } else {
    for (std::int64_t h = 1; h <= H; ++h) {
      out[static_cast<std::size_t>(h - 1)] = char_coeff(dist, h);
    }
  }
  return out;
}

}  // namespace modwalk
