#include "modwalk/bv_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "modwalk/error.hpp"

namespace modwalk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double frac(double x) noexcept {
  const double y = x - std::floor(x);
  return y >= 1.0 ? 0.0 : y;
}

// Length of [a, a+la) intersected with [c, c+lc) on the circle.
double arc_overlap(double a, double la, double c, double lc) noexcept {
  double total = 0.0;
  for (int m = -1; m <= 1; ++m) {
    const double lo = std::max(a, c + m);
    const double hi = std::min(a + la, c + m + lc);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

// Real form of a trig polynomial: sum_h A_h cos(2 pi h x) + B_h sin(2 pi h x).
struct RealTrig {
  std::vector<double> h, A, B;

  explicit RealTrig(const std::map<std::int64_t, std::complex<double>>& c) {
    for (const auto& [k, v] : c) {
      if (k <= 0) continue;
      h.push_back(static_cast<double>(k));
      A.push_back(2.0 * v.real());
      B.push_back(-2.0 * v.imag());
    }
  }
  double value(double x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      const double t = kTwoPi * h[i] * x;
      s += A[i] * std::cos(t) + B[i] * std::sin(t);
    }
    return s;
  }
  double derivative(double x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      const double t = kTwoPi * h[i] * x;
      s += kTwoPi * h[i] * (-A[i] * std::sin(t) + B[i] * std::cos(t));
    }
    return s;
  }
  double antiderivative(double x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      const double t = kTwoPi * h[i] * x;
      s += (A[i] * std::sin(t) - B[i] * std::cos(t)) / (kTwoPi * h[i]);
    }
    return s;
  }
};

// Sign changes of `fn` on a uniform grid of [0,1), refined by bisection.
template <class Fn>
std::vector<double> roots_on_circle(const Fn& fn, std::size_t samples) {
  std::vector<double> roots;
  double x0 = 0.0;
  double f0 = fn(x0);
  for (std::size_t i = 1; i <= samples; ++i) {
    const double x1 = static_cast<double>(i) / static_cast<double>(samples);
    const double f1 = fn(x1);
    if (f0 == 0.0) {
      roots.push_back(x0);
    } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

struct TrigNorms {
  double variation = 0.0, l1 = 0.0, sup = 0.0;
};

TrigNorms trig_norms(const RealTrig& t, std::size_t samples) {
  TrigNorms out;
  auto crit = roots_on_circle([&](double x) { return t.derivative(x); },
                              samples);
  for (std::size_t i = 0; i < crit.size(); ++i) {
    const double a = t.value(crit[i]);
    const double b = t.value(crit[(i + 1) % crit.size()]);
    out.variation += std::abs(b - a);
    out.sup = std::max(out.sup, std::abs(a));
  }
  auto zeros = roots_on_circle([&](double x) { return t.value(x); }, samples);
  if (zeros.empty()) {
    out.l1 = std::abs(t.antiderivative(1.0) - t.antiderivative(0.0));
  } else {
    for (std::size_t i = 0; i < zeros.size(); ++i) {
      const double a = zeros[i];
      const double b = (i + 1 < zeros.size()) ? zeros[i + 1] : zeros[0] + 1.0;
      out.l1 += std::abs(t.antiderivative(b) - t.antiderivative(a));
    }
  }
  return out;
}

}  // namespace

PeriodicBVFunction::PeriodicBVFunction() : breaks_{0.0}, values_{0.0} {}

PeriodicBVFunction PeriodicBVFunction::centered_piecewise(
    std::vector<double> breaks, std::vector<double> values) {
  if (breaks.size() != values.size() || breaks.empty()) {
    throw InvalidInput("piecewise function needs one value per breakpoint");
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    const double end = (i + 1 < breaks.size()) ? breaks[i + 1] : 1.0 + breaks[0];
    mean += values[i] * (end - breaks[i]);
  }
  for (double& v : values) v -= mean;
  return piecewise(std::move(breaks), std::move(values));
}

PeriodicBVFunction PeriodicBVFunction::piecewise(std::vector<double> breaks,
                                                 std::vector<double> values) {
  if (breaks.size() != values.size() || breaks.empty()) {
    throw InvalidInput("piecewise function needs one value per breakpoint");
  }
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (!(breaks[i] >= 0.0 && breaks[i] < 1.0)) {
      throw InvalidInput("breakpoints must lie in [0,1)");
    }
    if (i > 0 && !(breaks[i] > breaks[i - 1])) {
      throw InvalidInput("breakpoints must be strictly increasing");
    }
  }
  if (breaks.front() > 0.0) {
    // The last piece wraps through 0; split it there.
    breaks.insert(breaks.begin(), 0.0);
    values.insert(values.begin(), values.back());
  }
  PeriodicBVFunction f;
  f.kind_ = Kind::piecewise_constant;
  f.breaks_ = std::move(breaks);
  f.values_ = std::move(values);

  double mean = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < f.breaks_.size(); ++i) {
    const double end = (i + 1 < f.breaks_.size()) ? f.breaks_[i + 1] : 1.0;
    mean += f.values_[i] * (end - f.breaks_[i]);
    scale = std::max(scale, std::abs(f.values_[i]));
  }
  if (std::abs(mean) > 1e-14 * scale) {
    throw InvalidInput("function is not mean zero (mean = " +
                       std::to_string(mean) + ")");
  }
  f.compute_cached();
  return f;
}

PeriodicBVFunction PeriodicBVFunction::trig(
    const std::map<std::int64_t, std::complex<double>>& coeffs) {
  PeriodicBVFunction f;
  f.kind_ = Kind::trig_poly;
  f.breaks_.clear();
  f.values_.clear();
  for (const auto& [h, c] : coeffs) {
    if (h == 0) {
      if (c != std::complex<double>{}) {
        throw InvalidInput("trig polynomial must have zero mean (c_0 = 0)");
      }
      continue;
    }
    auto partner = coeffs.find(-h);
    if (partner != coeffs.end() &&
        std::abs(partner->second - std::conj(c)) > 1e-14 * (1.0 + std::abs(c))) {
      throw InvalidInput("trig coefficients must satisfy c_{-h} = conj(c_h)");
    }
    if (c == std::complex<double>{}) continue;
    f.coeffs_[h] = c;
    f.coeffs_[-h] = std::conj(c);
  }
  f.compute_cached();
  return f;
}

void PeriodicBVFunction::compute_cached() {
  if (kind_ == Kind::piecewise_constant) {
    const std::size_t n = values_.size();
    total_variation_ = 0.0;
    l1_norm_ = 0.0;
    double l2sq = 0.0;
    sup_norm_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double len = ((i + 1 < n) ? breaks_[i + 1] : 1.0) - breaks_[i];
      total_variation_ += std::abs(values_[i] - values_[(i + n - 1) % n]);
      l1_norm_ += std::abs(values_[i]) * len;
      l2sq += values_[i] * values_[i] * len;
      sup_norm_ = std::max(sup_norm_, std::abs(values_[i]));
    }
    l2_norm_ = std::sqrt(l2sq);
    return;
  }

  double l2sq = 0.0;
  for (const auto& [h, c] : coeffs_) l2sq += std::norm(c);
  l2_norm_ = std::sqrt(l2sq);
  if (coeffs_.empty()) {
    total_variation_ = l1_norm_ = sup_norm_ = 0.0;
    return;
  }
  // Refine the sampling until successive estimates agree to 1e-9.
  const RealTrig t(coeffs_);
  std::size_t samples = 64 * static_cast<std::size_t>(degree() + 1);
  TrigNorms prev = trig_norms(t, samples);
  for (int round = 0; round < 6; ++round) {
    samples *= 2;
    const TrigNorms next = trig_norms(t, samples);
    const bool settled = std::abs(next.variation - prev.variation) <= 1e-9 &&
                         std::abs(next.l1 - prev.l1) <= 1e-9 &&
                         std::abs(next.sup - prev.sup) <= 1e-9;
    prev = next;
    if (settled) break;
  }
  total_variation_ = prev.variation;
  l1_norm_ = prev.l1;
  sup_norm_ = prev.sup;
}

bool PeriodicBVFunction::is_zero() const noexcept {
  if (kind_ == Kind::trig_poly) return coeffs_.empty();
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v == 0.0; });
}

std::int64_t PeriodicBVFunction::degree() const noexcept {
  if (kind_ != Kind::trig_poly || coeffs_.empty()) return 0;
  return coeffs_.rbegin()->first;
}

double PeriodicBVFunction::evaluate(double x) const noexcept {
  const double y = frac(x);
  if (kind_ == Kind::piecewise_constant) {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), y);
    return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
  }
  double s = 0.0;
  for (const auto& [h, c] : coeffs_) {
    if (h <= 0) continue;
    const double t = kTwoPi * static_cast<double>(h) * y;
    s += 2.0 * (c.real() * std::cos(t) - c.imag() * std::sin(t));
  }
  return s;
}

std::complex<double> PeriodicBVFunction::fourier_coeff(
    std::int64_t h) const noexcept {
  if (h == 0) return {};
  if (kind_ == Kind::trig_poly) {
    auto it = coeffs_.find(h);
    return it == coeffs_.end() ? std::complex<double>{} : it->second;
  }
  const double hd = static_cast<double>(h);
  const std::complex<double> denom(0.0, kTwoPi * hd);
  std::complex<double> sum{};
  const std::size_t n = breaks_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (values_[i] == 0.0) continue;
    const double a = breaks_[i];
    const double b = (i + 1 < n) ? breaks_[i + 1] : 1.0;
    // Reduce h*a mod 1 before the exponential to keep large h accurate.
    const double ta = kTwoPi * frac(hd * a);
    const double tb = kTwoPi * frac(hd * b);
    const std::complex<double> ea(std::cos(ta), -std::sin(ta));
    const std::complex<double> eb(std::cos(tb), -std::sin(tb));
    sum += values_[i] * (ea - eb);
  }
  return sum / denom;
}

double PeriodicBVFunction::lp_norm(double p) const {
  if (p == 1.0) return l1_norm_;
  if (p == 2.0) return l2_norm_;
  if (std::isinf(p) && p > 0) return sup_norm_;
  throw InvalidInput("lp_norm supports p in {1, 2, inf}");
}

std::string PeriodicBVFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == Kind::trig_poly) {
    os << "trig";
    const char* sep = " ";
    for (const auto& [h, c] : coeffs_) {
      os << sep << h << ':' << c.real();
      if (c.imag() != 0.0) os << ':' << c.imag();
      sep = ",";
    }
    return os.str();
  }
  os << "piecewise";
  const char* sep = " ";
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    os << sep << breaks_[i] << ':' << values_[i];
    sep = ",";
  }
  return os.str();
}

PeriodicBVFunction centered_indicator(double a, double b) {
  if (!(a >= 0.0 && b <= 1.0 && a < b)) {
    throw InvalidInput("centered_indicator needs 0 <= a < b <= 1");
  }
  const double len = b - a;
  if (len >= 1.0) return PeriodicBVFunction{};
  std::vector<double> breaks, values;
  if (a > 0.0) {
    breaks.push_back(0.0);
    values.push_back(-len);
  }
  breaks.push_back(a);
  values.push_back(1.0 - len);
  if (b < 1.0) {
    breaks.push_back(b);
    values.push_back(-len);
  }
  return PeriodicBVFunction::piecewise(std::move(breaks), std::move(values));
}

double inner_product(const PeriodicBVFunction& f,
                     const PeriodicBVFunction& g) {
  if (!f.is_piecewise() || !g.is_piecewise()) {
    const PeriodicBVFunction& t = f.is_piecewise() ? g : f;
    const PeriodicBVFunction& o = f.is_piecewise() ? f : g;
    double s = 0.0;
    for (const auto& [h, c] : t.coeffs()) {
      s += (c * std::conj(o.fourier_coeff(h))).real();
    }
    return s;
  }
  // Merge the two breakpoint lists; both start at 0.
  const auto fb = f.breaks(), gb = g.breaks();
  const auto fv = f.values(), gv = g.values();
  std::size_t i = 0, j = 0;
  double x = 0.0, s = 0.0;
  while (x < 1.0) {
    const double fe = (i + 1 < fb.size()) ? fb[i + 1] : 1.0;
    const double ge = (j + 1 < gb.size()) ? gb[j + 1] : 1.0;
    const double e = std::min(fe, ge);
    s += fv[i] * gv[j] * (e - x);
    x = e;
    if (fe == e && i + 1 < fb.size()) ++i;
    if (ge == e && j + 1 < gb.size()) ++j;
    if (e >= 1.0) break;
  }
  return s;
}

double lag_correlation(const PeriodicBVFunction& f,
                       const PeriodicBVFunction& g, double x) {
  if (!f.is_piecewise() || !g.is_piecewise()) {
    // G(x) = sum_h conj(fhat(h)) ghat(h) e^{2 pi i h x}; finite because one
    // side is a trig polynomial.
    const PeriodicBVFunction& t = f.is_piecewise() ? g : f;
    double s = 0.0;
    for (const auto& [h, c] : t.coeffs()) {
      (void)c;
      const double th = kTwoPi * frac(static_cast<double>(h) * frac(x));
      s += (std::conj(f.fourier_coeff(h)) * g.fourier_coeff(h) *
            std::complex<double>(std::cos(th), std::sin(th)))
               .real();
    }
    return s;
  }
  const auto fb = f.breaks(), gb = g.breaks();
  const auto fv = f.values(), gv = g.values();
  double s = 0.0;
  for (std::size_t i = 0; i < fb.size(); ++i) {
    if (fv[i] == 0.0) continue;
    const double la = ((i + 1 < fb.size()) ? fb[i + 1] : 1.0) - fb[i];
    for (std::size_t j = 0; j < gb.size(); ++j) {
      if (gv[j] == 0.0) continue;
      const double lc = ((j + 1 < gb.size()) ? gb[j + 1] : 1.0) - gb[j];
      s += fv[i] * gv[j] * arc_overlap(fb[i], la, frac(gb[j] - x), lc);
    }
  }
  return s;
}

}  // namespace modwalk
