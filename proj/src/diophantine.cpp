#include "modwalk/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "modwalk/error.hpp"

namespace modwalk {

namespace {

constexpr double kBelowOne = 0x1.fffffffffffffp-1;

double to_unit_interval(double x) noexcept {
  x -= std::floor(x);
  return x >= 1.0 ? kBelowOne : x;
}

// Knuth's two-sum: s + err == a + b exactly.
inline void two_sum(double a, double b, double& s, double& err) noexcept {
  s = a + b;
  const double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
}

int bit_length(std::uint64_t q) {
  int bits = 0;
  while (q != 0) {
    ++bits;
    q >>= 1;
  }
  return bits;
}

// ||q * p/d|| for the rational p/d, rounded to double.
double rational_distance(std::uint64_t q, const Convergent& c) {
  mpz_class qz;
  mpz_import(qz.get_mpz_t(), 1, 1, sizeof(q), 0, 0, &q);
  mpz_class r = (qz * c.p) % c.q;
  if (r < 0) r += c.q;
  mpz_class other = c.q - r;
  const mpz_class& d = (other < r) ? other : r;
  return mpq_class(d, c.q).get_d();
}

const char* tail_name(CfTail t) {
  switch (t) {
    case CfTail::none:
      return "none";
    case CfTail::periodic:
      return "periodic";
    case CfTail::ones:
      return "ones";
  }
  return "?";
}

}  // namespace

IrrationalAlpha IrrationalAlpha::from_cf(
    std::span<const std::uint64_t> quotients, int precision_bits,
    CfTail tail) {
  if (quotients.empty()) {
    throw InvalidInput("continued fraction needs at least one quotient");
  }
  if (std::any_of(quotients.begin(), quotients.end(),
                  [](std::uint64_t a) { return a == 0; })) {
    throw InvalidInput("continued fraction quotients must be >= 1");
  }
  if (precision_bits < 53) {
    throw InvalidInput("precision_bits must be at least 53");
  }
  IrrationalAlpha alpha;
  alpha.base_.assign(quotients.begin(), quotients.end());
  alpha.tail_ = tail;
  alpha.materialize(precision_bits);
  return alpha;
}

IrrationalAlpha IrrationalAlpha::golden(int precision_bits) {
  const std::uint64_t one[] = {1};
  return from_cf(one, precision_bits, CfTail::periodic);
}

IrrationalAlpha IrrationalAlpha::sqrt2_minus_1(int precision_bits) {
  const std::uint64_t two[] = {2};
  return from_cf(two, precision_bits, CfTail::periodic);
}

IrrationalAlpha IrrationalAlpha::with_precision(int bits) const {
  if (bits <= precision_bits_ || exact_rational_) return *this;
  IrrationalAlpha out;
  out.base_ = base_;
  out.tail_ = tail_;
  out.materialize(bits);
  return out;
}

std::uint64_t IrrationalAlpha::quotient_at(std::size_t index) const {
  if (index < base_.size()) return base_[index];
  switch (tail_) {
    case CfTail::periodic:
      return base_[index % base_.size()];
    case CfTail::ones:
      return 1;
    case CfTail::none:
      return 0;
  }
  return 0;
}

void IrrationalAlpha::materialize(int bits) {
  precision_bits_ = bits;
  quotients_.clear();
  convergents_.clear();
  exact_rational_ = false;

  mpz_class target;
  mpz_ui_pow_ui(target.get_mpz_t(), 2, static_cast<unsigned long>(bits));

  // p_{-1}/q_{-1} = 1/0, p_0/q_0 = 0/1 for alpha = [0; a_1, ...].
  mpz_class p_prev = 1, q_prev = 0, p_cur = 0, q_cur = 1;
  for (std::size_t i = 0;; ++i) {
    const std::uint64_t a = quotient_at(i);
    if (a == 0) {
      exact_rational_ = true;
      break;
    }
    mpz_class az;
    mpz_import(az.get_mpz_t(), 1, 1, sizeof(a), 0, 0, &a);
    mpz_class p_next = az * p_cur + p_prev;
    mpz_class q_next = az * q_cur + q_prev;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    quotients_.push_back(a);
    convergents_.push_back({p_cur, q_cur});
    if (q_cur * q_cur >= target && convergents_.size() >= 2) break;
  }

  const mpq_class v(best_convergent().p, best_convergent().q);
  hi_ = v.get_d();
  lo_ = mpq_class(v - mpq_class(hi_)).get_d();
}

std::string IrrationalAlpha::decimal(int digits) const {
  const Convergent& c = best_convergent();
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  const mpz_class whole = c.p / c.q;
  const mpz_class frac = ((c.p % c.q) * scale) / c.q;
  std::string fs = frac.get_str();
  if (static_cast<int>(fs.size()) < digits) {
    fs.insert(0, static_cast<std::size_t>(digits) - fs.size(), '0');
  }
  return whole.get_str() + "." + fs;
}

std::pair<double, double> IrrationalAlpha::frac_multiple_dd(
    std::int64_t n) const noexcept {
  const double nd = static_cast<double>(n);
  const double p = nd * hi_;
  const double e = std::fma(nd, hi_, -p);
  const double r = p - std::floor(p);  // exact
  double s = 0.0, err = 0.0;
  two_sum(r, e + nd * lo_, s, err);
  if (s >= 1.0) {
    s -= 1.0;
  } else if (s < 0.0) {
    double t = 0.0;
    two_sum(s, 1.0, s, t);
    err += t;
  }
  if (s >= 1.0) s = kBelowOne;
  return {s, err};
}

double IrrationalAlpha::frac_multiple(std::int64_t n) const noexcept {
  const auto [hi, lo] = frac_multiple_dd(n);
  return to_unit_interval(hi + lo);
}

std::string IrrationalAlpha::id() const {
  std::ostringstream os;
  os << "cf[";
  for (std::size_t i = 0; i < base_.size(); ++i) {
    os << (i ? "," : "") << base_[i];
  }
  os << "]" << tail_name(tail_);
  return os.str();
}

double nearest_int_distance(const IrrationalAlpha& alpha, std::uint64_t q) {
  if (q == 0) throw InvalidInput("nearest_int_distance: q must be >= 1");
  const int needed = 64 + bit_length(q);
  if (alpha.precision_bits() >= needed || alpha.is_exact_rational()) {
    return rational_distance(q, alpha.best_convergent());
  }
  return rational_distance(q, alpha.with_precision(needed).best_convergent());
}

TypeEstimate estimate_type(const IrrationalAlpha& alpha, std::uint64_t q_max) {
  const int bits =
      std::max(alpha.precision_bits(), 2 * bit_length(q_max) + 64);
  const IrrationalAlpha a = alpha.with_precision(bits);
  const Convergent& best = a.best_convergent();

  mpz_class qmax_z;
  mpz_import(qmax_z.get_mpz_t(), 1, 1, sizeof(q_max), 0, 0, &q_max);

  TypeEstimate est;
  est.q_max = q_max;
  for (const Convergent& c : a.convergents()) {
    if (c.q > qmax_z) break;
    const std::uint64_t q = c.q.get_ui();
    ConvergentDistance row;
    row.q = q;
    row.distance = rational_distance(q, best);
    row.local_exponent =
        (q > 1 && row.distance > 0.0)
            ? std::log(1.0 / row.distance) / std::log(static_cast<double>(q))
            : std::numeric_limits<double>::quiet_NaN();
    est.per_convergent.push_back(row);
  }
  if (est.per_convergent.size() < 5) {
    throw InsufficientData("estimate_type: fewer than 5 convergents with q_n <= " +
                           std::to_string(q_max));
  }

  // Convergents n >= 3 (0-based index 2 onward); early ones are noise.
  double best_exp = -std::numeric_limits<double>::infinity();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 2; i < est.per_convergent.size(); ++i) {
    const auto& row = est.per_convergent[i];
    if (!std::isfinite(row.local_exponent)) continue;
    best_exp = std::max(best_exp, row.local_exponent);
    const double x = std::log(static_cast<double>(row.q));
    const double y = -std::log(row.distance);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count == 0) {
    throw InsufficientData("estimate_type: no usable convergent with n >= 3");
  }
  est.gamma_hat = best_exp;
  const double denom = count * sxx - sx * sx;
  est.gamma_fit = (count >= 2 && denom > 0) ? (count * sxy - sx * sy) / denom
                                            : best_exp;
  return est;
}

}  // namespace modwalk
