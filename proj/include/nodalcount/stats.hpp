// Empirical measures, reference laws, distances and moment accumulators.
//
// Variances are population variances (divisor = count) unless a function
// says otherwise.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "nodalcount/error.hpp"
#include "nodalcount/spectral.hpp"

namespace nodalcount {

/// Uniform atomic measure on a finite sample; values sorted ascending.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure() = default;

  explicit EmpiricalMeasure(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidInput("empirical measure needs at least one value");
    for (double v : values_)
      if (!std::isfinite(v)) throw InvalidInput("empirical measure values must be finite");
    std::sort(values_.begin(), values_.end());
  }

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  /// Left-continuous inverse cdf: smallest x with F(x) >= p, p in (0,1].
  double quantile(double p) const {
    const double m = static_cast<double>(values_.size());
    auto idx = static_cast<std::size_t>(std::ceil(p * m));
    idx = std::clamp<std::size_t>(idx, 1, values_.size());
    return values_[idx - 1];
  }

 private:
  std::vector<double> values_;
};

inline EmpiricalMeasure emp(std::span<const double> x) {
  return EmpiricalMeasure(std::vector<double>(x.begin(), x.end()));
}

/// emp((x - avg) / std) with population std.
inline EmpiricalMeasure emp_normalized(std::span<const double> x) {
  if (x.empty()) throw InvalidInput("emp_normalized needs a nonempty vector");
  Vector v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<Eigen::Index>(i)] = x[i];
  const Vector z = normalize_spectrum(v).values;
  return EmpiricalMeasure(std::vector<double>(z.begin(), z.end()));
}

inline double semicircle_pdf(double x) {
  if (x <= -2.0 || x >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

inline double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) +
         std::asin(x / 2.0) / std::numbers::pi;
}

/// Inverse of semicircle_cdf by bisection down to interval width 1e-13.
inline double semicircle_quantile(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("semicircle_quantile: p outside [0,1]");
  if (p == 0.0) return -2.0;
  if (p == 1.0) return 2.0;
  double lo = -2.0;
  double hi = 2.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (semicircle_cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Semicircle quantiles at (i - 1/2)/n, i = 1..n.
inline Vector semicircle_quantile_grid(Eigen::Index n) {
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out[i] = semicircle_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
  return out;
}

inline double normal_cdf(double x, double mean = 0.0, double std = 1.0) {
  return 0.5 * std::erfc(-(x - mean) / (std * std::numbers::sqrt2));
}

struct ReferenceLaw {
  enum class Kind { Semicircle, Normal };

  Kind kind = Kind::Semicircle;
  double mean = 0.0;
  double std = 1.0;

  static ReferenceLaw semicircle() { return {}; }
  static ReferenceLaw normal(double mean, double std) {
    if (!(std > 0.0)) throw InvalidInput("normal law needs std > 0");
    return {Kind::Normal, mean, std};
  }

  double cdf(double x) const {
    return kind == Kind::Semicircle ? semicircle_cdf(x) : normal_cdf(x, mean, std);
  }

  double quantile(double p) const {
    if (kind == Kind::Semicircle) return semicircle_quantile(p);
    if (!(p > 0.0 && p < 1.0)) throw InvalidInput("normal quantile needs p in (0,1)");
    // Bisection in standard units; the bracket covers p down to ~1e-300.
    double lo = -40.0;
    double hi = 40.0;
    while (hi - lo > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      if (normal_cdf(mid) < p)
        lo = mid;
      else
        hi = mid;
    }
    return mean + std * 0.5 * (lo + hi);
  }
};

/// Number of quantile-grid points used for W1 against a continuous law.
inline constexpr int kW1GridSize = 4096;

/// Exact W1 between two empirical measures: the integral over p of the
/// difference of their quantile functions, merged over both step grids.
inline double wasserstein1(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
  const auto& x = mu.values();
  const auto& y = nu.values();
  if (x.empty() || y.empty()) throw InvalidInput("wasserstein1 needs nonempty measures");
  if (x.size() == y.size()) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += std::abs(x[i] - y[i]);
    return sum / static_cast<double>(x.size());
  }
  const double mx = static_cast<double>(x.size());
  const double my = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double p = 0.0;
  double total = 0.0;
  while (i < x.size() && j < y.size()) {
    const double next_x = static_cast<double>(i + 1) / mx;
    const double next_y = static_cast<double>(j + 1) / my;
    const double next = std::min(next_x, next_y);
    total += (next - p) * std::abs(x[i] - y[j]);
    p = next;
    if (next_x <= next) ++i;
    if (next_y <= next) ++j;
  }
  return total;
}

/// Quantile-grid W1: mean over g of |F_emp^{-1}(p_g) - Q(p_g)| with
/// p_g = (g - 1/2)/G, G = kW1GridSize.
inline double wasserstein1(const EmpiricalMeasure& mu, const ReferenceLaw& law) {
  if (mu.size() == 0) throw InvalidInput("wasserstein1 needs a nonempty measure");
  double sum = 0.0;
  for (int g = 0; g < kW1GridSize; ++g) {
    const double p = (static_cast<double>(g) + 0.5) / kW1GridSize;
    sum += std::abs(mu.quantile(p) - law.quantile(p));
  }
  return sum / kW1GridSize;
}

/// sup_i max(|F(x_i) - i/m|, |F(x_i) - (i-1)/m|) over the sorted sample.
inline double ks_distance(const EmpiricalMeasure& sample, const ReferenceLaw& law) {
  const auto& x = sample.values();
  if (x.empty()) throw InvalidInput("ks_distance needs a nonempty sample");
  const double m = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = law.cdf(x[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i + 1) / m),
                  std::abs(f - static_cast<double>(i) / m)});
  }
  return d;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// OLS of log(ys) on log(xs).
inline LineFit loglog_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidInput("loglog_fit: length mismatch");
  if (xs.size() < 2) throw InvalidInput("loglog_fit needs at least two points");
  std::vector<double> lx(xs.size());
  std::vector<double> ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw InvalidInput("loglog_fit needs positive values");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const double mx = average(lx);
  const double my = average(ly);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidInput("loglog_fit needs at least two distinct xs");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

/// Streaming count / mean / sum of squared deviations (Welford), mergeable
/// with the pairwise update of Chan et al.
class MomentAccumulator {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const MomentAccumulator& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double delta = other.mean_ - mean_;
    const double total = na + nb;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    count_ += other.count_;
  }

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double sum_squared_deviations() const { return m2_; }

  /// Population variance; 0 for an empty accumulator.
  double variance() const { return count_ == 0 ? 0.0 : m2_ / static_cast<double>(count_); }
  /// Unbiased (n - 1) variance.
  double sample_variance() const {
    return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
  }
  double std_dev() const { return std::sqrt(variance()); }
  /// Standard error of the mean, sample std / sqrt(count).
  double standard_error() const {
    return count_ < 2 ? 0.0 : std::sqrt(sample_variance() / static_cast<double>(count_));
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Median by sorting a copy; average of the middle pair for even sizes.
inline double median(std::vector<double> x) {
  if (x.empty()) throw InvalidInput("median of empty vector");
  std::sort(x.begin(), x.end());
  const std::size_t mid = x.size() / 2;
  return x.size() % 2 == 1 ? x[mid] : 0.5 * (x[mid - 1] + x[mid]);
}

/// Linear-interpolated quantile of a sample (type 7), q in [0,1].
inline double sample_quantile(std::vector<double> x, double q) {
  if (x.empty()) throw InvalidInput("sample_quantile of empty vector");
  std::sort(x.begin(), x.end());
  const double pos = q * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

/// Number of local maxima of a Gaussian kernel density estimate evaluated on
/// `grid` points spanning the sample range. Maxima below floor * (highest
/// density) are ignored. Bandwidth <= 0 selects Silverman's rule.
inline int count_modes(std::span<const double> x, double bandwidth = 0.0, int grid = 512,
                       double floor = 0.05) {
  if (x.size() < 2) throw InvalidInput("count_modes needs at least two values");
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  if (bandwidth <= 0.0) {
    const double sd = population_std(v);
    const double iqr = sample_quantile(v, 0.75) - sample_quantile(v, 0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    bandwidth = 0.9 * spread * std::pow(static_cast<double>(v.size()), -0.2);
  }
  if (!(bandwidth > 0.0)) return 1;
  const double lo = v.front() - 3.0 * bandwidth;
  const double hi = v.back() + 3.0 * bandwidth;
  std::vector<double> density(static_cast<std::size_t>(grid), 0.0);
  for (int g = 0; g < grid; ++g) {
    const double t = lo + (hi - lo) * g / (grid - 1);
    double sum = 0.0;
    for (double xi : v) {
      const double z = (t - xi) / bandwidth;
      sum += std::exp(-0.5 * z * z);
    }
    density[static_cast<std::size_t>(g)] = sum;
  }
  const double top = *std::max_element(density.begin(), density.end());
  int modes = 0;
  for (std::size_t g = 1; g + 1 < density.size(); ++g)
    if (density[g] > density[g - 1] && density[g] >= density[g + 1] && density[g] >= floor * top) ++modes;
  return modes;
}

}  // namespace nodalcount
