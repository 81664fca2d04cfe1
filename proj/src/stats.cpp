#include "cpphase/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "cpphase/error.hpp"

namespace cpphase::stats {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0,1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

double z_for_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0,1)");
  return normal_quantile(0.5 + level / 2);
}

Interval wilson(std::uint64_t successes, std::uint64_t trials, double level) {
  if (trials == 0) return {0.0, 1.0};
  const double z = z_for_level(level);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double centre = (p + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

Proportion proportion(std::uint64_t successes, std::uint64_t trials, double level) {
  Proportion out;
  out.successes = successes;
  out.trials = trials;
  if (trials > 0) {
    out.estimate = static_cast<double>(successes) / static_cast<double>(trials);
    out.se = std::sqrt(out.estimate * (1 - out.estimate) / static_cast<double>(trials));
  }
  out.ci = wilson(successes, trials, level);
  return out;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double standard_error(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  return std::sqrt(variance(xs) / static_cast<double>(xs.size()));
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  if (frac == 0.0) return sorted[i];
  if (std::isinf(sorted[i + 1])) return sorted[i + 1];
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

double quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  return quantile_sorted(xs, q);
}

Interval quantile_ci(std::vector<double> xs, double q, double level) {
  if (xs.empty()) return {std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN()};
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  const double z = z_for_level(level);
  const double half = z * std::sqrt(n * q * (1 - q));
  // 1-based ranks, clamped to the sample.
  const auto lo_rank = static_cast<long>(std::floor(n * q - half));
  const auto hi_rank = static_cast<long>(std::ceil(n * q + half)) + 1;
  const long last = static_cast<long>(xs.size());
  const double lo = xs[static_cast<std::size_t>(std::clamp(lo_rank, 1L, last) - 1)];
  const double hi = xs[static_cast<std::size_t>(std::clamp(hi_rank, 1L, last) - 1)];
  return {lo, hi};
}

Interval bootstrap_ci(std::span<const double> data,
                      const std::function<double(std::span<const double>)>& statistic, int reps,
                      double level, std::uint64_t stream_key) {
  if (data.empty() || reps < 2) {
    const double v = data.empty() ? std::numeric_limits<double>::quiet_NaN() : statistic(data);
    return {v, v};
  }
  StreamRng rng(stream_key);
  std::vector<double> sample(data.size());
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    for (auto& s : sample) s = data[rng.below(data.size())];
    stats.push_back(statistic(sample));
  }
  std::sort(stats.begin(), stats.end());
  const double alpha = (1 - level) / 2;
  return {quantile_sorted(stats, alpha), quantile_sorted(stats, 1 - alpha)};
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("least_squares needs >= 2 points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("least_squares: degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / static_cast<double>(x.size() - 2) / sxx);
  }
  return fit;
}

std::vector<double> isotonic_increasing(std::span<const double> y, std::span<const double> w) {
  struct Pool {
    double value;
    double weight;
    std::size_t count;
  };
  std::vector<Pool> pools;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double wi = w.empty() ? 1.0 : std::max(w[i], 1e-300);
    pools.push_back({y[i], wi, 1});
    while (pools.size() > 1 && pools[pools.size() - 2].value > pools.back().value) {
      Pool b = pools.back();
      pools.pop_back();
      Pool& a = pools.back();
      a.value = (a.value * a.weight + b.value * b.weight) / (a.weight + b.weight);
      a.weight += b.weight;
      a.count += b.count;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const auto& p : pools) out.insert(out.end(), p.count, p.value);
  return out;
}

}  // namespace cpphase::stats
