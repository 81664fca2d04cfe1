#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cpphase/rng.hpp"

namespace cpphase::stats {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  double width() const noexcept { return hi - lo; }
};

// Standard normal quantile (Acklam's rational approximation, refined by one
// Halley step).
double normal_quantile(double p);

// Two-sided z for a central interval of the given coverage, e.g. 0.99 -> 2.5758.
double z_for_level(double level);

Interval wilson(std::uint64_t successes, std::uint64_t trials, double level = 0.95);

struct Proportion {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double se = 0.0;
  Interval ci;
};

Proportion proportion(std::uint64_t successes, std::uint64_t trials, double level = 0.95);

double mean(std::span<const double> xs);
double variance(std::span<const double> xs);  // unbiased
double standard_error(std::span<const double> xs);

// Linear-interpolation quantile of already sorted data.
double quantile_sorted(std::span<const double> sorted, double q);
double quantile(std::vector<double> xs, double q);

// Distribution-free confidence interval for the q-quantile from order
// statistics (binomial inversion, normal approximation for the ranks).
// Entries equal to +inf stand for right-censored observations.
Interval quantile_ci(std::vector<double> xs, double q, double level);

// Percentile bootstrap. `statistic` receives a resampled copy of the data.
Interval bootstrap_ci(std::span<const double> data,
                      const std::function<double(std::span<const double>)>& statistic,
                      int reps, double level, std::uint64_t stream_key);

// Ordinary least squares y = a + b x.
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_se = 0.0;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

// Pool-adjacent-violators isotonic (non-decreasing) regression with weights.
std::vector<double> isotonic_increasing(std::span<const double> y, std::span<const double> w);

}  // namespace cpphase::stats
