#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace carleman {

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// n equally spaced values from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

struct EnvelopeSample {
  double r = 0.0;
  double theta = 0.0;
  double log_value = 0.0;
};

enum class BoundedEnd { inner, outer };

struct EnvelopeFit {
  bool passed = false;
  double scale = 0.0;         // selected scale parameter
  double log_constant = 0.0;  // log of the multiplicative constant
  double residual_max = 0.0;  // max of log value - log constant - log bound at the chosen scale
  double end_slope = 0.0;     // trend of the log ratio towards the tested end
  std::size_t scales_tried = 0;
  std::size_t scales_skipped = 0;  // bound not computable (outside the sequence range)
  std::string failure;
};

/// Trend tolerance (per unit of log r) separating bounded from growing log ratios.
inline constexpr double envelope_slope_tolerance = 0.1;

/// Slope of the per-radius maximum of log_ratio against log r over the quarter of the
/// radii nearest to `end`, signed so that a positive value means growth towards that end.
double end_trend(std::span<const EnvelopeSample> samples, std::span<const double> log_ratio, BoundedEnd end);

/// Finds the smallest scale c in `scales` for which log_value - log_bound(c, r) stays
/// bounded towards `end`, then the constant as the exact maximum of the ratio.
/// `log_bound` may throw carleman::Error(range_exceeded); such scales are skipped.
EnvelopeFit fit_envelope(std::span<const EnvelopeSample> samples,
                         const std::function<double(double scale, double r)>& log_bound,
                         std::span<const double> scales, BoundedEnd end);

}  // namespace carleman
