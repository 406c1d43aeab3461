#include "carleman/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "carleman/error.hpp"
#include "carleman/regression.hpp"

namespace carleman {

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0) || !(hi >= lo) || n == 0) throw Error(ErrorCode::invalid_parameter, "log_grid: bad range");
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * double(i) / double(n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (!(hi >= lo) || n == 0) throw Error(ErrorCode::invalid_parameter, "linear_grid: bad range");
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * double(i) / double(n - 1);
  g.back() = hi;
  return g;
}

double end_trend(std::span<const EnvelopeSample> samples, std::span<const double> log_ratio, BoundedEnd end) {
  std::map<double, double> per_radius;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto [it, inserted] = per_radius.emplace(samples[i].r, log_ratio[i]);
    if (!inserted) it->second = std::max(it->second, log_ratio[i]);
  }
  std::vector<double> x, y;
  for (const auto& [r, v] : per_radius) {
    x.push_back(std::log(r));
    y.push_back(v);
  }
  const std::size_t n = x.size();
  if (n < 3) return 0.0;
  const std::size_t m = std::max<std::size_t>(3, n / 4);
  std::vector<double> xs, ys;
  const std::size_t first = end == BoundedEnd::inner ? 0 : n - m;
  for (std::size_t i = first; i < first + m; ++i) {
    if (std::isfinite(y[i])) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
    }
  }
  if (xs.size() < 2) return 0.0;
  const double slope = fit_slope(xs, ys);
  return end == BoundedEnd::inner ? -slope : slope;
}

EnvelopeFit fit_envelope(std::span<const EnvelopeSample> samples,
                         const std::function<double(double, double)>& log_bound,
                         std::span<const double> scales, BoundedEnd end) {
  EnvelopeFit fit;
  if (samples.empty()) {
    fit.failure = "no samples";
    return fit;
  }
  // Radii nearest to the tested end; the bound must be non-trivial there or the
  // trend test only sees the flat part of h_M.
  std::vector<double> radii;
  for (const auto& smp : samples) radii.push_back(smp.r);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  const std::size_t quarter = std::max<std::size_t>(std::min<std::size_t>(3, radii.size()), radii.size() / 4);
  const double r_cut = end == BoundedEnd::inner ? radii[quarter - 1] : radii[radii.size() - quarter];
  auto at_end = [&](double r) { return end == BoundedEnd::inner ? r <= r_cut : r >= r_cut; };

  double best_trend = INFINITY;
  std::size_t inactive = 0;
  std::vector<double> ratio(samples.size());
  for (double c : scales) {
    ++fit.scales_tried;
    bool ok = true;
    bool active = true;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      try {
        const double lb = log_bound(c, samples[i].r);
        if (lb == 0.0 && at_end(samples[i].r)) active = false;
        ratio[i] = samples[i].log_value - lb;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::range_exceeded) throw;
        ok = false;
        break;
      }
    }
    if (!ok) {
      ++fit.scales_skipped;
      continue;
    }
    if (!active) {
      ++inactive;
      continue;
    }
    double worst = -INFINITY;
    for (double v : ratio) worst = std::max(worst, v);
    if (std::isnan(worst) || worst == INFINITY) continue;
    const double trend = end_trend(samples, ratio, end);
    best_trend = std::min(best_trend, trend);
    if (trend > envelope_slope_tolerance) continue;
    fit.passed = std::isfinite(worst) || worst == -INFINITY;
    fit.scale = c;
    fit.log_constant = worst;
    fit.end_slope = trend;
    double resid = -INFINITY;
    for (double v : ratio) resid = std::max(resid, v - worst);
    fit.residual_max = resid == -INFINITY ? 0.0 : resid;
    if (fit.passed) return fit;
  }
  fit.passed = false;
  fit.end_slope = best_trend;
  fit.failure = fit.scales_skipped + inactive == fit.scales_tried
                    ? "bound not computable for any scale on the sequence range"
                    : "ratio unbounded towards the tested end for every scale";
  return fit;
}

}  // namespace carleman
