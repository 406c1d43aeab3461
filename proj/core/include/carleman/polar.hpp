#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace carleman {

/// Point r e^{i theta} of the Riemann surface of the logarithm; theta is not reduced.
struct PolarPoint {
  double r = 1.0;
  double theta = 0.0;

  [[nodiscard]] PolarPoint inverse() const noexcept { return {1.0 / r, -theta}; }
  [[nodiscard]] std::complex<double> to_complex() const { return std::polar(r, theta); }
};

/// Whether |theta| <= sector * pi / 2 (closed sector S_sector).
inline bool in_sector(double theta, double sector) noexcept {
  return std::abs(theta) <= sector * std::numbers::pi / 2 * (1 + 1e-14);
}

}  // namespace carleman
