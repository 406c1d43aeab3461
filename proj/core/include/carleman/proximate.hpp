#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carleman/envelope.hpp"
#include "carleman/expression.hpp"
#include "carleman/growth.hpp"
#include "carleman/polar.hpp"

namespace carleman {

enum class WeightKind { sectorial, real_axis };

std::string_view to_string(WeightKind kind) noexcept;

/// Proximate-order weight V, evaluated at points of the Riemann surface of the log.
class Weight {
 public:
  using Evaluator = std::function<std::complex<long double>(long double r, long double theta)>;

  Weight(std::string name, WeightKind kind, double sector, double rho_target, Evaluator eval);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] WeightKind kind() const noexcept { return kind_; }
  /// V is analytic on S_sector, i.e. for |theta| < sector * pi / 2.
  [[nodiscard]] double sector() const noexcept { return sector_; }
  /// Intended limit of the proximate order, 1/omega(M).
  [[nodiscard]] double rho_target() const noexcept { return rho_target_; }
  /// Exponent k for monomial weights z^k.
  [[nodiscard]] std::optional<double> monomial_exponent() const noexcept { return k_; }
  /// Growth profile for the real-axis oracle weight V = M.
  [[nodiscard]] const std::optional<GrowthProfile>& profile() const noexcept { return profile_; }

  [[nodiscard]] std::complex<long double> eval(long double r, long double theta) const;
  [[nodiscard]] std::complex<double> operator()(PolarPoint z) const;
  /// V(r) for r > 0.
  [[nodiscard]] long double real(long double r) const;

  friend Weight gevrey_weight(double k);
  friend Weight real_weight_from_M(const GrowthProfile& profile);

 private:
  std::string name_;
  WeightKind kind_;
  double sector_;
  double rho_target_;
  Evaluator eval_;
  std::optional<double> k_;
  std::optional<GrowthProfile> profile_;
};

/// V(z) = z^k; analytic on S_{2/k}, rho_target = k.
Weight gevrey_weight(double k);

/// Real-axis weight V(t) = M(t); e^{-V(t)} = h_M(1/t).
Weight real_weight_from_M(const GrowthProfile& profile);

/// Wraps a user expression in z; validation is not implied.
Weight user_weight(const Expression& defn, double sector, double rho_target);

/// Weight from a JSON record, e.g. {"kind":"monomial","k":2.0} or
/// {"kind":"expr","expr":"z^2","sector":1.0,"rho":2.0}.
Weight weight_from_json(std::string_view json_text);

/// Weight spec: gevrey:<k>, powz:<k>, fromM (needs a profile), json:<path>.
Weight parse_weight(std::string_view spec, const GrowthProfile* profile = nullptr);

struct WeightGrids {
  double r_min = 1e-3;
  double r_max = 1e3;
  std::size_t radial_points = 121;
  std::size_t angular_points = 21;
  double angular_fraction = 0.98;  // fraction of the nominal half-opening sampled
  double equivalence_r_max = 1e4;
};

struct PropertyVerdict {
  bool pass = true;
  bool checked = true;
  double worst = 0.0;  // most adverse value observed
  std::vector<std::string> warnings;
};

struct WeightValidation {
  PropertyVerdict regular_variation;  // (i)  V(zr)/V(r) -> z^rho
  PropertyVerdict conjugate_symmetry; // (ii)
  PropertyVerdict positive_monotone;  // (iii)
  PropertyVerdict convex_in_log;      // (iv) t -> V(e^t) convex
  PropertyVerdict log_concave;        // (v)  log V(r) concave
  PropertyVerdict equivalence;        // (vi) log V(r) - log M(r) bounded
  double equivalence_residual_sup = 0.0;
  double equivalence_tail_slope = 0.0;
  double equivalence_tail_mean = 0.0;
  bool angular_checks_skipped = false;

  [[nodiscard]] bool all_pass() const noexcept {
    return regular_variation.pass && conjugate_symmetry.pass && positive_monotone.pass &&
           convex_in_log.pass && log_concave.pass && equivalence.pass;
  }
};

WeightValidation validate_weight(const Weight& w, const GrowthProfile& profile, const WeightGrids& grids = {});

struct SectorBound {
  double b = 0.0;
  double r0 = 0.0;
};

struct SectorGrid {
  double r_min = 1e-3;
  double r_max = 1e3;
  std::size_t radial_points = 61;
  std::size_t angular_points = 41;  // includes both boundary rays
};

/// Re V(z) >= b V(|z|) on S_alpha for |z| >= r0. Throws lower-bound-failure if no b > 0.
SectorBound sector_lower_bound(const Weight& w, double alpha, const SectorGrid& grid = {});

/// Function on the sector S_sector of the Riemann surface of the log.
class SectorFunction {
 public:
  using Evaluator = std::function<std::complex<long double>(long double r, long double theta)>;

  SectorFunction(std::string name, double sector, Evaluator eval)
      : name_(std::move(name)), sector_(sector), eval_(std::move(eval)) {}

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] double sector() const noexcept { return sector_; }
  /// Throws out-of-sector when |theta| exceeds sector * pi / 2.
  [[nodiscard]] std::complex<long double> eval(long double r, long double theta) const;
  [[nodiscard]] std::complex<double> operator()(PolarPoint z) const;

 private:
  std::string name_;
  double sector_;
  Evaluator eval_;
};

/// Constant function on the whole surface.
SectorFunction constant_function(std::complex<double> c);

/// G(z) = exp(-V(1/z)).
SectorFunction flat_function(const Weight& w);

/// G(r, theta) = G0(r^s, s theta).
SectorFunction lift_flat(const SectorFunction& g0, double s);

struct Subsector {
  double alpha = 0.5;
  double r0 = 1.0;
};

struct FlatnessSamples {
  std::size_t radial_points = 25;
  std::size_t angular_points = 21;
  double inner_ratio = 1e-2;  // radii from r0 * inner_ratio to r0
  double scale_min = 1e-3;
  double scale_max = 1e3;
  std::size_t scale_points = 64;
};

struct FlatnessCertificate {
  bool passed = false;
  double c1 = 0.0;
  double c2 = 0.0;
  double residual = 0.0;  // max log|G| - log c1 - log h_M(c2 |z|)
  std::size_t samples = 0;
  EnvelopeFit fit;
  std::string failure;
};

/// Fits |G(z)| <= c1 h_M(c2 |z|) on the bounded subsector.
FlatnessCertificate flatness_certificate(const SectorFunction& g, const GrowthProfile& profile,
                                         const Subsector& sub, const FlatnessSamples& samples = {});

}  // namespace carleman
