#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carleman/envelope.hpp"
#include "carleman/growth.hpp"
#include "carleman/proximate.hpp"
#include "carleman/sequences.hpp"

namespace carleman {

enum class KernelVariant { paper, classical };

std::string_view to_string(KernelVariant v) noexcept;

/// Laplace-type kernel: e_V(z) = z e^{-V(z)} (paper) or k z^k e^{-z^k} (classical Gevrey).
class Kernel {
 public:
  Kernel(Weight weight, KernelVariant variant);

  [[nodiscard]] const Weight& weight() const noexcept { return weight_; }
  [[nodiscard]] KernelVariant variant() const noexcept { return variant_; }
  [[nodiscard]] std::string name() const;
  /// Sector S_omega with omega = 1/rho_target on which the kernel estimates hold.
  [[nodiscard]] double opening() const noexcept;

  [[nodiscard]] std::complex<long double> eval(long double r, long double theta) const;
  [[nodiscard]] std::complex<double> operator()(PolarPoint z) const;
  /// log e_V(t) for real t > 0.
  [[nodiscard]] long double log_real(long double t) const;
  /// log |e_V(r e^{i theta})|.
  [[nodiscard]] long double log_abs(long double r, long double theta) const;

 private:
  Weight weight_;
  KernelVariant variant_;
  long double k_ = 0;
};

/// Kernel spec: "paper" (uses the weight) or "classical:<k>".
Kernel parse_kernel(std::string_view spec, const Weight* weight);

struct MomentValue {
  double log_value = 0.0;
  double value = 0.0;
  double rel_error = 0.0;
};

/// m_V(lambda) = int_0^inf t^{lambda-1} e_V(t) dt.
MomentValue moment(const Kernel& k, double lambda, double tol = 1e-9);

struct MomentTable {
  std::string kernel;
  std::vector<double> log_values;  // p = 0..N
  std::vector<double> rel_errors;

  [[nodiscard]] std::size_t size() const noexcept { return log_values.size(); }
  [[nodiscard]] double value(std::size_t p) const;
};

inline constexpr std::size_t max_moment_table = 200;

MomentTable moment_table(const Kernel& k, std::size_t n, double tol = 1e-9);

struct KernelGrid {
  double r_min = 0.1;
  double r_max = 50.0;
  std::size_t radial_points = 40;
  std::size_t angular_points = 21;
  double scale_min = 1e-3;
  double scale_max = 1e3;
  std::size_t scale_points = 64;
};

struct KernelBoundCertificate {
  bool passed = false;
  double c = 0.0;
  double k = 0.0;
  double alpha = 0.0;
  double origin_integral = 0.0;  // max over the boundary rays of int_0^1 |e_V(t e^{i tau})| dt/t
  EnvelopeFit fit;
  std::string failure;
};

/// |e_V(z)| <= C h_M(K/|z|) on the unbounded subsector S_alpha (sampled on the grid).
KernelBoundCertificate kernel_bound_certificate(const Kernel& k, const GrowthProfile& profile, double alpha,
                                                const KernelGrid& grid = {});

/// int_0^1 |e_V(t e^{i tau})| dt / t.
double kernel_origin_integral(const Kernel& k, double tau);

/// L, H = min, max of (m_V(p)/M_p)^{1/p} over p in [p_lo, p_hi]; drift tested on the last half.
EquivalenceConstants equivalence_certificate(const MomentTable& t, const SequenceModel& s, std::size_t p_lo,
                                             std::size_t p_hi);

struct EntireValue {
  std::complex<double> value;
  double tail_bound = 0.0;
  std::size_t terms = 0;
};

/// F_V(z) = sum z^n / m_V(n) with a ratio-test tail bound below tol * max(1, |F|).
EntireValue FV_eval(const MomentTable& t, std::complex<double> z, double tol = 1e-12);

struct KomatsuGrid {
  double r_min = 1.0;
  double r_max = 30.0;
  std::size_t radial_points = 30;
  std::size_t angular_points = 16;
  double scale_min = 1e-3;
  double scale_max = 1e3;
  std::size_t scale_points = 64;
};

struct KomatsuCheck {
  bool passed = false;
  double c_tilde = 0.0;
  double k_tilde = 0.0;
  double coeff_c = 0.0;  // 1/m_V(n) <= c k^n / M_n
  double coeff_k = 0.0;
  std::vector<double> radii_used;  // radii where the table was long enough for F_V
  EnvelopeFit fit;
  std::string failure;
};

/// |F_V(z)| <= C exp(M(K|z|)) on the grid, plus the coefficient-side bound.
KomatsuCheck komatsu_growth_check(const MomentTable& t, const GrowthProfile& profile, const KomatsuGrid& grid = {});

struct IntegralBound {
  bool passed = false;
  double c = 0.0;
  double d = 0.0;
  std::vector<std::size_t> p;
  std::vector<double> log_integrals;  // log int_0^inf t^{p-1} h_M(K/t) dt
  double drift_slope = 0.0;
};

/// Exact piecewise integrals int_0^inf t^{p-1} h_M(K/t) dt <= C D^p M_p for p in [p_lo, p_hi].
IntegralBound hM_integral_bound(const GrowthProfile& profile, double k_const, std::size_t p_lo, std::size_t p_hi);

/// log int_0^inf t^{p-1} h_M(K/t) dt for one p >= 1.
double log_hM_integral(const GrowthProfile& profile, double k_const, std::size_t p);

}  // namespace carleman
