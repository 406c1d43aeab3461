#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carleman/sequences.hpp"

namespace carleman {

/// Associated functions of a log-convex sequence, evaluated piecewise from its quotients.
class GrowthProfile {
 public:
  explicit GrowthProfile(SequenceModel seq) : seq_(std::move(seq)) {}

  [[nodiscard]] const SequenceModel& sequence() const noexcept { return seq_; }

  /// h_M(t) = inf_p M_p t^p.
  [[nodiscard]] double hM(double t) const;
  /// log h_M(t) = -M(1/t); -inf at t = 0.
  [[nodiscard]] double log_hM(double t) const;
  /// M(t) = sup_p log(t^p / M_p).
  [[nodiscard]] double bigM(double t) const;
  /// M(e^s), convenient when t itself would overflow.
  [[nodiscard]] double bigM_log(double log_t) const;
  /// #{j : m_j <= r}.
  [[nodiscard]] std::size_t nu(double r) const;
  /// |int_0^t nu(r)/r dr - M(t)| with the integral summed exactly over the steps of nu.
  [[nodiscard]] double verify_M_integral(double t) const;
  /// d(r) = log M(r) / log r for r > max(1, m_0).
  [[nodiscard]] double d_of(double r) const;

  struct Jump {
    double b_plus = 0.0;  // b(m_p^+) = (p+1)/M(m_p) - d(m_p)
    double jump = 0.0;    // 1/M(m_p)
    double ratio = 0.0;   // (p+1)/M(m_p)
  };
  [[nodiscard]] Jump b_jump(std::size_t p) const;

 private:
  std::size_t count_below(double log_r) const;
  SequenceModel seq_;
};

struct IndexEstimate {
  double value = 0.0;
  double raw_proxy = 0.0;  // liminf/limsup ratio proxy over the window
  std::size_t window_lo = 0;
  std::size_t window_hi = 0;
  std::vector<double> coefficients;
  double residual_rms = 0.0;
};

/// Order of quasianalyticity from log m_n ~ omega log n + c1 log log n + c0 over [N/10, N].
IndexEstimate omega(const GrowthProfile& g, std::size_t n);

/// Order of M(r) from log n ~ rho log m_n + c1 log log n + c0 over [N/10, N].
IndexEstimate rho_order(const GrowthProfile& g, std::size_t n);

/// Exponent of convergence of a nondecreasing divergent sequence given by log c_n, n = 0..N.
IndexEstimate exponent_of_convergence(std::span<const double> log_c);

struct GammaEstimate {
  double value = 0.0;          // extrapolated to an infinite prefix
  double prefix_sup = 0.0;     // largest admissible exponent on [0, N]
  double slack = 1.0;
  std::vector<std::size_t> windows;
  std::vector<double> window_values;
};

/// Growth index: sup of g such that (p+1)^{-g} m_p is almost increasing with slack a.
GammaEstimate gamma_index(const GrowthProfile& g, std::size_t n, double slack = 1.0);

/// Largest g with (p+1)^{-g} m_p almost increasing on [0, n] (slack a).
double gamma_prefix_sup(const GrowthProfile& g, std::size_t n, double slack);

enum class SeriesClass { diverges, converges, inconclusive };

std::string_view to_string(SeriesClass c) noexcept;

struct SeriesVerdict {
  SeriesClass classification = SeriesClass::inconclusive;
  double s = 0.0;  // term ~ c n^{-s} (log n)^{-u}
  double u = 0.0;
  bool boundary = false;  // s and u both at 1: the divergent Bertrand edge
  std::size_t window_lo = 0;
  std::size_t window_hi = 0;
  double tol_s = 0.0;
  double tol_u = 0.0;
};

struct BertrandTolerances {
  double s = 0.02;
  double u = 0.05;
};

/// Fits log term_n ~ -s log n - u log log n + c over [N/10, N] and classifies the series.
SeriesVerdict classify_series(std::span<const double> log_terms, std::size_t first_index,
                              const BertrandTolerances& tol = {});

inline constexpr std::size_t default_series_prefix = 100'000;

struct QuasiVerdict {
  SeriesVerdict series;
  double gamma = 0.0;
  std::string conclusion;  // "quasianalytic", "not quasianalytic", "inconclusive"
};

/// Series test sum ((n+1) m_n)^{-1/(gamma+1)} = infinity.
QuasiVerdict korenbljum_verdict(const GrowthProfile& g, double gamma,
                                std::size_t n = default_series_prefix,
                                const BertrandTolerances& tol = {});

struct ProximateOrderCheck {
  double limit = 0.0;            // extrapolated lim (p+1)/M(m_p)
  double omega_hat = 0.0;
  double relative_error = 0.0;   // |limit * omega_hat - 1|
  double stolz_limit = 0.0;      // extrapolated lim p log(m_{p+1}/m_p)
  double stolz_last = 0.0;       // raw value at p = N
  std::size_t window_lo = 0;
  std::size_t window_hi = 0;
  double tol = 0.0;
  bool pass = false;
};

/// Whether d(r) behaves as a proximate order: (p+1)/M(m_p) -> 1/omega.
ProximateOrderCheck proximate_order_check(const GrowthProfile& g, std::size_t n, double tol = 0.02);

struct WatsonVerdict {
  double gamma = 0.0;
  double omega_hat = 0.0;
  bool precondition_met = false;
  bool quasianalytic = false;
  bool boundary = false;
  std::string note;
};

/// Flat functions exist in the class on S_gamma iff gamma <= omega.
WatsonVerdict watson_verdict(double gamma, const ProximateOrderCheck& check, double tol = 0.02);

struct SurjectivityConditions {
  double omega_hat = 0.0;
  SeriesVerdict condition_b;  // sum ((n+1) m_n)^{-1/(omega+1)}
  SeriesVerdict condition_c;  // sum m_n^{-1/omega}
};

SurjectivityConditions surjectivity_conditions(const GrowthProfile& g, double omega_hat,
                                               std::size_t n = default_series_prefix,
                                               const BertrandTolerances& tol = {});

struct PowerBoundFit {
  double rho = 1.0;       // smallest admissible factor found
  double rho_half = 1.0;  // same search restricted to the upper half of the grid (in log t)
  bool found = false;
  double cap = 0.0;
};

/// Smallest rho >= 1 with h_M(t) <= h_M(rho t)^s on all grid points.
PowerBoundFit check_hM_power(const GrowthProfile& g, double s, std::span<const double> t_grid,
                             double cap = 100.0);

}  // namespace carleman
