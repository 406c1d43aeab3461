#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carleman/moments.hpp"
#include "carleman/polar.hpp"
#include "carleman/proximate.hpp"
#include "carleman/sequences.hpp"

namespace carleman {

/// Asymptotic coefficients a_p = f^{(p)}(0); f ~ sum a_p z^p / p!.
struct CoefficientSequence {
  std::vector<std::complex<double>> a;
  std::optional<double> declared_A;
  std::optional<double> declared_C;
  bool truncated_generator = false;  // a finite prefix of an infinite sequence

  [[nodiscard]] std::size_t size() const noexcept { return a.size(); }
  [[nodiscard]] std::complex<double> at(std::size_t p) const { return p < a.size() ? a[p] : 0.0; }

  /// {"coeffs_re": [...], "coeffs_im": [...], "A": 1.0, "C": ...}; coeffs_im and A, C optional.
  static CoefficientSequence from_json_text(std::string_view text);
  static CoefficientSequence from_file(const std::string& path);
  [[nodiscard]] std::string to_json_text() const;
};

/// a = e_at of length len.
CoefficientSequence delta_sequence(std::size_t len, std::size_t at = 0);
/// a_p = c^p p! M_p for p < len.
CoefficientSequence geometric_sequence(const SequenceModel& s, std::complex<double> c, std::size_t len);

/// log p! by summation.
double log_factorial(std::size_t p);

struct LambdaNorm {
  double value = 0.0;
  std::size_t argmax = 0;
  bool lower_bound = false;  // sup over a prefix of a longer sequence
};

/// sup_p |a_p| / (A^p p! M_p).
LambdaNorm lambda_norm(const CoefficientSequence& a, const SequenceModel& s, double A);

/// Formal Borel transform g(u) = sum b_p u^p, b_p = a_p / (p! m_V(p)).
struct BorelSum {
  std::vector<std::complex<long double>> b;
  double c2 = 0.0;
  double d2 = 0.0;
  double radius_lower_bound = 0.0;  // 1 / D_2
  double r0 = 1.0;
  double epsilon = 0.1;
  bool degenerate = false;  // fewer than two non-zero terms; R_0 = 1

  [[nodiscard]] std::complex<long double> operator()(long double u) const;
  /// sum |b_p| u^p over p in [lo, hi).
  [[nodiscard]] long double majorant(long double u, std::size_t lo, std::size_t hi) const;
};

BorelSum formal_borel(const CoefficientSequence& a, const MomentTable& t, double epsilon = 0.1);

/// Truncated Laplace extension f(z) = int_0^{R_0} e_V(u/z) g(u) du/u.
class Extension {
 public:
  Extension(CoefficientSequence a, Kernel kernel, const MomentTable& table, double epsilon = 0.1);
  Extension(CoefficientSequence a, Kernel kernel, const MomentTable& table, BorelSum borel);

  [[nodiscard]] const CoefficientSequence& coefficients() const noexcept { return a_; }
  [[nodiscard]] const Kernel& kernel() const noexcept { return kernel_; }
  [[nodiscard]] const BorelSum& borel() const noexcept { return borel_; }
  [[nodiscard]] double r0() const noexcept { return borel_.r0; }

  [[nodiscard]] std::complex<long double> eval(PolarPoint z, double tol = 1e-18) const;
  [[nodiscard]] std::complex<double> operator()(PolarPoint z, double tol = 1e-12) const;

  /// |f(z) - sum_{p<N} a_p z^p/p!| as f_1 + f_2: the Borel tail on (0, R_0] plus the
  /// partial-sum kernel integral beyond R_0, each without cancellation.
  [[nodiscard]] long double remainder(PolarPoint z, std::size_t n, double tol = 1e-12) const;

 private:
  void check_sector(PolarPoint z) const;

  CoefficientSequence a_;
  Kernel kernel_;
  BorelSum borel_;
};

/// |f(z) - sum_{p<N} a_p z^p/p!| with compensated partial sums.
long double asymptotic_error(std::complex<long double> f_value, const CoefficientSequence& a, PolarPoint z,
                             std::size_t n);

struct ExpansionGrid {
  double r_min = 0.01;
  double r_max = 0.3;
  std::size_t radial_points = 16;
  std::size_t angular_points = 5;
  std::size_t n_max = 15;
};

struct ExpansionSample {
  double r = 0.0;
  double theta = 0.0;
  std::size_t n = 0;
  double log_error = 0.0;
  double residual = 0.0;  // log E_N - log(C A^N M_N r^N)
};

struct AsymptoticCertificate {
  bool passed = false;
  double c = 0.0;
  double a = 0.0;
  double residual_max = 0.0;
  double inner_trend_max = 0.0;  // worst growth of log(E_N / (M_N r^N)) towards z = 0
  std::size_t worst_order = 0;
  double growth_slope = 0.0;  // slope of log A_N against log N over the upper orders
  std::vector<double> radii;
  std::vector<double> angles;
  std::vector<ExpansionSample> samples;
  std::string failure;
};

/// Growth of log A_N in log N above which the envelope counts as super-geometric.
inline constexpr double expansion_growth_tolerance = 0.5;

using LogErrorFn = std::function<long double(PolarPoint z, std::size_t n)>;

/// Fits |f(z) - sum_{p<N} a_p z^p/p!| <= C A^N M_N |z|^N over the grid; `log_error` returns log E_N(z).
AsymptoticCertificate certify_expansion(const LogErrorFn& log_error, const SequenceModel& s, const Subsector& sub,
                                        const ExpansionGrid& grid = {});
/// Split-remainder route for extension outputs.
AsymptoticCertificate certify_expansion(const Extension& f, const SequenceModel& s, const Subsector& sub,
                                        const ExpansionGrid& grid = {});
/// Generic route for an arbitrary function with claimed coefficients.
AsymptoticCertificate certify_expansion(const std::function<std::complex<long double>(PolarPoint)>& f,
                                        const CoefficientSequence& a, const SequenceModel& s, const Subsector& sub,
                                        const ExpansionGrid& grid = {});

inline constexpr std::size_t max_recovery_order = 15;

struct RecoveryGrid {
  double x_max = 0.25;
  double x_min = 0.004;
  double ratio = 1.189207115002721;  // 2^{1/4}
  double tol = 1e-3;                 // weighted per-order error threshold
  std::size_t extra_degrees = 8;     // fit degrees n_max .. n_max + extra_degrees are tried
  double spread = 0.0;               // half-angle (radians) of the sampled wedge around the ray
  std::size_t rays = 3;              // rays across the wedge when spread > 0
};

struct RecoveryResult {
  CoefficientSequence a;             // orders 0..recovered-1
  std::vector<double> errors;        // weighted error estimates, same length
  std::size_t recovered = 0;
  bool failed = false;
  std::size_t failed_order = 0;
  std::vector<double> x_hi;          // per order: selected fitting window (0, x_hi]
  std::vector<std::size_t> degree;   // per order: selected polynomial degree
  std::string failure;
};

using ComplexFn = std::function<std::complex<long double>(PolarPoint)>;

/// Recovers f^{(p)}(0) along the ray arg z = theta by least-squares polynomial fits on
/// shrinking windows (0, x_hi]. Per order, the (degree, window) pair with the smallest change
/// to the neighbouring window wins, and that change is the error estimate.
RecoveryResult borel_recover(const ComplexFn& f, const SequenceModel& s, std::size_t n_max, double theta = 0.0,
                             const RecoveryGrid& grid = {});

struct RightInverseConfig {
  std::size_t n_max = 8;
  double theta = 0.0;
  double A = 1.0;
  double epsilon = 0.1;
  double spread_fraction = 0.5;  // wedge half-angle as a fraction of the kernel half-opening
  RecoveryGrid grid;
};

struct RightInverseReport {
  BorelSum borel;
  RecoveryResult recovery;
  std::vector<double> weighted_errors;  // |a^_p - a_p| / (A^p p! M_p)
  double distance = 0.0;
};

RightInverseReport right_inverse_check(const CoefficientSequence& a, const Kernel& k, const MomentTable& t,
                                       const SequenceModel& s, const RightInverseConfig& config = {});

}  // namespace carleman
