#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace carleman {

enum class SequenceKind { gevrey, gevrey_scaled, alphabeta, qpower, user, power };

std::string_view to_string(SequenceKind kind) noexcept;

/// Cached prefix of a sequence in log space.
/// `log_M` has one more entry than `log_m`: log_M[p] for p <= n, log_m[p] for p < n.
struct SequencePrefix {
  std::vector<double> log_M;
  std::vector<double> log_m;

  [[nodiscard]] std::size_t size() const noexcept { return log_m.size(); }
};

/// A sequence M = (M_p) of positive reals with M_0 = 1, held in natural-log space.
///
/// Copies share one immutable definition and one append-only prefix cache. The
/// cache may be extended concurrently; an index always yields the same bits
/// because values are produced by a single sequential accumulation.
class SequenceModel {
 public:
  static constexpr std::size_t default_max_prefix = 4'000'000;

  static SequenceModel gevrey(double alpha);
  static SequenceModel gevrey_scaled(double a, double alpha);
  static SequenceModel alphabeta(double alpha, double beta);
  static SequenceModel qpower(double q);
  /// Explicit table of log M_p; log M_0 must be 0.
  static SequenceModel from_log_values(std::string name, std::vector<double> log_M);
  /// JSON file `{"logM": [0.0, ...]}`.
  static SequenceModel from_file(const std::filesystem::path& path);
  /// Mini-language: gevrey:<alpha>, gevrey-scaled:<a>:<alpha>, alphabeta:<alpha>:<beta>,
  /// qpower:<q>, file:<path>.
  static SequenceModel parse(std::string_view spec);

  [[nodiscard]] const std::string& name() const noexcept;
  [[nodiscard]] SequenceKind kind() const noexcept;
  [[nodiscard]] const std::vector<double>& parameters() const noexcept;
  [[nodiscard]] const std::optional<std::string>& closed_form_quotient() const noexcept;
  /// Number of available quotients for table-backed sequences, nullopt if unbounded.
  [[nodiscard]] std::optional<std::size_t> max_quotients() const noexcept;

  [[nodiscard]] double log_M(std::size_t p) const;
  [[nodiscard]] double log_quotient(std::size_t p) const;

  /// Snapshot holding at least n quotients (and n+1 values).
  /// Throws range-exceeded past the computable range.
  [[nodiscard]] std::shared_ptr<const SequencePrefix> prefix(std::size_t n) const;

  /// Snapshot extended until the last quotient exceeds exp(log_r) (or the range ends).
  [[nodiscard]] std::shared_ptr<const SequencePrefix> prefix_covering(double log_r) const;

  /// Power scale relative to the underlying definition (1 for builtins).
  [[nodiscard]] double power_scale() const noexcept;

  friend SequenceModel power_sequence(const SequenceModel& s, double exponent);

 private:
  struct State;
  explicit SequenceModel(std::shared_ptr<State> state);
  std::shared_ptr<State> state_;
};

/// m_p = M_{p+1} / M_p.
double quotient(const SequenceModel& s, std::size_t p);

/// Sequence of s-powers (M_p^s). Composing with 1/s returns the original model.
SequenceModel power_sequence(const SequenceModel& s, double exponent);

struct LogConvexityVerdict {
  bool pass = true;
  std::optional<std::size_t> first_violation;
};

struct ModerateGrowthWitness {
  double witness = 1.0;       // max over p + l <= N of (M_{p+l}/(M_p M_l))^{1/(p+l)}
  double witness_half = 1.0;  // same maximum over p + l <= N/2
  std::size_t argmax_p = 0;
  std::size_t argmax_l = 0;
  bool growing = false;
  bool pass = true;
};

struct SnqWitness {
  double witness = 0.0;  // max_p (M_{p+1}/M_p) * sum_{l >= p} M_l / ((l+1) M_{l+1})
  double witness_half = 0.0;
  double tail_estimate = 0.0;  // extrapolated contribution beyond N_tail
  double tail_exponent = 0.0;  // fitted power-law decay of the terms
  std::size_t n_tail = 0;
  bool heuristic = true;
  bool pass = true;
};

struct E107Witness {
  double witness = 1.0;  // smallest A with m_p <= A^2 M_p^{1/p} <= A^2 m_p on the checked range
  std::size_t checked_upto = 0;
  bool holds_with_moderate_witness = true;
};

struct RegularityReport {
  std::size_t n = 0;
  std::size_t n_tail = 0;
  LogConvexityVerdict log_convex;
  ModerateGrowthWitness moderate;
  SnqWitness snq;
  E107Witness e107;

  [[nodiscard]] bool strongly_regular() const noexcept {
    return log_convex.pass && moderate.pass && snq.pass;
  }
};

/// Checks log-convexity, moderate growth and strong non-quasianalyticity on a prefix.
/// Requires n >= 3 and n_tail >= 4n.
RegularityReport certify_regularity(const SequenceModel& s, std::size_t n, std::size_t n_tail);

enum class EquivalenceVerdict { plausible, refuted_on_prefix };

std::string_view to_string(EquivalenceVerdict v) noexcept;

struct EquivalenceConstants {
  double lower = 1.0;  // L
  double upper = 1.0;  // H
  double drift_slope = 0.0;
  EquivalenceVerdict verdict = EquivalenceVerdict::plausible;
};

/// Slope threshold on log ratio versus log p used by the drift tests.
inline constexpr double drift_slope_tolerance = 0.1;

/// Fits the slope of log(ratio_p) against log p and flags a monotone drift.
/// `log_ratio[i]` belongs to index `index[i]`.
double drift_slope(std::span<const double> log_ratio, std::span<const std::size_t> index);

/// L = min, H = max over 1 <= p <= n of (M'_p / M_p)^{1/p}.
EquivalenceConstants equivalence_constants(const SequenceModel& base, const SequenceModel& other,
                                           std::size_t n);

}  // namespace carleman
