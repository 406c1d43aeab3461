#include "carleman/sequences.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>

#include <json.hpp>

#include "carleman/error.hpp"
#include "carleman/regression.hpp"
#include "carleman/summation.hpp"

namespace carleman {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorCode::invalid_parameter,
                "cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(SequenceKind kind) noexcept {
  switch (kind) {
    case SequenceKind::gevrey: return "gevrey";
    case SequenceKind::gevrey_scaled: return "gevrey-scaled";
    case SequenceKind::alphabeta: return "alphabeta";
    case SequenceKind::qpower: return "qpower";
    case SequenceKind::user: return "user";
    case SequenceKind::power: return "power";
  }
  return "unknown";
}

std::string_view to_string(EquivalenceVerdict v) noexcept {
  return v == EquivalenceVerdict::plausible ? "plausible" : "refuted-on-prefix";
}

struct SequenceModel::State {
  std::string name;
  SequenceKind kind = SequenceKind::user;
  std::vector<double> parameters;
  std::optional<std::string> closed_form;
  std::size_t max_prefix = default_max_prefix;

  // Exactly one source: a closed-form log quotient, a fixed table, or a scaled base.
  std::function<double(std::size_t)> log_quotient;
  std::shared_ptr<State> base;
  double scale = 1.0;

  mutable std::mutex mutex;
  mutable std::shared_ptr<const SequencePrefix> snapshot;
  mutable CompensatedSum<double> accumulator;

  std::shared_ptr<const SequencePrefix> ensure(std::size_t n) const;
};

std::shared_ptr<const SequencePrefix> SequenceModel::State::ensure(std::size_t n) const {
  if (base) {
    // Scaled view of the base prefix; recomputed per request but bit-stable.
    std::lock_guard lock(mutex);
    if (snapshot && snapshot->size() >= n) return snapshot;
    auto src = base->ensure(std::max(n, snapshot ? 2 * snapshot->size() : std::size_t{0}));
    auto next = std::make_shared<SequencePrefix>();
    next->log_M.reserve(src->log_M.size());
    next->log_m.reserve(src->log_m.size());
    for (double v : src->log_M) next->log_M.push_back(scale * v);
    for (double v : src->log_m) next->log_m.push_back(scale * v);
    snapshot = std::move(next);
    return snapshot;
  }

  std::lock_guard lock(mutex);
  if (snapshot && snapshot->size() >= n) return snapshot;
  if (!log_quotient || n > max_prefix) {
    throw Error(ErrorCode::range_exceeded,
                name + ": requested " + std::to_string(n) + " quotients, available " +
                    std::to_string(snapshot ? snapshot->size() : 0));
  }
  const std::size_t have = snapshot ? snapshot->size() : 0;
  const std::size_t target = std::min(max_prefix, std::max({n, 2 * have, std::size_t{1024}}));
  auto next = std::make_shared<SequencePrefix>();
  if (snapshot) *next = *snapshot;
  if (next->log_M.empty()) next->log_M.push_back(0.0);
  next->log_M.reserve(target + 1);
  next->log_m.reserve(target);
  for (std::size_t p = have; p < target; ++p) {
    const double lm = log_quotient(p);
    if (!std::isfinite(lm)) {
      throw Error(ErrorCode::numerical_failure, name + ": non-finite quotient at p=" + std::to_string(p));
    }
    next->log_m.push_back(lm);
    accumulator += lm;
    next->log_M.push_back(accumulator.value());
  }
  snapshot = std::move(next);
  return snapshot;
}

SequenceModel::SequenceModel(std::shared_ptr<State> state) : state_(std::move(state)) {}

SequenceModel SequenceModel::gevrey(double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::invalid_parameter, "gevrey: alpha must be positive");
  }
  auto st = std::make_shared<State>();
  st->name = "gevrey:" + fmt(alpha);
  st->kind = SequenceKind::gevrey;
  st->parameters = {alpha};
  st->closed_form = "m_p = (p+1)^" + fmt(alpha);
  st->log_quotient = [alpha](std::size_t p) { return alpha * std::log(double(p) + 1.0); };
  return SequenceModel(std::move(st));
}

SequenceModel SequenceModel::gevrey_scaled(double a, double alpha) {
  if (!(a > 0) || !std::isfinite(a)) {
    throw Error(ErrorCode::invalid_parameter, "gevrey-scaled: a must be positive");
  }
  if (!(alpha > 0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::invalid_parameter, "gevrey-scaled: alpha must be positive");
  }
  auto st = std::make_shared<State>();
  st->name = "gevrey-scaled:" + fmt(a) + ":" + fmt(alpha);
  st->kind = SequenceKind::gevrey_scaled;
  st->parameters = {a, alpha};
  st->closed_form = "m_p = " + fmt(a) + " (p+1)^" + fmt(alpha);
  const double log_a = std::log(a);
  st->log_quotient = [log_a, alpha](std::size_t p) {
    return log_a + alpha * std::log(double(p) + 1.0);
  };
  return SequenceModel(std::move(st));
}

SequenceModel SequenceModel::alphabeta(double alpha, double beta) {
  if (!(alpha > 0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::invalid_parameter, "alphabeta: alpha must be positive");
  }
  if (!std::isfinite(beta)) throw Error(ErrorCode::invalid_parameter, "alphabeta: beta must be finite");
  auto st = std::make_shared<State>();
  st->name = "alphabeta:" + fmt(alpha) + ":" + fmt(beta);
  st->kind = SequenceKind::alphabeta;
  st->parameters = {alpha, beta};
  st->closed_form = "m_p = (p+1)^" + fmt(alpha) + " log(e+p+1)^" + fmt(beta);
  st->log_quotient = [alpha, beta](std::size_t p) {
    const double x = double(p) + 1.0;
    return alpha * std::log(x) + beta * std::log(std::log(std::numbers::e + x));
  };
  return SequenceModel(std::move(st));
}

SequenceModel SequenceModel::qpower(double q) {
  if (!(q > 1) || !std::isfinite(q)) throw Error(ErrorCode::invalid_parameter, "qpower: q must exceed 1");
  auto st = std::make_shared<State>();
  st->name = "qpower:" + fmt(q);
  st->kind = SequenceKind::qpower;
  st->parameters = {q};
  st->closed_form = "m_p = " + fmt(q) + "^(2p+1)";
  const double log_q = std::log(q);
  st->log_quotient = [log_q](std::size_t p) { return (2.0 * double(p) + 1.0) * log_q; };
  // log M_p = p^2 log q; keep well inside double range.
  st->max_prefix = static_cast<std::size_t>(std::min(1e6, std::sqrt(1e300 / log_q)));
  return SequenceModel(std::move(st));
}

SequenceModel SequenceModel::from_log_values(std::string name, std::vector<double> log_M) {
  if (log_M.size() < 2) {
    throw Error(ErrorCode::invalid_sequence, name + ": need at least two values of log M_p");
  }
  if (std::abs(log_M[0]) > 1e-12) {
    throw Error(ErrorCode::invalid_sequence, name + ": log M_0 must be 0 (M_0 = 1)");
  }
  for (std::size_t p = 0; p < log_M.size(); ++p) {
    if (!std::isfinite(log_M[p])) {
      throw Error(ErrorCode::invalid_sequence, name + ": non-finite log M_" + std::to_string(p));
    }
  }
  auto prefix = std::make_shared<SequencePrefix>();
  prefix->log_M = std::move(log_M);
  prefix->log_M[0] = 0.0;
  prefix->log_m.resize(prefix->log_M.size() - 1);
  for (std::size_t p = 0; p + 1 < prefix->log_M.size(); ++p) {
    prefix->log_m[p] = prefix->log_M[p + 1] - prefix->log_M[p];
  }
  auto st = std::make_shared<State>();
  st->name = std::move(name);
  st->kind = SequenceKind::user;
  st->max_prefix = prefix->log_m.size();
  st->snapshot = std::move(prefix);
  return SequenceModel(std::move(st));
}

SequenceModel SequenceModel::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_sequence, path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("logM") || !doc["logM"].is_array()) {
    throw Error(ErrorCode::invalid_sequence, path.string() + ": expected {\"logM\": [...]}");
  }
  std::vector<double> values;
  for (const auto& v : doc["logM"]) {
    if (!v.is_number()) throw Error(ErrorCode::invalid_sequence, path.string() + ": non-numeric entry");
    values.push_back(v.get<double>());
  }
  return from_log_values("file:" + path.string(), std::move(values));
}

SequenceModel SequenceModel::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (head == "file") {
    if (rest.empty()) throw Error(ErrorCode::invalid_parameter, "file: missing path");
    return from_file(std::filesystem::path(std::string(rest)));
  }
  std::vector<std::string_view> args;
  if (colon != std::string_view::npos) {
    std::size_t start = 0;
    for (;;) {
      const auto next = rest.find(':', start);
      args.push_back(rest.substr(start, next == std::string_view::npos ? next : next - start));
      if (next == std::string_view::npos) break;
      start = next + 1;
    }
  }
  auto expect = [&](std::size_t n) {
    if (args.size() != n) {
      throw Error(ErrorCode::invalid_parameter,
                  "'" + std::string(spec) + "': expected " + std::to_string(n) + " parameter(s)");
    }
  };
  if (head == "gevrey") {
    expect(1);
    return gevrey(parse_number(args[0], "alpha"));
  }
  if (head == "gevrey-scaled") {
    expect(2);
    return gevrey_scaled(parse_number(args[0], "a"), parse_number(args[1], "alpha"));
  }
  if (head == "alphabeta") {
    expect(2);
    return alphabeta(parse_number(args[0], "alpha"), parse_number(args[1], "beta"));
  }
  if (head == "qpower") {
    expect(1);
    return qpower(parse_number(args[0], "q"));
  }
  throw Error(ErrorCode::invalid_parameter, "unknown sequence kind '" + std::string(head) + "'");
}

const std::string& SequenceModel::name() const noexcept { return state_->name; }
SequenceKind SequenceModel::kind() const noexcept { return state_->kind; }
const std::vector<double>& SequenceModel::parameters() const noexcept { return state_->parameters; }
const std::optional<std::string>& SequenceModel::closed_form_quotient() const noexcept {
  return state_->closed_form;
}
double SequenceModel::power_scale() const noexcept { return state_->scale; }

std::optional<std::size_t> SequenceModel::max_quotients() const noexcept {
  const State* s = state_.get();
  while (s->base) s = s->base.get();
  if (s->log_quotient) return std::nullopt;
  return s->max_prefix;
}

std::shared_ptr<const SequencePrefix> SequenceModel::prefix(std::size_t n) const {
  return state_->ensure(n);
}

std::shared_ptr<const SequencePrefix> SequenceModel::prefix_covering(double log_r) const {
  auto snap = state_->ensure(1);
  const State* root = state_.get();
  while (root->base) root = root->base.get();
  for (;;) {
    if (snap->log_m.back() > log_r) return snap;
    const std::size_t have = snap->size();
    if (have >= root->max_prefix) return snap;
    snap = state_->ensure(std::min(root->max_prefix, 2 * have));
  }
}

double SequenceModel::log_M(std::size_t p) const { return prefix(p)->log_M[p]; }
double SequenceModel::log_quotient(std::size_t p) const { return prefix(p + 1)->log_m[p]; }

double quotient(const SequenceModel& s, std::size_t p) { return std::exp(s.log_quotient(p)); }

SequenceModel power_sequence(const SequenceModel& s, double exponent) {
  if (!(exponent > 0) || !std::isfinite(exponent)) {
    throw Error(ErrorCode::invalid_parameter, "power exponent must be positive");
  }
  const auto& src = *s.state_;
  std::shared_ptr<SequenceModel::State> base = src.base ? src.base : s.state_;
  const double scale = src.scale * exponent;
  // Compositions such as s then 1/s land within rounding of 1: return the base itself.
  if (std::abs(scale - 1.0) <= 4 * std::numeric_limits<double>::epsilon()) return SequenceModel(base);
  auto st = std::make_shared<SequenceModel::State>();
  st->name = "power(" + base->name + "," + fmt(scale) + ")";
  st->kind = SequenceKind::power;
  st->parameters = {scale};
  if (base->closed_form) st->closed_form = "(" + *base->closed_form + ")^" + fmt(scale);
  st->base = base;
  st->scale = scale;
  st->max_prefix = base->max_prefix;
  return SequenceModel(std::move(st));
}

double drift_slope(std::span<const double> log_ratio, std::span<const std::size_t> index) {
  std::vector<double> x;
  x.reserve(index.size());
  for (auto p : index) x.push_back(std::log(double(p)));
  return fit_slope(x, log_ratio);
}

RegularityReport certify_regularity(const SequenceModel& s, std::size_t n, std::size_t n_tail) {
  if (n < 3) throw Error(ErrorCode::invalid_parameter, "certify_regularity: N must be at least 3");
  if (n_tail < 4 * n) throw Error(ErrorCode::invalid_parameter, "certify_regularity: N_tail must be >= 4N");
  RegularityReport rep;
  rep.n = n;
  rep.n_tail = n_tail;
  const auto pre = s.prefix(n_tail + 1);
  const auto& lM = pre->log_M;
  const auto& lm = pre->log_m;

  // Log-convexity: nondecreasing quotients.
  for (std::size_t p = 1; p < n; ++p) {
    if (lm[p] < lm[p - 1] - 1e-12 * std::max(1.0, std::abs(lm[p - 1]))) {
      rep.log_convex.pass = false;
      rep.log_convex.first_violation = p;
      break;
    }
  }

  // Moderate growth witness.
  double best = 0.0, best_half = 0.0;
  for (std::size_t p = 0; p <= n / 2; ++p) {
    for (std::size_t l = std::max<std::size_t>(p, 1); p + l <= n; ++l) {
      const double v = (lM[p + l] - lM[p] - lM[l]) / double(p + l);
      if (v > best) {
        best = v;
        rep.moderate.argmax_p = p;
        rep.moderate.argmax_l = l;
      }
      if (p + l <= n / 2 && v > best_half) best_half = v;
    }
  }
  rep.moderate.witness = std::exp(best);
  rep.moderate.witness_half = std::exp(best_half);
  rep.moderate.growing = best - best_half > 0.05;
  rep.moderate.pass = !rep.moderate.growing && std::isfinite(best);

  // Strong non-quasianalyticity: log t_l = -log m_l - log(l+1).
  auto log_term = [&](std::size_t l) { return -lm[l] - std::log(double(l) + 1.0); };
  {
    std::vector<double> x, y;
    for (std::size_t l = n_tail / 10; l <= n_tail; ++l) {
      x.push_back(std::log(double(l) + 1.0));
      y.push_back(log_term(l));
    }
    const double slope = fit_slope(x, y);
    rep.snq.tail_exponent = -slope;
    rep.snq.n_tail = n_tail;
    double log_tail = -INFINITY;
    if (rep.snq.tail_exponent > 1.0) {
      log_tail = log_term(n_tail) + std::log(double(n_tail) + 1.0) - std::log(rep.snq.tail_exponent - 1.0);
      rep.snq.tail_estimate = std::exp(log_tail);
    } else {
      log_tail = INFINITY;
      rep.snq.tail_estimate = INFINITY;
    }
    double log_sum = log_tail;
    std::vector<double> log_suffix(n + 1);
    for (std::size_t l = n_tail + 1; l-- > 0;) {
      log_sum = log_add_exp(log_sum, log_term(l));
      if (l <= n) log_suffix[l] = log_sum;
    }
    double w = -INFINITY, w_half = -INFINITY;
    for (std::size_t p = 0; p <= n; ++p) {
      const double v = lm[p] + log_suffix[p];
      w = std::max(w, v);
      if (p <= n / 2) w_half = std::max(w_half, v);
    }
    rep.snq.witness = std::exp(w);
    rep.snq.witness_half = std::exp(w_half);
    rep.snq.pass = std::isfinite(w) && rep.snq.tail_exponent > 1.0 && w - w_half <= 0.05;
  }

  // (m_p <= A^2 M_p^{1/p} <= A^2 m_p) on p <= N/2.
  {
    double worst = 0.0;
    const std::size_t upto = n / 2;
    for (std::size_t p = 1; p <= upto; ++p) {
      const double root = lM[p] / double(p);
      worst = std::max({worst, lm[p] - root, root - lm[p]});
    }
    rep.e107.checked_upto = upto;
    rep.e107.witness = std::exp(worst / 2.0);
    rep.e107.holds_with_moderate_witness = worst <= 2.0 * best + 1e-12;
  }
  return rep;
}

EquivalenceConstants equivalence_constants(const SequenceModel& base, const SequenceModel& other,
                                           std::size_t n) {
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "equivalence_constants: N must be positive");
  const auto a = base.prefix(n);
  const auto b = other.prefix(n);
  EquivalenceConstants out;
  double lo = INFINITY, hi = -INFINITY;
  std::vector<double> ratio;
  std::vector<std::size_t> idx;
  const std::size_t tail_start = std::max<std::size_t>(1, n / 10);
  for (std::size_t p = 1; p <= n; ++p) {
    const double r = (b->log_M[p] - a->log_M[p]) / double(p);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    if (p >= tail_start) {
      ratio.push_back(r);
      idx.push_back(p);
    }
  }
  out.lower = std::exp(lo);
  out.upper = std::exp(hi);
  out.drift_slope = ratio.size() >= 3 ? drift_slope(ratio, idx) : 0.0;
  out.verdict = std::abs(out.drift_slope) <= drift_slope_tolerance ? EquivalenceVerdict::plausible
                                                                   : EquivalenceVerdict::refuted_on_prefix;
  return out;
}

}  // namespace carleman
