#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "carleman/error.hpp"
#include "carleman/extension.hpp"
#include "carleman/growth.hpp"
#include "carleman/moments.hpp"
#include "carleman/proximate.hpp"
#include "carleman/sequences.hpp"

#ifndef CARLEMAN_VERSION
#define CARLEMAN_VERSION "0.0.0"
#endif

namespace carleman::cli {

namespace {

using nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string kind;  // certify target
  std::string seq;
  std::string weight;
  std::string kernel = "paper";
  std::size_t prefix = 10000;
  std::optional<double> gamma;
  std::size_t count = 0;
  std::optional<double> tol;
  std::string out;
  std::string csv;
  std::uint64_t seed = 0;
  std::string subsector = "0.5:1";
  std::string coeffs;
  std::string function = "flat";
  std::vector<std::string> eval;
  double perturb = 0.0;
};

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  if (!c.kind.empty()) j["kind"] = c.kind;
  j["seq"] = c.seq;
  j["weight"] = c.weight;
  j["kernel"] = c.kernel;
  j["prefix"] = c.prefix;
  j["gamma"] = c.gamma ? ordered_json(*c.gamma) : ordered_json();
  j["count"] = c.count;
  j["tol"] = c.tol ? ordered_json(*c.tol) : ordered_json();
  j["out"] = c.out;
  j["csv"] = c.csv;
  j["seed"] = c.seed;
  j["subsector"] = c.subsector;
  j["coeffs"] = c.coeffs;
  j["function"] = c.function;
  j["eval"] = c.eval;
  j["perturb"] = c.perturb;
  return j;
}

// JSON has no inf/nan; such values are written as strings so they stay visible.
ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::invalid_parameter, what + ": cannot parse '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

Subsector parse_subsector(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw Error(ErrorCode::invalid_parameter, "subsector must be alpha:r0, got '" + s + "'");
  Subsector sub{parse_double(parts[0], "subsector alpha"), parse_double(parts[1], "subsector r0")};
  if (!(sub.alpha > 0) || !(sub.r0 > 0)) throw Error(ErrorCode::invalid_parameter, "subsector values must be > 0");
  return sub;
}

PolarPoint parse_point(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() == 1) return {parse_double(parts[0], "eval point"), 0.0};
  if (parts.size() == 2) return {parse_double(parts[0], "eval radius"), parse_double(parts[1], "eval angle")};
  throw Error(ErrorCode::invalid_parameter, "eval point must be r or r:theta, got '" + s + "'");
}

SequenceModel require_seq(const RunConfig& c) {
  if (c.seq.empty()) throw Error(ErrorCode::invalid_parameter, c.command + " needs --seq");
  return SequenceModel::parse(c.seq);
}

// For a Gevrey weight z^k the matching sequence is gevrey:1/k.
SequenceModel seq_for_weight(const RunConfig& c) {
  if (!c.seq.empty()) return SequenceModel::parse(c.seq);
  if (c.weight.rfind("gevrey:", 0) == 0) {
    const double k = parse_double(c.weight.substr(7), "weight exponent");
    if (!(k > 0)) throw Error(ErrorCode::invalid_parameter, "weight exponent must be > 0");
    return SequenceModel::gevrey(1.0 / k);
  }
  throw Error(ErrorCode::invalid_parameter, c.command + " needs --seq for weight '" + c.weight + "'");
}

Weight require_weight(const RunConfig& c, const GrowthProfile* profile) {
  if (c.weight.empty()) throw Error(ErrorCode::invalid_parameter, c.command + " needs --weight");
  return parse_weight(c.weight, profile);
}

Kernel make_kernel(const RunConfig& c, const GrowthProfile* profile) {
  if (c.kernel.rfind("classical:", 0) == 0) return parse_kernel(c.kernel, nullptr);
  const Weight w = require_weight(c, profile);
  return parse_kernel(c.kernel, &w);
}

// File path or generator: delta:<len>[:<at>], geometric:<c>:<len>, random-signs:<len>.
CoefficientSequence load_coeffs(const RunConfig& c, const SequenceModel* s) {
  if (c.coeffs.empty()) throw Error(ErrorCode::invalid_parameter, c.command + " needs --coeffs");
  const auto parts = split(c.coeffs, ':');
  auto need_seq = [&]() -> const SequenceModel& {
    if (!s) throw Error(ErrorCode::invalid_parameter, "coefficient generator needs a sequence");
    return *s;
  };
  auto len = [&](const std::string& v) {
    const double n = parse_double(v, "coefficient length");
    if (!(n >= 1 && n <= 200) || n != std::floor(n)) throw Error(ErrorCode::invalid_parameter, "coefficient length must be 1..200");
    return std::size_t(n);
  };
  if (parts[0] == "delta" && (parts.size() == 2 || parts.size() == 3)) {
    return delta_sequence(len(parts[1]), parts.size() == 3 ? std::size_t(parse_double(parts[2], "delta index")) : 0);
  }
  if (parts[0] == "geometric" && parts.size() == 3) {
    return geometric_sequence(need_seq(), parse_double(parts[1], "geometric ratio"), len(parts[2]));
  }
  if (parts[0] == "random-signs" && parts.size() == 2) {
    auto a = geometric_sequence(need_seq(), 1.0, len(parts[1]));
    std::mt19937_64 rng(c.seed);
    for (auto& v : a.a) {
      if (rng() >> 63) v = -v;
    }
    return a;
  }
  return CoefficientSequence::from_file(c.coeffs);
}

ordered_json to_json(const SeriesVerdict& v) {
  return {{"classification", std::string(to_string(v.classification))},
          {"s", num(v.s)},
          {"u", num(v.u)},
          {"boundary", v.boundary},
          {"window", {v.window_lo, v.window_hi}},
          {"tol_s", v.tol_s},
          {"tol_u", v.tol_u}};
}

ordered_json to_json(const IndexEstimate& e) {
  ordered_json coeffs = ordered_json::array();
  for (double v : e.coefficients) coeffs.push_back(num(v));
  return {{"value", num(e.value)},
          {"raw_proxy", num(e.raw_proxy)},
          {"window", {e.window_lo, e.window_hi}},
          {"coefficients", coeffs},
          {"residual_rms", num(e.residual_rms)}};
}

ordered_json to_json(const ProximateOrderCheck& c) {
  return {{"limit", num(c.limit)},
          {"omega_hat", num(c.omega_hat)},
          {"relative_error", num(c.relative_error)},
          {"stolz_limit", num(c.stolz_limit)},
          {"stolz_last", num(c.stolz_last)},
          {"window", {c.window_lo, c.window_hi}},
          {"tol", c.tol},
          {"pass", c.pass}};
}

ordered_json to_json(const RegularityReport& r) {
  ordered_json j;
  j["n"] = r.n;
  j["n_tail"] = r.n_tail;
  j["log_convex"] = {{"pass", r.log_convex.pass},
                     {"first_violation", r.log_convex.first_violation ? ordered_json(*r.log_convex.first_violation)
                                                                      : ordered_json()}};
  j["moderate_growth"] = {{"witness", num(r.moderate.witness)},
                          {"witness_half", num(r.moderate.witness_half)},
                          {"argmax", {r.moderate.argmax_p, r.moderate.argmax_l}},
                          {"growing", r.moderate.growing},
                          {"pass", r.moderate.pass}};
  j["strong_non_quasianalyticity"] = {{"witness", num(r.snq.witness)},
                                      {"witness_half", num(r.snq.witness_half)},
                                      {"tail_estimate", num(r.snq.tail_estimate)},
                                      {"tail_exponent", num(r.snq.tail_exponent)},
                                      {"heuristic", r.snq.heuristic},
                                      {"pass", r.snq.pass}};
  j["root_quotient_comparison"] = {{"witness", num(r.e107.witness)},
                                   {"checked_upto", r.e107.checked_upto},
                                   {"holds_with_moderate_witness", r.e107.holds_with_moderate_witness}};
  j["strongly_regular"] = r.strongly_regular();
  j["verdict"] = r.strongly_regular() ? "PASS" : "FAIL";
  return j;
}

ordered_json to_json(const EnvelopeFit& f) {
  return {{"passed", f.passed},
          {"scale", num(f.scale)},
          {"log_constant", num(f.log_constant)},
          {"residual_max", num(f.residual_max)},
          {"end_slope", num(f.end_slope)},
          {"scales_tried", f.scales_tried},
          {"scales_skipped", f.scales_skipped},
          {"failure", f.failure}};
}

ordered_json to_json(const FlatnessCertificate& c) {
  return {{"passed", c.passed},     {"c1", num(c.c1)},         {"c2", num(c.c2)}, {"residual", num(c.residual)},
          {"samples", c.samples},   {"fit", to_json(c.fit)},   {"failure", c.failure}};
}

ordered_json to_json(const EquivalenceConstants& e) {
  return {{"lower", num(e.lower)},
          {"upper", num(e.upper)},
          {"drift_slope", num(e.drift_slope)},
          {"verdict", std::string(to_string(e.verdict))}};
}

ordered_json to_json(const BorelSum& b) {
  return {{"terms", b.b.size()},
          {"c2", num(b.c2)},
          {"d2", num(b.d2)},
          {"radius_lower_bound", num(b.radius_lower_bound)},
          {"r0", num(b.r0)},
          {"epsilon", b.epsilon},
          {"degenerate", b.degenerate}};
}

ordered_json to_json(const AsymptoticCertificate& c) {
  return {{"passed", c.passed},
          {"C", num(c.c)},
          {"A", num(c.a)},
          {"residual_max", num(c.residual_max)},
          {"inner_trend_max", num(c.inner_trend_max)},
          {"worst_order", c.worst_order},
          {"growth_slope", num(c.growth_slope)},
          {"grid", {{"r_min", c.radii.empty() ? 0.0 : c.radii.front()},
                    {"r_max", c.radii.empty() ? 0.0 : c.radii.back()},
                    {"radial_points", c.radii.size()},
                    {"angular_points", c.angles.size()}}},
          {"failure", c.failure}};
}

ordered_json to_json(const RecoveryResult& r) {
  ordered_json re = ordered_json::array(), im = ordered_json::array(), err = ordered_json::array();
  for (std::size_t p = 0; p < r.recovered; ++p) {
    re.push_back(num(r.a.a[p].real()));
    im.push_back(num(r.a.a[p].imag()));
    err.push_back(num(r.errors[p]));
  }
  return {{"recovered", r.recovered},
          {"coeffs_re", re},
          {"coeffs_im", im},
          {"weighted_errors", err},
          {"x_hi", r.x_hi},
          {"degree", r.degree},
          {"failed", r.failed},
          {"failed_order", r.failed ? ordered_json(r.failed_order) : ordered_json()},
          {"failure", r.failure}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io_error, "cannot write " + path);
  f << text;
  if (!f) throw Error(ErrorCode::io_error, "write failed for " + path);
}

struct Outcome {
  ordered_json result;
  bool passed = true;
  bool fail_exit = false;  // a failed certificate maps to exit code 1
};

// ---------------------------------------------------------------- analyze

Outcome cmd_analyze(const RunConfig& c) {
  const auto s = require_seq(c);
  const GrowthProfile g(s);
  const std::size_t n = c.prefix;
  if (n < 1000) throw Error(ErrorCode::invalid_parameter, "analyze needs --prefix >= 1000");
  Outcome o;
  auto& r = o.result;
  r["sequence"] = s.name();
  r["prefix"] = n;
  const auto reg = certify_regularity(s, n, 4 * n);
  r["regularity"] = to_json(reg);
  o.passed = reg.strongly_regular();
  const auto om = omega(g, n);
  const auto rh = rho_order(g, n);
  r["omega"] = to_json(om);
  r["rho"] = to_json(rh);
  r["omega_times_rho"] = num(om.value * rh.value);
  const auto ga = gamma_index(g, n);
  ordered_json gw = ordered_json::array();
  for (std::size_t i = 0; i < ga.windows.size(); ++i) gw.push_back({ga.windows[i], num(ga.window_values[i])});
  r["gamma"] = {{"value", num(ga.value)}, {"prefix_sup", num(ga.prefix_sup)}, {"slack", ga.slack}, {"windows", gw}};
  const double gamma = c.gamma ? *c.gamma : om.value;
  const auto kv = korenbljum_verdict(g, gamma);
  r["korenbljum"] = {{"gamma", kv.gamma}, {"series", to_json(kv.series)}, {"conclusion", kv.conclusion}};
  const auto pc = proximate_order_check(g, n);
  r["proximate_order"] = to_json(pc);
  const auto sc = surjectivity_conditions(g, om.value);
  r["conditions_b_c"] = {{"omega_hat", num(sc.omega_hat)},
                         {"condition_b", to_json(sc.condition_b)},
                         {"condition_c", to_json(sc.condition_c)}};
  if (!c.csv.empty()) {
    const auto snap = s.prefix(std::min<std::size_t>(n, 100000));
    const double m0 = std::exp(snap->log_m.front());
    const double t_hi = std::min(1e6, std::exp(snap->log_m.back()));
    std::string text = "t,hM,M,d\n";
    for (double t : log_grid(1e-3, std::max(t_hi, 10.0), 200)) {
      double d = NAN;
      if (t > std::max(1.0, m0) * 1.01) {
        try {
          d = g.d_of(t);
        } catch (const Error&) {
        }
      }
      text += csv_num(t) + "," + csv_num(g.hM(t)) + "," + csv_num(g.bigM(t)) + "," + csv_num(d) + "\n";
    }
    write_text(c.csv, text);
  }
  return o;
}

// ---------------------------------------------------------------- quasi

Outcome cmd_quasi(const RunConfig& c) {
  const auto s = require_seq(c);
  if (!c.gamma) throw Error(ErrorCode::invalid_parameter, "quasi needs --gamma");
  const GrowthProfile g(s);
  Outcome o;
  auto& r = o.result;
  r["sequence"] = s.name();
  r["gamma"] = *c.gamma;
  const auto kv = korenbljum_verdict(g, *c.gamma, std::max<std::size_t>(c.prefix, default_series_prefix));
  r["korenbljum"] = {{"class", "A_M(S_gamma)"}, {"series", to_json(kv.series)}, {"conclusion", kv.conclusion}};
  const auto pc = proximate_order_check(g, std::max<std::size_t>(c.prefix, 1000), c.tol.value_or(0.02));
  r["proximate_order"] = to_json(pc);
  const auto wv = watson_verdict(*c.gamma, pc, c.tol.value_or(0.02));
  r["watson"] = {{"class", "tilde A_M(S_gamma)"},
                 {"omega_hat", num(wv.omega_hat)},
                 {"precondition_met", wv.precondition_met},
                 {"quasianalytic", wv.quasianalytic},
                 {"boundary", wv.boundary},
                 {"conclusion", wv.quasianalytic ? "quasianalytic" : "not quasianalytic"},
                 {"note", wv.note}};
  return o;
}

// ---------------------------------------------------------------- moments

Outcome cmd_moments(const RunConfig& c) {
  std::optional<SequenceModel> s;
  if (!c.seq.empty()) s = SequenceModel::parse(c.seq);
  std::optional<GrowthProfile> g;
  if (s) g.emplace(*s);
  const Kernel k = make_kernel(c, g ? &*g : nullptr);
  const std::size_t count = c.count ? c.count : 40;
  const auto t = moment_table(k, count, c.tol.value_or(1e-9));
  Outcome o;
  auto& r = o.result;
  r["kernel"] = k.name();
  ordered_json rows = ordered_json::array();
  for (std::size_t p = 0; p < t.size(); ++p) {
    rows.push_back({{"p", p}, {"log_m", num(t.log_values[p])}, {"rel_error", num(t.rel_errors[p])}});
  }
  r["moments"] = rows;
  if (s && count >= 8) r["equivalence"] = to_json(equivalence_certificate(t, *s, 1, count));
  if (!c.csv.empty()) {
    std::string text = "p,m,logm,relerr\n";
    for (std::size_t p = 0; p < t.size(); ++p) {
      text += std::to_string(p) + "," + csv_num(t.value(p)) + "," + csv_num(t.log_values[p]) + "," +
              csv_num(t.rel_errors[p]) + "\n";
    }
    write_text(c.csv, text);
  }
  return o;
}

// ---------------------------------------------------------------- flat

SectorFunction make_function(const RunConfig& c, const Weight& w) {
  if (c.function == "flat") return flat_function(w);
  if (c.function.rfind("const:", 0) == 0) return constant_function(parse_double(c.function.substr(6), "constant"));
  if (c.function.rfind("lift:", 0) == 0) return lift_flat(flat_function(w), parse_double(c.function.substr(5), "lift"));
  throw Error(ErrorCode::invalid_parameter, "unknown --function '" + c.function + "' (flat, const:<c>, lift:<s>)");
}

Outcome flatness_outcome(const RunConfig& c) {
  const auto s = seq_for_weight(c);
  const GrowthProfile g(s);
  const Weight w = require_weight(c, &g);
  const auto fn = make_function(c, w);
  const auto sub = parse_subsector(c.subsector);
  const auto cert = flatness_certificate(fn, g, sub);
  Outcome o;
  o.result["function"] = fn.name();
  o.result["sequence"] = s.name();
  o.result["subsector"] = {{"alpha", sub.alpha}, {"r0", sub.r0}};
  o.result["certificate"] = to_json(cert);
  o.passed = cert.passed;
  if (!c.csv.empty()) {
    std::string text = "r,theta,log_abs_G\n";
    for (double r : log_grid(sub.r0 * 1e-2, sub.r0, 25)) {
      for (double th : linear_grid(-sub.alpha * std::numbers::pi / 2, sub.alpha * std::numbers::pi / 2, 5)) {
        text += csv_num(r) + "," + csv_num(th) + "," + csv_num(double(std::log(std::abs(fn.eval(r, th))))) + "\n";
      }
    }
    write_text(c.csv, text);
  }
  return o;
}

// ---------------------------------------------------------------- extend

struct ExtensionSetup {
  SequenceModel s;
  GrowthProfile g;
  Kernel k;
  MomentTable t;
  CoefficientSequence a;
};

ExtensionSetup setup_extension(const RunConfig& c) {
  RunConfig cc = c;
  if (cc.weight.empty()) cc.weight = "gevrey:1";
  auto s = seq_for_weight(cc);
  GrowthProfile g(s);
  Kernel k = make_kernel(cc, &g);
  auto a = load_coeffs(cc, &s);
  const std::size_t need = std::max<std::size_t>({a.size(), c.count, 16}) + 1;
  auto t = moment_table(k, std::min(need, max_moment_table));
  return {std::move(s), std::move(g), std::move(k), std::move(t), std::move(a)};
}

Outcome cmd_extend(const RunConfig& c) {
  const auto e = setup_extension(c);
  const Extension f(e.a, e.k, e.t);
  Outcome o;
  auto& r = o.result;
  r["kernel"] = e.k.name();
  r["borel"] = to_json(f.borel());
  r["lambda_norm"] = {{"A", e.a.declared_A.value_or(1.0)},
                      {"value", num(lambda_norm(e.a, e.s, e.a.declared_A.value_or(1.0)).value)}};
  if (c.eval.empty()) throw Error(ErrorCode::invalid_parameter, "extend needs --eval");
  ordered_json vals = ordered_json::array();
  for (const auto& spec : c.eval) {
    const auto z = parse_point(spec);
    const auto v = f.eval(z, c.tol.value_or(1e-15));
    vals.push_back({{"r", z.r}, {"theta", z.theta}, {"re", num(double(v.real()))}, {"im", num(double(v.imag()))}});
  }
  r["values"] = vals;
  return o;
}

// ---------------------------------------------------------------- certify

Outcome cmd_certify(const RunConfig& c) {
  Outcome o;
  o.fail_exit = true;
  if (c.kind == "regularity") {
    const auto s = require_seq(c);
    const auto reg = certify_regularity(s, c.prefix, 4 * c.prefix);
    o.result["sequence"] = s.name();
    o.result["certificate"] = to_json(reg);
    o.passed = reg.strongly_regular();
    return o;
  }
  if (c.kind == "flatness") {
    auto fo = flatness_outcome(c);
    fo.fail_exit = true;
    return fo;
  }
  if (c.kind == "expansion") {
    const auto e = setup_extension(c);
    const Extension f(e.a, e.k, e.t);
    const auto sub = parse_subsector(c.subsector);
    ExpansionGrid grid;
    if (c.count) grid.n_max = c.count;
    AsymptoticCertificate cert;
    if (c.perturb != 0.0) {
      const long double shift = c.perturb;
      cert = certify_expansion([&](PolarPoint z) { return f.eval(z) + shift; }, e.a, e.s, sub, grid);
      o.result["route"] = "generic";
    } else {
      cert = certify_expansion(f, e.s, sub, grid);
      o.result["route"] = "split-remainder";
    }
    o.result["borel"] = to_json(f.borel());
    o.result["certificate"] = to_json(cert);
    o.result["n_range"] = {0, grid.n_max};
    o.passed = cert.passed;
    return o;
  }
  if (c.kind == "roundtrip") {
    const auto e = setup_extension(c);
    RightInverseConfig cfg;
    if (c.count) cfg.n_max = c.count;
    cfg.A = e.a.declared_A.value_or(1.0);
    const double threshold = c.tol.value_or(1e-3);
    cfg.grid.tol = threshold;
    const auto rep = right_inverse_check(e.a, e.k, e.t, e.s, cfg);
    ordered_json errs = ordered_json::array();
    for (double v : rep.weighted_errors) errs.push_back(num(v));
    o.result["borel"] = to_json(rep.borel);
    o.result["recovery"] = to_json(rep.recovery);
    o.result["weighted_errors"] = errs;
    o.result["distance"] = num(rep.distance);
    o.result["threshold"] = threshold;
    o.passed = rep.distance <= threshold;
    return o;
  }
  if (c.kind == "kernel") {
    RunConfig cc = c;
    if (cc.weight.empty()) cc.weight = "gevrey:1";
    const auto s = seq_for_weight(cc);
    const GrowthProfile g(s);
    const Kernel k = make_kernel(cc, &g);
    const auto sub = parse_subsector(c.subsector);
    const auto cert = kernel_bound_certificate(k, g, sub.alpha);
    o.result["kernel"] = k.name();
    o.result["certificate"] = {{"passed", cert.passed},       {"C", num(cert.c)},
                               {"K", num(cert.k)},            {"alpha", cert.alpha},
                               {"origin_integral", num(cert.origin_integral)},
                               {"fit", to_json(cert.fit)},    {"failure", cert.failure}};
    o.passed = cert.passed;
    return o;
  }
  if (c.kind == "komatsu") {
    RunConfig cc = c;
    if (cc.weight.empty() && cc.kernel.rfind("classical:", 0) != 0) cc.weight = "gevrey:1";
    const auto s = require_seq(cc);
    const GrowthProfile g(s);
    const Kernel k = make_kernel(cc, &g);
    const auto t = moment_table(k, c.count ? c.count : max_moment_table);
    const auto chk = komatsu_growth_check(t, g);
    o.result["kernel"] = k.name();
    o.result["certificate"] = {{"passed", chk.passed},         {"C_tilde", num(chk.c_tilde)},
                               {"K_tilde", num(chk.k_tilde)},  {"coeff_c", num(chk.coeff_c)},
                               {"coeff_k", num(chk.coeff_k)},  {"radii_used", chk.radii_used.size()},
                               {"fit", to_json(chk.fit)},      {"failure", chk.failure}};
    o.passed = chk.passed;
    return o;
  }
  throw Error(ErrorCode::invalid_parameter,
              "unknown certificate '" + c.kind + "' (regularity, flatness, expansion, roundtrip, kernel, komatsu)");
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_parameter:
    case ErrorCode::invalid_sequence:
    case ErrorCode::invalid_variant:
    case ErrorCode::out_of_domain:
    case ErrorCode::out_of_sector:
    case ErrorCode::not_in_class:
    case ErrorCode::io_error:
      return exit_invalid;
    default:
      return exit_numerical;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Numerical laboratory for Carleman ultraholomorphic classes", "carleman"};
  app.set_version_flag("--version", CARLEMAN_VERSION);
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seq", cfg.seq, "sequence spec, e.g. gevrey:1, alphabeta:1:2, qpower:2, file:path.json");
    sub->add_option("--weight", cfg.weight, "weight spec: gevrey:<k>, powz:<k>, fromM, json:<path>");
    sub->add_option("--kernel", cfg.kernel, "kernel: paper or classical:<k>");
    sub->add_option("--prefix", cfg.prefix, "sequence prefix length N");
    sub->add_option("--gamma", cfg.gamma, "sector opening gamma");
    sub->add_option("--count", cfg.count, "number of moments / largest order");
    sub->add_option("--tol", cfg.tol, "tolerance");
    sub->add_option("--out", cfg.out, "write the JSON report here instead of stdout");
    sub->add_option("--csv", cfg.csv, "write the plot-data grid here");
    sub->add_option("--seed", cfg.seed, "seed for randomized inputs");
    sub->add_option("--subsector", cfg.subsector, "alpha:r0");
    sub->add_option("--coeffs", cfg.coeffs, "coefficient JSON file or delta:<len>, geometric:<c>:<len>, random-signs:<len>");
    sub->add_option("--function", cfg.function, "flat, const:<c> or lift:<s>");
    sub->add_option("--eval", cfg.eval, "evaluation points r or r:theta")->delimiter(',');
    sub->add_option("--perturb", cfg.perturb, "constant added to f before certification");
  };
  struct Sub {
    const char* name;
    const char* help;
  };
  for (const Sub s : {Sub{"analyze", "regularity, indices and proximate-order report"},
                      Sub{"quasi", "quasianalyticity verdicts for a sector opening"},
                      Sub{"moments", "moment table of a kernel"},
                      Sub{"flat", "flatness certificate for a weight's flat function"},
                      Sub{"extend", "evaluate the truncated Laplace extension"},
                      Sub{"certify", "run one certificate; exit code 1 when it fails"}}) {
    auto* sub = app.add_subcommand(s.name, s.help);
    common(sub);
    if (std::string(s.name) == "certify") {
      sub->add_option("kind", cfg.kind, "regularity, flatness, expansion, roundtrip, kernel, komatsu")->required();
    }
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForVersion&) {
    out << CARLEMAN_VERSION << "\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    Outcome o;
    if (cfg.command == "analyze") o = cmd_analyze(cfg);
    else if (cfg.command == "quasi") o = cmd_quasi(cfg);
    else if (cfg.command == "moments") o = cmd_moments(cfg);
    else if (cfg.command == "flat") o = flatness_outcome(cfg);
    else if (cfg.command == "extend") o = cmd_extend(cfg);
    else o = cmd_certify(cfg);

    ordered_json report;
    report["tool"] = "carleman";
    report["version"] = CARLEMAN_VERSION;
    report["config"] = to_json(cfg);
    report["result"] = o.result;
    report["status"] = o.passed ? "PASS" : "FAIL";
    const std::string text = report.dump(2) + "\n";
    if (cfg.out.empty()) out << text;
    else write_text(cfg.out, text);
    return (!o.passed && o.fail_exit) ? exit_failed : exit_ok;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_numerical;
  }
}

}  // namespace carleman::cli
