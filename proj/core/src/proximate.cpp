#include "carleman/proximate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "carleman/error.hpp"
#include "carleman/regression.hpp"

namespace carleman {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

std::string_view to_string(WeightKind kind) noexcept {
  return kind == WeightKind::sectorial ? "sectorial" : "real-axis";
}

Weight::Weight(std::string name, WeightKind kind, double sector, double rho_target, Evaluator eval)
    : name_(std::move(name)), kind_(kind), sector_(sector), rho_target_(rho_target), eval_(std::move(eval)) {}

std::complex<long double> Weight::eval(long double r, long double theta) const {
  if (!(r > 0)) throw Error(ErrorCode::weight_evaluation, name_ + ": modulus must be positive");
  if (kind_ == WeightKind::real_axis && theta != 0) {
    throw Error(ErrorCode::weight_evaluation, name_ + ": real-axis weight evaluated off the axis");
  }
  const auto v = eval_(r, theta);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw Error(ErrorCode::weight_evaluation, name_ + ": non-finite value");
  }
  return v;
}

std::complex<double> Weight::operator()(PolarPoint z) const {
  const auto v = eval(z.r, z.theta);
  return {double(v.real()), double(v.imag())};
}

long double Weight::real(long double r) const { return eval(r, 0).real(); }

Weight gevrey_weight(double k) {
  if (!(k > 0) || !std::isfinite(k)) throw Error(ErrorCode::invalid_parameter, "gevrey weight: k must be positive");
  const long double kk = k;
  Weight w("gevrey:" + fmt(k), WeightKind::sectorial, 2.0 / k, k,
           [kk](long double r, long double theta) { return std::polar(std::pow(r, kk), kk * theta); });
  w.k_ = k;
  return w;
}

Weight real_weight_from_M(const GrowthProfile& profile) {
  Weight w("fromM[" + profile.sequence().name() + "]", WeightKind::real_axis, 0.0, NAN,
           [profile](long double r, long double) {
             return std::complex<long double>(profile.bigM(double(r)), 0.0L);
           });
  w.profile_ = profile;
  return w;
}

Weight user_weight(const Expression& defn, double sector, double rho_target) {
  if (!(sector > 0) || !std::isfinite(sector)) {
    throw Error(ErrorCode::invalid_parameter, "user weight: sector must be positive");
  }
  return Weight("expr:" + defn.text(), WeightKind::sectorial, sector, rho_target,
                [defn](long double r, long double theta) { return defn(r, theta); });
}

Weight weight_from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_parameter, std::string("weight record: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw Error(ErrorCode::invalid_parameter, "weight record: missing \"kind\"");
  }
  const auto kind = doc["kind"].get<std::string>();
  auto number = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_number()) {
      throw Error(ErrorCode::invalid_parameter, std::string("weight record: missing number \"") + key + "\"");
    }
    return doc[key].get<double>();
  };
  if (kind == "monomial") return gevrey_weight(number("k"));
  if (kind == "expr") {
    if (!doc.contains("expr") || !doc["expr"].is_string()) {
      throw Error(ErrorCode::invalid_parameter, "weight record: missing \"expr\"");
    }
    return user_weight(Expression::parse(doc["expr"].get<std::string>()), number("sector"), number("rho"));
  }
  throw Error(ErrorCode::invalid_parameter, "weight record: unknown kind '" + kind + "'");
}

Weight parse_weight(std::string_view spec, const GrowthProfile* profile) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string rest = colon == std::string_view::npos ? std::string() : std::string(spec.substr(colon + 1));
  if (head == "gevrey" || head == "powz") {
    double k = 0;
    try {
      std::size_t used = 0;
      k = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_parameter, "weight '" + std::string(spec) + "': bad exponent");
    }
    return gevrey_weight(k);
  }
  if (head == "fromM") {
    if (!profile) throw Error(ErrorCode::invalid_parameter, "weight fromM needs a sequence");
    return real_weight_from_M(*profile);
  }
  if (head == "json") {
    std::ifstream in(rest);
    if (!in) throw Error(ErrorCode::io_error, "cannot open " + rest);
    std::stringstream ss;
    ss << in.rdbuf();
    return weight_from_json(ss.str());
  }
  throw Error(ErrorCode::invalid_parameter, "unknown weight spec '" + std::string(spec) + "'");
}

WeightValidation validate_weight(const Weight& w, const GrowthProfile& profile, const WeightGrids& grids) {
  WeightValidation out;
  const auto rs = log_grid(grids.r_min, grids.r_max, grids.radial_points);
  std::vector<long double> v(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const auto z = w.eval(rs[i], 0);
    v[i] = z.real();
    if (std::abs(z.imag()) > 1e-12L * std::max(1.0L, std::abs(z.real()))) {
      out.positive_monotone.pass = false;
      out.positive_monotone.warnings.push_back("non-real value at r=" + fmt(rs[i]));
    }
  }

  // (iii)
  out.positive_monotone.worst = double(v.front());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.positive_monotone.worst = std::min(out.positive_monotone.worst, double(v[i]));
    if (!(v[i] > 0)) out.positive_monotone.pass = false;
    if (i > 0 && v[i] < v[i - 1] * (1 - 1e-12L)) out.positive_monotone.pass = false;
  }

  // (iv) on the uniform grid in t = log r.
  std::size_t flat_points = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const long double d2 = v[i + 1] - 2 * v[i] + v[i - 1];
    const long double tol = 1e-9L * std::max(1.0L, std::abs(v[i]));
    out.convex_in_log.worst = std::min(out.convex_in_log.worst, double(d2));
    if (d2 < -tol) out.convex_in_log.pass = false;
    else if (d2 <= tol) ++flat_points;
  }
  if (flat_points > 0) {
    out.convex_in_log.warnings.push_back(std::to_string(flat_points) + " grid points without strict convexity");
  }

  // (v) slopes of log V in r must not increase.
  flat_points = 0;
  long double prev = NAN;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!(v[i] > 0) || !(v[i + 1] > 0)) continue;
    const long double slope = (std::log(v[i + 1]) - std::log(v[i])) / (rs[i + 1] - rs[i]);
    if (!std::isnan(prev)) {
      const long double excess = slope - prev;
      const long double tol = 1e-9L * std::max(1.0L, std::abs(prev));
      out.log_concave.worst = std::max(out.log_concave.worst, double(excess));
      if (excess > tol) out.log_concave.pass = false;
      else if (excess >= -tol) ++flat_points;
    }
    prev = slope;
  }
  if (flat_points > 0) {
    out.log_concave.warnings.push_back(std::to_string(flat_points) + " grid points without strict concavity");
  }

  const bool angular = w.kind() == WeightKind::sectorial;
  out.angular_checks_skipped = !angular;
  out.conjugate_symmetry.checked = angular;

  // (i) at the largest radius of the grid.
  {
    std::vector<PolarPoint> zs;
    for (double m : {0.5, 2.0, 10.0}) {
      zs.push_back({m, 0.0});
      if (angular) {
        const double th = 0.5 * w.sector() * pi / 2;
        zs.push_back({m, th});
        zs.push_back({m, -th});
      }
    }
    const double r = rs.back();
    const long double base = v.back();
    const double rho = w.rho_target();
    if (std::isnan(rho)) {
      out.regular_variation.checked = false;
      out.regular_variation.warnings.push_back("no target order declared");
    } else {
      for (const auto& z : zs) {
        const auto ratio = w.eval(r * z.r, z.theta) / base;
        const auto target = std::polar(std::pow((long double)z.r, (long double)rho), (long double)(rho * z.theta));
        const double dev = double(std::abs(ratio - target) / std::abs(target));
        out.regular_variation.worst = std::max(out.regular_variation.worst, dev);
      }
      out.regular_variation.pass = out.regular_variation.worst <= 5e-2;
    }
  }

  // (ii)
  if (angular) {
    const auto ths = linear_grid(0.0, grids.angular_fraction * w.sector() * pi / 2, grids.angular_points);
    for (double r : rs) {
      for (double th : ths) {
        const auto a = w.eval(r, th);
        const auto b = w.eval(r, -th);
        const double dev = double(std::abs(b - std::conj(a)) / std::max(1e-300L, std::abs(a)));
        out.conjugate_symmetry.worst = std::max(out.conjugate_symmetry.worst, dev);
      }
    }
    out.conjugate_symmetry.pass = out.conjugate_symmetry.worst <= 1e-10;
  }

  // (vi) e(r) = log V(r) - log M(r), i.e. (log V/log r - d(r)) log r.
  {
    const auto& seq = profile.sequence();
    const double m0 = std::exp(seq.log_quotient(0));
    const double lo = std::max(std::numbers::e, 2.0 * std::max(1.0, m0));
    auto snap = seq.prefix_covering(std::log(grids.equivalence_r_max));
    const std::size_t avail = std::min<std::size_t>(snap->size(), 100'000);
    const double hi = std::min(grids.equivalence_r_max, std::exp(snap->log_m[avail - 1]) * 0.999);
    if (!(hi > 4 * lo)) {
      out.equivalence.pass = false;
      out.equivalence.checked = false;
      out.equivalence.warnings.push_back("sequence range too short for the equivalence check");
    } else {
      const auto er = log_grid(lo, hi, 100);
      std::vector<double> lr, e;
      for (double r : er) {
        const double big = profile.bigM(r);
        const long double vr = w.real(r);
        if (!(big > 0) || !(vr > 0)) continue;
        lr.push_back(std::log(r));
        e.push_back(double(std::log(vr)) - std::log(big));
      }
      if (e.size() < 10) {
        out.equivalence.pass = false;
        out.equivalence.warnings.push_back("too few admissible radii");
      } else {
        for (double x : e) out.equivalence_residual_sup = std::max(out.equivalence_residual_sup, std::abs(x));
        const std::size_t half = e.size() / 2;
        out.equivalence_tail_slope = fit_slope(std::span(lr).subspan(half), std::span(e).subspan(half));
        const std::size_t dec = std::max<std::size_t>(1, e.size() / 10);
        double s = 0;
        for (std::size_t i = e.size() - dec; i < e.size(); ++i) s += e[i];
        out.equivalence_tail_mean = s / double(dec);
        out.equivalence.worst = out.equivalence_residual_sup;
        out.equivalence.pass = std::abs(out.equivalence_tail_slope) <= envelope_slope_tolerance;
      }
    }
  }
  return out;
}

SectorBound sector_lower_bound(const Weight& w, double alpha, const SectorGrid& grid) {
  if (w.kind() != WeightKind::sectorial) {
    throw Error(ErrorCode::invalid_parameter, w.name() + ": sector bound needs a sectorial weight");
  }
  if (!(alpha > 0)) throw Error(ErrorCode::invalid_parameter, "sector bound: alpha must be positive");
  if (alpha > w.sector()) throw Error(ErrorCode::out_of_sector, "sector bound: alpha outside the weight's sector");
  const auto rs = log_grid(grid.r_min, grid.r_max, grid.radial_points);
  const auto ths = linear_grid(-alpha * pi / 2, alpha * pi / 2, grid.angular_points);
  std::vector<double> br(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const long double vr = w.real(rs[i]);
    double b = INFINITY;
    for (double th : ths) b = std::min(b, double(w.eval(rs[i], th).real() / vr));
    br[i] = b;
  }
  double run = INFINITY;
  std::optional<std::size_t> start;
  for (std::size_t i = rs.size(); i-- > 0;) {
    run = std::min(run, br[i]);
    if (run > 0) start = i;
    else break;
  }
  if (!start) {
    throw Error(ErrorCode::lower_bound_failure,
                w.name() + ": Re V(z) / V(|z|) is not bounded below by a positive constant on S_" + fmt(alpha));
  }
  SectorBound out;
  out.r0 = rs[*start];
  out.b = *std::min_element(br.begin() + static_cast<std::ptrdiff_t>(*start), br.end());
  return out;
}

std::complex<long double> SectorFunction::eval(long double r, long double theta) const {
  if (!in_sector(double(theta), sector_)) {
    throw Error(ErrorCode::out_of_sector, name_ + ": argument " + fmt(double(theta)) + " outside S_" + fmt(sector_));
  }
  return eval_(r, theta);
}

std::complex<double> SectorFunction::operator()(PolarPoint z) const {
  const auto v = eval(z.r, z.theta);
  return {double(v.real()), double(v.imag())};
}

SectorFunction constant_function(std::complex<double> c) {
  const std::complex<long double> cc(c.real(), c.imag());
  return SectorFunction("constant", INFINITY, [cc](long double, long double) { return cc; });
}

SectorFunction flat_function(const Weight& w) {
  return SectorFunction("exp(-V(1/z))[" + w.name() + "]", w.sector(),
                        [w](long double r, long double theta) { return std::exp(-w.eval(1 / r, -theta)); });
}

SectorFunction lift_flat(const SectorFunction& g0, double s) {
  if (!(s > 0) || !std::isfinite(s)) throw Error(ErrorCode::invalid_parameter, "lift: s must be positive");
  const long double ss = s;
  return SectorFunction("lift(" + g0.name() + "," + fmt(s) + ")", g0.sector() / s,
                        [g0, ss](long double r, long double theta) { return g0.eval(std::pow(r, ss), ss * theta); });
}

FlatnessCertificate flatness_certificate(const SectorFunction& g, const GrowthProfile& profile, const Subsector& sub,
                                         const FlatnessSamples& opts) {
  if (!(sub.alpha > 0) || !(sub.alpha < g.sector())) {
    throw Error(ErrorCode::out_of_sector, "flatness: alpha must lie strictly inside the function's sector");
  }
  if (!(sub.r0 > 0)) throw Error(ErrorCode::invalid_parameter, "flatness: r0 must be positive");
  std::vector<EnvelopeSample> samples;
  for (double r : log_grid(sub.r0 * opts.inner_ratio, sub.r0, opts.radial_points)) {
    for (double th : linear_grid(-sub.alpha * pi / 2, sub.alpha * pi / 2, opts.angular_points)) {
      const long double a = std::abs(g.eval(r, th));
      samples.push_back({r, th, double(std::log(a))});
    }
  }
  const auto scales = log_grid(opts.scale_min, opts.scale_max, opts.scale_points);
  FlatnessCertificate cert;
  cert.samples = samples.size();
  cert.fit = fit_envelope(samples, [&](double c, double r) { return profile.log_hM(c * r); }, scales,
                          BoundedEnd::inner);
  if (!cert.fit.passed) {
    cert.failure = cert.fit.failure;
    return cert;
  }
  cert.c2 = cert.fit.scale;
  cert.c1 = std::exp(cert.fit.log_constant);
  cert.residual = cert.fit.residual_max;
  cert.passed = std::isfinite(cert.c1) && cert.residual <= 1e-12;
  if (!cert.passed) cert.failure = "constant not finite";
  return cert;
}

}  // namespace carleman
