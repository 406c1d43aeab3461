#include "carleman/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "carleman/error.hpp"
#include "carleman/quadrature.hpp"
#include "carleman/regression.hpp"
#include "carleman/summation.hpp"

namespace carleman {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double log_drop = 40.0;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

std::string_view to_string(KernelVariant v) noexcept { return v == KernelVariant::paper ? "paper" : "classical"; }

Kernel::Kernel(Weight weight, KernelVariant variant) : weight_(std::move(weight)), variant_(variant) {
  if (variant_ == KernelVariant::classical) {
    const auto k = weight_.monomial_exponent();
    if (!k) throw Error(ErrorCode::invalid_variant, "classical kernel needs a Gevrey weight z^k, got " + weight_.name());
    k_ = *k;
  }
}

std::string Kernel::name() const {
  return variant_ == KernelVariant::paper ? "paper[" + weight_.name() + "]" : "classical:" + fmt(double(k_));
}

double Kernel::opening() const noexcept { return 1.0 / weight_.rho_target(); }

std::complex<long double> Kernel::eval(long double r, long double theta) const {
  if (variant_ == KernelVariant::classical) {
    const auto zk = std::polar(std::pow(r, k_), k_ * theta);
    return k_ * zk * std::exp(-zk);
  }
  return std::polar(r, theta) * std::exp(-weight_.eval(r, theta));
}

std::complex<double> Kernel::operator()(PolarPoint z) const {
  const auto v = eval(z.r, z.theta);
  return {double(v.real()), double(v.imag())};
}

long double Kernel::log_real(long double t) const { return log_abs(t, 0); }

long double Kernel::log_abs(long double r, long double theta) const {
  if (variant_ == KernelVariant::classical) {
    return std::log(k_) + k_ * std::log(r) - std::pow(r, k_) * std::cos(k_ * theta);
  }
  return std::log(r) - weight_.eval(r, theta).real();
}

Kernel parse_kernel(std::string_view spec, const Weight* weight) {
  if (spec == "paper") {
    if (!weight) throw Error(ErrorCode::invalid_parameter, "paper kernel needs a weight");
    return Kernel(*weight, KernelVariant::paper);
  }
  if (spec == "classical") {
    if (!weight) throw Error(ErrorCode::invalid_parameter, "classical kernel needs a Gevrey weight or classical:<k>");
    return Kernel(*weight, KernelVariant::classical);
  }
  if (spec.rfind("classical:", 0) == 0) {
    const std::string rest(spec.substr(10));
    double k = 0;
    try {
      std::size_t used = 0;
      k = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_parameter, "kernel '" + std::string(spec) + "': bad exponent");
    }
    return Kernel(gevrey_weight(k), KernelVariant::classical);
  }
  throw Error(ErrorCode::invalid_parameter, "unknown kernel spec '" + std::string(spec) + "'");
}

MomentValue moment(const Kernel& k, double lambda, double tol) {
  if (!(lambda >= 0) || !std::isfinite(lambda)) throw Error(ErrorCode::invalid_parameter, "moment: lambda must be >= 0");
  const long double lam = lambda;
  // t = e^x: m(lambda) = int exp(lambda x + log e_V(e^x)) dx.
  auto phi = [&](long double x) { return lam * x + k.log_real(std::exp(x)); };
  constexpr long double step = 0.25L;
  constexpr long double x_limit = 700.0L;

  // Hill climb from x = 0 to the (unimodal) peak.
  long double x = 0, fx = phi(x);
  long double dir = phi(step) >= fx ? step : -step;
  for (;;) {
    const long double nx = x + dir;
    if (std::abs(nx) > x_limit) {
      throw Error(ErrorCode::divergence_detected,
                  k.name() + ": moment integrand does not decay (weight bounded?) at lambda=" + fmt(lambda));
    }
    const long double fn = phi(nx);
    if (!(fn >= fx)) break;
    x = nx;
    fx = fn;
  }
  const long double peak = fx;
  auto walk = [&](long double d) {
    long double y = x;
    for (;;) {
      y += d;
      if (std::abs(y) > x_limit) {
        throw Error(ErrorCode::divergence_detected, k.name() + ": moment integrand does not decay at lambda=" + fmt(lambda));
      }
      if (phi(y) < peak - log_drop) return y;
    }
  };
  const long double a = walk(-step);
  const long double b = walk(step);

  // Kinks of piecewise weights become panel boundaries.
  std::vector<long double> cuts{a};
  if (const auto& prof = k.weight().profile()) {
    const auto snap = prof->sequence().prefix_covering(double(b));
    for (double lm : snap->log_m) {
      if (lm > a && lm < b) cuts.push_back(lm);
    }
  }
  cuts.push_back(b);

  QuadratureOptions opts;
  opts.rel_tol = std::min(1e-10, tol * 0.1);
  opts.max_panels = 20000;
  const bool segmented = cuts.size() > 2;
  if (segmented) opts.initial_panels = 1;
  long double total = 0, err = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto res = integrate<long double>([&](long double y) { return std::exp(phi(y) - peak); }, cuts[i], cuts[i + 1], opts);
    if (!res.converged && res.error > 1e-3L * tol * std::max(total + res.value, 1e-300L)) {
      throw Error(ErrorCode::numerical_failure, k.name() + ": moment quadrature did not converge at lambda=" + fmt(lambda));
    }
    total += res.value;
    err += res.error;
  }
  MomentValue out;
  out.log_value = double(peak + std::log(total));
  out.value = std::exp(out.log_value);
  // Truncated tails are below e^{-40} of the peak on unimodal integrands.
  out.rel_error = double(err / total + std::exp(-log_drop) * (b - a) / total);
  if (out.rel_error > tol) {
    throw Error(ErrorCode::numerical_failure, k.name() + ": moment tolerance not met at lambda=" + fmt(lambda));
  }
  return out;
}

double MomentTable::value(std::size_t p) const { return std::exp(log_values.at(p)); }

MomentTable moment_table(const Kernel& k, std::size_t n, double tol) {
  if (n > max_moment_table) {
    throw Error(ErrorCode::invalid_parameter, "moment table limited to N <= " + std::to_string(max_moment_table));
  }
  MomentTable t;
  t.kernel = k.name();
  for (std::size_t p = 0; p <= n; ++p) {
    const auto m = moment(k, double(p), tol);
    t.log_values.push_back(m.log_value);
    t.rel_errors.push_back(m.rel_error);
  }
  return t;
}

double kernel_origin_integral(const Kernel& k, double tau) {
  QuadratureOptions opts;
  opts.rel_tol = 1e-10;
  opts.max_panels = 20000;
  const auto res = integrate<long double>([&](long double x) { return std::exp(k.log_abs(std::exp(x), tau)); },
                                          -200.0L, 0.0L, opts);
  return double(res.value);
}

KernelBoundCertificate kernel_bound_certificate(const Kernel& k, const GrowthProfile& profile, double alpha,
                                                const KernelGrid& grid) {
  if (k.weight().kind() != WeightKind::sectorial) {
    throw Error(ErrorCode::invalid_parameter, k.name() + ": kernel bound needs a sectorial weight");
  }
  if (!(alpha > 0) || !(alpha < k.opening())) {
    throw Error(ErrorCode::out_of_sector, "kernel bound: alpha must lie strictly inside S_" + fmt(k.opening()));
  }
  std::vector<EnvelopeSample> samples;
  for (double r : log_grid(grid.r_min, grid.r_max, grid.radial_points)) {
    for (double th : linear_grid(-alpha * pi / 2, alpha * pi / 2, grid.angular_points)) {
      samples.push_back({r, th, double(k.log_abs(r, th))});
    }
  }
  KernelBoundCertificate cert;
  cert.alpha = alpha;
  cert.fit = fit_envelope(samples, [&](double c, double r) { return profile.log_hM(c / r); },
                          log_grid(grid.scale_min, grid.scale_max, grid.scale_points), BoundedEnd::outer);
  cert.origin_integral = std::max(kernel_origin_integral(k, alpha * pi / 2), kernel_origin_integral(k, -alpha * pi / 2));
  if (!cert.fit.passed) {
    cert.failure = cert.fit.failure;
    return cert;
  }
  cert.k = cert.fit.scale;
  cert.c = std::exp(cert.fit.log_constant);
  cert.passed = std::isfinite(cert.c) && std::isfinite(cert.origin_integral);
  if (!cert.passed) cert.failure = "non-finite constant or origin integral";
  return cert;
}

EquivalenceConstants equivalence_certificate(const MomentTable& t, const SequenceModel& s, std::size_t p_lo,
                                             std::size_t p_hi) {
  p_lo = std::max<std::size_t>(p_lo, 1);
  if (p_hi >= t.size() || p_hi < p_lo + 3) {
    throw Error(ErrorCode::invalid_parameter, "equivalence certificate: range not inside the table");
  }
  const auto snap = s.prefix(p_hi);
  EquivalenceConstants out;
  double lo = INFINITY, hi = -INFINITY;
  std::vector<double> ratio;
  std::vector<std::size_t> idx;
  const std::size_t mid = p_lo + (p_hi - p_lo) / 2;
  for (std::size_t p = p_lo; p <= p_hi; ++p) {
    const double r = (t.log_values[p] - snap->log_M[p]) / double(p);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    if (p >= mid) {
      ratio.push_back(r);
      idx.push_back(p);
    }
  }
  out.lower = std::exp(lo);
  out.upper = std::exp(hi);
  out.drift_slope = drift_slope(ratio, idx);
  out.verdict = std::abs(out.drift_slope) <= drift_slope_tolerance ? EquivalenceVerdict::plausible
                                                                   : EquivalenceVerdict::refuted_on_prefix;
  return out;
}

EntireValue FV_eval(const MomentTable& t, std::complex<double> z, double tol) {
  if (t.size() == 0) throw Error(ErrorCode::table_exhausted, "F_V: empty table");
  EntireValue out;
  CompensatedComplexSum<long double> sum;
  const long double lr = std::log(std::abs(z));
  const long double arg = std::arg(z);
  if (z == 0.0) {
    out.value = 1.0 / t.value(0);
    out.terms = 1;
    return out;
  }
  for (std::size_t n = 0; n < t.size(); ++n) {
    const long double lt = n * lr - t.log_values[n];
    sum += std::polar(std::exp(lt), n * arg);
    if (n + 2 < t.size()) {
      const long double log_next = (n + 1) * lr - t.log_values[n + 1];
      const long double q = std::exp(lr + t.log_values[n + 1] - t.log_values[n + 2]);
      if (q < 1) {
        const long double tail = std::exp(log_next) / (1 - q);
        const long double scale = std::max(1.0L, std::abs(sum.value()));
        if (tail <= tol * scale) {
          const auto v = sum.value();
          out.value = {double(v.real()), double(v.imag())};
          out.tail_bound = double(tail);
          out.terms = n + 1;
          return out;
        }
      }
    }
  }
  throw Error(ErrorCode::table_exhausted, "F_V: table of " + std::to_string(t.size()) +
                                              " moments too short for |z|=" + fmt(std::abs(z)));
}

KomatsuCheck komatsu_growth_check(const MomentTable& t, const GrowthProfile& profile, const KomatsuGrid& grid) {
  KomatsuCheck out;
  std::vector<EnvelopeSample> samples;
  for (double r : log_grid(grid.r_min, grid.r_max, grid.radial_points)) {
    std::vector<EnvelopeSample> ring;
    try {
      for (std::size_t j = 0; j < grid.angular_points; ++j) {
        const double th = -pi + 2 * pi * double(j) / double(grid.angular_points);
        const auto f = FV_eval(t, std::polar(r, th));
        ring.push_back({r, th, std::log(std::abs(f.value))});
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::table_exhausted) throw;
      break;
    }
    out.radii_used.push_back(r);
    samples.insert(samples.end(), ring.begin(), ring.end());
  }
  if (out.radii_used.size() < 4) {
    out.failure = "moment table too short for the radial grid";
    return out;
  }
  out.fit = fit_envelope(samples, [&](double c, double r) { return profile.bigM(c * r); },
                         log_grid(grid.scale_min, grid.scale_max, grid.scale_points), BoundedEnd::outer);
  const auto eq = equivalence_certificate(t, profile.sequence(), 1, t.size() - 1);
  out.coeff_k = 1.0 / eq.lower;
  out.coeff_c = std::max(1.0, 1.0 / t.value(0));
  if (!out.fit.passed) {
    out.failure = out.fit.failure;
    return out;
  }
  out.k_tilde = out.fit.scale;
  out.c_tilde = std::exp(out.fit.log_constant);
  out.passed = std::isfinite(out.c_tilde) && std::isfinite(out.coeff_k);
  return out;
}

double log_hM_integral(const GrowthProfile& profile, double k_const, std::size_t p) {
  if (p < 1) throw Error(ErrorCode::invalid_parameter, "h_M integral needs p >= 1");
  if (!(k_const > 0)) throw Error(ErrorCode::invalid_parameter, "h_M integral needs K > 0");
  const auto& seq = profile.sequence();
  // int_0^inf u^{p-1} e^{-M(u)} du with e^{-M(u)} = M_j u^{-j} on [m_{j-1}, m_j).
  std::size_t have = std::max<std::size_t>(2 * p + 16, 64);
  auto snap = seq.prefix(have);
  const double pp = double(p);
  double total = pp * snap->log_m[0] - std::log(pp);
  std::size_t small_run = 0;
  for (std::size_t j = 1;; ++j) {
    if (j + 1 > snap->size()) {
      have *= 2;
      snap = seq.prefix(have);
    }
    const double lm_hi = snap->log_m[j];
    const double lm_lo = snap->log_m[j - 1];
    const double delta = lm_hi - lm_lo;
    const double lM = snap->log_M[j];
    double term = -INFINITY;
    if (delta > 0) {
      const double e = pp - double(j);
      if (e > 0) term = lM + e * lm_hi + std::log(-std::expm1(-e * delta)) - std::log(e);
      else if (e == 0) term = lM + std::log(delta);
      else term = lM + e * lm_lo + std::log(-std::expm1(e * delta)) - std::log(-e);
    }
    total = log_add_exp(total, term);
    if (j > p + 2) {
      small_run = term < total - 50.0 ? small_run + 1 : 0;
      if (small_run >= 5) break;
    }
  }
  return pp * std::log(k_const) + total;
}

IntegralBound hM_integral_bound(const GrowthProfile& profile, double k_const, std::size_t p_lo, std::size_t p_hi) {
  p_lo = std::max<std::size_t>(p_lo, 1);
  if (p_hi < p_lo + 3) throw Error(ErrorCode::invalid_parameter, "h_M integral bound: need at least four orders");
  IntegralBound out;
  const auto snap = profile.sequence().prefix(p_hi);
  std::vector<double> ps, y, ratio;
  std::vector<std::size_t> idx;
  for (std::size_t p = p_lo; p <= p_hi; ++p) {
    const double li = log_hM_integral(profile, k_const, p);
    out.p.push_back(p);
    out.log_integrals.push_back(li);
    ps.push_back(double(p));
    y.push_back(li - snap->log_M[p]);
  }
  const std::size_t half = ps.size() / 2;
  for (std::size_t i = half; i < ps.size(); ++i) {
    ratio.push_back(y[i] / ps[i]);
    idx.push_back(out.p[i]);
  }
  const double slope = fit_slope(ps, y);
  out.d = std::exp(slope);
  double lc = -INFINITY;
  for (std::size_t i = 0; i < ps.size(); ++i) lc = std::max(lc, y[i] - ps[i] * slope);
  out.c = std::exp(lc);
  out.drift_slope = drift_slope(ratio, idx);
  out.passed = std::isfinite(out.c) && std::isfinite(out.d) && std::abs(out.drift_slope) <= drift_slope_tolerance;
  return out;
}

}  // namespace carleman
