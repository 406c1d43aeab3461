#include "carleman/extension.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "carleman/error.hpp"
#include "carleman/quadrature.hpp"
#include "carleman/regression.hpp"
#include "carleman/summation.hpp"

namespace carleman {

namespace {

using cld = std::complex<long double>;

constexpr long double walk_step = 0.25L;
constexpr long double walk_drop = 45.0L;
constexpr int walk_max_steps = 40000;

struct Walk {
  long double end;
  long double argmax;
  long double max;
};

// Steps from s0 until the log-magnitude falls walk_drop below the largest value seen.
// Stops early at `limit` (which is then returned as the end).
template <class F>
Walk walk_until_drop(const F& log_mag, long double s0, long double step, long double limit) {
  Walk w{s0, s0, log_mag(s0)};
  long double s = s0;
  for (int i = 0; i < walk_max_steps; ++i) {
    s += step;
    if ((step > 0 && s >= limit) || (step < 0 && s <= limit)) {
      w.end = limit;
      return w;
    }
    const long double v = log_mag(s);
    if (v > w.max) {
      w.max = v;
      w.argmax = s;
    } else if (v < w.max - walk_drop) {
      w.end = s;
      return w;
    }
  }
  throw Error(ErrorCode::numerical_failure, "extension integrand does not decay");
}

QuadratureOptions extension_quadrature(double tol) {
  QuadratureOptions o;
  o.rel_tol = tol;
  o.initial_panels = 16;
  o.max_panels = 20000;
  return o;
}

}  // namespace

double log_factorial(std::size_t p) {
  CompensatedSum<double> s;
  for (std::size_t j = 2; j <= p; ++j) s += std::log(double(j));
  return s.value();
}

CoefficientSequence CoefficientSequence::from_json_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_parameter, std::string("coefficient JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("coeffs_re") || !j["coeffs_re"].is_array()) {
    throw Error(ErrorCode::invalid_parameter, "coefficient JSON needs an array 'coeffs_re'");
  }
  CoefficientSequence out;
  try {
    const auto re = j["coeffs_re"].get<std::vector<double>>();
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("coeffs_im")) {
      im = j["coeffs_im"].get<std::vector<double>>();
      if (im.size() != re.size()) throw Error(ErrorCode::invalid_parameter, "coeffs_im length differs from coeffs_re");
    }
    for (std::size_t p = 0; p < re.size(); ++p) {
      if (!std::isfinite(re[p]) || !std::isfinite(im[p])) {
        throw Error(ErrorCode::invalid_parameter, "non-finite coefficient at p=" + std::to_string(p));
      }
      out.a.emplace_back(re[p], im[p]);
    }
    if (j.contains("A")) out.declared_A = j["A"].get<double>();
    if (j.contains("C")) out.declared_C = j["C"].get<double>();
    if (j.contains("truncated")) out.truncated_generator = j["truncated"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_parameter, std::string("coefficient JSON: ") + e.what());
  }
  if (out.declared_A && !(*out.declared_A > 0)) throw Error(ErrorCode::invalid_parameter, "coefficient JSON: A must be > 0");
  return out;
}

CoefficientSequence CoefficientSequence::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string CoefficientSequence::to_json_text() const {
  nlohmann::json j;
  std::vector<double> re, im;
  for (const auto& v : a) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  j["coeffs_re"] = re;
  j["coeffs_im"] = im;
  if (declared_A) j["A"] = *declared_A;
  if (declared_C) j["C"] = *declared_C;
  if (truncated_generator) j["truncated"] = true;
  return j.dump();
}

CoefficientSequence delta_sequence(std::size_t len, std::size_t at) {
  if (at >= len) throw Error(ErrorCode::invalid_parameter, "delta_sequence: index outside length");
  CoefficientSequence s;
  s.a.assign(len, 0.0);
  s.a[at] = 1.0;
  return s;
}

CoefficientSequence geometric_sequence(const SequenceModel& s, std::complex<double> c, std::size_t len) {
  CoefficientSequence out;
  const auto snap = s.prefix(len);
  const double lc = std::log(std::abs(c));
  const double arg = std::arg(c);
  for (std::size_t p = 0; p < len; ++p) {
    if (c == 0.0) {
      out.a.emplace_back(p == 0 ? 1.0 : 0.0);
      continue;
    }
    out.a.push_back(std::polar(std::exp(double(p) * lc + log_factorial(p) + snap->log_M[p]), double(p) * arg));
  }
  out.declared_A = std::abs(c);
  out.declared_C = 1.0;
  out.truncated_generator = true;
  return out;
}

LambdaNorm lambda_norm(const CoefficientSequence& a, const SequenceModel& s, double A) {
  if (!(A > 0)) throw Error(ErrorCode::invalid_parameter, "lambda_norm: A must be > 0");
  LambdaNorm out;
  out.lower_bound = a.truncated_generator;
  if (a.size() == 0) return out;
  const auto snap = s.prefix(a.size());
  double best = -INFINITY;
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (std::abs(a.a[p]) == 0) continue;
    const double v = std::log(std::abs(a.a[p])) - double(p) * std::log(A) - log_factorial(p) - snap->log_M[p];
    if (v > best) {
      best = v;
      out.argmax = p;
    }
  }
  out.value = std::exp(best);
  return out;
}

std::complex<long double> BorelSum::operator()(long double u) const {
  cld acc = 0;
  for (std::size_t p = b.size(); p-- > 0;) acc = acc * u + b[p];
  return acc;
}

long double BorelSum::majorant(long double u, std::size_t lo, std::size_t hi) const {
  hi = std::min(hi, b.size());
  long double acc = 0;
  for (std::size_t p = hi; p-- > lo;) acc = acc * u + std::abs(b[p]);
  for (std::size_t p = 0; p < lo; ++p) acc *= u;
  return acc;
}

BorelSum formal_borel(const CoefficientSequence& a, const MomentTable& t, double epsilon) {
  if (!(epsilon > 0 && epsilon < 1)) throw Error(ErrorCode::invalid_parameter, "formal_borel: epsilon must lie in (0, 1)");
  if (a.size() > t.size()) {
    throw Error(ErrorCode::table_exhausted, "formal_borel: moment table has " + std::to_string(t.size()) +
                                                " entries, coefficients need " + std::to_string(a.size()));
  }
  BorelSum out;
  out.epsilon = epsilon;
  std::vector<double> ps, logs;
  for (std::size_t p = 0; p < a.size(); ++p) {
    const long double scale = std::exp((long double)log_factorial(p) + (long double)t.log_values[p]);
    const cld bp = cld(a.a[p].real(), a.a[p].imag()) / scale;
    out.b.push_back(bp);
    if (std::abs(bp) > 0) {
      ps.push_back(double(p));
      logs.push_back(double(std::log(std::abs(bp))));
    }
  }
  if (ps.size() < 2) {
    out.degenerate = true;
    out.r0 = 1.0;
    out.c2 = logs.empty() ? 0.0 : std::exp(logs.front());
    out.d2 = 0.0;
    out.radius_lower_bound = INFINITY;
    return out;
  }
  // Consecutive log-ratios must not keep growing, otherwise no geometric bound exists.
  std::vector<double> inc, where;
  for (std::size_t i = 1; i < ps.size(); ++i) {
    if (ps[i] == ps[i - 1] + 1 && ps[i] >= double(a.size()) / 2) {
      inc.push_back(logs[i] - logs[i - 1]);
      where.push_back(std::log(ps[i]));
    }
  }
  if (inc.size() >= 4 && fit_slope(where, inc) > expansion_growth_tolerance) {
    throw Error(ErrorCode::not_in_class, "Borel coefficients grow faster than geometrically");
  }
  const double slope = fit_slope(ps, logs);
  double lc = -INFINITY;
  for (std::size_t i = 0; i < ps.size(); ++i) lc = std::max(lc, logs[i] - ps[i] * slope);
  out.d2 = std::exp(slope);
  out.c2 = std::exp(lc);
  out.radius_lower_bound = 1.0 / out.d2;
  out.r0 = (1.0 - epsilon) / out.d2;
  return out;
}

Extension::Extension(CoefficientSequence a, Kernel kernel, const MomentTable& table, double epsilon)
    : Extension(a, kernel, table, formal_borel(a, table, epsilon)) {}

Extension::Extension(CoefficientSequence a, Kernel kernel, const MomentTable&, BorelSum borel)
    : a_(std::move(a)), kernel_(std::move(kernel)), borel_(std::move(borel)) {
  if (kernel_.weight().kind() != WeightKind::sectorial) {
    throw Error(ErrorCode::invalid_parameter, "extension needs a sectorial weight, got " + kernel_.weight().name());
  }
  if (!(borel_.r0 > 0) || !std::isfinite(borel_.r0)) throw Error(ErrorCode::invalid_parameter, "extension: R0 must be > 0");
}

void Extension::check_sector(PolarPoint z) const {
  if (!(z.r > 0)) throw Error(ErrorCode::out_of_domain, "extension: |z| must be > 0");
  if (!(std::abs(z.theta) < kernel_.opening() * std::numbers::pi / 2)) {
    throw Error(ErrorCode::out_of_sector, "extension: arg z outside the kernel sector");
  }
}

namespace {

// int over s in [lo, hi] of e_V(e^s / z) * g_part(e^s), with the range trimmed to where
// the majorant is within walk_drop of its maximum.
cld kernel_integral(const Kernel& k, const BorelSum& g, PolarPoint z, std::size_t p_lo, std::size_t p_hi,
                    long double s_lo_limit, long double s_hi_limit, bool from_right, double tol) {
  p_hi = std::min(p_hi, g.b.size());
  if (p_lo >= p_hi) return 0;
  bool any = false;
  for (std::size_t p = p_lo; p < p_hi; ++p) any = any || std::abs(g.b[p]) > 0;
  if (!any) return 0;
  const long double lr = std::log((long double)z.r);
  const long double th = z.theta;
  auto log_mag = [&](long double s) {
    const long double u = std::exp(s);
    return k.log_abs(std::exp(s - lr), -th) + std::log(g.majorant(u, p_lo, p_hi));
  };
  long double a = 0, b = 0;
  if (from_right) {
    const auto left = walk_until_drop(log_mag, s_hi_limit, -walk_step, s_lo_limit);
    a = left.end;
    const auto right = walk_until_drop(log_mag, left.argmax, walk_step, s_hi_limit);
    b = right.end;
  } else {
    const auto right = walk_until_drop(log_mag, s_lo_limit, walk_step, s_hi_limit);
    a = s_lo_limit;
    b = right.end;
  }
  auto integrand = [&](long double s) -> cld {
    const long double u = std::exp(s);
    cld part = 0;
    for (std::size_t p = p_hi; p-- > p_lo;) part = part * u + g.b[p];
    for (std::size_t p = 0; p < p_lo; ++p) part *= u;
    return k.eval(std::exp(s - lr), -th) * part;
  };
  const auto res = integrate<long double>(integrand, a, b, extension_quadrature(tol));
  if (!res.converged && res.error > 1e3L * tol * std::abs(res.value) + 1e-300L) {
    throw Error(ErrorCode::numerical_failure, "extension quadrature did not converge");
  }
  return res.value;
}

}  // namespace

std::complex<long double> Extension::eval(PolarPoint z, double tol) const {
  check_sector(z);
  const long double s_r = std::log((long double)borel_.r0);
  return kernel_integral(kernel_, borel_, z, 0, borel_.b.size(), -INFINITY, s_r, true, tol);
}

std::complex<double> Extension::operator()(PolarPoint z, double tol) const {
  const auto v = eval(z, tol);
  return {double(v.real()), double(v.imag())};
}

long double Extension::remainder(PolarPoint z, std::size_t n, double tol) const {
  check_sector(z);
  const long double s_r = std::log((long double)borel_.r0);
  const cld f1 = kernel_integral(kernel_, borel_, z, n, borel_.b.size(), -INFINITY, s_r, true, tol);
  const cld f2 = kernel_integral(kernel_, borel_, z, 0, n, s_r, INFINITY, false, tol);
  return std::abs(f1 - f2);
}

long double asymptotic_error(std::complex<long double> f_value, const CoefficientSequence& a, PolarPoint z,
                             std::size_t n) {
  CompensatedComplexSum<long double> sum;
  sum += f_value;
  const long double lr = std::log((long double)z.r);
  for (std::size_t p = 0; p < std::min(n, a.size()); ++p) {
    const cld ap(a.a[p].real(), a.a[p].imag());
    if (ap == cld(0)) continue;
    sum += -ap * std::polar(std::exp(p * lr - (long double)log_factorial(p)), (long double)p * z.theta);
  }
  return std::abs(sum.value());
}

AsymptoticCertificate certify_expansion(const LogErrorFn& log_error, const SequenceModel& s, const Subsector& sub,
                                        const ExpansionGrid& grid) {
  if (!(sub.alpha > 0) || !(sub.r0 > 0)) throw Error(ErrorCode::invalid_parameter, "certify_expansion: bad subsector");
  if (grid.n_max < 1 || grid.radial_points < 4) throw Error(ErrorCode::invalid_parameter, "certify_expansion: grid too small");
  AsymptoticCertificate cert;
  cert.radii = log_grid(grid.r_min, std::min(grid.r_max, sub.r0), grid.radial_points);
  cert.angles = grid.angular_points > 1
                    ? linear_grid(-sub.alpha * std::numbers::pi / 2, sub.alpha * std::numbers::pi / 2, grid.angular_points)
                    : std::vector<double>{0.0};
  const auto snap = s.prefix(grid.n_max);
  const std::size_t orders = grid.n_max + 1;
  std::vector<std::vector<EnvelopeSample>> by_order(orders);
  std::vector<double> log_an(orders, -INFINITY);
  for (std::size_t n = 0; n < orders; ++n) {
    for (double r : cert.radii) {
      for (double th : cert.angles) {
        const double le = double(log_error(PolarPoint{r, th}, n));
        const double rho = le - double(n) * std::log(r) - snap->log_M[n];
        by_order[n].push_back({r, th, rho});
        cert.samples.push_back({r, th, n, le, rho});
        if (n >= 1 && std::isfinite(rho)) log_an[n] = std::max(log_an[n], rho / double(n));
      }
    }
  }
  double log_a = -INFINITY;
  for (std::size_t n = 1; n < orders; ++n) log_a = std::max(log_a, log_an[n]);
  double log_c = -INFINITY;
  for (const auto& smp : cert.samples) {
    if (!std::isfinite(smp.residual)) continue;
    log_c = std::max(log_c, smp.residual - (smp.n == 0 ? 0.0 : double(smp.n) * log_a));
  }
  cert.a = std::exp(log_a);
  cert.c = std::exp(log_c);
  cert.residual_max = -INFINITY;
  for (auto& smp : cert.samples) {
    const double rho = smp.residual;
    smp.residual = std::isfinite(rho) ? rho - log_c - (smp.n == 0 ? 0.0 : double(smp.n) * log_a) : -INFINITY;
    cert.residual_max = std::max(cert.residual_max, smp.residual);
  }

  cert.inner_trend_max = -INFINITY;
  for (std::size_t n = 1; n < orders; ++n) {
    std::vector<double> ratio;
    for (const auto& e : by_order[n]) ratio.push_back(e.log_value);
    const double trend = end_trend(by_order[n], ratio, BoundedEnd::inner);
    if (trend > cert.inner_trend_max) {
      cert.inner_trend_max = trend;
      cert.worst_order = n;
    }
  }
  std::vector<double> ln, la;
  for (std::size_t n = std::max<std::size_t>(1, grid.n_max / 2); n < orders; ++n) {
    if (std::isfinite(log_an[n])) {
      ln.push_back(std::log(double(n)));
      la.push_back(log_an[n]);
    }
  }
  cert.growth_slope = ln.size() >= 3 ? fit_slope(ln, la) : 0.0;

  if (log_a == -INFINITY && log_c == -INFINITY) {
    cert.a = 0;
    cert.c = 0;
    cert.residual_max = 0;
    cert.passed = true;
    return cert;
  }
  const bool finite = std::isfinite(cert.c) && (std::isfinite(cert.a) || log_a == -INFINITY);
  if (!finite) {
    cert.failure = "non-finite constants";
  } else if (cert.inner_trend_max > envelope_slope_tolerance) {
    cert.failure = "remainder not O(M_N |z|^N) as z -> 0 at N=" + std::to_string(cert.worst_order);
  } else if (cert.growth_slope > expansion_growth_tolerance) {
    cert.failure = "envelope grows super-geometrically in N";
  } else if (cert.residual_max > 1e-9) {
    cert.failure = "residual above the fitted bound";
  } else {
    cert.passed = true;
  }
  return cert;
}

AsymptoticCertificate certify_expansion(const Extension& f, const SequenceModel& s, const Subsector& sub,
                                        const ExpansionGrid& grid) {
  return certify_expansion(
      [&](PolarPoint z, std::size_t n) { return std::log(f.remainder(z, n)); }, s, sub, grid);
}

AsymptoticCertificate certify_expansion(const std::function<std::complex<long double>(PolarPoint)>& f,
                                        const CoefficientSequence& a, const SequenceModel& s, const Subsector& sub,
                                        const ExpansionGrid& grid) {
  return certify_expansion(
      [&](PolarPoint z, std::size_t n) { return std::log(asymptotic_error(f(z), a, z, n)); }, s, sub, grid);
}

RecoveryResult borel_recover(const ComplexFn& f, const SequenceModel& s, std::size_t n_max, double theta,
                             const RecoveryGrid& grid) {
  if (n_max > max_recovery_order) {
    throw Error(ErrorCode::invalid_parameter, "borel_recover: orders above " + std::to_string(max_recovery_order) +
                                                  " are beyond extended precision");
  }
  if (!(grid.x_max > grid.x_min) || !(grid.x_min > 0) || !(grid.ratio > 1)) {
    throw Error(ErrorCode::invalid_parameter, "borel_recover: bad window grid");
  }
  // Higher fit degrees absorb the terms beyond n_max that would otherwise leak downwards.
  const std::size_t cols = n_max + 1;
  const std::size_t max_degree = n_max + grid.extra_degrees;
  const auto snap = s.prefix(n_max);
  std::vector<long double> weight(cols);  // p! M_p
  for (std::size_t p = 0; p < cols; ++p) weight[p] = std::exp((long double)log_factorial(p) + (long double)snap->log_M[p]);

  // Chebyshev nodes of (0, 1) in t = |z| / x_hi on each ray of the wedge; the same for every window.
  const std::size_t n_rays = grid.spread > 0 ? std::max<std::size_t>(grid.rays, 2) : 1;
  const std::size_t radial = 2 * (max_degree + 1);
  const std::size_t rows = radial * n_rays;
  std::vector<long double> t(radial), phi(n_rays, 0.0L);
  for (std::size_t i = 0; i < radial; ++i) t[i] = (1 + std::cos(std::numbers::pi_v<long double> * (i + 0.5L) / radial)) / 2;
  for (std::size_t j = 0; n_rays > 1 && j < n_rays; ++j) phi[j] = -grid.spread + 2 * grid.spread * j / (long double)(n_rays - 1);

  std::vector<double> windows;
  for (double x = grid.x_max; x >= grid.x_min * (1 - 1e-12); x /= grid.ratio) windows.push_back(x);
  if (windows.size() < 2) throw Error(ErrorCode::invalid_parameter, "borel_recover: need at least two windows");

  // Complex least squares as a real system: unknowns (Re c_p, Im c_p), rows (Re, Im) of each sample.
  std::vector<std::vector<long double>> rhs(windows.size(), std::vector<long double>(2 * rows));
  for (std::size_t w = 0; w < windows.size(); ++w) {
    for (std::size_t j = 0; j < n_rays; ++j) {
      for (std::size_t i = 0; i < radial; ++i) {
        const auto v = f(PolarPoint{double(windows[w] * t[i]), double(theta + phi[j])});
        rhs[w][2 * (j * radial + i)] = v.real();
        rhs[w][2 * (j * radial + i) + 1] = v.imag();
      }
    }
  }

  // weighted[d][w][p]: a^_p / (p! M_p) from the degree n_max + d fit on window w.
  std::vector<std::vector<std::vector<cld>>> weighted(grid.extra_degrees + 1);
  for (std::size_t d = 0; d <= grid.extra_degrees; ++d) {
    const std::size_t deg_cols = cols + d;
    const std::size_t unknowns = 2 * deg_cols;
    // Sample (t, phi): sum_p c_p t^p e^{i p phi}, with the ray direction theta folded into c_p.
    std::vector<long double> design(2 * rows * unknowns, 0.0L);
    for (std::size_t j = 0; j < n_rays; ++j) {
      for (std::size_t i = 0; i < radial; ++i) {
        const std::size_t row = 2 * (j * radial + i);
        long double v = 1;
        for (std::size_t p = 0; p < deg_cols; ++p) {
          const long double c = v * std::cos(p * phi[j]), sn = v * std::sin(p * phi[j]);
          design[row * unknowns + 2 * p] = c;
          design[row * unknowns + 2 * p + 1] = -sn;
          design[(row + 1) * unknowns + 2 * p] = sn;
          design[(row + 1) * unknowns + 2 * p + 1] = c;
          v *= t[i];
        }
      }
    }
    for (std::size_t w = 0; w < windows.size(); ++w) {
      const long double h = windows[w];
      const auto sol = least_squares<long double>(design, 2 * rows, unknowns, rhs[w]);
      std::vector<cld> row;
      long double hp = 1;
      for (std::size_t p = 0; p < cols; ++p) {
        const cld c(sol[2 * p] / hp, sol[2 * p + 1] / hp);
        const long double fact = std::exp((long double)log_factorial(p));
        row.push_back(fact * c * std::polar(1.0L, -(long double)p * theta) / weight[p]);
        hp *= h;
      }
      weighted[d].push_back(std::move(row));
    }
  }

  // Each order takes the (degree, window) pair whose estimate moves least to the next window.
  RecoveryResult out;
  for (std::size_t p = 0; p < cols; ++p) {
    std::size_t best = 0, best_d = 0;
    long double best_diff = INFINITY;
    for (std::size_t d = 0; d <= grid.extra_degrees; ++d) {
      for (std::size_t w = 0; w + 1 < windows.size(); ++w) {
        const long double diff = std::abs(weighted[d][w][p] - weighted[d][w + 1][p]);
        if (diff < best_diff) {
          best_diff = diff;
          best = w;
          best_d = d;
        }
      }
    }
    const double err = double(best_diff);
    if (!(err <= grid.tol)) {
      out.failed = true;
      out.failed_order = p;
      char buf[160];
      std::snprintf(buf, sizeof buf, "extrapolation did not settle at order %zu (weighted change %.3g)", p, err);
      out.failure = buf;
      break;
    }
    const cld a = weighted[best_d][best][p] * weight[p];
    out.a.a.emplace_back(double(a.real()), double(a.imag()));
    out.errors.push_back(err);
    out.x_hi.push_back(windows[best]);
    out.degree.push_back(n_max + best_d);
  }
  out.recovered = out.a.size();
  return out;
}

RightInverseReport right_inverse_check(const CoefficientSequence& a, const Kernel& k, const MomentTable& t,
                                       const SequenceModel& s, const RightInverseConfig& config) {
  if (!(config.A > 0)) throw Error(ErrorCode::invalid_parameter, "right_inverse_check: A must be > 0");
  RightInverseReport rep;
  rep.borel = formal_borel(a, t, config.epsilon);
  const Extension ext(a, k, t, rep.borel);
  RecoveryGrid grid = config.grid;
  if (config.spread_fraction > 0) grid.spread = config.spread_fraction * k.opening() * std::numbers::pi / 2;
  rep.recovery = borel_recover([&](PolarPoint z) { return ext.eval(z); }, s, config.n_max, config.theta, grid);
  const auto snap = s.prefix(config.n_max);
  for (std::size_t p = 0; p <= config.n_max; ++p) {
    double err = INFINITY;
    if (p < rep.recovery.recovered) {
      const double scale = std::exp(double(p) * std::log(config.A) + log_factorial(p) + snap->log_M[p]);
      err = std::abs(rep.recovery.a.a[p] - a.at(p)) / scale;
    }
    rep.weighted_errors.push_back(err);
    rep.distance = std::max(rep.distance, err);
  }
  return rep;
}

}  // namespace carleman
