#include "carleman/growth.hpp"

#include <algorithm>
#include <cmath>

#include "carleman/error.hpp"
#include "carleman/regression.hpp"
#include "carleman/summation.hpp"

namespace carleman {

std::string_view to_string(SeriesClass c) noexcept {
  switch (c) {
    case SeriesClass::diverges: return "diverges";
    case SeriesClass::converges: return "converges";
    case SeriesClass::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::size_t GrowthProfile::count_below(double log_r) const {
  const auto snap = seq_.prefix_covering(log_r);
  if (!(snap->log_m.back() > log_r)) {
    throw Error(ErrorCode::range_exceeded,
                seq_.name() + ": argument e^" + std::to_string(log_r) + " beyond computed quotients");
  }
  return static_cast<std::size_t>(
      std::upper_bound(snap->log_m.begin(), snap->log_m.end(), log_r) - snap->log_m.begin());
}

double GrowthProfile::bigM_log(double log_t) const {
  const std::size_t n = count_below(log_t);
  if (n == 0) return 0.0;
  return double(n) * log_t - seq_.log_M(n);
}

double GrowthProfile::bigM(double t) const {
  if (!(t > 0)) return 0.0;
  return bigM_log(std::log(t));
}

double GrowthProfile::log_hM(double t) const {
  if (!(t > 0)) return -INFINITY;
  return -bigM_log(-std::log(t));
}

double GrowthProfile::hM(double t) const {
  if (!(t > 0)) return 0.0;
  return std::exp(log_hM(t));
}

std::size_t GrowthProfile::nu(double r) const {
  if (!(r > 0)) return 0;
  return count_below(std::log(r));
}

double GrowthProfile::verify_M_integral(double t) const {
  if (!(t > 0)) return 0.0;
  const double ls = std::log(t);
  const std::size_t n = count_below(ls);
  if (n == 0) return std::abs(bigM_log(ls));
  const auto snap = seq_.prefix(n);
  const auto& lm = snap->log_m;
  // nu = j on [m_{j-1}, m_j).
  CompensatedSum<long double> integral;
  for (std::size_t j = 1; j < n; ++j) {
    integral += static_cast<long double>(j) * ((long double)lm[j] - (long double)lm[j - 1]);
  }
  integral += static_cast<long double>(n) * ((long double)ls - (long double)lm[n - 1]);
  return static_cast<double>(std::abs(integral.value() - (long double)bigM_log(ls)));
}

double GrowthProfile::d_of(double r) const {
  const double m0 = std::exp(seq_.log_quotient(0));
  if (!(r > std::max(1.0, m0) * (1.0 + 1e-9))) {
    throw Error(ErrorCode::out_of_domain, "d(r) requires r > max(1, m_0)");
  }
  const double big = bigM(r);
  if (!(big > 0)) throw Error(ErrorCode::out_of_domain, "d(r) requires M(r) > 0");
  return std::log(big) / std::log(r);
}

GrowthProfile::Jump GrowthProfile::b_jump(std::size_t p) const {
  const auto snap = seq_.prefix(p + 1);
  const double lm = snap->log_m[p];
  const double big = double(p) * lm - snap->log_M[p];
  if (!(big > 0) || !(lm > 0)) throw Error(ErrorCode::out_of_domain, "b_jump requires M(m_p) > 0 and m_p > 1");
  Jump j;
  j.ratio = double(p + 1) / big;
  j.jump = 1.0 / big;
  j.b_plus = j.ratio - std::log(big) / lm;
  return j;
}

namespace {

std::size_t window_start(std::size_t n) { return std::max<std::size_t>(3, n / 10); }

}  // namespace

IndexEstimate omega(const GrowthProfile& g, std::size_t n) {
  if (n < 100) throw Error(ErrorCode::invalid_parameter, "omega: N must be at least 100");
  const auto snap = g.sequence().prefix(n + 1);
  IndexEstimate est;
  est.window_lo = window_start(n);
  est.window_hi = n;
  std::vector<double> x, ll, one, y;
  est.raw_proxy = INFINITY;
  for (std::size_t k = est.window_lo; k <= n; ++k) {
    const double lk = std::log(double(k));
    x.push_back(lk);
    ll.push_back(std::log(lk));
    one.push_back(1.0);
    y.push_back(snap->log_m[k]);
    est.raw_proxy = std::min(est.raw_proxy, snap->log_m[k] / lk);
  }
  const auto fit = fit_linear({x, ll, one}, y);
  est.coefficients = fit.coefficients;
  est.residual_rms = fit.residual_rms;
  est.value = fit.coefficients[0];
  return est;
}

IndexEstimate rho_order(const GrowthProfile& g, std::size_t n) {
  if (n < 100) throw Error(ErrorCode::invalid_parameter, "rho_order: N must be at least 100");
  const auto snap = g.sequence().prefix(n + 1);
  IndexEstimate est;
  est.window_lo = window_start(n);
  est.window_hi = n;
  std::vector<double> x, ll, one, y;
  est.raw_proxy = -INFINITY;
  for (std::size_t k = est.window_lo; k <= n; ++k) {
    const double lk = std::log(double(k));
    x.push_back(snap->log_m[k]);
    ll.push_back(std::log(lk));
    one.push_back(1.0);
    y.push_back(lk);
    est.raw_proxy = std::max(est.raw_proxy, lk / snap->log_m[k]);
  }
  const auto fit = fit_linear({x, ll, one}, y);
  est.coefficients = fit.coefficients;
  est.residual_rms = fit.residual_rms;
  est.value = fit.coefficients[0];
  return est;
}

IndexEstimate exponent_of_convergence(std::span<const double> log_c) {
  if (log_c.size() < 31) throw Error(ErrorCode::invalid_parameter, "exponent_of_convergence: need at least 31 terms");
  for (std::size_t k = 1; k < log_c.size(); ++k) {
    if (!std::isfinite(log_c[k]) || log_c[k] < log_c[k - 1] - 1e-12 * std::max(1.0, std::abs(log_c[k - 1]))) {
      throw Error(ErrorCode::invalid_sequence, "exponent_of_convergence: sequence not nondecreasing at n=" +
                                                   std::to_string(k));
    }
  }
  const std::size_t n = log_c.size() - 1;
  IndexEstimate est;
  est.window_lo = window_start(n);
  est.window_hi = n;
  std::vector<double> x, ll, one, y;
  est.raw_proxy = -INFINITY;
  for (std::size_t k = est.window_lo; k <= n; ++k) {
    const double lk = std::log(double(k));
    x.push_back(log_c[k]);
    ll.push_back(std::log(lk));
    one.push_back(1.0);
    y.push_back(lk);
    if (log_c[k] > 0) est.raw_proxy = std::max(est.raw_proxy, lk / log_c[k]);
  }
  const auto fit = fit_linear({x, ll, one}, y);
  est.coefficients = fit.coefficients;
  est.residual_rms = fit.residual_rms;
  est.value = fit.coefficients[0];
  return est;
}

double gamma_prefix_sup(const GrowthProfile& g, std::size_t n, double slack) {
  if (!(slack >= 1.0)) throw Error(ErrorCode::invalid_parameter, "gamma_index: slack must be >= 1");
  const auto snap = g.sequence().prefix(n + 1);
  const auto& lm = snap->log_m;
  const double allowance = 2.0 * std::log(slack);
  std::vector<double> lp(n + 1);
  for (std::size_t p = 0; p <= n; ++p) lp[p] = std::log(double(p) + 1.0);
  auto admissible = [&](double gamma) {
    double run = -INFINITY;
    for (std::size_t p = 0; p <= n; ++p) {
      const double x = lm[p] - gamma * lp[p];
      if (x < run - allowance - 1e-12 * std::max(1.0, std::abs(run))) return false;
      run = std::max(run, x);
    }
    return true;
  };
  if (!admissible(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (admissible(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) return lo;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? lo : hi) = mid;
  }
  return lo;
}

GammaEstimate gamma_index(const GrowthProfile& g, std::size_t n, double slack) {
  if (n < 100) throw Error(ErrorCode::invalid_parameter, "gamma_index: N must be at least 100");
  GammaEstimate est;
  est.slack = slack;
  est.windows = {std::max<std::size_t>(10, n / 100), n / 10, n};
  std::vector<double> inv, one;
  for (auto k : est.windows) {
    est.window_values.push_back(gamma_prefix_sup(g, k, slack));
    inv.push_back(1.0 / std::log(double(k)));
    one.push_back(1.0);
  }
  est.prefix_sup = est.window_values.back();
  est.value = fit_linear({one, inv}, est.window_values).coefficients[0];
  return est;
}

SeriesVerdict classify_series(std::span<const double> log_terms, std::size_t first_index,
                              const BertrandTolerances& tol) {
  if (log_terms.size() < 31) throw Error(ErrorCode::invalid_parameter, "classify_series: need at least 31 terms");
  SeriesVerdict v;
  v.tol_s = tol.s;
  v.tol_u = tol.u;
  const std::size_t last = first_index + log_terms.size() - 1;
  v.window_lo = std::max(first_index, window_start(last));
  v.window_hi = last;
  std::vector<double> a, b, one, y;
  for (std::size_t k = v.window_lo; k <= last; ++k) {
    const double lk = std::log(double(k));
    a.push_back(-lk);
    b.push_back(-std::log(lk));
    one.push_back(1.0);
    y.push_back(log_terms[k - first_index]);
  }
  const auto fit = fit_linear({a, b, one}, y);
  v.s = fit.coefficients[0];
  v.u = fit.coefficients[1];
  if (!std::isfinite(v.s) || !std::isfinite(v.u)) return v;
  if (v.s < 1.0 - tol.s) {
    v.classification = SeriesClass::diverges;
  } else if (v.s > 1.0 + tol.s) {
    v.classification = SeriesClass::converges;
  } else if (std::abs(v.u - 1.0) <= tol.u) {
    v.classification = SeriesClass::diverges;
    v.boundary = true;
  } else {
    v.classification = v.u < 1.0 ? SeriesClass::diverges : SeriesClass::converges;
  }
  return v;
}

QuasiVerdict korenbljum_verdict(const GrowthProfile& g, double gamma, std::size_t n,
                                const BertrandTolerances& tol) {
  if (!(gamma > 0)) throw Error(ErrorCode::invalid_parameter, "korenbljum_verdict: gamma must be positive");
  const auto snap = g.sequence().prefix(n + 1);
  std::vector<double> terms(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    terms[k] = -(std::log(double(k) + 1.0) + snap->log_m[k]) / (gamma + 1.0);
  }
  QuasiVerdict q;
  q.gamma = gamma;
  q.series = classify_series(terms, 0, tol);
  switch (q.series.classification) {
    case SeriesClass::diverges: q.conclusion = "quasianalytic"; break;
    case SeriesClass::converges: q.conclusion = "not quasianalytic"; break;
    case SeriesClass::inconclusive: q.conclusion = "inconclusive"; break;
  }
  return q;
}

ProximateOrderCheck proximate_order_check(const GrowthProfile& g, std::size_t n, double tol) {
  if (n < 1000) throw Error(ErrorCode::invalid_parameter, "proximate_order_check: N must be at least 1000");
  const auto snap = g.sequence().prefix(n + 2);
  const auto& lm = snap->log_m;
  const auto& lM = snap->log_M;
  ProximateOrderCheck c;
  c.tol = tol;
  c.window_lo = std::max<std::size_t>(2, n / 100);
  c.window_hi = n;
  std::vector<double> one, il, il2, ip, lp, ratio, stolz;
  for (std::size_t p = c.window_lo; p <= n; ++p) {
    const double L = std::log(double(p));
    one.push_back(1.0);
    il.push_back(1.0 / L);
    il2.push_back(1.0 / (L * L));
    ip.push_back(1.0 / double(p));
    lp.push_back(L / double(p));
    const double big = double(p) * lm[p] - lM[p];
    ratio.push_back(double(p + 1) / big);
    stolz.push_back(double(p) * (lm[p + 1] - lm[p]));
  }
  const std::vector<std::vector<double>> basis{one, il, il2, ip, lp};
  c.limit = fit_linear(basis, ratio).coefficients[0];
  c.stolz_limit = fit_linear(basis, stolz).coefficients[0];
  c.stolz_last = stolz.back();
  c.omega_hat = omega(g, n).value;
  c.relative_error = std::abs(c.limit * c.omega_hat - 1.0);
  c.pass = std::isfinite(c.relative_error) && c.relative_error <= tol;
  return c;
}

WatsonVerdict watson_verdict(double gamma, const ProximateOrderCheck& check, double tol) {
  WatsonVerdict w;
  w.gamma = gamma;
  w.omega_hat = check.omega_hat;
  w.precondition_met = check.pass;
  w.boundary = std::abs(gamma - check.omega_hat) < tol;
  w.quasianalytic = !w.boundary && gamma > check.omega_hat;
  if (w.boundary) {
    w.note = "gamma at the estimated omega: flat functions exist on the exact opening, not quasianalytic";
  }
  if (!w.precondition_met) {
    if (!w.note.empty()) w.note += "; ";
    w.note += "proximate-order check failed, verdict not backed by the flat-function construction";
  }
  return w;
}

SurjectivityConditions surjectivity_conditions(const GrowthProfile& g, double omega_hat, std::size_t n,
                                               const BertrandTolerances& tol) {
  if (!(omega_hat > 0)) throw Error(ErrorCode::invalid_parameter, "surjectivity_conditions: omega must be positive");
  const auto snap = g.sequence().prefix(n + 1);
  std::vector<double> tb(n + 1), tc(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    tb[k] = -(std::log(double(k) + 1.0) + snap->log_m[k]) / (omega_hat + 1.0);
    tc[k] = -snap->log_m[k] / omega_hat;
  }
  SurjectivityConditions s;
  s.omega_hat = omega_hat;
  s.condition_b = classify_series(tb, 0, tol);
  s.condition_c = classify_series(tc, 0, tol);
  return s;
}

PowerBoundFit check_hM_power(const GrowthProfile& g, double s, std::span<const double> t_grid, double cap) {
  if (!(s >= 1.0)) throw Error(ErrorCode::invalid_parameter, "check_hM_power: s must be >= 1");
  if (t_grid.empty()) throw Error(ErrorCode::invalid_parameter, "check_hM_power: empty grid");
  std::vector<double> lh;
  double lo_t = INFINITY, hi_t = -INFINITY;
  for (double t : t_grid) {
    if (!(t > 0)) throw Error(ErrorCode::invalid_parameter, "check_hM_power: grid points must be positive");
    lh.push_back(g.log_hM(t));
    lo_t = std::min(lo_t, std::log(t));
    hi_t = std::max(hi_t, std::log(t));
  }
  const double mid_t = 0.5 * (lo_t + hi_t);
  auto search = [&](bool upper_only) {
    auto ok = [&](double rho) {
      for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (upper_only && std::log(t_grid[i]) < mid_t) continue;
        const double rhs = s * g.log_hM(rho * t_grid[i]);
        if (lh[i] > rhs + 1e-12 * std::max(1.0, std::abs(rhs))) return false;
      }
      return true;
    };
    if (ok(1.0)) return std::pair{1.0, true};
    if (!ok(cap)) return std::pair{cap, false};
    double lo = 0.0, hi = std::log(cap);
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (lo + hi);
      (ok(std::exp(m)) ? hi : lo) = m;
    }
    return std::pair{std::exp(hi), true};
  };
  PowerBoundFit fit;
  fit.cap = cap;
  const auto full = search(false);
  const auto half = search(true);
  fit.rho = full.first;
  fit.found = full.second;
  fit.rho_half = half.first;
  return fit;
}

}  // namespace carleman
