#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <algorithm>
#include <limits>
#include <type_traits>
#include <vector>

namespace carleman {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
template <class Real>
struct GaussLegendreRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

/// Computes the rule by Newton iteration on the Legendre recurrence.
template <class Real>
GaussLegendreRule<Real> make_gauss_legendre(int n);

/// Shared 16-point rule, built once per scalar type.
template <class Real>
const GaussLegendreRule<Real>& panel_rule();

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int initial_panels = 8;
  int max_panels = 4000;
};

template <class Real, class Value>
struct QuadratureResult {
  Value value{};
  Real error{};
  int panels = 0;
  bool converged = false;
};

namespace detail {

template <class Real, class F>
auto apply_rule(const F& f, Real a, Real b) {
  const auto& rule = panel_rule<Real>();
  const Real half = (b - a) / 2;
  const Real mid = (a + b) / 2;
  using Value = std::invoke_result_t<const F&, Real>;
  Value sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return Value(sum * half);
}

}  // namespace detail

/// Globally adaptive bisection of [a, b] with a fixed Gauss-Legendre rule per panel.
/// The error of a panel is |Q(panel) - Q(left) - Q(right)|; panels with the
/// largest errors are split until the summed error meets the tolerance.
/// Works for real or complex valued integrands; panel order (and therefore the
/// summation order) is deterministic.
template <class Real, class F>
auto integrate(const F& f, Real a, Real b, const QuadratureOptions& opts = {})
    -> QuadratureResult<Real, std::invoke_result_t<const F&, Real>> {
  using Value = std::invoke_result_t<const F&, Real>;
  struct Panel {
    Real a, b;
    Value halves;
    Real error;
  };
  auto make_panel = [&](Real lo, Real hi) {
    const Real mid = (lo + hi) / 2;
    const Value whole = detail::apply_rule(f, lo, hi);
    const Value halves = detail::apply_rule(f, lo, mid) + detail::apply_rule(f, mid, hi);
    return Panel{lo, hi, halves, Real(std::abs(whole - halves))};
  };

  QuadratureResult<Real, Value> result;
  if (!(b > a)) return result;
  const int n0 = opts.initial_panels > 0 ? opts.initial_panels : 1;
  std::vector<Panel> panels;
  panels.reserve(static_cast<std::size_t>(n0));
  for (int i = 0; i < n0; ++i) {
    const Real lo = a + (b - a) * Real(i) / Real(n0);
    const Real hi = (i + 1 == n0) ? b : a + (b - a) * Real(i + 1) / Real(n0);
    panels.push_back(make_panel(lo, hi));
  }
  std::vector<std::size_t> order;
  for (;;) {
    Value total{};
    Real err = 0;
    for (const auto& p : panels) {
      total += p.halves;
      err += p.error;
    }
    const Real target = std::max(Real(opts.abs_tol), Real(opts.rel_tol) * Real(std::abs(total)));
    const int count = static_cast<int>(panels.size());
    if (err <= target || count >= opts.max_panels) {
      result.value = total;
      result.error = err;
      result.panels = count;
      result.converged = err <= target;
      return result;
    }
    order.resize(panels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return panels[x].error > panels[y].error; });
    const Real floor = target / Real(2 * panels.size());
    const std::size_t batch = std::max<std::size_t>(1, panels.size() / 4);
    std::vector<std::size_t> split;
    for (std::size_t k = 0; k < batch && k < order.size(); ++k) {
      if (k > 0 && panels[order[k]].error <= floor) break;
      split.push_back(order[k]);
    }
    std::sort(split.begin(), split.end());
    std::vector<Panel> next;
    next.reserve(panels.size() + split.size());
    std::size_t s = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (s < split.size() && split[s] == i) {
        const Real mid = (panels[i].a + panels[i].b) / 2;
        next.push_back(make_panel(panels[i].a, mid));
        next.push_back(make_panel(mid, panels[i].b));
        ++s;
      } else {
        next.push_back(panels[i]);
      }
    }
    panels = std::move(next);
  }
}

// ---------------------------------------------------------------------------

template <class Real>
GaussLegendreRule<Real> make_gauss_legendre(int n) {
  GaussLegendreRule<Real> rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const Real pi = std::numbers::pi_v<Real>;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real x = std::cos(pi * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real dp = 1;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= std::numeric_limits<Real>::epsilon() * 4) {
        // One more pass for the derivative at the converged node.
        p0 = 1;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        break;
      }
    }
    const Real w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0;
  return rule;
}

template <class Real>
const GaussLegendreRule<Real>& panel_rule() {
  static const GaussLegendreRule<Real> rule = make_gauss_legendre<Real>(16);
  return rule;
}

}  // namespace carleman
