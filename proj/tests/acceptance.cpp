// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "carleman/extension.hpp"
#include "carleman/growth.hpp"
#include "carleman/moments.hpp"
#include "carleman/proximate.hpp"
#include "carleman/sequences.hpp"
#include "oracles.hpp"

using namespace carleman;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_from_logs(double log_a, double log_b) { return std::abs(std::expm1(log_a - log_b)); }

Outcome gevrey_moments() {
  double worst = 0;
  for (double k : {0.5, 1.0, 2.0}) {
    Kernel ker(gevrey_weight(k), KernelVariant::classical);
    for (int p = 0; p <= 40; ++p) worst = std::max(worst, rel_from_logs(moment(ker, p).log_value, oracle::log_gamma_moment(k, p)));
  }
  return {worst <= 1e-8, fmt("max rel err %.2e", worst)};
}

Outcome exponential_kernel_moments() {
  Kernel ker(gevrey_weight(1.0), KernelVariant::paper);
  double worst = 0;
  for (int p = 0; p <= 20; ++p) worst = std::max(worst, rel_from_logs(moment(ker, p).log_value, oracle::log_factorial(p)));
  return {worst <= 1e-9, fmt("max rel err %.2e", worst)};
}

Outcome indices() {
  bool ok = true;
  std::string d;
  auto one = [&](const SequenceModel& s, double alpha, std::size_t n) {
    GrowthProfile g(s);
    const double w = omega(g, n).value;
    const double r = rho_order(g, n).value;
    ok = ok && std::abs(w - alpha) <= 0.02 && w * r >= 0.95 && w * r <= 1.05;
    d += fmt("%s w=%.4f wr=%.4f; ", s.name().c_str(), w, w * r);
  };
  for (double a : {0.5, 1.0, 2.0}) one(SequenceModel::gevrey(a), a, 10000);
  one(SequenceModel::alphabeta(1.0, 2.0), 1.0, 100000);
  return {ok, d};
}

Outcome quasianalyticity() {
  bool ok = true;
  std::string d;
  for (auto [a, b] : {std::pair{1.0, 0.0}, {1.0, 2.0}, {1.0, 3.0}}) {
    GrowthProfile g(SequenceModel::alphabeta(a, b));
    for (double gamma : {a - 0.3, a, a + 0.3}) {
      const bool expect = a >= b - 1 ? gamma >= a : gamma > a;
      const auto v = korenbljum_verdict(g, gamma);
      const bool match = v.conclusion == (expect ? "quasianalytic" : "not quasianalytic");
      ok = ok && match;
      d += fmt("(%g,%g,%g)%s ", a, b, gamma, match ? "ok" : "MISMATCH");
    }
  }
  return {ok, d};
}

Outcome proximate() {
  bool ok = true;
  std::string d;
  for (const auto& s : {SequenceModel::gevrey(1.0), SequenceModel::gevrey(2.0), SequenceModel::alphabeta(1.0, 2.0)}) {
    const auto c = proximate_order_check(GrowthProfile(s), 10000);
    ok = ok && c.relative_error <= 0.02;
    d += fmt("%s %.4f; ", s.name().c_str(), c.relative_error);
  }
  return {ok, d};
}

Outcome counting_integral() {
  struct Case {
    SequenceModel seq;
    std::function<long double(std::size_t)> log_m;
  };
  const std::vector<Case> cases{
      {SequenceModel::gevrey(0.5), [](std::size_t j) { return oracle::log_quotient_gevrey(0.5L, j); }},
      {SequenceModel::gevrey(1.0), [](std::size_t j) { return oracle::log_quotient_gevrey(1.0L, j); }},
      {SequenceModel::gevrey(2.0), [](std::size_t j) { return oracle::log_quotient_gevrey(2.0L, j); }},
      {SequenceModel::gevrey_scaled(2.0, 1.0), [](std::size_t j) { return oracle::log_quotient_scaled(2.0L, 1.0L, j); }},
      {SequenceModel::alphabeta(1.0, 2.0), [](std::size_t j) { return oracle::log_quotient_alphabeta(1.0L, 2.0L, j); }},
      {SequenceModel::qpower(2.0), [](std::size_t j) { return oracle::log_quotient_qpower(2.0L, j); }},
  };
  double worst_rel = 0, worst_abs = 0;
  for (const auto& c : cases) {
    GrowthProfile g(c.seq);
    for (int i = 0; i < 100; ++i) {
      const double t = std::pow(10.0, 3.0 * i / 99.0);
      const double ref = double(oracle::counting_integral(c.log_m, t));
      const double diff = std::abs(g.bigM(t) - ref);
      worst_abs = std::max(worst_abs, diff);
      worst_rel = std::max(worst_rel, diff / std::max(1.0, ref));
    }
  }
  return {worst_rel <= 1e-10, fmt("max residual %.2e relative to max(1, M), %.2e absolute", worst_rel, worst_abs)};
}

Outcome flatness() {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  const auto G = flat_function(gevrey_weight(1.0));
  const auto c = flatness_certificate(G, g, {0.8, 1.0});
  const auto r = borel_recover([&](PolarPoint z) { return G.eval(z.r, z.theta); }, g.sequence(), 8);
  double worst = 0;
  bool recovered = !r.failed && r.recovered == 9;
  for (std::size_t p = 0; recovered && p <= 8; ++p) {
    worst = std::max(worst, std::abs(r.a.at(p)) / std::exp(oracle::log_factorial(p) + g.sequence().log_M(p)));
  }
  const bool ok = c.passed && c.residual <= 0 && recovered && worst <= 1e-6;
  return {ok, fmt("certificate %s residual %.2e, max |a_p|/(p! M_p) %.2e", c.passed ? "passed" : "failed", c.residual, worst)};
}

Outcome sector_bound() {
  double worst = 0;
  for (auto [k, alpha] : {std::pair{1.0, 0.5}, {2.0, 0.4}}) {
    const auto b = sector_lower_bound(gevrey_weight(k), alpha);
    worst = std::max(worst, std::abs(b.b - std::cos(k * std::numbers::pi * alpha / 2)));
  }
  return {worst <= 1e-6, fmt("max |b - cos| %.2e", worst)};
}

Outcome extension_closed_form() {
  const auto seq = SequenceModel::gevrey(1.0);
  const Kernel k(gevrey_weight(1.0), KernelVariant::paper);
  const Extension f(delta_sequence(1), k, moment_table(k, 40));
  double worst = 0;
  for (double x : {0.1, 0.2, 0.5}) {
    const long double ref = -std::expm1(-1.0L / x);
    worst = std::max(worst, double(std::abs(f.eval({x, 0.0}).real() / ref - 1.0L)));
  }
  const auto c = certify_expansion(f, seq, {0.8, 1.0});
  const bool ok = f.r0() == 1.0 && worst <= 1e-8 && c.passed && std::isfinite(c.c) && std::isfinite(c.a);
  return {ok, fmt("max rel err %.2e, expansion N<=15 %s C=%.3g A=%.3g", worst, c.passed ? "passed" : "failed", c.c, c.a)};
}

Outcome round_trip() {
  bool ok = true;
  std::string d;
  for (double k : {1.0, 2.0}) {
    const auto seq = SequenceModel::gevrey(1.0 / k);
    const Kernel ker(gevrey_weight(k), KernelVariant::paper);
    const auto table = moment_table(ker, 40);
    const std::vector<std::pair<const char*, CoefficientSequence>> inputs{
        {"delta", delta_sequence(12)},
        {"geometric", geometric_sequence(seq, 0.5, 12)},
        {"alternating", geometric_sequence(seq, -1.0, 12)},
    };
    for (const auto& [name, a] : inputs) {
      const auto rep = right_inverse_check(a, ker, table, seq);
      ok = ok && rep.distance <= 1e-3;
      d += fmt("%s/%s %.1e; ", seq.name().c_str(), name, rep.distance);
    }
  }
  return {ok, d};
}

Outcome negative_controls() {
  const auto reg = certify_regularity(SequenceModel::qpower(2.0), 60, 240);
  GrowthProfile g(SequenceModel::gevrey(1.0));
  const auto flat = flatness_certificate(constant_function(1.0), g, {0.8, 1.0});

  const Kernel k(gevrey_weight(1.0), KernelVariant::paper);
  const Extension f(delta_sequence(1), k, moment_table(k, 40));
  auto shifted = [&](PolarPoint z) { return f.eval(z) + 0.001L; };
  bool all_fail = true;
  for (std::size_t n : {1u, 2u, 8u, 15u}) {
    ExpansionGrid grid;
    grid.n_max = n;
    all_fail = all_fail && !certify_expansion(shifted, f.coefficients(), g.sequence(), {0.8, 1.0}, grid).passed;
  }
  const bool ok = !reg.moderate.pass && !flat.passed && all_fail;
  return {ok, fmt("moderate growth %s, constant flatness %s, perturbed expansion %s",
                  reg.moderate.pass ? "passed" : "failed", flat.passed ? "passed" : "failed",
                  all_fail ? "failed for N in {1,2,8,15}" : "passed somewhere")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"gevrey kernel moments", gevrey_moments},
      {"z e^{-z} kernel moments", exponential_kernel_moments},
      {"index estimation", indices},
      {"quasianalyticity table", quasianalyticity},
      {"proximate order", proximate},
      {"M(t) against counting integral", counting_integral},
      {"flatness of exp(-1/z)", flatness},
      {"sector lower bound", sector_bound},
      {"extension closed form", extension_closed_form},
      {"right-inverse round trip", round_trip},
      {"negative controls", negative_controls},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("criterion %zu %s  %s: %s (%.1fs)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
