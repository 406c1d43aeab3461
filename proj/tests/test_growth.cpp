#include <doctest.h>

#include <cmath>
#include <vector>

#include "carleman/growth.hpp"
#include "oracles.hpp"

using namespace carleman;

TEST_CASE("M(t) agrees with the direct supremum") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    GrowthProfile g(SequenceModel::gevrey(alpha));
    auto lm = [alpha](std::size_t j) { return oracle::log_quotient_gevrey(alpha, j); };
    for (double t : {0.5, 1.0, 1.7, 10.0, 123.4, 1e3}) {
      CAPTURE(alpha);
      CAPTURE(t);
      const double ref = double(oracle::sup_M(lm, t));
      CHECK(std::abs(g.bigM(t) - ref) <= 1e-11 * std::max(1.0, ref));
      CHECK(g.log_hM(1.0 / t) == doctest::Approx(-g.bigM(t)));
    }
  }
}

TEST_CASE("M(t) is the integral of nu(r)/r") {
  GrowthProfile g(SequenceModel::alphabeta(1.0, 2.0));
  auto lm = [](std::size_t j) { return oracle::log_quotient_alphabeta(1.0, 2.0, j); };
  for (double t : {2.0, 50.0, 777.0}) {
    const double ref = double(oracle::counting_integral(lm, t));
    CHECK(std::abs(g.bigM(t) - ref) <= 1e-11 * std::max(1.0, ref));
    CHECK(g.verify_M_integral(t) <= 1e-9);
  }
}

TEST_CASE("h_M small and large arguments") {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  CHECK(g.hM(2.0) == doctest::Approx(1.0));  // t >= 1/m_0 gives the p = 0 term
  CHECK(g.hM(0.1) == doctest::Approx(std::exp(-g.bigM(10.0))));
  CHECK(g.log_hM(0.0) == -INFINITY);
  CHECK(g.bigM_log(std::log(50.0)) == doctest::Approx(g.bigM(50.0)));
}

TEST_CASE("counting function and d(r)") {
  GrowthProfile g(SequenceModel::gevrey(1.0));  // m_p = p + 1
  CHECK(g.nu(0.5) == 0);
  CHECK(g.nu(1.0) == 1);
  CHECK(g.nu(10.5) == 10);
  const double r = 100.0;
  CHECK(g.d_of(r) == doctest::Approx(std::log(g.bigM(r)) / std::log(r)));
  auto j = g.b_jump(9);
  CHECK(j.ratio == doctest::Approx(10.0 / g.bigM(10.0)));
  CHECK(j.jump == doctest::Approx(1.0 / g.bigM(10.0)));
}

TEST_CASE("omega and rho of gevrey sequences") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    GrowthProfile g(SequenceModel::gevrey(alpha));
    auto w = omega(g, 10000);
    auto r = rho_order(g, 10000);
    CHECK(w.value == doctest::Approx(alpha).epsilon(0.02));
    CHECK(w.value * r.value == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("exponent of convergence of powers") {
  std::vector<double> lc;
  for (int n = 0; n <= 5000; ++n) lc.push_back(0.5 * std::log(n + 1.0));
  auto e = exponent_of_convergence(lc);
  CHECK(e.value == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("growth index of gevrey sequences") {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  auto gi = gamma_index(g, 5000);
  CHECK(gi.value == doctest::Approx(1.0).epsilon(0.02));
  CHECK(gamma_prefix_sup(g, 200, 1.0) >= 1.0 - 1e-9);
}

TEST_CASE("Bertrand classification") {
  auto terms = [](double s, double u) {
    std::vector<double> t;
    for (int n = 1; n <= 100000; ++n) t.push_back(-s * std::log(n) - u * std::log(std::log(n + 2.0)));
    return t;
  };
  CHECK(classify_series(terms(0.5, 0.0), 1).classification == SeriesClass::diverges);
  CHECK(classify_series(terms(1.5, 0.0), 1).classification == SeriesClass::converges);
  auto edge = classify_series(terms(1.0, 1.0), 1);
  CHECK(edge.boundary);
  CHECK(edge.classification == SeriesClass::diverges);
  CHECK(classify_series(terms(1.0, 2.0), 1).classification == SeriesClass::converges);
}

TEST_CASE("quasianalyticity verdicts") {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  CHECK(korenbljum_verdict(g, 1.0).conclusion == "quasianalytic");
  CHECK(korenbljum_verdict(g, 0.7).conclusion == "not quasianalytic");
  GrowthProfile ab(SequenceModel::alphabeta(1.0, 3.0));
  CHECK(korenbljum_verdict(ab, 1.0).conclusion == "not quasianalytic");

  auto pc = proximate_order_check(g, 10000);
  CHECK(pc.pass);
  CHECK(pc.relative_error <= 0.02);
  CHECK(watson_verdict(1.5, pc).quasianalytic);
  CHECK_FALSE(watson_verdict(0.5, pc).quasianalytic);
}

TEST_CASE("h_M power bounds") {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  std::vector<double> t;
  for (int i = 0; i < 40; ++i) t.push_back(std::pow(10.0, -3.0 + 3.0 * i / 39.0));
  auto fit = check_hM_power(g, 2.0, t);
  CHECK(fit.found);
  CHECK(fit.rho >= 1.0);
}
