#include <doctest.h>

#include <cmath>
#include <numbers>

#include "carleman/error.hpp"
#include "carleman/proximate.hpp"

using namespace carleman;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("monomial weights evaluate on the surface of the log") {
  auto w = gevrey_weight(2.0);
  CHECK(w.sector() == doctest::Approx(1.0));
  CHECK(w.rho_target() == doctest::Approx(2.0));
  REQUIRE(w.monomial_exponent().has_value());
  auto v = w.eval(2.0L, 0.25L * std::numbers::pi_v<long double>);
  CHECK(std::abs(v - std::complex<long double>(0.0L, 4.0L)) < 1e-15L);
  CHECK(w.real(3.0L) == doctest::Approx(9.0));
}

TEST_CASE("sector lower bound of z^k is cos(k pi alpha / 2)") {
  for (double k : {0.5, 1.0, 2.0}) {
    auto w = gevrey_weight(k);
    for (double frac : {0.25, 0.5, 0.9}) {
      const double alpha = frac / k;
      auto b = sector_lower_bound(w, alpha);
      CAPTURE(k);
      CAPTURE(alpha);
      CHECK(std::abs(b.b - std::cos(k * pi * alpha / 2.0)) <= 1e-6);
    }
  }
}

TEST_CASE("sector lower bound fails where Re V changes sign") {
  auto w = gevrey_weight(1.0);
  CHECK_THROWS_AS((void)sector_lower_bound(w, 1.2), Error);
}

TEST_CASE("weight validation of z against gevrey(1)") {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  auto v = validate_weight(gevrey_weight(1.0), g);
  CHECK(v.all_pass());
}

TEST_CASE("weight specs") {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  CHECK(parse_weight("gevrey:2").monomial_exponent() == 2.0);
  CHECK(parse_weight("powz:0.5").monomial_exponent() == 0.5);
  CHECK(parse_weight("fromM", &g).kind() == WeightKind::real_axis);
  auto j = parse_weight("json:" CARLEMAN_TEST_DATA "/weight_z2.json");
  CHECK(std::abs(j.eval(3.0L, 0.0L).real() - 9.0L) < 1e-14L);
  CHECK_THROWS_AS((void)parse_weight("fromM"), Error);
  CHECK_THROWS_AS((void)parse_weight("gevrey:0"), Error);
  CHECK_THROWS_AS((void)parse_weight("bogus"), Error);
  CHECK_THROWS_AS((void)weight_from_json("{\"kind\":\"expr\"}"), Error);
}

TEST_CASE("the real-axis weight is M itself") {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  auto w = real_weight_from_M(g);
  CHECK(double(w.real(20.0L)) == doctest::Approx(g.bigM(20.0)));
}

TEST_CASE("exp(-1/z) is flat for gevrey(1)") {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  auto G = flat_function(gevrey_weight(1.0));
  auto c = flatness_certificate(G, g, {0.8, 1.0});
  CHECK(c.passed);
  CHECK(c.residual <= 0.0);
  CHECK(c.c1 > 0.0);
  CHECK(c.c2 > 0.0);
}

TEST_CASE("lifted flat function for gevrey(1/2)") {
  GrowthProfile g(SequenceModel::gevrey(0.5));
  auto G = lift_flat(flat_function(gevrey_weight(1.0)), 2.0);
  auto c = flatness_certificate(G, g, {0.4, 1.0});
  CHECK(c.passed);
}

TEST_CASE("nonzero constants are not flat") {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  auto c = flatness_certificate(constant_function(1.0), g, {0.5, 1.0});
  CHECK_FALSE(c.passed);
  CHECK_FALSE(c.failure.empty());
}

TEST_CASE("sector functions refuse points outside their sector") {
  auto G = flat_function(gevrey_weight(1.0));
  CHECK_THROWS_AS((void)G.eval(1.0L, 3.5L), Error);
}
