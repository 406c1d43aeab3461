#include <doctest.h>

#include <cmath>
#include <numbers>

#include "carleman/error.hpp"
#include "carleman/moments.hpp"
#include "oracles.hpp"

using namespace carleman;

TEST_CASE("classical kernel moments are Gamma(1 + p/k)") {
  for (double k : {0.5, 1.0, 2.0}) {
    Kernel ker(gevrey_weight(k), KernelVariant::classical);
    for (int p = 0; p <= 40; p += 5) {
      auto m = moment(ker, p);
      CAPTURE(k);
      CAPTURE(p);
      CHECK(std::abs(std::expm1(m.log_value - oracle::log_gamma_moment(k, p))) <= 1e-10);
    }
  }
}

TEST_CASE("paper kernel moments") {
  Kernel z(gevrey_weight(1.0), KernelVariant::paper);
  for (int p = 0; p <= 20; ++p) {
    CHECK(std::abs(std::expm1(moment(z, p).log_value - oracle::log_factorial(p))) <= 1e-10);
  }
  // e_V = z e^{-z^2}: m(p) = Gamma((p+1)/2) / 2
  Kernel z2(gevrey_weight(2.0), KernelVariant::paper);
  for (int p = 0; p <= 20; ++p) {
    CHECK(std::abs(std::expm1(moment(z2, p).log_value - (std::lgamma((p + 1) / 2.0) - std::log(2.0)))) <= 1e-10);
  }
}

TEST_CASE("kernel construction and evaluation") {
  Kernel k(gevrey_weight(1.0), KernelVariant::paper);
  CHECK(k.opening() == doctest::Approx(1.0));
  auto v = k.eval(2.0L, 0.0L);
  CHECK(std::abs(v.real() - 2.0L * std::exp(-2.0L)) < 1e-17L);
  CHECK(double(k.log_abs(2.0L, 0.5L)) == doctest::Approx(std::log(2.0) - 2.0 * std::cos(0.5)));
  CHECK(parse_kernel("classical:2", nullptr).variant() == KernelVariant::classical);
  CHECK_THROWS_AS((void)parse_kernel("paper", nullptr), Error);
  CHECK_THROWS_AS((void)parse_kernel("nope", nullptr), Error);
  GrowthProfile g(SequenceModel::gevrey(1.0));
  CHECK_THROWS_AS(Kernel(real_weight_from_M(g), KernelVariant::classical), Error);
}

TEST_CASE("moment tables and their limits") {
  Kernel k(gevrey_weight(1.0), KernelVariant::paper);
  auto t = moment_table(k, 30);
  REQUIRE(t.size() == 31);
  CHECK(t.value(10) == doctest::Approx(3628800.0).epsilon(1e-10));
  CHECK_THROWS_AS((void)moment_table(k, max_moment_table + 1), Error);
}

TEST_CASE("F_V(1) = e for V = z") {
  Kernel k(gevrey_weight(1.0), KernelVariant::paper);
  auto t = moment_table(k, 40);
  auto f = FV_eval(t, 1.0);
  CHECK(f.value.real() == doctest::Approx(std::numbers::e).epsilon(1e-12));
  CHECK(std::abs(f.value.imag()) < 1e-15);
  auto g = FV_eval(t, std::complex<double>(0.0, 2.0));
  CHECK(std::abs(g.value - std::exp(std::complex<double>(0.0, 2.0))) < 1e-12);
}

TEST_CASE("kernel bound on a subsector") {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  Kernel k(gevrey_weight(1.0), KernelVariant::paper);
  auto c = kernel_bound_certificate(k, g, 0.5);
  CHECK(c.passed);
  CHECK(c.c > 0.0);
  CHECK(c.k > 0.0);
  CHECK(std::isfinite(c.origin_integral));
  CHECK_THROWS_AS((void)kernel_bound_certificate(k, g, 1.5), Error);
  // int_0^1 |t e^{-t}| dt/t at tau = 0
  CHECK(kernel_origin_integral(k, 0.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("moments are equivalent to the sequence") {
  Kernel k(gevrey_weight(2.0), KernelVariant::classical);
  auto t = moment_table(k, 80);
  auto eq = equivalence_certificate(t, SequenceModel::gevrey(0.5), 1, 80);
  CHECK(eq.verdict == EquivalenceVerdict::plausible);
  CHECK(eq.lower > 0.0);
  auto bad = equivalence_certificate(t, SequenceModel::gevrey(1.0), 1, 80);
  CHECK(bad.verdict == EquivalenceVerdict::refuted_on_prefix);
}

TEST_CASE("Komatsu growth of F_V") {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  Kernel k(gevrey_weight(1.0), KernelVariant::paper);
  auto c = komatsu_growth_check(moment_table(k, 200), g);
  CHECK(c.passed);
  CHECK(c.radii_used.size() >= 4);
}

TEST_CASE("integrals of h_M") {
  GrowthProfile g(SequenceModel::gevrey(1.0));
  auto b = hM_integral_bound(g, 1.0, 1, 60);
  CHECK(b.passed);
  // substituting t -> 2t: the K = 2 integral is 2^p times the K = 1 integral
  for (std::size_t p : {1u, 7u, 30u}) {
    CHECK(log_hM_integral(g, 2.0, p) == doctest::Approx(log_hM_integral(g, 1.0, p) + p * std::log(2.0)));
  }
}
