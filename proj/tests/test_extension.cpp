#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "carleman/error.hpp"
#include "carleman/extension.hpp"
#include "oracles.hpp"

using namespace carleman;

namespace {

struct Setup {
  SequenceModel seq = SequenceModel::gevrey(1.0);
  Kernel kernel{gevrey_weight(1.0), KernelVariant::paper};
  MomentTable table = moment_table(kernel, 40);
};

const Setup& setup() {
  static const Setup s;
  return s;
}

}  // namespace

TEST_CASE("coefficient JSON") {
  auto c = CoefficientSequence::from_file(CARLEMAN_TEST_DATA "/complex.json");
  REQUIRE(c.size() == 2);
  CHECK(c.at(1) == std::complex<double>(0.0, 2.0));
  CHECK(c.at(7) == 0.0);
  CHECK(c.declared_A == 2.0);
  auto back = CoefficientSequence::from_json_text(c.to_json_text());
  CHECK(back.a == c.a);
  CHECK_THROWS_AS((void)CoefficientSequence::from_file(CARLEMAN_TEST_DATA "/bad_lengths.json"), Error);
  CHECK_THROWS_AS((void)CoefficientSequence::from_json_text("{\"coeffs_re\": [1, \"x\"]}"), Error);
  CHECK_THROWS_AS((void)CoefficientSequence::from_json_text("[1, 2]"), Error);
  CHECK_THROWS_AS((void)CoefficientSequence::from_file("/nonexistent.json"), Error);
}

TEST_CASE("generators and the Lambda norm") {
  const auto& s = setup();
  auto d = delta_sequence(5, 2);
  CHECK(d.at(2) == 1.0);
  CHECK(d.at(0) == 0.0);
  CHECK(lambda_norm(d, s.seq, 1.0).value == doctest::Approx(1.0 / 4.0));  // 1 / (2! M_2)
  CHECK(lambda_norm(d, s.seq, 2.0).value == doctest::Approx(1.0 / 16.0));

  auto g = geometric_sequence(s.seq, 0.5, 10);
  CHECK(g.truncated_generator);
  CHECK(std::abs(g.at(3)) == doctest::Approx(0.125 * 6.0 * 6.0));
  auto n = lambda_norm(g, s.seq, 1.0);
  CHECK(n.value == doctest::Approx(1.0));
  CHECK(n.argmax == 0);
  CHECK(n.lower_bound);
  CHECK(lambda_norm(CoefficientSequence{}, s.seq, 1.0).value == 0.0);
  CHECK_THROWS_AS((void)lambda_norm(g, s.seq, 0.0), Error);
  CHECK(log_factorial(10) == doctest::Approx(oracle::log_factorial(10)));
}

TEST_CASE("formal Borel transform radius") {
  const auto& s = setup();
  auto b1 = formal_borel(geometric_sequence(s.seq, 1.0, 30), s.table);
  CHECK(b1.d2 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(b1.r0 == doctest::Approx(0.9).epsilon(1e-6));
  auto b3 = formal_borel(geometric_sequence(s.seq, 3.0, 30), s.table);
  CHECK(b3.d2 == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(b3.r0 == doctest::Approx(0.3).epsilon(1e-6));
  auto d = formal_borel(delta_sequence(1), s.table);
  CHECK(d.degenerate);
  CHECK(d.r0 == 1.0);
  CHECK(b1(0.5L).real() == doctest::Approx(2.0 * (1.0 - std::pow(0.5, 30))));
}

TEST_CASE("formal Borel transform limits") {
  const auto& s = setup();
  CHECK_THROWS_AS((void)formal_borel(delta_sequence(60, 50), s.table), Error);
  // a_p = (p!)^3 outgrows every geometric bound against p! m(p)
  CoefficientSequence fast;
  for (std::size_t p = 0; p < 30; ++p) fast.a.emplace_back(std::exp(3.0 * oracle::log_factorial(p)), 0.0);
  try {
    (void)formal_borel(fast, s.table);
    FAIL("expected not_in_class");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_in_class);
  }
}

TEST_CASE("extension of the constant 1 is 1 - exp(-1/z)") {
  const auto& s = setup();
  Extension f(delta_sequence(1), s.kernel, s.table);
  for (double r : {0.05, 0.1, 0.3, 1.0, 3.0}) {
    for (double th : {0.0, 0.7, -1.2}) {
      const auto z = std::polar((long double)r, (long double)th);
      const auto ref = 1.0L - std::exp(-1.0L / z);
      CHECK(std::abs(f.eval({r, th}) - ref) <= 1e-15L * std::max(1.0L, std::abs(ref)));
    }
  }
  // E_1: the remainder after the constant term is exp(-1/x) on the real axis
  CHECK(double(f.remainder({0.1, 0.0}, 1)) == doctest::Approx(std::exp(-10.0)).epsilon(1e-9));
}

TEST_CASE("extension of z is z (1 - e^{-1/z} (1 + 1/z))") {
  const auto& s = setup();
  Extension f(delta_sequence(2, 1), s.kernel, s.table);
  REQUIRE(f.borel().degenerate);
  for (double r : {0.1, 0.5, 2.0}) {
    const std::complex<long double> z = std::polar((long double)r, 0.4L);
    const auto ref = z * (1.0L - std::exp(-1.0L / z) * (1.0L + 1.0L / z));
    CHECK(std::abs(f.eval({r, 0.4}) - ref) <= 1e-15L * std::abs(ref));
  }
}

TEST_CASE("extension is linear under scaling and vanishes on zero") {
  const auto& s = setup();
  auto g = geometric_sequence(s.seq, 0.5, 12);
  auto g2 = g;
  for (auto& v : g2.a) v *= std::complex<double>(0.0, 3.0);
  Extension f(g, s.kernel, s.table);
  Extension f2(g2, s.kernel, s.table);
  CHECK(f.r0() == doctest::Approx(f2.r0()));
  for (double r : {0.1, 0.4}) {
    const auto a = f.eval({r, 0.3});
    const auto b = f2.eval({r, 0.3});
    CHECK(std::abs(b - std::complex<long double>(0.0L, 3.0L) * a) <= 1e-14L * std::abs(b));
  }
  Extension zero(CoefficientSequence{{0.0, 0.0, 0.0}}, s.kernel, s.table);
  CHECK(std::abs(zero.eval({0.2, 0.1})) == 0.0L);
}

TEST_CASE("extension domain checks") {
  const auto& s = setup();
  Extension f(delta_sequence(1), s.kernel, s.table);
  auto code = [&](PolarPoint z) {
    try {
      (void)f.eval(z);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::numerical_failure;
  };
  CHECK(code({0.1, 1.7}) == ErrorCode::out_of_sector);
  CHECK(code({0.0, 0.0}) == ErrorCode::out_of_domain);
  GrowthProfile g(s.seq);
  Kernel real(real_weight_from_M(g), KernelVariant::paper);
  CHECK_THROWS_AS(Extension(delta_sequence(1), real, s.table), Error);
}

TEST_CASE("asymptotic error of the partial sums") {
  CoefficientSequence a{{1.0, 1.0, 1.0}};
  const std::complex<long double> v = 1.0L + 0.1L + 0.005L;
  CHECK(double(asymptotic_error(v, a, {0.1, 0.0}, 3)) == doctest::Approx(0.0));
  CHECK(double(asymptotic_error(v, a, {0.1, 0.0}, 1)) == doctest::Approx(0.105));
}

TEST_CASE("expansion certificate for an extension and a perturbed copy") {
  const auto& s = setup();
  Extension f(delta_sequence(1), s.kernel, s.table);
  ExpansionGrid grid;
  grid.n_max = 8;
  auto c = certify_expansion(f, s.seq, {0.8, 1.0}, grid);
  CHECK(c.passed);
  CHECK(std::isfinite(c.c));
  CHECK(std::isfinite(c.a));

  auto shifted = [&](PolarPoint z) { return f.eval(z) + 0.001L; };
  auto bad = certify_expansion(shifted, f.coefficients(), s.seq, {0.8, 1.0}, grid);
  CHECK_FALSE(bad.passed);
}

TEST_CASE("recovering z and exp(-1/z)") {
  const auto& s = setup();
  auto r = borel_recover([](PolarPoint z) { return std::complex<long double>(std::polar((long double)z.r, (long double)z.theta)); },
                         s.seq, 8);
  REQUIRE_FALSE(r.failed);
  REQUIRE(r.recovered == 9);
  CHECK(std::abs(r.a.at(1) - 1.0) < 1e-12);
  // other orders vanish relative to p! M_p = (p!)^2
  for (std::size_t p : {0u, 2u, 5u, 8u}) CHECK(std::abs(r.a.at(p)) / std::exp(2.0 * oracle::log_factorial(p)) < 1e-9);

  auto flat = borel_recover([](PolarPoint z) { return std::exp(-1.0L / std::polar((long double)z.r, (long double)z.theta)); },
                            s.seq, 8);
  REQUIRE_FALSE(flat.failed);
  for (std::size_t p = 0; p <= 8; ++p) CHECK(std::abs(flat.a.at(p)) < 1e-20);

  CHECK_THROWS_AS((void)borel_recover([](PolarPoint) { return std::complex<long double>(0); }, s.seq, 16), Error);
}

TEST_CASE("recovery reports non-smooth data as a failure record") {
  const auto& s = setup();
  auto r = borel_recover([](PolarPoint z) { return std::complex<long double>(std::sqrt((long double)z.r)); }, s.seq, 6);
  CHECK(r.failed);
  CHECK(r.failed_order <= 2);
  CHECK_FALSE(r.failure.empty());
}

TEST_CASE("round trip of a delta sequence") {
  const auto& s = setup();
  RightInverseConfig cfg;
  cfg.n_max = 6;
  auto rep = right_inverse_check(delta_sequence(3), s.kernel, s.table, s.seq, cfg);
  CHECK(rep.weighted_errors.size() == 7);
  CHECK(rep.distance <= 1e-6);
}
