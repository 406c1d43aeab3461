#include <doctest.h>

#include <cmath>
#include <string>

#include "carleman/error.hpp"
#include "carleman/sequences.hpp"
#include "oracles.hpp"

using namespace carleman;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::numerical_failure;
}

}  // namespace

TEST_CASE("gevrey log M_p matches lgamma") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    auto s = SequenceModel::gevrey(alpha);
    for (std::size_t p : {0u, 1u, 5u, 40u, 1000u, 100000u}) {
      const double ref = double(oracle::log_gevrey_M(alpha, p));
      CHECK(std::abs(s.log_M(p) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("builtin quotients follow their closed forms") {
  auto ab = SequenceModel::alphabeta(1.0, 2.0);
  auto q = SequenceModel::qpower(2.0);
  auto gs = SequenceModel::gevrey_scaled(3.0, 0.5);
  for (std::size_t p : {0u, 1u, 10u, 500u}) {
    CHECK(ab.log_quotient(p) == doctest::Approx(double(oracle::log_quotient_alphabeta(1.0, 2.0, p))).epsilon(1e-14));
    CHECK(q.log_quotient(p) == doctest::Approx(double(oracle::log_quotient_qpower(2.0, p))).epsilon(1e-14));
    CHECK(gs.log_quotient(p) == doctest::Approx(double(oracle::log_quotient_scaled(3.0, 0.5, p))).epsilon(1e-14));
    CHECK(std::log(quotient(ab, p)) == doctest::Approx(ab.log_quotient(p)));
  }
  CHECK(q.log_M(30) == doctest::Approx(900.0 * std::log(2.0)).epsilon(1e-13));
  auto f = [&](std::size_t j) { return oracle::log_quotient_alphabeta(1.0, 2.0, j); };
  CHECK(ab.log_M(20000) == doctest::Approx(double(oracle::log_M(f, 20000))).epsilon(1e-13));
}

TEST_CASE("prefix holds log_M with one more entry than log_m") {
  auto s = SequenceModel::gevrey(1.0);
  auto pre = s.prefix(10);
  REQUIRE(pre->size() >= 10);
  CHECK(pre->log_M.size() == pre->log_m.size() + 1);
  CHECK(pre->log_M[0] == 0.0);
  CHECK(pre->log_M[5] == doctest::Approx(std::log(120.0)));
  auto cov = s.prefix_covering(std::log(5000.0));
  CHECK(cov->log_m.back() > std::log(5000.0));
}

TEST_CASE("copies share one cache and give identical bits") {
  auto a = SequenceModel::gevrey(1.5);
  auto b = a;
  const double x = a.log_M(50000);
  CHECK(b.log_M(50000) == x);
  CHECK(SequenceModel::gevrey(1.5).log_M(50000) == x);
}

TEST_CASE("power sequences scale logs and compose back") {
  auto s = SequenceModel::gevrey(2.0);
  auto half = power_sequence(s, 0.5);
  CHECK(half.power_scale() == doctest::Approx(0.5));
  CHECK(half.log_M(100) == doctest::Approx(double(oracle::log_gevrey_M(1.0, 100))).epsilon(1e-13));
  auto back = power_sequence(half, 2.0);
  CHECK(back.power_scale() == doctest::Approx(1.0));
  CHECK(back.log_M(100) == doctest::Approx(s.log_M(100)).epsilon(1e-14));
}

TEST_CASE("explicit tables") {
  auto s = SequenceModel::from_file(CARLEMAN_TEST_DATA "/factorial_prefix.json");
  REQUIRE(s.max_quotients().has_value());
  CHECK(*s.max_quotients() == 5);
  CHECK(s.log_M(5) == doctest::Approx(std::log(120.0)));
  CHECK(code_of([&] { (void)s.log_M(6); }) == ErrorCode::range_exceeded);
  CHECK(SequenceModel::parse("file:" CARLEMAN_TEST_DATA "/factorial_prefix.json").log_M(3) ==
        doctest::Approx(std::log(6.0)));

  CHECK(code_of([] { (void)SequenceModel::from_log_values("x", {0.0}); }) == ErrorCode::invalid_sequence);
  CHECK(code_of([] { (void)SequenceModel::from_log_values("x", {1.0, 2.0}); }) == ErrorCode::invalid_sequence);
  CHECK(code_of([] { (void)SequenceModel::from_log_values("x", {0.0, NAN}); }) == ErrorCode::invalid_sequence);
  CHECK(code_of([] { (void)SequenceModel::from_file("/nonexistent/seq.json"); }) == ErrorCode::io_error);
  CHECK(code_of([] { (void)SequenceModel::from_file(CARLEMAN_TEST_DATA "/delta0.json"); }) ==
        ErrorCode::invalid_sequence);
}

TEST_CASE("spec parsing") {
  CHECK(SequenceModel::parse("gevrey:1").kind() == SequenceKind::gevrey);
  CHECK(SequenceModel::parse("gevrey-scaled:2:1").kind() == SequenceKind::gevrey_scaled);
  CHECK(SequenceModel::parse("alphabeta:1:-1").parameters()[1] == -1.0);
  CHECK(SequenceModel::parse("qpower:1.5").kind() == SequenceKind::qpower);
  for (const char* bad : {"gevrey", "gevrey:0", "gevrey:-1", "gevrey:x", "alphabeta:1", "qpower:1", "nope:1", "file:"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { (void)SequenceModel::parse(bad); }) == ErrorCode::invalid_parameter);
  }
}

TEST_CASE("regularity of the builtins") {
  auto g = certify_regularity(SequenceModel::gevrey(1.0), 200, 800);
  CHECK(g.strongly_regular());
  CHECK(g.moderate.witness < 2.1);

  auto ab = certify_regularity(SequenceModel::alphabeta(1.0, 2.0), 200, 800);
  CHECK(ab.strongly_regular());

  auto q = certify_regularity(SequenceModel::qpower(2.0), 60, 240);
  CHECK(q.log_convex.pass);
  CHECK_FALSE(q.moderate.pass);
  CHECK_FALSE(q.strongly_regular());

  auto not_convex = SequenceModel::from_log_values("bumpy", {0.0, 1.0, 1.5, 3.0, 4.0, 6.0, 8.0, 10.5, 13.0, 16.0,
                                                             19.0, 22.5, 26.0, 30.0});
  auto r = certify_regularity(not_convex, 3, 12);
  CHECK_FALSE(r.log_convex.pass);
  REQUIRE(r.log_convex.first_violation.has_value());
  CHECK(*r.log_convex.first_violation == 1);

  CHECK(code_of([] { (void)certify_regularity(SequenceModel::gevrey(1.0), 2, 8); }) == ErrorCode::invalid_parameter);
  CHECK(code_of([] { (void)certify_regularity(SequenceModel::gevrey(1.0), 10, 39); }) == ErrorCode::invalid_parameter);
}

TEST_CASE("equivalence constants of comparable and incomparable sequences") {
  auto e = equivalence_constants(SequenceModel::gevrey(1.0), SequenceModel::gevrey_scaled(2.0, 1.0), 200);
  CHECK(e.lower == doctest::Approx(2.0));
  CHECK(e.upper == doctest::Approx(2.0));
  CHECK(e.verdict == EquivalenceVerdict::plausible);

  auto d = equivalence_constants(SequenceModel::gevrey(1.0), SequenceModel::gevrey(1.5), 200);
  CHECK(d.verdict == EquivalenceVerdict::refuted_on_prefix);
}
