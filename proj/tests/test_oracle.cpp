#include "support/generators.hpp"
#include "ultraherz/norms.hpp"
#include "ultraherz/operators.hpp"
#include "ultraherz/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace ultraherz;

namespace {

const PadicContext kP2{2, 1};

bool within(const OracleEstimate& e, double exact, double k_sigma) {
  return std::abs(e.estimate - exact) <= k_sigma * e.sigma + 1e-12;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("integral of the constant 1 over the unit ball is 1") {
    const auto e = mc_integrate(RadialStepFunction::constant(kP2, 1.0), 0, {});
    CHECK(within(e, 1.0, 3.0));
  }

  TEST_CASE("integral of the unit sphere indicator over B_0") {
    const auto e = mc_integrate(RadialStepFunction::shell_indicator(kP2, 0), 0, {});
    CHECK(e.sigma > 0.0);
    CHECK(within(e, 0.5, 3.0));
  }

  TEST_CASE("p^{-k} on [-2,2] over B_2 matches the shell sum") {
    std::vector<double> c;
    double exact = 0.0;
    for (int k = -2; k <= 2; ++k) {
      c.push_back(std::pow(2.0, -k));
      exact += std::pow(2.0, -k) * sphere_measure_value(k, kP2);
    }
    const RadialStepFunction f(kP2, -2, c);
    CHECK(within(mc_integrate(f, 2, {}), exact, 3.0));
  }

  TEST_CASE("hardy probe at k = 3 on the unit ball indicator") {
    const OperatorSpec spec{OperatorKind::hardy, 0.0, std::nullopt};
    const auto e = mc_operator_probe(RadialStepFunction::ball_indicator(kP2, 0), spec, 3, {});
    CHECK(within(e, 0.125, 3.0));
  }

  TEST_CASE("adjoint probe at k = -1 on the S_1 indicator") {
    const OperatorSpec spec{OperatorKind::hardy_adjoint, 0.0, std::nullopt};
    const auto e = mc_operator_probe(RadialStepFunction::shell_indicator(kP2, 1), spec, -1, {});
    CHECK(within(e, 0.5, 3.0));
  }

  TEST_CASE("commutator probe with a constant symbol vanishes") {
    const OperatorSpec spec{OperatorKind::commutator, 0.3, RadialStepFunction::constant(kP2, 2.5)};
    const auto e = mc_operator_probe(RadialStepFunction::ball_indicator(kP2, 1), spec, 2, {});
    CHECK(within(e, 0.0, 3.0));
  }

  TEST_CASE("maximal probe agrees with the closed form") {
    const auto f = RadialStepFunction::ball_indicator(kP2, 0);
    const OperatorSpec spec{OperatorKind::maximal, 0.0, std::nullopt};
    OracleConfig cfg;
    cfg.truncation = 10;
    const auto e = mc_operator_probe(f, spec, 2, cfg);
    CHECK(std::abs(e.estimate - maximal_value(f, 2)) <= 4.0 * e.sigma + 1e-12);
  }

  TEST_CASE("Luxemburg oracle") {
    OracleConfig cfg;
    cfg.truncation = 10;
    SUBCASE("sphere indicator, u = 2") {
      const auto e = mc_luxemburg(RadialStepFunction::shell_indicator(kP2, 0), ExponentFunction::constant(kP2, 2.0), cfg);
      CHECK(within(e, std::sqrt(0.5), 5.0));
    }
    SUBCASE("zero function") {
      const auto e = mc_luxemburg(RadialStepFunction::zero(kP2), ExponentFunction::constant(kP2, 2.0), cfg);
      CHECK(e.estimate == 0.0);
    }
    SUBCASE("two shells, mixed exponent") {
      const RadialStepFunction f(kP2, 0, {1.0, 1.0});
      const ExponentFunction u(kP2, 0, {2.0, 3.0}, 2.0, 3.0);
      const auto e = mc_luxemburg(f, u, cfg);
      CHECK(within(e, luxemburg_norm(f, u).value, 5.0));
      CHECK(e.estimate == doctest::Approx(1.1653).epsilon(0.02));
    }
  }

  TEST_CASE("fixed seed gives bit-identical estimates") {
    const auto f = RadialStepFunction(kP2, -1, {0.5, -1.0, 2.0});
    OracleConfig cfg;
    cfg.seed = 42;
    const auto a = mc_integrate(f, 3, cfg);
    const auto b = mc_integrate(f, 3, cfg);
    CHECK(a.estimate == b.estimate);
    CHECK(a.sigma == b.sigma);
    cfg.seed = 43;
    CHECK(mc_integrate(f, 3, cfg).estimate != a.estimate);
  }

  TEST_CASE("standardized errors are centred over 50 repetitions") {
    const auto f = RadialStepFunction(kP2, -2, {1.0, 0.5, 2.0, -1.0});
    const double exact = cumulative_integral(f, 2);
    double mean_z = 0.0;
    OracleConfig cfg;
    cfg.samples = 20000;
    for (int rep = 0; rep < 50; ++rep) {
      cfg.seed = 1000 + static_cast<std::uint64_t>(rep);
      const auto e = mc_integrate(f, 2, cfg);
      mean_z += (e.estimate - exact) / e.sigma / 50.0;
    }
    CHECK(mean_z >= -0.5);
    CHECK(mean_z <= 0.5);
  }

  TEST_CASE("four times the samples halves sigma") {
    const auto f = RadialStepFunction(kP2, -2, {1.0, 0.5, 2.0, -1.0});
    OracleConfig cfg;
    cfg.samples = 25000;
    const double s1 = mc_integrate(f, 2, cfg).sigma;
    cfg.samples = 100000;
    const double s4 = mc_integrate(f, 2, cfg).sigma;
    CHECK(s1 / s4 == doctest::Approx(2.0).epsilon(0.2));
  }

  TEST_CASE("truncated outer mass is reported") {
    const RadialStepFunction f(kP2, 0, {1.0}, {}, {1.0, -2.0});
    const OperatorSpec spec{OperatorKind::hardy_adjoint, 0.0, std::nullopt};
    OracleConfig cfg;
    cfg.truncation = 8;
    const auto e = mc_operator_probe(f, spec, 0, cfg);
    CHECK(e.truncation_bias_bound > 0.0);
    CHECK(std::isfinite(e.truncation_bias_bound));
  }

  TEST_CASE("invalid configurations") {
    OracleConfig cfg;
    cfg.samples = 10;
    CHECK_THROWS_AS(mc_integrate(RadialStepFunction::zero(kP2), 0, cfg), std::invalid_argument);
    cfg = {};
    CHECK_THROWS_AS(mc_integrate(RadialStepFunction::zero(kP2), cfg.truncation + 1, cfg), std::invalid_argument);
  }
}
