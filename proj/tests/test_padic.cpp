#include "support/generators.hpp"
#include "ultraherz/padic.hpp"

#include <doctest.h>

#include <algorithm>

using namespace ultraherz;

namespace {

PadicPoint point(const PadicContext& ctx, std::initializer_list<std::pair<std::int64_t, std::int64_t>> xs,
                 int resolution = 12) {
  const std::vector<std::pair<std::int64_t, std::int64_t>> v(xs);
  return PadicPoint::from_rationals(ctx, v, resolution);
}

}  // namespace

TEST_SUITE("padic") {
  TEST_CASE("valuation of rationals") {
    CHECK(padic_valuation(24, 1, PadicContext(2, 1)) == Valuation::finite(3));
    CHECK(padic_valuation(5, 6, PadicContext(3, 1)) == Valuation::finite(-1));
    CHECK(padic_valuation(0, 1, PadicContext(7, 1)).is_infinite());
    CHECK(padic_valuation(-50, 3, PadicContext(5, 1)) == Valuation::finite(2));
    CHECK_THROWS_AS(padic_valuation(1, 0, PadicContext(2, 1)), DomainError);
  }

  TEST_CASE("context validation") {
    CHECK_THROWS_AS(PadicContext(4, 1), std::invalid_argument);
    CHECK_THROWS_AS(PadicContext(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(ball_measure(65, PadicContext(2, 1)), std::out_of_range);
  }

  TEST_CASE("vector norm") {
    CHECK(vector_norm(point(PadicContext(5, 2), {{25, 1}, {1, 5}})) == Rational(5));
    CHECK(vector_norm(point(PadicContext(3, 2), {{3, 1}, {9, 1}})) == Rational(1, 3));
    const auto zero = point(PadicContext(3, 2), {{0, 1}, {0, 1}});
    CHECK(zero.is_zero());
    CHECK(vector_norm(zero) == 0);
    CHECK_FALSE(zero.shell().has_value());
  }

  TEST_CASE("ball and sphere measures") {
    CHECK(ball_measure(1, PadicContext(3, 2)) == 9);
    CHECK(sphere_measure(0, PadicContext(2, 1)) == Rational(1, 2));
    CHECK(ball_measure(-2, PadicContext(2, 1)) == Rational(1, 4));
    CHECK(ball_measure_value(3, PadicContext(5, 1)) == 125.0);
  }

  TEST_CASE("ball is the disjoint union of the spheres inside it") {
    for (const int p : {2, 3, 5, 7}) {
      for (int n = 1; n <= 3; ++n) {
        const PadicContext ctx(p, n);
        const auto ratio = prime_power(ctx, -n);
        for (int g = -30; g <= 30; ++g) {
          REQUIRE(geometric_series(sphere_measure(g, ctx), ratio) == ball_measure(g, ctx));
          REQUIRE(ball_measure(g, ctx) - ball_measure(g - 1, ctx) == sphere_measure(g, ctx));
        }
      }
    }
  }

  TEST_CASE("sampling stays in the region") {
    const PadicContext ctx(2, 1);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10000; ++i) {
      const auto x = sample_uniform(Region::ball(0), kDefaultResolution, rng, ctx);
      REQUIRE(vector_norm(x) <= 1);
    }
    const PadicContext ctx3(3, 2);
    for (int i = 0; i < 2000; ++i) {
      const auto x = sample_uniform(Region::sphere(-2), 8, rng, ctx3);
      REQUIRE(x.shell() == -2);
    }
  }

  TEST_CASE("half of the unit ball is the unit sphere") {
    const PadicContext ctx(2, 1);
    std::mt19937_64 rng(11);
    const int draws = 100000;
    int hits = 0;
    for (int i = 0; i < draws; ++i) hits += sample_uniform(Region::ball(0), 16, rng, ctx).shell() == 0;
    const double frac = static_cast<double>(hits) / draws;
    CHECK(std::abs(frac - 0.5) <= 3.0 * std::sqrt(0.25 / draws));
  }

  TEST_CASE("sampling is reproducible") {
    const PadicContext ctx(5, 3);
    const auto a = sample_uniform(Region::ball(2), 10, 99, ctx);
    const auto b = sample_uniform(Region::ball(2), 10, 99, ctx);
    for (int i = 0; i < 3; ++i) {
      CHECK(a.coordinates()[i].valuation == b.coordinates()[i].valuation);
      CHECK(a.coordinates()[i].digits == b.coordinates()[i].digits);
    }
  }

  TEST_CASE("strong triangle inequality and scaling") {
    for (int t = 0; t < 300; ++t) {
      auto rng = testing::rng_for(1, t);
      const auto ctx = testing::random_ctx(rng);
      const int gx = std::uniform_int_distribution<int>(-4, 4)(rng);
      const int gy = std::uniform_int_distribution<int>(-4, 4)(rng);
      const auto x = sample_uniform(Region::ball(gx), 10, rng, ctx);
      const auto y = sample_uniform(Region::ball(gy), 10, rng, ctx);
      REQUIRE(vector_norm(x + y) <= std::max(vector_norm(x), vector_norm(y)));
      const int a = std::uniform_int_distribution<int>(-5, 5)(rng);
      REQUIRE(vector_norm(scale_by_prime_power(x, a)) == prime_power(ctx, -a) * vector_norm(x));
    }
  }

  TEST_CASE("digit expansion round trip") {
    const PadicContext ctx(3, 1);
    const auto x = point(ctx, {{-7, 9}});
    CHECK(x.shell() == 2);
    CHECK(vector_norm(x) == 9);
  }
}
