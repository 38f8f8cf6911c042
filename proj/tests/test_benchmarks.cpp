#include <cmath>

#include "amsbq/benchmarks.hpp"
#include "amsbq/quadrule.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "util.hpp"

using namespace amsbq;
using testutil::pt;

TEST_CASE("forrester evaluations") {
  CHECK(forrester_eval(ForresterVariant::classic, 1, 0.0) ==
        doctest::Approx(4.0 * std::sin(-4.0)).epsilon(1e-12));
  CHECK(forrester_eval(ForresterVariant::classic, 1, 0.0) ==
        doctest::Approx(3.027210).epsilon(1e-6));
  CHECK(forrester_eval(ForresterVariant::classic, 2, 0.0) ==
        doctest::Approx(1.513605).epsilon(1e-6));
  CHECK(forrester_eval(ForresterVariant::wigglified, 1, 0.0) ==
        doctest::Approx(3.027210).epsilon(1e-6));
  CHECK_THROWS_AS(forrester_eval(ForresterVariant::classic, 1, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(forrester_eval(ForresterVariant::classic, 1, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(forrester_eval(ForresterVariant::classic, 3, 0.5), std::out_of_range);
}

TEST_CASE("cost functions stay in (0,1] and keep the published structure") {
  for (const auto variant : {ForresterVariant::classic, ForresterVariant::wigglified}) {
    for (int i = 0; i < 10000; ++i) {
      const double x = i / 9999.0;
      for (int l : {1, 2}) {
        const double c = forrester_cost(variant, l, x);
        CHECK(c > 0.0);
        CHECK(c <= 1.0);
      }
    }
  }
  // Classic: near-equal costs at small x, two orders apart at large x.
  for (double x = 0.0; x <= 0.05; x += 0.005) {
    CHECK(forrester_cost(ForresterVariant::classic, 2, x) /
              forrester_cost(ForresterVariant::classic, 1, x) >=
          0.5);
  }
  for (double x = 0.6; x <= 1.0; x += 0.01) {
    CHECK(forrester_cost(ForresterVariant::classic, 2, x) /
              forrester_cost(ForresterVariant::classic, 1, x) <=
          0.02);
  }
}

TEST_CASE("the wigglified secondary cost has an interior minimum") {
  double best_x = 0.0, best = 1e9;
  for (int i = 0; i <= 20000; ++i) {
    const double x = i / 20000.0;
    const double c = forrester_cost(ForresterVariant::wigglified, 2, x);
    if (c < best) {
      best = c;
      best_x = x;
    }
  }
  CHECK(best_x > 0.1);
  CHECK(best_x < 0.9);
  CHECK(best < forrester_cost(ForresterVariant::wigglified, 2, 0.0));
  CHECK(best < forrester_cost(ForresterVariant::wigglified, 2, 1.0));
  CHECK(best < 0.01);  // the cheap well that makes ip stick
}

TEST_CASE("percentile estimator") {
  const IntegrationMeasure unit = IntegrationMeasure::uniform_box(0.0, 1.0);
  CHECK(percentile_estimate([](const Point& x) { return x(0); }, unit, 4) ==
        doctest::Approx(0.625).epsilon(1e-12));
  for (int n : {1, 7, 100}) {
    CHECK(percentile_estimate([](const Point&) { return 3.25; }, unit, n) ==
          doctest::Approx(3.25).epsilon(1e-12));
  }
  // Right Riemann sums converge first order; on the classic primary the
  // leading error term is (f(1)-f(0))/(2n), about 3.1e-3 at n = 2048.
  auto f1 = [](const Point& x) { return forrester_eval(ForresterVariant::classic, 1, x(0)); };
  const double truth = oracles::quad_1d(
      [](double x) { return forrester_eval(ForresterVariant::classic, 1, x); }, 0.0, 1.0, 500);
  const double err_2048 = std::abs(percentile_estimate(f1, unit, 2048) - truth);
  const double err_8192 = std::abs(percentile_estimate(f1, unit, 8192) - truth);
  CHECK(err_2048 < 5e-3);
  CHECK(err_8192 < 0.3 * err_2048);  // ~1/n decay
  CHECK_THROWS_AS(percentile_estimate([](const Point&) { return 0.0; }, unit, 0),
                  std::invalid_argument);
}

TEST_CASE("registry ids and lookup") {
  const auto ids = benchmark_ids();
  CHECK(ids.size() == 5);
  for (const auto& id : ids) {
    CHECK(benchmark_exists(id));
    const Benchmark bench = make_benchmark(id);
    CHECK(bench.id == id);
    CHECK(bench.num_sources == bench.black_box.num_sources);
    CHECK(static_cast<int>(bench.cost.per_source.size()) == bench.num_sources);
    CHECK(static_cast<int>(bench.default_noise.size()) == bench.num_sources);
    CHECK(std::isfinite(bench.ground_truth));
  }
  CHECK_FALSE(benchmark_exists("nope"));
  CHECK_THROWS_AS(make_benchmark("nope"), std::invalid_argument);
}

TEST_CASE("registered ground truths agree with independent quadrature") {
  const Benchmark classic = make_benchmark("forrester-classic");
  const double truth = oracles::quad_1d(
      [](double x) { return forrester_eval(ForresterVariant::classic, 1, x); }, 0.0, 1.0, 800);
  CHECK(classic.ground_truth == doctest::Approx(truth).epsilon(1e-10));

  const Benchmark wiggly = make_benchmark("forrester-wiggly");
  const double truth_w = oracles::quad_1d(
      [](double x) { return forrester_eval(ForresterVariant::wigglified, 1, x); }, 0.0, 1.0, 800);
  CHECK(wiggly.ground_truth == doctest::Approx(truth_w).epsilon(1e-10));
}

TEST_CASE("frozen sir ground truth is consistent with a fresh estimate") {
  const Benchmark bench = make_benchmark("sir-max");
  const auto [nodes, weights] = gauss_legendre(32);
  double acc = 0.0;
  for (int i = 0; i < 32; ++i) {
    Rng rng = Rng(5150).split(i);
    const double a = 31.0 + 30.0 * nodes[i];
    acc += weights[i] * sir_integrand(1, a, SirQoi::max_infected, 600, rng);
  }
  acc *= 0.5;
  CHECK(bench.ground_truth == doctest::Approx(acc).epsilon(0.02));
}

TEST_CASE("the gauss2d benchmark evaluates the published sources") {
  const Benchmark bench = make_benchmark("gauss2d");
  const GaussMixtureSources sources = gauss_mixture_generate(kGaussMixtureExperimentSeed);
  Rng rng(0);
  const Point x = pt(0.7, -1.1);
  for (int l = 1; l <= 3; ++l) {
    CHECK(bench.black_box.eval(l, x, rng) == doctest::Approx(gauss_mixture_eval(sources, l, x)));
  }
  CHECK(bench.cost.cost(1, x) == doctest::Approx(1.0));
  CHECK(bench.cost.cost(2, x) == doctest::Approx(0.05));
  CHECK(bench.cost.cost(3, x) == doctest::Approx(0.05));
}

TEST_CASE("initial designs follow the seeding conventions") {
  const Benchmark bench = make_benchmark("forrester-wiggly");
  Rng rng(12);
  const Dataset multi = bench.initial_design(true, rng);
  REQUIRE(multi.size() == 6);  // paired design: both sources at three locations
  for (int p = 0; p < 3; ++p) {
    CHECK(multi.triplets[2 * p].source == 1);
    CHECK(multi.triplets[2 * p + 1].source == 2);
    CHECK(multi.triplets[2 * p].x == multi.triplets[2 * p + 1].x);
  }
  CHECK(multi.triplets[2].x(0) - multi.triplets[0].x(0) == doctest::Approx(0.08));
  CHECK(multi.triplets[4].x(0) - multi.triplets[2].x(0) == doctest::Approx(0.08));
  for (const auto& t : multi.triplets) {
    CHECK(bench.domain.contains(t.x));
    CHECK(t.y == doctest::Approx(forrester_eval(ForresterVariant::wigglified, t.source, t.x(0))));
  }

  const Dataset single = bench.initial_design(false, rng);
  REQUIRE(single.size() == 3);
  for (const auto& t : single.triplets) CHECK(t.source == 1);

  // Deterministic in the stream.
  Rng rng2(12);
  const Dataset again = make_benchmark("forrester-wiggly").initial_design(true, rng2);
  for (int i = 0; i < 6; ++i) {
    CHECK(again.triplets[i].x(0) == multi.triplets[i].x(0));
    CHECK(again.triplets[i].y == multi.triplets[i].y);
  }

  // sir keeps the single-primary convention: f1 and f2 share one location
  // plus one more secondary datum.
  const Benchmark sir = make_benchmark("sir-max");
  const Dataset sir_init = sir.initial_design(true, Rng(4));
  REQUIRE(sir_init.size() == 3);
  CHECK(sir_init.triplets[0].source == 1);
  CHECK(sir_init.triplets[1].source == 2);
  CHECK(sir_init.triplets[2].source == 2);
  CHECK(sir_init.triplets[0].x == sir_init.triplets[1].x);

  const Benchmark g2 = make_benchmark("gauss2d");
  const Dataset g2init = g2.initial_design(true, Rng(3));
  REQUIRE(g2init.size() == 5);  // 1 primary + 2 per secondary, total cost 1.2
  double cost = 0.0;
  for (const auto& t : g2init.triplets) cost += g2.cost.cost(t.source, t.x);
  CHECK(cost == doctest::Approx(1.2));
}
