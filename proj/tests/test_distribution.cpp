#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "oppaccess/error.hpp"
#include "oppaccess/hyperexp.hpp"
#include "oracles.hpp"

using namespace oppaccess;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const HyperExpDist kThreeRate({1.0 / 3, 1.0 / 3, 1.0 / 3}, {5, 100, 6000});
const HyperExpDist kTwoRate({0.32, 0.68}, {160, 3670});

}  // namespace

TEST_CASE("pdf at the origin and against a high-precision sum") {
  CHECK(HyperExpDist({1}, {2}).pdf(0) == doctest::Approx(2).epsilon(1e-15));
  CHECK(HyperExpDist({0.5, 0.5}, {1, 3}).pdf(0) == doctest::Approx(2).epsilon(1e-15));
  const double want = oracle::pdf({{0.32, 0.68}, {160, 3670}}, 1e-3);
  CHECK(kTwoRate.pdf(1e-3) == doctest::Approx(want).epsilon(1e-14));
  for (double t : {0.0, 1e-5, 1e-2, 0.3, 5.0}) {
    CHECK(kThreeRate.pdf(t) > 0);
    CHECK(kThreeRate.pdf(t) == doctest::Approx(oracle::pdf({{1.0 / 3, 1.0 / 3, 1.0 / 3}, {5, 100, 6000}}, t)).epsilon(1e-13));
  }
}

TEST_CASE("cdf closed forms and quadrature") {
  CHECK(kThreeRate.cdf(0) == 0);
  CHECK(kTwoRate.cdf(0) == 0);
  CHECK(HyperExpDist({1}, {100}).cdf(std::log(10.0) / 100) == doctest::Approx(0.9).epsilon(1e-14));
  const double q = oracle::simpson([](double t) { return kThreeRate.pdf(t); }, 0, 0.01, 1e-14);
  CHECK(kThreeRate.cdf(0.01) == doctest::Approx(q).epsilon(1e-10));
  double prev = 0;
  for (double t = 0; t < 2; t += 1e-3) {
    CHECK(kThreeRate.cdf(t) >= prev);
    prev = kThreeRate.cdf(t);
  }
  CHECK(kThreeRate.cdf(1e4) == doctest::Approx(1.0));
}

TEST_CASE("negative times are rejected") {
  CHECK_THROWS_AS(kThreeRate.pdf(-1e-9), DomainError);
  CHECK_THROWS_AS(kThreeRate.cdf(-1), DomainError);
  CHECK_THROWS_AS(kThreeRate.ccdf(-1), DomainError);
  CHECK_THROWS_AS(kThreeRate.value_to_cost(-1), DomainError);
}

TEST_CASE("value-to-cost ratio") {
  const HyperExpDist e({1}, {50});
  for (double t : {0.0, 0.1, 10.0, 1e4}) CHECK(e.value_to_cost(t) == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(kThreeRate.value_to_cost(0) == doctest::Approx(1.0 / 2035).epsilon(1e-12));
  CHECK(kThreeRate.value_to_cost(1.0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::isfinite(kThreeRate.value_to_cost(1e6)));

  double prev = 0;
  for (double t = 0; t < 3; t += 1e-4) {
    const double v = kThreeRate.value_to_cost(t);
    CHECK(v >= prev * (1 - 1e-14));
    CHECK(v <= 0.2 * (1 + 1e-14));
    prev = v;
  }
}

TEST_CASE("ccdf complements cdf and pdf is minus its derivative") {
  for (double t = 0; t < 1; t += 0.01) {
    CHECK(kThreeRate.ccdf(t) == doctest::Approx(1 - kThreeRate.cdf(t)).epsilon(1e-12));
    const double h = t > 0 ? t * 1e-5 : 1e-11;
    const double lo = std::max(0.0, t - h);
    const double deriv = -(kThreeRate.ccdf(t + h) - kThreeRate.ccdf(lo)) / (t + h - lo);
    CHECK(deriv == doctest::Approx(kThreeRate.pdf(t)).epsilon(1e-6));
  }
}

TEST_CASE("mean") {
  CHECK(HyperExpDist({1}, {500}).mean() == doctest::Approx(0.002).epsilon(1e-15));
  CHECK(kTwoRate.mean() == doctest::Approx(0.32 / 160 + 0.68 / 3670).epsilon(1e-15));
  CHECK(kTwoRate.mean() == doctest::Approx(2.185e-3).epsilon(1e-3));
  CHECK(kThreeRate.mean() == doctest::Approx(0.070056).epsilon(1e-5));
}

TEST_CASE("survival integral and mass") {
  CHECK(kThreeRate.survival_integral(0, kInf) == doctest::Approx(kThreeRate.mean()).epsilon(1e-14));
  const double q = oracle::simpson([](double t) { return kThreeRate.ccdf(t); }, 0.001, 0.05, 1e-14);
  CHECK(kThreeRate.survival_integral(0.001, 0.05) == doctest::Approx(q).epsilon(1e-10));
  CHECK(kThreeRate.mass(0.01, kInf) == doctest::Approx(kThreeRate.ccdf(0.01)).epsilon(1e-14));
  CHECK(kThreeRate.mass(0, 0.01) == doctest::Approx(kThreeRate.cdf(0.01)).epsilon(1e-14));
}

TEST_CASE("sampling") {
  SUBCASE("single exponential mean") {
    Rng rng(11);
    const auto xs = HyperExpDist({1}, {100}).sample(rng, 1000000);
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    CHECK(std::abs(mean - 0.01) < 3 * 0.01 / std::sqrt(1e6));
  }
  SUBCASE("mixture passes KS at 1%") {
    Rng rng(12);
    const HyperExpDist d({0.5, 0.5}, {10, 1000});
    const auto xs = d.sample(rng, 1000000);
    CHECK(oracle::ks_distance(xs, [&](double t) { return d.cdf(t); }) < oracle::ks_critical_99(xs.size()));
  }
  SUBCASE("fixed seed gives identical draws") {
    Rng a(5), b(5);
    CHECK(kThreeRate.sample(a, 1000) == kThreeRate.sample(b, 1000));
  }
}

TEST_CASE("construction sorts, prunes and validates") {
  const HyperExpDist d({0.25, 0.75}, {3000, 10});
  CHECK(d.rates() == std::vector<double>{10, 3000});
  CHECK(d.weights() == std::vector<double>{0.75, 0.25});

  const HyperExpDist pruned({0.5, 1e-14, 0.5}, {1, 2, 3});
  CHECK(pruned.size() == 2);
  CHECK(pruned.weights()[0] + pruned.weights()[1] == doctest::Approx(1).epsilon(1e-15));

  const HyperExpDist dup({0.5, 0.5}, {7, 7});
  CHECK(dup.has_duplicate_rates());
  CHECK(dup.is_single_rate());
  CHECK_FALSE(kThreeRate.has_duplicate_rates());

  CHECK_THROWS_AS(HyperExpDist({}, {}), DomainError);
  CHECK_THROWS_AS(HyperExpDist({0.5, 0.4}, {1, 2}), DomainError);
  CHECK_THROWS_AS(HyperExpDist({1.2, -0.2}, {1, 2}), DomainError);
  CHECK_THROWS_AS(HyperExpDist({1}, {0}), DomainError);
  CHECK_THROWS_AS(HyperExpDist({1}, {1, 2}), DomainError);
  const double w_sum = std::accumulate(kThreeRate.weights().begin(), kThreeRate.weights().end(), 0.0);
  CHECK(std::abs(w_sum - 1) <= 1e-12);
}
