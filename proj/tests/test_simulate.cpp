#include <doctest.h>

#include <numeric>

#include "oppaccess/error.hpp"
#include "oppaccess/simulate.hpp"
#include "oppaccess/strategies.hpp"

using namespace oppaccess;

namespace {

const Matrix kSlowP{{0.9, 0.05, 0.05}, {0.05, 0.9, 0.05}, {0.05, 0.05, 0.9}};
const SmmppModel kModel({5, 100, 6000}, kSlowP);
const HyperExpDist kHalf({0.5, 0.5}, {100, 6000});

IdleTrace labelled(std::vector<double> d, std::vector<std::size_t> s) {
  IdleTrace t;
  t.durations = std::move(d);
  t.states = std::move(s);
  return t;
}

}  // namespace

TEST_CASE("always transmit takes the whole idle time and hits every packet") {
  const auto t = generate(kModel, 10000, 1);
  const auto r = run(t, always_transmit());
  CHECK(r.collision == 1);
  CHECK(r.collided == t.size());
  const double mean = std::accumulate(t.durations.begin(), t.durations.end(), 0.0) / t.size();
  CHECK(r.capacity == doctest::Approx(mean).epsilon(1e-12));
  CHECK(run(t, never_transmit()).total_access == 0);
}

TEST_CASE("per-cycle accounting") {
  Strategy s;
  s.name = "two";
  s.contexts = {{Episode{0, 1, 1}, Episode{2, 3, 1}}};
  const auto t = labelled({0.5, 1.0, 1.5, 2.5, 3.0, 4.0}, {});
  const auto r = run(t, s);
  // access: 0.5, 1, 1, 1.5, 2, 2; collisions at 0.5, 1.0, 2.5, 3.0
  CHECK(r.total_access == doctest::Approx(8.0));
  CHECK(r.collided == 4);
  CHECK(r.collided_flags == std::vector<std::uint8_t>{1, 1, 0, 1, 1, 0});
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(r.collided_flags[k] <= 1);
}

TEST_CASE("conditioning contexts") {
  Strategy s;
  s.name = "ctx";
  s.contexts = {{Episode{0, kForever, 1}}, {}};
  const auto t = labelled({1, 1, 1, 1}, {0, 1, 1, 0});

  s.mode = PtsiMode::full;
  CHECK(run(t, s).collided_flags == std::vector<std::uint8_t>{1, 0, 0, 1});

  s.mode = PtsiMode::markov;
  RunOptions o;
  o.initial_context_weights = {0, 1};
  const auto r = run(t, s, o);
  CHECK(r.initial_context == 1u);
  CHECK(r.collided_flags == std::vector<std::uint8_t>{0, 1, 0, 0});

  IdleTrace bare;
  bare.durations = {1, 1};
  CHECK_THROWS_AS(run(bare, s), DataError);
  try {
    run(bare, s);
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("markov") != std::string::npos);
  }
  CHECK_THROWS_AS(run(labelled({1, 1}, {0, 2}), s), DataError);
  CHECK_THROWS_AS(run(labelled({1}, {0}), s, RunOptions{0, 0, std::nullopt, {}}), DomainError);
}

TEST_CASE("Monte Carlo agrees with the closed forms") {
  SUBCASE("statistical optimal on its design law") {
    const auto s = stat_optimal(kHalf, 0.1);
    const auto t = generate(SmmppModel::from_mixture(kHalf), 1000000, 2);
    const auto r = run(t, s);
    const auto p = predict(s, kHalf);
    CHECK(std::abs(r.collision - 0.1) < 3 * std::sqrt(0.1 * 0.9 / 1e6));
    CHECK(std::abs(r.capacity - p.capacity) < std::max(0.01 * p.capacity, 3 * r.capacity_std_error));
  }
  SUBCASE("multiple shot keeps its budget on matched traffic") {
    const auto s = multiple_shot(std::vector<double>{100, 6000}, 0.05);
    const auto t = generate(SmmppModel({100, 6000}, {{0.9, 0.1}, {0.1, 0.9}}), 1000000, 3);
    const auto r = run(t, s);
    CHECK(r.collision <= 0.05 + 3 * std::sqrt(0.05 * 0.95 / 1e6));
  }
}

TEST_CASE("outage") {
  const std::vector<std::uint8_t> none(1000, 0), all(1000, 1);
  CHECK(outage(window_collision_rates(none, 100), 0.05) == 0);
  CHECK(outage(window_collision_rates(all, 100), 0.99) == 1);
  std::vector<std::uint8_t> some(250, 0);
  for (std::size_t k = 0; k < 10; ++k) some[k] = 1;
  const auto w = window_collision_rates(some, 100);
  CHECK(w == std::vector<double>{0.1, 0.0});
  CHECK(outage(w, 0.1) == 0);
  CHECK(outage(w, 0.05) == 0.5);
  CHECK_THROWS_AS(outage(std::vector<double>{}, 0.1), DataError);
  CHECK_THROWS_AS(window_collision_rates(some, 0), DomainError);

  SUBCASE("mis-designed optimal strategy suffers more outage than multiple shot") {
    const auto t = generate(SmmppModel::from_mixture(HyperExpDist({0.9, 0.1}, {100, 6000})), 100000, 4);
    RunOptions o;
    o.eta = 0.1;
    const auto opt = run(t, stat_optimal(kHalf, 0.1), o);
    const auto ms = run(t, multiple_shot(kHalf.rates(), 0.1), o);
    REQUIRE(opt.outage);
    REQUIRE(ms.outage);
    CHECK(*opt.outage > *ms.outage);
    CHECK(outage(opt, 0.1, 100) == doctest::Approx(*opt.outage));
  }
}

TEST_CASE("determinism and conservation") {
  const auto t = generate(kModel, 20000, 5);
  Strategy s = stat_one_shot(marginal_dist(kModel), 0.1);
  s.contexts[0][0].probability = 0.5;
  RunOptions o;
  o.seed = 77;
  const auto a = run(t, s, o);
  const auto b = run(t, s, o);
  CHECK(a.total_access == b.total_access);
  CHECK(a.collided_flags == b.collided_flags);
  o.seed = 78;
  CHECK(run(t, s, o).collided_flags != a.collided_flags);
  const double idle = std::accumulate(t.durations.begin(), t.durations.end(), 0.0);
  for (const auto& name : strategy_names()) {
    CHECK(run(t, build_strategy(name, kModel, 0.1)).total_access < idle);
  }
}

TEST_CASE("more budget never lowers measured capacity") {
  const auto t = generate(kModel, 200000, 6);
  for (const auto& name : strategy_names()) {
    CAPTURE(name);
    double prev = 0;
    for (double eta : {0.01, 0.05, 0.1, 0.2}) {
      const double c = run(t, build_strategy(name, kModel, eta)).capacity;
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("comparison reports") {
  const auto matched = generate(SmmppModel::from_mixture(kHalf), 200000, 7);
  const std::vector<Strategy> pair{stat_optimal(kHalf, 0.05), multiple_shot(kHalf.rates(), 0.05)};
  const auto rep = compare(pair, matched, 0.05, 9);
  REQUIRE(rep.entries.size() == 2);
  CHECK(rep.entries[0].name == "stat_optimal");
  CHECK(rep.entries[0].result.capacity >= rep.entries[1].result.capacity);

  RunOptions o;
  o.seed = derive_seed(9, 0);
  o.eta = 0.05;
  const auto single = compare(std::span(pair).first(1), matched, 0.05, 9);
  CHECK(single.entries[0].result.total_access == run(matched, pair[0], o).total_access);

  const auto drifted = generate(SmmppModel::from_mixture(HyperExpDist({0.9, 0.1}, {100, 6000})), 200000, 8);
  const auto d = compare(pair, drifted, 0.05, 9);
  const double sigma = std::sqrt(0.05 * 0.95 / 200000);
  CHECK(d.entries[0].result.collision > 0.05 + 3 * sigma);
  CHECK(d.entries[1].result.collision <= 0.05 + 3 * sigma);
}
