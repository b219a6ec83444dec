#include <doctest.h>

#include <numeric>
#include <sstream>

#include "oppaccess/error.hpp"
#include "oppaccess/fit.hpp"
#include "oppaccess/smmpp.hpp"
#include "oppaccess/trace_io.hpp"
#include "oracles.hpp"

using namespace oppaccess;

namespace {

const Matrix kSlowP{{0.9, 0.05, 0.05}, {0.05, 0.9, 0.05}, {0.05, 0.05, 0.9}};
const SmmppModel kModel({5, 100, 6000}, kSlowP);

}  // namespace

TEST_CASE("steady state") {
  const auto a = steady_state(kSlowP);
  for (double x : a) CHECK(x == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(steady_state({{1.0}}) == std::vector<double>{1.0});
  // Hand solution: a1 = 0.5 a1 + 0.25 a2 with a1 + a2 = 1.
  const auto b = steady_state({{0.5, 0.5}, {0.25, 0.75}});
  CHECK(b[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(b[1] == doctest::Approx(2.0 / 3).epsilon(1e-12));
}

TEST_CASE("reducible chains are rejected") {
  CHECK_THROWS_AS(steady_state({{1, 0}, {0, 1}}), ModelError);
  CHECK_THROWS_AS(steady_state({{1, 0}, {0.5, 0.5}}), ModelError);
  CHECK_THROWS_AS(SmmppModel({1, 2}, {{0.5, 0.4}, {0.5, 0.5}}), ModelError);
}

TEST_CASE("model sorts states by rate") {
  const SmmppModel m({1000, 10}, {{0.75, 0.25}, {0.5, 0.5}});
  CHECK(m.rates() == std::vector<double>{10, 1000});
  CHECK(m.transitions()[0] == std::vector<double>{0.5, 0.5});
  CHECK(m.transitions()[1] == std::vector<double>{0.25, 0.75});
  CHECK(m.stationary()[0] == doctest::Approx(1.0 / 3));
}

TEST_CASE("marginal and conditional distributions") {
  const auto d = marginal_dist(SmmppModel({100}, {{1}}));
  CHECK(d == HyperExpDist::exponential(100));
  const auto m3 = marginal_dist(kModel);
  CHECK(m3.rates() == std::vector<double>{5, 100, 6000});
  for (double w : m3.weights()) CHECK(w == doctest::Approx(1.0 / 3).epsilon(1e-12));
  const auto m2 = marginal_dist(SmmppModel({10, 1000}, {{0.5, 0.5}, {0.25, 0.75}}));
  CHECK(m2.weights()[0] == doctest::Approx(1.0 / 3));
  CHECK(m2.weights()[1] == doctest::Approx(2.0 / 3));

  const auto c1 = conditional_next_dist(kModel, 0);
  CHECK(c1.weights()[0] == doctest::Approx(0.9));
  CHECK(c1.weights()[1] == doctest::Approx(0.05));
  CHECK(c1.weights()[2] == doctest::Approx(0.05));
  CHECK(c1.rates() == std::vector<double>{5, 100, 6000});
  CHECK(conditional_next_dist(SmmppModel({7}, {{1}}), 0) == HyperExpDist::exponential(7));
  CHECK_THROWS_AS(conditional_next_dist(kModel, 3), DomainError);

  // Holds when p_ij r_j << r_i off the diagonal.
  const SmmppModel slow({100, 500}, {{0.99, 0.01}, {0.01, 0.99}});
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(conditional_next_dist(slow, i).mean_rate() == doctest::Approx(slow.rates()[i]).epsilon(0.1));
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const auto c = conditional_next_dist(kModel, i);
    const auto& w = c.weights();
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1).epsilon(1e-15));
  }
}

TEST_CASE("generated traces") {
  SUBCASE("single state is Poisson") {
    const auto t = generate(SmmppModel({100}, {{1}}), 100000, 3);
    const double mean = std::accumulate(t.durations.begin(), t.durations.end(), 0.0) / t.size();
    CHECK(std::abs(mean - 0.01) < 3 * 0.01 / std::sqrt(1e5));
  }
  SUBCASE("state occupancy, pooled and per-state laws") {
    const auto t = generate(kModel, 1000000, 4);
    REQUIRE(t.has_states());
    std::vector<std::vector<double>> by_state(3);
    for (std::size_t k = 0; k < t.size(); ++k) by_state[t.states[k]].push_back(t.durations[k]);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(by_state[i].size() / 1e6 == doctest::Approx(1.0 / 3).epsilon(0.01));
      const double r = kModel.rates()[i];
      CHECK(oracle::ks_distance(by_state[i], [r](double x) { return -std::expm1(-r * x); }) <
            oracle::ks_critical_99(by_state[i].size()));
    }
    const auto d = marginal_dist(kModel);
    CHECK(oracle::ks_distance(t.durations, [&](double x) { return d.cdf(x); }) <
          oracle::ks_critical_99(t.size()));
  }
  SUBCASE("reproducible") {
    const auto a = generate(kModel, 5000, 9);
    const auto b = generate(kModel, 5000, 9);
    CHECK(a.durations == b.durations);
    CHECK(a.states == b.states);
    CHECK(generate(kModel, 5000, 10).durations != a.durations);
  }
}

TEST_CASE("non-stationary schedules") {
  const auto one = generate_nonstationary({{4000, kModel}}, 21);
  const auto plain = generate(kModel, 4000, 21);
  CHECK(one.durations == plain.durations);
  CHECK(one.states == plain.states);

  const NonstationarySchedule drift{{100000, HyperExpDist({0.5, 0.5}, {100, 6000})},
                                    {100000, HyperExpDist({0.9, 0.1}, {100, 6000})}};
  const auto t = generate_nonstationary(drift, 22);
  CHECK(t.size() == 200000);
  CHECK(t.segment_starts == std::vector<std::size_t>{0, 100000});
  const std::span<const double> all(t.durations);
  const auto before = em_fit(all.first(100000), 2);
  const auto after = em_fit(all.subspan(100000), 2);
  CHECK(before.dist.weights()[0] == doctest::Approx(0.5).epsilon(0.1));
  CHECK(after.dist.weights()[0] > before.dist.weights()[0] + 0.3);

  CHECK_THROWS_AS(generate_nonstationary({}, 1), DomainError);
  CHECK_THROWS_AS(generate_nonstationary({{0, kModel}}, 1), DomainError);
}

TEST_CASE("trace text format round trip") {
  auto t = generate_nonstationary({{50, kModel}, {30, HyperExpDist({0.5, 0.5}, {10, 20})}}, 5);
  std::stringstream s;
  write_trace(s, t, {"hello"});
  const std::string text = s.str();
  CHECK(text.rfind(kTraceHeader, 0) == 0);
  CHECK(text.find("# segment 2 begins") != std::string::npos);
  const auto back = read_trace(s);
  CHECK(back.durations == t.durations);
  CHECK(back.states == t.states);
  CHECK(back.segment_starts == t.segment_starts);

  std::stringstream bare("0.5\n# note\n\n0.25\n");
  const auto u = read_trace(bare);
  CHECK(u.size() == 2);
  CHECK_FALSE(u.has_states());

  std::stringstream mixed("0.5,1\n0.25\n");
  CHECK_THROWS_AS(read_trace(mixed), DataError);
  std::stringstream negative("-0.5\n");
  CHECK_THROWS_AS(read_trace(negative), DataError);
  std::stringstream junk("abc\n");
  CHECK_THROWS_AS(read_trace(junk), DataError);
  std::stringstream zero_state("0.5,0\n");
  CHECK_THROWS_AS(read_trace(zero_state), DataError);
}
