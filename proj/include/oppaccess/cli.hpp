#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oppaccess/simulate.hpp"
#include "oppaccess/smmpp.hpp"
#include "oppaccess/strategy.hpp"

namespace oppaccess::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kDataError = 3,
  kModelError = 4,
};

/// Parsed experiment description. JSON keys:
///
///   model      traffic source record, or
///   schedule   [{"cycles": n, "model": source}, ...] for drifting traffic
///   design     source the strategies are built for (default: model, or
///              the first schedule segment)
///   strategy / strategies, ptsi, eta, etas, epsilon (default 1e-3)
///   trace      {"cycles": n, "seed": s} or {"file": path}
///   scenarios  list of true sources for robustness sweeps
///   window     outage window in cycles (default 100)
///   seed       seed of the secondary user's random decisions (default 1)
struct ExperimentConfig {
  nlohmann::json raw;
  std::optional<TrafficSource> model;
  NonstationarySchedule schedule;
  std::optional<TrafficSource> design;
  std::vector<std::string> strategies;
  std::optional<std::string> ptsi;
  std::optional<double> eta;
  std::vector<double> etas;
  double epsilon = 1e-3;
  std::optional<std::size_t> trace_cycles;
  std::optional<std::uint64_t> trace_seed;
  std::optional<std::string> trace_file;
  std::vector<TrafficSource> scenarios;
  std::size_t window = kDefaultWindow;
  std::uint64_t seed = 1;

  /// Throws ConfigError on a missing or contradictory setting.
  void check() const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Resolves a strategy name, allowing the short forms `one_shot`,
/// `optimal`, `balanced`, ... combined with a PTSI mode.
std::string resolve_strategy_name(const std::string& name, const std::optional<std::string>& ptsi);

/// Entry point of the `oppaccess` tool; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oppaccess::cli
