#include "oppaccess/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "oppaccess/error.hpp"
#include "oppaccess/fit.hpp"
#include "oppaccess/serialize.hpp"
#include "oppaccess/strategies.hpp"
#include "oppaccess/trace_io.hpp"

namespace oppaccess::cli {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

std::string join(const std::vector<std::string>& parts, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

HyperExpDist mixture_of(const TrafficSource& src) {
  if (const auto* d = std::get_if<HyperExpDist>(&src)) return *d;
  return marginal_dist(std::get<SmmppModel>(src));
}

std::vector<double> stationary_of(const TrafficSource& src) {
  if (const auto* m = std::get_if<SmmppModel>(&src)) return m->stationary();
  return std::get<HyperExpDist>(src).weights();
}

std::size_t states_of(const TrafficSource& src) {
  if (const auto* m = std::get_if<SmmppModel>(&src)) return m->size();
  return std::get<HyperExpDist>(src).size();
}

bool is_statistical(const std::string& name) {
  return name.starts_with("stat_") || name == "multiple_shot" || name == "always_transmit" ||
         name == "never_transmit";
}

std::string mode_of(const std::string& name) {
  if (is_statistical(name)) return "stat";
  return name.substr(0, name.find('_'));
}

// Output sink: the --out file when given, the caller's stream otherwise.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot write to " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

// Arguments minus the output path, so reruns into another file match byte for byte.
std::string provenance(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--out") {
      ++k;
      continue;
    }
    if (args[k].starts_with("--out=")) continue;
    kept.push_back(args[k]);
  }
  return join(kept, " ");
}

void write_header(std::ostream& out, const std::string& command, const std::vector<std::string>& args,
                  const json& config) {
  out << "# oppaccess " << command << " report\n";
  out << "# args: " << provenance(args) << '\n';
  if (!config.is_null()) out << "# config: " << config.dump() << '\n';
}

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::optional<double> eta;
  std::optional<double> epsilon;
  std::optional<std::size_t> window;
  std::optional<std::string> ptsi;
  std::optional<std::string> strategy;
  std::optional<std::string> trace_path;
  std::optional<std::size_t> cycles;
};

ExperimentConfig config_with_overrides(const Common& c, bool need_config) {
  ExperimentConfig cfg;
  if (!c.config_path.empty()) {
    cfg = load_config(c.config_path);
  } else if (need_config) {
    throw ConfigError("--config is required for this command");
  }
  if (c.seed) {
    cfg.seed = *c.seed;
    cfg.trace_seed = *c.seed;
  }
  if (c.eta) cfg.eta = *c.eta;
  if (c.epsilon) cfg.epsilon = *c.epsilon;
  if (c.window) cfg.window = *c.window;
  if (c.ptsi) cfg.ptsi = *c.ptsi;
  if (c.strategy) cfg.strategies = {*c.strategy};
  if (c.trace_path) {
    cfg.trace_file = *c.trace_path;
    cfg.trace_cycles.reset();
  }
  if (c.cycles) {
    if (!cfg.schedule.empty()) throw ConfigError("--cycles does not apply to a schedule");
    cfg.trace_cycles = *c.cycles;
    cfg.trace_file.reset();
  }
  for (auto& s : cfg.strategies) s = resolve_strategy_name(s, cfg.ptsi);
  return cfg;
}

bool has_trace_source(const ExperimentConfig& cfg) {
  return cfg.trace_file || cfg.trace_cycles || !cfg.schedule.empty();
}

IdleTrace obtain_trace(const ExperimentConfig& cfg) {
  if (cfg.trace_file) return read_trace_file(*cfg.trace_file);
  const std::uint64_t seed = cfg.trace_seed.value_or(cfg.seed);
  if (!cfg.schedule.empty()) return generate_nonstationary(cfg.schedule, seed);
  if (!cfg.trace_cycles) throw ConfigError("no trace source: set trace.cycles, trace.file or schedule");
  if (!cfg.model) throw ConfigError("generating a trace needs a model or schedule");
  return generate(std::holds_alternative<SmmppModel>(*cfg.model)
                      ? std::get<SmmppModel>(*cfg.model)
                      : SmmppModel::from_mixture(std::get<HyperExpDist>(*cfg.model)),
                  *cfg.trace_cycles, seed);
}

// True traffic law of a generated trace, when a single one exists.
std::optional<TrafficSource> truth_of(const ExperimentConfig& cfg) {
  if (cfg.trace_file || !cfg.schedule.empty()) return std::nullopt;
  return cfg.model;
}

const TrafficSource& design_of(const ExperimentConfig& cfg) {
  if (cfg.design) return *cfg.design;
  throw ConfigError("no design model: set design or model");
}

double eta_of(const ExperimentConfig& cfg) {
  if (!cfg.eta) throw ConfigError("collision budget eta is not set");
  return *cfg.eta;
}

// Explicit strategies, else every strategy of the requested PTSI mode.
std::vector<std::string> strategy_list(const ExperimentConfig& cfg) {
  if (!cfg.strategies.empty()) return cfg.strategies;
  if (!cfg.ptsi) return strategy_names();
  const std::string mode(to_string(ptsi_mode_from_string(*cfg.ptsi)));
  std::vector<std::string> out;
  for (const auto& n : strategy_names()) {
    if (mode_of(n) == mode) out.push_back(n);
  }
  return out;
}

RunOptions run_options(const ExperimentConfig& cfg, std::uint64_t stream, double eta) {
  RunOptions o;
  o.seed = derive_seed(cfg.seed, stream);
  o.window = cfg.window;
  o.eta = eta;
  o.initial_context_weights = stationary_of(design_of(cfg));
  return o;
}

void require_labels(const Strategy& s, const IdleTrace& trace) {
  if (s.mode != PtsiMode::statistical && !trace.has_states()) {
    throw DataError(std::string(to_string(s.mode)) + " PTSI strategy " + s.name +
                    " needs a trace with state labels");
  }
}

int cmd_generate(const Common& c, const std::vector<std::string>& args, std::ostream& out) {
  auto cfg = config_with_overrides(c, true);
  if (cfg.trace_file) throw ConfigError("generate writes a trace; do not set trace.file");
  const IdleTrace trace = obtain_trace(cfg);
  Sink sink(c.out_path, out);
  write_trace(*sink, trace,
              {"generated by: oppaccess " + provenance(args), "config: " + cfg.raw.dump(),
               "seed: " + std::to_string(cfg.trace_seed.value_or(cfg.seed))});
  return kOk;
}

void write_fit_table(std::ostream& out, const FitResult& r) {
  out << "component,alpha,lambda\n";
  for (std::size_t k = 0; k < r.dist.size(); ++k) {
    out << k + 1 << ',' << fmt(r.dist.weights()[k]) << ',' << fmt(r.dist.rates()[k]) << '\n';
  }
  out << "# log_likelihood=" << fmt(r.log_likelihood) << " iterations=" << r.iterations
      << " converged=" << (r.converged ? 1 : 0) << " mean=" << fmt(r.dist.mean()) << '\n';
  for (const auto& w : r.warnings) out << "# warning: " << w << '\n';
}

int cmd_fit(const Common& c, std::size_t components, std::optional<std::size_t> group_size,
            const std::vector<std::string>& args, std::ostream& out) {
  if (!c.trace_path) throw ConfigError("fit needs --trace");
  const IdleTrace trace = read_trace_file(*c.trace_path);
  Sink sink(c.out_path, out);
  write_header(*sink, "fit", args, nullptr);
  *sink << "# samples=" << trace.size() << '\n';
  const FitResult whole = em_fit(trace.durations, components);
  write_fit_table(*sink, whole);
  if (!group_size) return kOk;

  const WindowedFit wf = windowed_fit(trace.durations, *group_size, components);
  *sink << "\n# table: groups (group_size=" << *group_size << ")\n";
  std::vector<std::string> cols{"group", "first_sample", "converged", "log_likelihood"};
  for (std::size_t k = 0; k < components; ++k) cols.push_back("alpha_" + std::to_string(k + 1));
  for (std::size_t k = 0; k < components; ++k) cols.push_back("lambda_" + std::to_string(k + 1));
  cols.push_back("error");
  *sink << join(cols) << '\n';
  for (const auto& g : wf.groups) {
    *sink << g.index + 1 << ',' << g.first_sample << ',';
    if (g.result) {
      const auto& r = *g.result;
      *sink << (r.converged ? 1 : 0) << ',' << fmt(r.log_likelihood);
      for (std::size_t k = 0; k < components; ++k) {
        *sink << ',' << (k < r.dist.size() ? fmt(r.dist.weights()[k]) : "");
      }
      for (std::size_t k = 0; k < components; ++k) {
        *sink << ',' << (k < r.dist.size() ? fmt(r.dist.rates()[k]) : "");
      }
      *sink << ',' << (r.dist.size() < components ? "components merged or dropped" : "") << '\n';
    } else {
      *sink << "0,";
      for (std::size_t k = 0; k < 2 * components; ++k) *sink << ',';
      *sink << ',' << g.error << '\n';
    }
  }
  *sink << "\n# table: summary\nparameter,count,min,q1,median,q3,max\n";
  for (const auto& s : wf.summary) {
    *sink << s.name << ',' << s.count << ',' << fmt(s.min) << ',' << fmt(s.q1) << ','
          << fmt(s.median) << ',' << fmt(s.q3) << ',' << fmt(s.max) << '\n';
  }
  return kOk;
}

int cmd_diagnose(const Common& c, const std::vector<std::string>& args, std::ostream& out) {
  if (!c.trace_path) throw ConfigError("diagnose needs --trace");
  const IdleTrace trace = read_trace_file(*c.trace_path);
  const TailDiagnostics t = tail_diagnostics(trace.durations);
  Sink sink(c.out_path, out);
  write_header(*sink, "diagnose", args, nullptr);
  *sink << "key,value\n";
  const json record = to_json(t);
  for (const auto& [k, v] : record.items()) *sink << k << ',' << v.dump() << '\n';
  return kOk;
}

const char* kResultColumns =
    "strategy,ptsi,eta,cycles,capacity,capacity_se,predicted_capacity,collision,collision_se,"
    "predicted_collision,outage";

void write_result_row(std::ostream& out, const Strategy& s, double eta, const SimResult& r,
                      const std::optional<StrategyPrediction>& p) {
  out << s.name << ',' << to_string(s.mode) << ',' << fmt(eta) << ',' << r.cycles << ','
      << fmt(r.capacity) << ',' << fmt(r.capacity_std_error) << ',' << (p ? fmt(p->capacity) : "")
      << ',' << fmt(r.collision) << ',' << fmt(r.collision_std_error) << ','
      << (p ? fmt(p->collision) : "") << ',' << (r.outage ? fmt(*r.outage) : "") << '\n';
}

int cmd_eval(const Common& c, const std::vector<std::string>& args, std::ostream& out) {
  auto cfg = config_with_overrides(c, true);
  const double eta = eta_of(cfg);
  if (cfg.strategies.size() != 1) throw ConfigError("eval needs exactly one strategy (--strategy)");
  const Strategy s = build_strategy(cfg.strategies.front(), design_of(cfg), eta, cfg.epsilon);
  const IdleTrace trace = obtain_trace(cfg);
  require_labels(s, trace);
  const SimResult r = run(trace, s, run_options(cfg, 0, eta));
  std::optional<StrategyPrediction> p;
  if (auto truth = truth_of(cfg)) p = predict(s, *truth);

  Sink sink(c.out_path, out);
  write_header(*sink, "eval", args, cfg.raw);
  *sink << "# strategy: " << to_json(s).dump() << '\n';
  if (r.initial_context) *sink << "# initial_context=" << *r.initial_context + 1 << '\n';
  *sink << kResultColumns << '\n';
  write_result_row(*sink, s, eta, r, p);
  *sink << "\n# table: windows (size=" << cfg.window << ")\nwindow,collision_rate\n";
  for (std::size_t w = 0; w < r.window_collision.size(); ++w) {
    *sink << w + 1 << ',' << fmt(r.window_collision[w]) << '\n';
  }
  return kOk;
}

int cmd_sweep(const Common& c, const std::vector<double>& eta_flags, const std::vector<std::string>& args,
              std::ostream& out) {
  auto cfg = config_with_overrides(c, true);
  std::vector<double> etas = !eta_flags.empty() ? eta_flags : cfg.etas;
  if (etas.empty() && cfg.eta) etas = {*cfg.eta};
  if (etas.empty()) throw ConfigError("sweep needs eta values (--eta or etas)");
  const auto names = strategy_list(cfg);
  const bool simulate = has_trace_source(cfg);

  // Scenario 0 is the configured traffic itself; extra scenarios replace it.
  std::vector<std::optional<TrafficSource>> truths;
  if (cfg.scenarios.empty()) {
    truths.push_back(truth_of(cfg));
  } else {
    for (const auto& s : cfg.scenarios) truths.emplace_back(s);
  }

  Sink sink(c.out_path, out);
  write_header(*sink, "sweep", args, cfg.raw);
  *sink << "scenario," << kResultColumns << '\n';
  for (std::size_t sc = 0; sc < truths.size(); ++sc) {
    std::optional<IdleTrace> trace;
    if (simulate) {
      if (cfg.scenarios.empty()) {
        trace = obtain_trace(cfg);
      } else {
        if (!cfg.trace_cycles) throw ConfigError("scenarios need trace.cycles");
        if (!truths[sc]) throw ConfigError("scenario has no traffic model");
        const auto& src = *truths[sc];
        const SmmppModel m = std::holds_alternative<SmmppModel>(src)
                                 ? std::get<SmmppModel>(src)
                                 : SmmppModel::from_mixture(std::get<HyperExpDist>(src));
        trace = generate(m, *cfg.trace_cycles, derive_seed(cfg.trace_seed.value_or(cfg.seed), sc));
      }
    }
    std::uint64_t stream = 0;
    for (double eta : etas) {
      for (const auto& name : names) {
        const Strategy s = build_strategy(name, design_of(cfg), eta, cfg.epsilon);
        std::optional<StrategyPrediction> p;
        if (truths[sc] && (s.mode == PtsiMode::statistical ||
                           std::holds_alternative<SmmppModel>(*truths[sc]) ||
                           states_of(*truths[sc]) == s.contexts.size())) {
          const TrafficSource truth = s.mode == PtsiMode::statistical ||
                                              std::holds_alternative<SmmppModel>(*truths[sc])
                                          ? *truths[sc]
                                          : TrafficSource(SmmppModel::from_mixture(mixture_of(*truths[sc])));
          p = predict(s, truth);
        }
        SimResult r;
        if (trace) {
          require_labels(s, *trace);
          r = run(*trace, s, run_options(cfg, stream++, eta));
        }
        *sink << sc << ',';
        if (trace) {
          write_result_row(*sink, s, eta, r, p);
        } else {
          *sink << s.name << ',' << to_string(s.mode) << ',' << fmt(eta) << ",0,,," << (p ? fmt(p->capacity) : "")
                << ",,," << (p ? fmt(p->collision) : "") << ",\n";
        }
      }
    }
  }
  return kOk;
}

int cmd_compare(const Common& c, const std::vector<std::string>& args, std::ostream& out) {
  auto cfg = config_with_overrides(c, true);
  const double eta = eta_of(cfg);
  const auto names = strategy_list(cfg);
  const IdleTrace trace = obtain_trace(cfg);
  std::vector<Strategy> strategies;
  for (const auto& name : names) {
    strategies.push_back(build_strategy(name, design_of(cfg), eta, cfg.epsilon));
    require_labels(strategies.back(), trace);
  }
  const auto report = compare(strategies, trace, eta, cfg.seed, cfg.window, stationary_of(design_of(cfg)));
  const auto truth = truth_of(cfg);

  Sink sink(c.out_path, out);
  write_header(*sink, "compare", args, cfg.raw);
  *sink << kResultColumns << '\n';
  for (std::size_t k = 0; k < strategies.size(); ++k) {
    std::optional<StrategyPrediction> p;
    if (truth) p = predict(strategies[k], *truth);
    write_result_row(*sink, strategies[k], eta, report.entries[k].result, p);
  }
  *sink << "\n# table: windows (size=" << cfg.window << ")\nwindow";
  for (const auto& e : report.entries) *sink << ',' << e.name;
  *sink << '\n';
  const std::size_t windows = report.entries.empty() ? 0 : report.entries.front().result.window_collision.size();
  for (std::size_t w = 0; w < windows; ++w) {
    *sink << w + 1;
    for (const auto& e : report.entries) *sink << ',' << fmt(e.result.window_collision[w]);
    *sink << '\n';
  }
  return kOk;
}

}  // namespace

void ExperimentConfig::check() const {
  if (model && !schedule.empty()) throw ConfigError("set either model or schedule, not both");
  if (trace_file && trace_cycles) throw ConfigError("set exactly one trace source (file or cycles)");
  if (!schedule.empty() && trace_cycles) throw ConfigError("a schedule sets its own length; drop trace.cycles");
  if (eta && !(*eta > 0.0 && *eta < 1.0)) throw ConfigError("eta must lie in (0, 1)");
  for (double e : etas) {
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("every eta must lie in (0, 1)");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  if (eta && !(epsilon < 1.0 - *eta)) throw ConfigError("epsilon must be below 1 - eta");
  if (window == 0) throw ConfigError("window must be at least one cycle");
  if (trace_cycles && *trace_cycles == 0) throw ConfigError("trace.cycles must be at least one");
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  cfg.raw = j;
  try {
    if (j.contains("model")) cfg.model = source_from_json(j.at("model"));
    if (j.contains("schedule")) {
      for (const auto& seg : j.at("schedule")) {
        const auto src = source_from_json(seg.at("model"));
        ScheduleSegment s{seg.at("cycles").get<std::size_t>(), HyperExpDist::exponential(1.0)};
        if (const auto* m = std::get_if<SmmppModel>(&src)) {
          s.source = *m;
        } else {
          s.source = std::get<HyperExpDist>(src);
        }
        if (s.cycles == 0) throw ConfigError("schedule segments need at least one cycle");
        cfg.schedule.push_back(std::move(s));
      }
      if (cfg.schedule.empty()) throw ConfigError("schedule has no segments");
    }
    if (j.contains("design")) {
      cfg.design = source_from_json(j.at("design"));
    } else if (cfg.model) {
      cfg.design = cfg.model;
    } else if (!cfg.schedule.empty()) {
      cfg.design = source_from_json(j.at("schedule").at(0).at("model"));
    }
    if (j.contains("strategy")) cfg.strategies.push_back(j.at("strategy").get<std::string>());
    if (j.contains("strategies")) {
      for (const auto& s : j.at("strategies")) cfg.strategies.push_back(s.get<std::string>());
    }
    if (j.contains("ptsi")) cfg.ptsi = j.at("ptsi").get<std::string>();
    if (j.contains("eta")) cfg.eta = j.at("eta").get<double>();
    if (j.contains("etas")) cfg.etas = j.at("etas").get<std::vector<double>>();
    cfg.epsilon = j.value("epsilon", kDefaultEpsilon);
    cfg.window = j.value("window", kDefaultWindow);
    cfg.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("trace")) {
      const auto& t = j.at("trace");
      if (t.contains("file")) cfg.trace_file = t.at("file").get<std::string>();
      if (t.contains("cycles")) cfg.trace_cycles = t.at("cycles").get<std::size_t>();
      if (t.contains("seed")) cfg.trace_seed = t.at("seed").get<std::uint64_t>();
    }
    if (j.contains("scenarios")) {
      for (const auto& s : j.at("scenarios")) cfg.scenarios.push_back(source_from_json(s));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  for (auto& s : cfg.strategies) s = resolve_strategy_name(s, cfg.ptsi);
  cfg.check();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

std::string resolve_strategy_name(const std::string& name, const std::optional<std::string>& ptsi) {
  const auto& names = strategy_names();
  const bool known = std::find(names.begin(), names.end(), name) != names.end() ||
                     name == "always_transmit" || name == "never_transmit";
  std::string mode;
  if (ptsi) mode = std::string(to_string(ptsi_mode_from_string(*ptsi)));
  if (known) {
    if (!mode.empty() && mode_of(name) != mode) {
      throw ConfigError("strategy " + name + " does not use " + mode + " PTSI");
    }
    return name;
  }
  static const std::vector<std::pair<std::string, std::string>> aliases{
      {"always", "always_transmit"}, {"never", "never_transmit"}, {"ms", "multiple_shot"}};
  for (const auto& [alias, full] : aliases) {
    if (name == alias) return resolve_strategy_name(full, ptsi);
  }
  const std::string candidate = (mode.empty() ? std::string("stat") : mode) + "_" + name;
  if (std::find(names.begin(), names.end(), candidate) != names.end()) return candidate;
  throw ConfigError("unknown strategy '" + name + "'" + (mode.empty() ? "" : " for " + mode + " PTSI"));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Opportunistic secondary access on hyper-exponential primary traffic"};
  app.require_subcommand(1);
  Common c;
  std::size_t components = 2;
  std::optional<std::size_t> group_size;
  std::vector<double> sweep_etas;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config_path, "experiment config (JSON)");
    sub->add_option("--seed", c.seed, "seed for generated traces and random decisions");
    sub->add_option("--out", c.out_path, "output path (default: stdout)");
  };
  auto add_strategy = [&](CLI::App* sub) {
    sub->add_option("--eta", c.eta, "collision budget");
    sub->add_option("--epsilon", c.epsilon, "multiple-shot confidence level");
    sub->add_option("--window", c.window, "outage window in cycles");
    sub->add_option("--ptsi", c.ptsi, "stat, markov or full")->check(CLI::IsMember({"stat", "markov", "full"}));
    sub->add_option("--strategy", c.strategy, "strategy name");
    sub->add_option("--trace", c.trace_path, "trace file instead of a generated trace");
  };

  auto* gen = app.add_subcommand("generate", "write a synthetic idle-time trace");
  add_common(gen);
  gen->add_option("--cycles", c.cycles, "number of idle times");

  auto* fit = app.add_subcommand("fit", "fit a hyper-exponential mixture to a trace");
  add_common(fit);
  fit->add_option("--trace", c.trace_path, "trace file")->required();
  fit->add_option("--components,-n", components, "mixture components")->check(CLI::PositiveNumber);
  fit->add_option("--group-size", group_size, "also fit consecutive groups of this many samples");

  auto* diag = app.add_subcommand("diagnose", "CCDF power-law / exponential-tail diagnostics");
  add_common(diag);
  diag->add_option("--trace", c.trace_path, "trace file")->required();

  auto* eval = app.add_subcommand("eval", "simulate one strategy");
  add_common(eval);
  add_strategy(eval);

  auto* sweep = app.add_subcommand("sweep", "capacity/collision table over eta and strategies");
  add_common(sweep);
  add_strategy(sweep);
  sweep->remove_option(sweep->get_option("--eta"));
  sweep->add_option("--eta", sweep_etas, "collision budgets")->delimiter(',');

  auto* cmp = app.add_subcommand("compare", "run several strategies on one trace");
  add_common(cmp);
  add_strategy(cmp);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (*gen) return cmd_generate(c, args, out);
    if (*fit) return cmd_fit(c, components, group_size, args, out);
    if (*diag) return cmd_diagnose(c, args, out);
    if (*eval) return cmd_eval(c, args, out);
    if (*sweep) return cmd_sweep(c, sweep_etas, args, out);
    if (*cmp) return cmd_compare(c, args, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const Error& e) {
    err << "model error: " << e.what() << '\n';
    return kModelError;
  }
  return kConfigError;
}

}  // namespace oppaccess::cli
