// Copyright 2026 The Interference Lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "interference/cli.h"

#include <charconv>
#include <cstdlib>
#include <cmath>
#include <functional>
#include <map>
#include <utility>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "interference/clustering.h"
#include "interference/csv.h"
#include "interference/demand_io.h"
#include "interference/metaexp.h"
#include "interference/partition.h"
#include "interference/rng.h"

namespace interference {
namespace {

using nlohmann::json;

constexpr Command kAllCommands[] = {
    Command::kGen,      Command::kSimulate, Command::kSweep,
    Command::kCluster,  Command::kExposure, Command::kFrontier,
    Command::kMeta,     Command::kCoverage,
};

// Streams derived from the run seed for draws the CLI makes itself.
constexpr uint64_t kSessionStream = 0x5e55'1011ULL;
constexpr uint64_t kExposureStream = 0xe790'5e00ULL;

enum class Type { kInt, kUInt, kDouble, kString, kBool, kDoubleList, kStringList };

constexpr uint32_t Bit(Command c) { return 1u << static_cast<int>(c); }

constexpr uint32_t kEvery = 0xffu;
constexpr uint32_t kBuildsSystem =
    Bit(Command::kGen) | Bit(Command::kSimulate) | Bit(Command::kSweep) |
    Bit(Command::kCluster) | Bit(Command::kExposure) |
    Bit(Command::kFrontier) | Bit(Command::kCoverage);
constexpr uint32_t kLoadsSystem = kBuildsSystem & ~Bit(Command::kGen) &
                                  ~Bit(Command::kSweep);
constexpr uint32_t kMonteCarlo = Bit(Command::kSimulate) |
                                 Bit(Command::kSweep) |
                                 Bit(Command::kFrontier) |
                                 Bit(Command::kCoverage);
constexpr uint32_t kUsesSessions =
    Bit(Command::kCluster) | Bit(Command::kExposure) | Bit(Command::kFrontier);
constexpr uint32_t kUsesStrategy = Bit(Command::kSimulate) |
                                   Bit(Command::kExposure) |
                                   Bit(Command::kCoverage);

struct KeySpec {
  std::string name;
  Type type;
  uint32_t commands;
  std::string help;
  std::function<absl::Status(RunConfig&, const json&)> set;
};

template <typename T, typename Field>
std::function<absl::Status(RunConfig&, const json&)> Setter(Field field) {
  return [field](RunConfig& c, const json& v) {
    c.*field = v.get<T>();
    return absl::OkStatus();
  };
}

std::function<absl::Status(RunConfig&, const json&)> AssignGenerator(
    std::string key) {
  return [key](RunConfig& c, const json& v) -> absl::Status {
    json g = GeneratorConfigToJson(c.generator);
    g[key] = v;
    absl::StatusOr<GeneratorConfig> parsed = GeneratorConfigFromJson(g);
    if (!parsed.ok()) return parsed.status();
    c.generator = *parsed;
    return absl::OkStatus();
  };
}

const std::vector<KeySpec>& Specs() {
  static const std::vector<KeySpec>* specs = [] {
    auto* s = new std::vector<KeySpec>;
    auto generator = [&](const char* key, Type type, const char* help) {
      s->push_back({key, type, kBuildsSystem, help, AssignGenerator(key)});
    };
    generator("n", Type::kInt, "number of articles");
    generator("cluster_size_min", Type::kInt, "smallest planted cluster");
    generator("cluster_size_max", Type::kInt, "largest planted cluster");
    generator("own_mean", Type::kDouble, "mean own-price elasticity");
    generator("own_spread", Type::kDouble,
              "half-width of the own-elasticity range");
    generator("own_cluster_share", Type::kDouble,
              "weight of the cluster-shared own-elasticity component");
    generator("within_share", Type::kDouble,
              "within-cluster substitution share (phi)");
    generator("background_share", Type::kDouble,
              "background substitution share (phi_bg)");
    generator("price_min", Type::kDouble, "lowest base price");
    generator("price_max", Type::kDouble, "highest base price");
    generator("quantity_min", Type::kDouble, "lowest base quantity");
    generator("quantity_max", Type::kDouble, "highest base quantity");

    s->push_back({"treated_multiplier", Type::kDouble, kMonteCarlo,
                  "price multiplier of treated articles",
                  [](RunConfig& c, const json& v) {
                    c.treated_multiplier = v.get<double>();
                    return absl::OkStatus();
                  }});
    s->push_back({"metric", Type::kString, kMonteCarlo, "units or revenue",
                  [](RunConfig& c, const json& v) -> absl::Status {
                    absl::StatusOr<Metric> m = ParseMetric(v.get<std::string>());
                    if (!m.ok()) return m.status();
                    c.metric = *m;
                    return absl::OkStatus();
                  }});
    s->push_back({"p", Type::kInt, kMonteCarlo, "Monte Carlo permutations",
                  Setter<int>(&RunConfig::p)});
    s->push_back({"seed", Type::kUInt, kEvery & ~Bit(Command::kMeta),
                  absl::StrCat("master seed (fallback: $", kSeedEnvVar, ")"),
                  [](RunConfig& c, const json& v) {
                    c.seed = v.get<uint64_t>();
                    return absl::OkStatus();
                  }});
    s->push_back({"workers", Type::kInt, kEvery,
                  "worker threads, 0 = available parallelism",
                  Setter<int>(&RunConfig::workers)});
    s->push_back({"strategy", Type::kString, kUsesStrategy,
                  "article or cluster",
                  Setter<std::string>(&RunConfig::strategy)});
    s->push_back({"strategies", Type::kStringList, Bit(Command::kSweep),
                  "comma-separated strategies",
                  Setter<std::vector<std::string>>(&RunConfig::strategies)});
    s->push_back({"phis", Type::kDoubleList, Bit(Command::kSweep),
                  "comma-separated within_share values",
                  Setter<std::vector<double>>(&RunConfig::phis)});
    s->push_back({"gamma", Type::kDouble, Bit(Command::kCluster),
                  "modularity resolution",
                  Setter<double>(&RunConfig::gamma)});
    s->push_back({"gammas", Type::kDoubleList, Bit(Command::kFrontier),
                  "comma-separated resolutions",
                  Setter<std::vector<double>>(&RunConfig::gammas)});
    s->push_back({"n_sessions", Type::kInt, kUsesSessions,
                  "synthetic sessions", [](RunConfig& c, const json& v) {
                    c.sessions.n_sessions = v.get<int64_t>();
                    return absl::OkStatus();
                  }});
    s->push_back({"views_min", Type::kInt, kUsesSessions,
                  "fewest views per synthetic session",
                  [](RunConfig& c, const json& v) {
                    c.sessions.views_min = v.get<int>();
                    return absl::OkStatus();
                  }});
    s->push_back({"views_max", Type::kInt, kUsesSessions,
                  "most views per synthetic session",
                  [](RunConfig& c, const json& v) {
                    c.sessions.views_max = v.get<int>();
                    return absl::OkStatus();
                  }});
    s->push_back({"purity", Type::kDouble, kUsesSessions,
                  "probability a view stays in the home cluster",
                  [](RunConfig& c, const json& v) {
                    c.sessions.purity = v.get<double>();
                    return absl::OkStatus();
                  }});
    s->push_back({"noise_sigma", Type::kDouble, Bit(Command::kCoverage),
                  "sigma of lognormal outcome noise",
                  Setter<double>(&RunConfig::noise_sigma)});
    s->push_back({"z", Type::kDouble, Bit(Command::kCoverage),
                  "interval critical value", Setter<double>(&RunConfig::z)});
    s->push_back({"halfwidth_divisor", Type::kDouble, Bit(Command::kMeta),
                  "converts a CI half-width to one sigma",
                  Setter<double>(&RunConfig::halfwidth_divisor)});
    s->push_back({"system", Type::kString, kLoadsSystem,
                  "demand-system JSON instead of generating one",
                  Setter<std::string>(&RunConfig::system_path)});
    s->push_back({"sessions", Type::kString, kUsesSessions,
                  "clickstream CSV instead of synthetic sessions",
                  Setter<std::string>(&RunConfig::sessions_path)});
    s->push_back({"partition", Type::kString, kUsesStrategy,
                  "partition CSV for cluster-level randomization",
                  Setter<std::string>(&RunConfig::partition_path)});
    s->push_back({"in", Type::kString, Bit(Command::kMeta),
                  "meta-experiment input CSV",
                  Setter<std::string>(&RunConfig::in_path)});
    s->push_back({"out", Type::kString, kEvery, "output path (default stdout)",
                  Setter<std::string>(&RunConfig::out_path)});
    s->push_back({"force", Type::kBool, kEvery, "overwrite existing output",
                  Setter<bool>(&RunConfig::force)});
    return s;
  }();
  return *specs;
}

const KeySpec* FindSpec(std::string_view key) {
  for (const KeySpec& spec : Specs()) {
    if (spec.name == key) return &spec;
  }
  return nullptr;
}

bool HasType(const json& v, Type type) {
  switch (type) {
    case Type::kInt:
      return v.is_number_integer();
    case Type::kUInt:
      return v.is_number_unsigned() ||
             (v.is_number_integer() && v.get<int64_t>() >= 0);
    case Type::kDouble:
      return v.is_number();
    case Type::kString:
      return v.is_string();
    case Type::kBool:
      return v.is_boolean();
    case Type::kDoubleList:
      if (!v.is_array()) return false;
      for (const json& e : v) {
        if (!e.is_number()) return false;
      }
      return true;
    case Type::kStringList:
      if (!v.is_array()) return false;
      for (const json& e : v) {
        if (!e.is_string()) return false;
      }
      return true;
  }
  return false;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

absl::StatusOr<json> TextToJson(std::string_view text, Type type) {
  text = Trim(text);
  switch (type) {
    case Type::kInt: {
      absl::StatusOr<int64_t> v = ParseInt(text);
      if (!v.ok()) return v.status();
      return json(*v);
    }
    case Type::kUInt: {
      uint64_t v = 0;
      const auto [end, ec] =
          std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || end != text.data() + text.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "expected a non-negative integer, got '", std::string(text), "'"));
      }
      return json(v);
    }
    case Type::kDouble: {
      absl::StatusOr<double> v = ParseDouble(text);
      if (!v.ok()) return v.status();
      return json(*v);
    }
    case Type::kString:
      return json(std::string(text));
    case Type::kBool:
      if (text == "true" || text == "1") return json(true);
      if (text == "false" || text == "0") return json(false);
      return absl::InvalidArgumentError(
          absl::StrCat("expected true or false, got '", std::string(text), "'"));
    case Type::kDoubleList:
    case Type::kStringList: {
      json list = json::array();
      for (std::string_view item : SplitCsvLine(text)) {
        item = Trim(item);
        if (item.empty()) {
          return absl::InvalidArgumentError("empty item in list");
        }
        if (type == Type::kStringList) {
          list.push_back(std::string(item));
          continue;
        }
        absl::StatusOr<double> v = ParseDouble(item);
        if (!v.ok()) return v.status();
        list.push_back(*v);
      }
      return list;
    }
  }
  return absl::InternalError("unhandled option type");
}

absl::Status ApplyValue(const KeySpec& spec, const json& value,
                        RunConfig& config) {
  if (!HasType(value, spec.type)) {
    return absl::InvalidArgumentError(
        absl::StrCat("config key '", spec.name, "' has the wrong type"));
  }
  absl::Status s = spec.set(config, value);
  if (!s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(spec.name, ": ", s.message()));
  }
  return absl::OkStatus();
}

std::string FlagName(std::string_view key) {
  return absl::StrCat("--", absl::StrReplaceAll(std::string(key), {{"_", "-"}}));
}

bool Uses(uint32_t mask, Command command) {
  return (mask & Bit(command)) != 0;
}

std::string OneLine(absl::string_view message) {
  return absl::StrReplaceAll(message, {{"\r", " "}, {"\n", " "}});
}

absl::StatusOr<DemandSystem> LoadSystem(const RunConfig& config,
                                        uint64_t seed) {
  if (!config.system_path.empty()) return ReadDemandSystem(config.system_path);
  return GenerateDemandSystem(config.generator, seed);
}

absl::StatusOr<std::vector<Session>> LoadSessions(const RunConfig& config,
                                                  const DemandSystem& system,
                                                  uint64_t seed) {
  if (!config.sessions_path.empty()) {
    return ReadSessions(config.sessions_path, system.size());
  }
  return GenerateSessions(system.partition(), config.sessions,
                          StreamSeed(seed, kSessionStream));
}

absl::StatusOr<RandomizationStrategy> LoadStrategy(const RunConfig& config,
                                                   const DemandSystem& system) {
  if (config.strategy == "article") return RandomizationStrategy::ArticleLevel();
  if (config.partition_path.empty()) {
    return RandomizationStrategy::ClusterLevel(system.partition());
  }
  absl::StatusOr<Partition> partition = ReadPartitionCsv(config.partition_path);
  if (!partition.ok()) return partition.status();
  if (partition->size() != system.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(config.partition_path, " covers ", partition->size(),
                     " articles but the system has ", system.size()));
  }
  return RandomizationStrategy::ClusterLevel(*std::move(partition));
}

absl::Status Emit(const RunConfig& config, const std::string& text,
                  std::ostream& out) {
  if (config.out_path.empty()) {
    out << text;
    out.flush();
    return out ? absl::OkStatus()
               : absl::DataLossError("failed to write to stdout");
  }
  return WriteFile(config.out_path, text, config.force);
}

PricePolicy Policy(const RunConfig& config) {
  return PricePolicy{config.treated_multiplier};
}

absl::StatusOr<std::string> Simulate(const RunConfig& config, uint64_t seed) {
  absl::StatusOr<DemandSystem> system = LoadSystem(config, seed);
  if (!system.ok()) return system.status();
  absl::StatusOr<RandomizationStrategy> strategy = LoadStrategy(config, *system);
  if (!strategy.ok()) return strategy.status();
  absl::StatusOr<BiasReport> report =
      MonteCarloBias(*system, *strategy, Policy(config), config.metric,
                     {config.p, seed, config.workers});
  if (!report.ok()) return report.status();
  const double phi = system->provenance()
                         ? system->provenance()->config.within_share
                         : std::nan("");
  return absl::StrCat(kSweepCsvHeader, "\n",
                      BiasReportCsvRow(phi, strategy->name(), *report));
}

absl::StatusOr<std::string> Sweep(const RunConfig& config, uint64_t seed) {
  std::vector<SweepStrategy> strategies;
  for (const std::string& name : config.strategies) {
    absl::StatusOr<SweepStrategy> s = ParseSweepStrategy(name);
    if (!s.ok()) return s.status();
    strategies.push_back(*s);
  }
  absl::StatusOr<std::vector<SweepRow>> rows =
      SweepSubstitution(config.generator, config.phis, strategies,
                        Policy(config), config.metric,
                        {config.p, seed, config.workers});
  if (!rows.ok()) return rows.status();
  return SweepTableCsv(*rows);
}

absl::StatusOr<std::string> Cluster(const RunConfig& config, uint64_t seed) {
  absl::StatusOr<DemandSystem> system = LoadSystem(config, seed);
  if (!system.ok()) return system.status();
  absl::StatusOr<std::vector<Session>> sessions =
      LoadSessions(config, *system, seed);
  if (!sessions.ok()) return sessions.status();
  absl::StatusOr<SessionGraph> graph = BuildGraph(*sessions, system->size());
  if (!graph.ok()) return graph.status();
  absl::StatusOr<Partition> partition = Louvain(*graph, config.gamma, seed);
  if (!partition.ok()) return partition.status();
  return PartitionCsv(*partition);
}

absl::StatusOr<std::string> Exposure(const RunConfig& config, uint64_t seed) {
  absl::StatusOr<DemandSystem> system = LoadSystem(config, seed);
  if (!system.ok()) return system.status();
  absl::StatusOr<std::vector<Session>> sessions =
      LoadSessions(config, *system, seed);
  if (!sessions.ok()) return sessions.status();
  absl::StatusOr<RandomizationStrategy> strategy = LoadStrategy(config, *system);
  if (!strategy.ok()) return strategy.status();
  Rng rng = MakeStream(seed, kExposureStream);
  absl::StatusOr<Assignment> assignment =
      Assign(*strategy, system->size(), rng);
  if (!assignment.ok()) return assignment.status();
  absl::StatusOr<ExposureReport> report = ExposureShare(*sessions, *assignment);
  if (!report.ok()) return report.status();
  return ExposureCsv(*report);
}

absl::StatusOr<std::string> FrontierCommand(const RunConfig& config,
                                            uint64_t seed) {
  absl::StatusOr<DemandSystem> system = LoadSystem(config, seed);
  if (!system.ok()) return system.status();
  absl::StatusOr<std::vector<Session>> sessions =
      LoadSessions(config, *system, seed);
  if (!sessions.ok()) return sessions.status();
  absl::StatusOr<std::vector<FrontierPoint>> points =
      Frontier(*system, *sessions, config.gammas, Policy(config),
               config.metric, {config.p, seed, config.workers});
  if (!points.ok()) return points.status();
  return FrontierCsv(*points);
}

absl::StatusOr<std::string> Meta(const RunConfig& config) {
  absl::StatusOr<std::vector<MetaExperimentInput>> inputs =
      ReadMetaInputs(config.in_path);
  if (!inputs.ok()) return inputs.status();
  return MetaComparisonCsv(*inputs, config.halfwidth_divisor);
}

absl::StatusOr<std::string> Coverage(const RunConfig& config, uint64_t seed) {
  absl::StatusOr<DemandSystem> system = LoadSystem(config, seed);
  if (!system.ok()) return system.status();
  absl::StatusOr<RandomizationStrategy> strategy = LoadStrategy(config, *system);
  if (!strategy.ok()) return strategy.status();
  CoverageOptions options;
  options.p = config.p;
  options.seed = seed;
  options.workers = config.workers;
  options.noise_sigma = config.noise_sigma;
  options.z = config.z;
  absl::StatusOr<CoverageReport> report = CoverageAnalysis(
      *system, *strategy, Policy(config), config.metric, options);
  if (!report.ok()) return report.status();
  return CoverageCsv(strategy->name(), *report);
}

const char* Description(Command command) {
  switch (command) {
    case Command::kGen:
      return "generate a demand system and write it as JSON";
    case Command::kSimulate:
      return "Monte Carlo bias of one randomization strategy";
    case Command::kSweep:
      return "bias and spread across substitution strengths";
    case Command::kCluster:
      return "modularity clustering of the co-view graph";
    case Command::kExposure:
      return "share of sessions exposed to both groups";
    case Command::kFrontier:
      return "exposure, bias and spread across resolutions";
    case Command::kMeta:
      return "compare clustered and article-level estimates";
    case Command::kCoverage:
      return "A/A-calibrated interval coverage";
  }
  return "";
}

}  // namespace

std::string_view CommandName(Command command) {
  switch (command) {
    case Command::kGen:
      return "gen";
    case Command::kSimulate:
      return "simulate";
    case Command::kSweep:
      return "sweep";
    case Command::kCluster:
      return "cluster";
    case Command::kExposure:
      return "exposure";
    case Command::kFrontier:
      return "frontier";
    case Command::kMeta:
      return "meta";
    case Command::kCoverage:
      return "coverage";
  }
  return "";
}

std::vector<std::string> RunConfigKeys() {
  std::vector<std::string> keys;
  for (const KeySpec& spec : Specs()) keys.push_back(spec.name);
  return keys;
}

absl::Status ApplyConfigJson(const json& j, RunConfig& config) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    const KeySpec* spec = FindSpec(key);
    if (spec == nullptr) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key, "'"));
    }
    if (absl::Status s = ApplyValue(*spec, value, config); !s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::Status ApplyConfigText(std::string_view key, std::string_view value,
                             RunConfig& config) {
  const KeySpec* spec = FindSpec(key);
  if (spec == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown option '", std::string(key), "'"));
  }
  absl::StatusOr<json> parsed = TextToJson(value, spec->type);
  if (!parsed.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(FlagName(key), ": ", parsed.status().message()));
  }
  return ApplyValue(*spec, *parsed, config);
}

absl::StatusOr<uint64_t> ResolveSeed(const RunConfig& config,
                                     const char* env_value) {
  if (config.seed) return *config.seed;
  if (env_value != nullptr && *env_value != '\0') {
    absl::StatusOr<json> v = TextToJson(env_value, Type::kUInt);
    if (!v.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(kSeedEnvVar, ": ", v.status().message()));
    }
    return v->get<uint64_t>();
  }
  return kDefaultSeed;
}

absl::Status ValidateRunConfig(const RunConfig& c, Command command) {
  if (c.workers < 0) {
    return absl::InvalidArgumentError("workers must be >= 0");
  }
  if (command == Command::kGen && c.out_path.empty()) {
    return absl::InvalidArgumentError("gen requires --out");
  }
  const bool generates = command == Command::kGen ||
                         command == Command::kSweep ||
                         (Uses(kLoadsSystem, command) && c.system_path.empty());
  if (generates && command != Command::kSweep) {
    if (absl::Status s = ValidateGeneratorConfig(c.generator); !s.ok()) {
      return s;
    }
  }
  if (command == Command::kSweep) {
    if (c.phis.empty()) return absl::InvalidArgumentError("phis is empty");
    if (c.strategies.empty()) {
      return absl::InvalidArgumentError("strategies is empty");
    }
    for (const std::string& name : c.strategies) {
      if (absl::StatusOr<SweepStrategy> s = ParseSweepStrategy(name); !s.ok()) {
        return s.status();
      }
    }
    for (double phi : c.phis) {
      GeneratorConfig g = c.generator;
      g.within_share = phi;
      if (absl::Status s = ValidateGeneratorConfig(g); !s.ok()) {
        return absl::InvalidArgumentError(
            absl::StrCat("phi ", phi, ": ", s.message()));
      }
    }
  }
  if (Uses(kMonteCarlo, command)) {
    if (c.p < 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("p must be at least 2, got ", c.p));
    }
    if (absl::Status s = ValidatePolicy(Policy(c)); !s.ok()) return s;
  }
  if (Uses(kUsesStrategy, command) && c.strategy != "article" &&
      c.strategy != "cluster") {
    return absl::InvalidArgumentError(absl::StrCat(
        "unknown strategy '", c.strategy, "' (expected article or cluster)"));
  }
  if (Uses(kUsesSessions, command) && c.sessions_path.empty()) {
    if (absl::Status s = ValidateSessionSynthesisConfig(c.sessions); !s.ok()) {
      return s;
    }
  }
  if (command == Command::kCluster && !(c.gamma > 0.0 && std::isfinite(c.gamma))) {
    return absl::InvalidArgumentError("gamma must be positive");
  }
  if (command == Command::kFrontier) {
    if (c.gammas.empty()) return absl::InvalidArgumentError("gammas is empty");
    for (double gamma : c.gammas) {
      if (!(gamma > 0.0 && std::isfinite(gamma))) {
        return absl::InvalidArgumentError("every gamma must be positive");
      }
    }
  }
  if (command == Command::kCoverage) {
    if (!(c.noise_sigma >= 0.0 && std::isfinite(c.noise_sigma))) {
      return absl::InvalidArgumentError("noise_sigma must be >= 0");
    }
    if (!(c.z > 0.0 && std::isfinite(c.z))) {
      return absl::InvalidArgumentError("z must be positive");
    }
  }
  if (command == Command::kMeta) {
    if (c.in_path.empty()) return absl::InvalidArgumentError("meta requires --in");
    if (!(c.halfwidth_divisor > 0.0 && std::isfinite(c.halfwidth_divisor))) {
      return absl::InvalidArgumentError("halfwidth_divisor must be positive");
    }
  }
  return absl::OkStatus();
}

absl::Status RunCommand(Command command, const RunConfig& config,
                        uint64_t seed, std::ostream& out) {
  absl::StatusOr<std::string> text;
  switch (command) {
    case Command::kGen: {
      absl::StatusOr<DemandSystem> system =
          GenerateDemandSystem(config.generator, seed);
      if (!system.ok()) return system.status();
      return WriteDemandSystem(config.out_path, *system, config.force);
    }
    case Command::kSimulate:
      text = Simulate(config, seed);
      break;
    case Command::kSweep:
      text = Sweep(config, seed);
      break;
    case Command::kCluster:
      text = Cluster(config, seed);
      break;
    case Command::kExposure:
      text = Exposure(config, seed);
      break;
    case Command::kFrontier:
      text = FrontierCommand(config, seed);
      break;
    case Command::kMeta:
      text = Meta(config);
      break;
    case Command::kCoverage:
      text = Coverage(config, seed);
      break;
  }
  if (!text.ok()) return text.status();
  return Emit(config, *text, out);
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Interference simulator for pricing A/B tests",
               "interference_lab"};
  app.require_subcommand(1);
  std::string config_path;
  std::map<Command, std::vector<std::pair<CLI::Option*, const KeySpec*>>>
      options;
  std::map<Command, CLI::App*> subcommands;
  std::map<std::string, std::string> raw;
  bool force_flag = false;
  for (Command command : kAllCommands) {
    CLI::App* sub = app.add_subcommand(std::string(CommandName(command)),
                                       Description(command));
    subcommands[command] = sub;
    sub->add_option("--config", config_path,
                    "JSON config; flags override its keys");
    for (const KeySpec& spec : Specs()) {
      if (!Uses(spec.commands, command)) continue;
      CLI::Option* opt =
          spec.type == Type::kBool
              ? sub->add_flag(FlagName(spec.name), force_flag, spec.help)
              : sub->add_option(FlagName(spec.name), raw[spec.name],
                                spec.help);
      options[command].emplace_back(opt, &spec);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << OneLine(e.what()) << "\n";
    return 2;
  }

  Command command = Command::kGen;
  for (const auto& [c, sub] : subcommands) {
    if (sub->parsed()) command = c;
  }

  RunConfig config;
  if (!config_path.empty()) {
    absl::StatusOr<std::string> text = ReadFile(config_path);
    if (!text.ok()) {
      err << "usage error: " << OneLine(text.status().message()) << "\n";
      return 2;
    }
    const json j = json::parse(*text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
      err << "usage error: " << config_path << " is not valid JSON\n";
      return 2;
    }
    if (absl::Status s = ApplyConfigJson(j, config); !s.ok()) {
      err << "usage error: " << config_path << ": " << OneLine(s.message())
          << "\n";
      return 2;
    }
  }
  for (const auto& [opt, spec] : options[command]) {
    if (opt->count() == 0) continue;
    const std::string value =
        spec->type == Type::kBool ? "true" : raw[spec->name];
    if (absl::Status s = ApplyConfigText(spec->name, value, config); !s.ok()) {
      err << "usage error: " << OneLine(s.message()) << "\n";
      return 2;
    }
  }
  absl::StatusOr<uint64_t> seed = ResolveSeed(config, std::getenv(kSeedEnvVar));
  if (!seed.ok()) {
    err << "usage error: " << OneLine(seed.status().message()) << "\n";
    return 2;
  }
  if (absl::Status s = ValidateRunConfig(config, command); !s.ok()) {
    err << "usage error: " << OneLine(s.message()) << "\n";
    return 2;
  }
  if (absl::Status s = RunCommand(command, config, *seed, out); !s.ok()) {
    err << "error: " << OneLine(s.message()) << "\n";
    return 1;
  }
  return 0;
}

}  // namespace interference
