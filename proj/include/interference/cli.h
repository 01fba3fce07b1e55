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

#ifndef INTERFERENCE_CLI_H_
#define INTERFERENCE_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "interference/clickstream.h"
#include "interference/demand.h"
#include "interference/experiment.h"
#include "json.hpp"

namespace interference {

enum class Command {
  kGen,
  kSimulate,
  kSweep,
  kCluster,
  kExposure,
  kFrontier,
  kMeta,
  kCoverage,
};

std::string_view CommandName(Command command);

inline constexpr char kSeedEnvVar[] = "INTERFERENCE_LAB_SEED";
inline constexpr uint64_t kDefaultSeed = 1;

// Everything a subcommand may read. Keys in a JSON config use the field
// names below; the matching flag replaces '_' with '-'.
struct RunConfig {
  GeneratorConfig generator;
  double treated_multiplier = 0.95;
  Metric metric = Metric::kRevenue;
  int p = 1000;
  std::optional<uint64_t> seed;
  int workers = 0;
  std::string strategy = "article";
  std::vector<std::string> strategies = {"article", "cluster"};
  std::vector<double> phis = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  double gamma = 1.0;
  std::vector<double> gammas = {100.0, 30.0, 10.0, 3.0, 1.0};
  SessionSynthesisConfig sessions;
  double noise_sigma = 0.05;
  double z = 1.96;
  double halfwidth_divisor = 1.96;
  std::string system_path;
  std::string sessions_path;
  std::string partition_path;
  std::string in_path;
  std::string out_path;
  bool force = false;
};

// Keys accepted in JSON configs, in documentation order.
std::vector<std::string> RunConfigKeys();

// Applies every key of a JSON object. Unknown keys and wrongly typed values
// are InvalidArgument.
absl::Status ApplyConfigJson(const nlohmann::json& json, RunConfig& config);

// Applies one flag value given as text, e.g. ("phis", "0.1,0.2").
absl::Status ApplyConfigText(std::string_view key, std::string_view value,
                             RunConfig& config);

// Flag, then config file, then the environment variable, then kDefaultSeed.
absl::StatusOr<uint64_t> ResolveSeed(const RunConfig& config,
                                     const char* env_value);

// Checks what `command` needs before any work starts.
absl::Status ValidateRunConfig(const RunConfig& config, Command command);

// Runs one subcommand on an already resolved config. Output goes to
// config.out_path when set, else to `out`.
absl::Status RunCommand(Command command, const RunConfig& config,
                        uint64_t seed, std::ostream& out);

// Full entry point. Returns 0 on success, 1 on runtime errors and 2 on
// usage errors; diagnostics are single lines on `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace interference

#endif  // INTERFERENCE_CLI_H_
