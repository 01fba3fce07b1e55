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

#ifndef INTERFERENCE_DEMAND_IO_H_
#define INTERFERENCE_DEMAND_IO_H_

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "interference/demand.h"
#include "json.hpp"

namespace interference {

nlohmann::json GeneratorConfigToJson(const GeneratorConfig& config);

// Missing keys keep their defaults; unknown keys are rejected.
absl::StatusOr<GeneratorConfig> GeneratorConfigFromJson(
    const nlohmann::json& json);

// { n, seed, config, own[], partition[], within_beta[], background,
//   base_prices[], base_quantities[] }. seed and config are null for
// systems that were not generated.
nlohmann::json DemandSystemToJson(const DemandSystem& system);
absl::StatusOr<DemandSystem> DemandSystemFromJson(const nlohmann::json& json);

std::string SerializeDemandSystem(const DemandSystem& system);
absl::StatusOr<DemandSystem> ParseDemandSystem(const std::string& text);

absl::Status WriteDemandSystem(const std::string& path,
                               const DemandSystem& system,
                               bool overwrite = false);
absl::StatusOr<DemandSystem> ReadDemandSystem(const std::string& path);

}  // namespace interference

#endif  // INTERFERENCE_DEMAND_IO_H_
