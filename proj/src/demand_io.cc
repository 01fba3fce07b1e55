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

#include "interference/demand_io.h"

#include <set>
#include <vector>

#include "absl/strings/str_cat.h"
#include "interference/csv.h"

namespace interference {

using nlohmann::json;

json GeneratorConfigToJson(const GeneratorConfig& c) {
  return json{{"n", c.n},
              {"cluster_size_min", c.cluster_size_min},
              {"cluster_size_max", c.cluster_size_max},
              {"own_mean", c.own_mean},
              {"own_spread", c.own_spread},
              {"own_cluster_share", c.own_cluster_share},
              {"within_share", c.within_share},
              {"background_share", c.background_share},
              {"price_min", c.price_min},
              {"price_max", c.price_max},
              {"quantity_min", c.quantity_min},
              {"quantity_max", c.quantity_max}};
}

absl::StatusOr<GeneratorConfig> GeneratorConfigFromJson(const json& j) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("generator config must be an object");
  }
  GeneratorConfig c;
  const json defaults = GeneratorConfigToJson(c);
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown generator config key '", key, "'"));
    }
    if (!value.is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat("generator config key '", key, "' must be a number"));
    }
  }
  try {
    c.n = j.value("n", c.n);
    c.cluster_size_min = j.value("cluster_size_min", c.cluster_size_min);
    c.cluster_size_max = j.value("cluster_size_max", c.cluster_size_max);
    c.own_mean = j.value("own_mean", c.own_mean);
    c.own_spread = j.value("own_spread", c.own_spread);
    c.own_cluster_share = j.value("own_cluster_share", c.own_cluster_share);
    c.within_share = j.value("within_share", c.within_share);
    c.background_share = j.value("background_share", c.background_share);
    c.price_min = j.value("price_min", c.price_min);
    c.price_max = j.value("price_max", c.price_max);
    c.quantity_min = j.value("quantity_min", c.quantity_min);
    c.quantity_max = j.value("quantity_max", c.quantity_max);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(e.what());
  }
  return c;
}

namespace {

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd ToEigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

}  // namespace

json DemandSystemToJson(const DemandSystem& system) {
  const ElasticityStructure& e = system.elasticity();
  json out;
  out["n"] = system.size();
  if (system.provenance()) {
    out["seed"] = system.provenance()->seed;
    out["config"] = GeneratorConfigToJson(system.provenance()->config);
  } else {
    out["seed"] = nullptr;
    out["config"] = nullptr;
  }
  out["own"] = ToStd(e.own);
  out["partition"] = e.partition.labels();
  out["within_beta"] = ToStd(e.within);
  out["background"] = e.background;
  out["base_prices"] = ToStd(system.base_prices());
  out["base_quantities"] = ToStd(system.base_quantities());
  return out;
}

absl::StatusOr<DemandSystem> DemandSystemFromJson(const json& j) {
  static const std::set<std::string> kKeys = {
      "n",         "seed",        "config",      "own",
      "partition", "within_beta", "background",  "base_prices",
      "base_quantities"};
  if (!j.is_object()) {
    return absl::InvalidArgumentError("demand system must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown demand system key '", key, "'"));
    }
  }
  for (const std::string& key : kKeys) {
    if (!j.contains(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("demand system is missing '", key, "'"));
    }
  }
  try {
    const int64_t n = j.at("n").get<int64_t>();
    absl::StatusOr<Partition> partition =
        Partition::Create(j.at("partition").get<std::vector<int>>());
    if (!partition.ok()) return partition.status();
    if (partition->size() != n) {
      return absl::InvalidArgumentError(
          absl::StrCat("n = ", n, " but the partition covers ",
                       partition->size(), " articles"));
    }
    std::optional<Provenance> provenance;
    if (!j.at("config").is_null()) {
      absl::StatusOr<GeneratorConfig> config =
          GeneratorConfigFromJson(j.at("config"));
      if (!config.ok()) return config.status();
      provenance = Provenance{*config, j.at("seed").get<uint64_t>()};
    }
    ElasticityStructure elasticity;
    elasticity.own = ToEigen(j.at("own").get<std::vector<double>>());
    elasticity.within = ToEigen(j.at("within_beta").get<std::vector<double>>());
    elasticity.background = j.at("background").get<double>();
    elasticity.partition = *std::move(partition);
    return DemandSystem::Create(
        ToEigen(j.at("base_prices").get<std::vector<double>>()),
        ToEigen(j.at("base_quantities").get<std::vector<double>>()),
        std::move(elasticity), std::move(provenance));
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed demand system: ", e.what()));
  }
}

std::string SerializeDemandSystem(const DemandSystem& system) {
  return DemandSystemToJson(system).dump() + "\n";
}

absl::StatusOr<DemandSystem> ParseDemandSystem(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError("demand system is not valid JSON");
  }
  return DemandSystemFromJson(j);
}

absl::Status WriteDemandSystem(const std::string& path,
                               const DemandSystem& system, bool overwrite) {
  return WriteFile(path, SerializeDemandSystem(system), overwrite);
}

absl::StatusOr<DemandSystem> ReadDemandSystem(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<DemandSystem> system = ParseDemandSystem(*text);
  if (!system.ok()) {
    return absl::Status(system.status().code(),
                        absl::StrCat(path, ": ", system.status().message()));
  }
  return system;
}

}  // namespace interference
