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

#include "interference/demand.h"

#include <cmath>
#include <limits>
#include <vector>

#include "absl/strings/str_cat.h"
#include "interference/rng.h"

namespace interference {

absl::Status ValidateGeneratorConfig(const GeneratorConfig& c) {
  if (c.n <= 0) return absl::InvalidArgumentError("n must be positive");
  if (c.n > std::numeric_limits<int>::max()) {
    return absl::InvalidArgumentError("n exceeds the supported article count");
  }
  if (c.cluster_size_min < 1 || c.cluster_size_max < c.cluster_size_min) {
    return absl::InvalidArgumentError(
        absl::StrCat("cluster sizes need 1 <= min <= max, got [",
                     c.cluster_size_min, ", ", c.cluster_size_max, "]"));
  }
  if (!(c.own_spread >= 0.0) || !(c.own_mean + c.own_spread < 0.0)) {
    return absl::InvalidArgumentError(
        "own-price elasticities must stay negative: need own_spread >= 0 and "
        "own_mean + own_spread < 0");
  }
  if (!(c.own_cluster_share >= 0.0 && c.own_cluster_share <= 1.0)) {
    return absl::InvalidArgumentError("own_cluster_share must be in [0, 1]");
  }
  if (!(c.within_share >= 0.0 && c.within_share < 1.0)) {
    return absl::InvalidArgumentError("within_share must be in [0, 1)");
  }
  if (!(c.background_share >= 0.0 && c.background_share < 1.0)) {
    return absl::InvalidArgumentError("background_share must be in [0, 1)");
  }
  if (!(c.within_share + c.background_share < 1.0)) {
    return absl::InvalidArgumentError(
        "within_share + background_share must be < 1");
  }
  // Within-cluster substitution must dominate the background for every
  // cluster size the generator can produce.
  if (c.within_share * static_cast<double>(c.n) <
      c.background_share * (c.cluster_size_max - 1)) {
    return absl::InvalidArgumentError(
        "within_share too small relative to background_share: within-cluster "
        "elasticities would fall below the background elasticity");
  }
  if (!(c.price_min > 0.0) || !(c.price_max >= c.price_min)) {
    return absl::InvalidArgumentError("need 0 < price_min <= price_max");
  }
  if (!(c.quantity_min > 0.0) || !(c.quantity_max >= c.quantity_min)) {
    return absl::InvalidArgumentError(
        "need 0 < quantity_min <= quantity_max");
  }
  return absl::OkStatus();
}

absl::StatusOr<DemandSystem> DemandSystem::Create(
    Eigen::VectorXd base_prices, Eigen::VectorXd base_quantities,
    ElasticityStructure elasticity, std::optional<Provenance> provenance) {
  const int64_t n = elasticity.partition.size();
  if (n == 0) return absl::InvalidArgumentError("demand system has no articles");
  if (base_prices.size() != n || base_quantities.size() != n ||
      elasticity.own.size() != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "vector lengths disagree with the partition size ", n));
  }
  if (elasticity.within.size() != elasticity.partition.num_clusters()) {
    return absl::InvalidArgumentError(
        "within elasticities must have one entry per cluster");
  }
  for (int64_t i = 0; i < n; ++i) {
    if (!(base_prices[i] > 0.0) || !std::isfinite(base_prices[i]) ||
        !(base_quantities[i] > 0.0) || !std::isfinite(base_quantities[i])) {
      return absl::InvalidArgumentError(absl::StrCat(
          "article ", i, ": base price and quantity must be positive"));
    }
    if (!(elasticity.own[i] < 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "article ", i, ": own-price elasticity must be negative"));
    }
  }
  if (!(elasticity.background >= 0.0) ||
      !std::isfinite(elasticity.background)) {
    return absl::InvalidArgumentError(
        "background elasticity must be non-negative");
  }
  for (int c = 0; c < elasticity.partition.num_clusters(); ++c) {
    const double beta = elasticity.within[c];
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "cluster ", c, ": within elasticity must be non-negative"));
    }
    if (elasticity.partition.cluster_size(c) > 1 &&
        beta < elasticity.background) {
      return absl::InvalidArgumentError(absl::StrCat(
          "cluster ", c, ": within elasticity ", beta,
          " is below the background elasticity ", elasticity.background));
    }
  }
  DemandSystem system;
  system.base_prices_ = std::move(base_prices);
  system.base_quantities_ = std::move(base_quantities);
  system.elasticity_ = std::move(elasticity);
  system.provenance_ = std::move(provenance);
  return system;
}

absl::Status ValidatePolicy(const PricePolicy& policy) {
  if (!(policy.treated_multiplier > 0.0) ||
      !std::isfinite(policy.treated_multiplier)) {
    return absl::InvalidArgumentError(
        "treated_multiplier must be a positive finite number");
  }
  return absl::OkStatus();
}

std::string_view MetricName(Metric metric) {
  return metric == Metric::kUnits ? "units" : "revenue";
}

absl::StatusOr<Metric> ParseMetric(std::string_view name) {
  if (name == "units") return Metric::kUnits;
  if (name == "revenue") return Metric::kRevenue;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown metric '", std::string(name), "' (expected units or revenue)"));
}

absl::StatusOr<DemandSystem> GenerateDemandSystem(const GeneratorConfig& config,
                                                  uint64_t seed) {
  if (absl::Status s = ValidateGeneratorConfig(config); !s.ok()) return s;
  const int64_t n = config.n;

  // One stream per quantity; changing one knob never shifts another's draws.
  Rng size_rng = MakeStream(seed, 0);
  Rng own_rng = MakeStream(seed, 1);
  Rng price_rng = MakeStream(seed, 2);
  Rng quantity_rng = MakeStream(seed, 3);

  std::vector<int> cluster_of(n);
  std::vector<int> sizes;
  for (int64_t start = 0; start < n;) {
    const int64_t drawn =
        UniformInt(size_rng, config.cluster_size_min, config.cluster_size_max);
    const int64_t size = std::min(drawn, n - start);
    for (int64_t i = start; i < start + size; ++i) {
      cluster_of[i] = static_cast<int>(sizes.size());
    }
    sizes.push_back(static_cast<int>(size));
    start += size;
  }
  absl::StatusOr<Partition> partition = Partition::Create(std::move(cluster_of));
  if (!partition.ok()) return partition.status();

  const double magnitude = std::abs(config.own_mean);
  const int k = partition->num_clusters();
  ElasticityStructure elasticity;
  elasticity.within.resize(k);
  for (int c = 0; c < k; ++c) {
    elasticity.within[c] =
        sizes[c] > 1 ? config.within_share * magnitude / (sizes[c] - 1) : 0.0;
  }
  elasticity.background =
      config.background_share * magnitude / static_cast<double>(n);

  const double rho = config.own_cluster_share;
  Eigen::VectorXd cluster_shock(k);
  for (int c = 0; c < k; ++c) cluster_shock[c] = UniformDouble(own_rng, -1, 1);
  elasticity.own.resize(n);
  for (int64_t i = 0; i < n; ++i) {
    const double idiosyncratic = UniformDouble(own_rng, -1, 1);
    elasticity.own[i] =
        config.own_mean +
        config.own_spread * (rho * cluster_shock[(*partition).cluster_of(i)] +
                             (1.0 - rho) * idiosyncratic);
  }
  elasticity.partition = *std::move(partition);

  Eigen::VectorXd prices(n);
  Eigen::VectorXd quantities(n);
  for (int64_t i = 0; i < n; ++i) {
    prices[i] = UniformDouble(price_rng, config.price_min, config.price_max);
    quantities[i] =
        UniformDouble(quantity_rng, config.quantity_min, config.quantity_max);
  }
  return DemandSystem::Create(std::move(prices), std::move(quantities),
                              std::move(elasticity), Provenance{config, seed});
}

namespace internal {

absl::Status CheckMultipliers(int64_t n, const double* data, int64_t size) {
  if (size != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected ", n, " multipliers, got ", size));
  }
  for (int64_t i = 0; i < size; ++i) {
    if (!(data[i] > 0.0) || !std::isfinite(data[i])) {
      return absl::InvalidArgumentError(absl::StrCat(
          "multiplier ", i, " must be positive and finite, got ", data[i]));
    }
  }
  return absl::OkStatus();
}

}  // namespace internal

absl::StatusOr<Eigen::MatrixXd> DenseElasticityMatrix(
    const DemandSystem& system) {
  const int64_t n = system.size();
  if (n > kDenseOracleMaxArticles) {
    return absl::FailedPreconditionError(absl::StrCat(
        "dense elasticity matrix refused for n = ", n, " > ",
        kDenseOracleMaxArticles, " articles"));
  }
  const ElasticityStructure& e = system.elasticity();
  Eigen::MatrixXd matrix(n, n);
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = 0; j < n; ++j) {
      if (i == j) {
        matrix(i, j) = e.own[i];
      } else if (e.partition.cluster_of(i) == e.partition.cluster_of(j)) {
        matrix(i, j) = e.within[e.partition.cluster_of(i)];
      } else {
        matrix(i, j) = e.background;
      }
    }
  }
  return matrix;
}

absl::StatusOr<Eigen::VectorXd> DenseOracle(
    const DemandSystem& system, const Eigen::VectorXd& multipliers) {
  absl::StatusOr<Eigen::MatrixXd> matrix = DenseElasticityMatrix(system);
  if (!matrix.ok()) return matrix.status();
  if (absl::Status s = internal::CheckMultipliers(
          system.size(), multipliers.data(), multipliers.size());
      !s.ok()) {
    return s;
  }
  const Eigen::VectorXd logs = multipliers.array().log().matrix();
  const Eigen::VectorXd exponent = (*matrix) * logs;
  return (system.base_quantities().array() * exponent.array().exp()).matrix();
}

double OutcomeFromQuantities(const DemandSystem& system,
                             const Eigen::VectorXd& multipliers,
                             const Eigen::VectorXd& quantities, Metric metric,
                             std::span<const int64_t> subset) {
  double total = 0.0;
  if (metric == Metric::kUnits) {
    for (int64_t i : subset) total += quantities[i];
  } else {
    for (int64_t i : subset) {
      total += multipliers[i] * system.base_prices()[i] * quantities[i];
    }
  }
  return total;
}

absl::StatusOr<double> Outcome(const DemandSystem& system,
                               const Eigen::VectorXd& multipliers,
                               Metric metric, std::span<const int64_t> subset) {
  if (subset.empty()) return absl::InvalidArgumentError("empty article subset");
  for (int64_t i : subset) {
    if (i < 0 || i >= system.size()) {
      return absl::OutOfRangeError(
          absl::StrCat("article ", i, " outside [0, ", system.size(), ")"));
    }
  }
  absl::StatusOr<Eigen::VectorXd> quantities = DemandAt(system, multipliers);
  if (!quantities.ok()) return quantities.status();
  return OutcomeFromQuantities(system, multipliers, *quantities, metric,
                               subset);
}

absl::StatusOr<double> GlobalTreatmentEffect(const DemandSystem& system,
                                             const PricePolicy& policy,
                                             Metric metric) {
  if (absl::Status s = ValidatePolicy(policy); !s.ok()) return s;
  const int64_t n = system.size();
  const Eigen::VectorXd rollout =
      Eigen::VectorXd::Constant(n, policy.treated_multiplier);
  const Eigen::VectorXd treated = DemandAtUnchecked(system, rollout);
  double after = 0.0;
  double before = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    const double price = system.base_prices()[i];
    after += metric == Metric::kUnits
                 ? treated[i]
                 : policy.treated_multiplier * price * treated[i];
    before += metric == Metric::kUnits
                  ? system.base_quantities()[i]
                  : price * system.base_quantities()[i];
  }
  return after / before - 1.0;
}

}  // namespace interference
