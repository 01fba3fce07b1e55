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

#ifndef INTERFERENCE_DEMAND_H_
#define INTERFERENCE_DEMAND_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "interference/partition.h"

namespace interference {

// Parameters of the synthetic demand generator. Defaults are illustrative
// values, not measurements.
struct GeneratorConfig {
  int64_t n = 10000;
  int cluster_size_min = 2;
  int cluster_size_max = 20;
  double own_mean = -2.5;
  double own_spread = 0.5;
  // Weight of the cluster-shared component of own-price elasticity:
  // own_i = own_mean + own_spread * (rho * u_c + (1 - rho) * u_i) with
  // u ~ U[-1, 1]. Similar articles react similarly to price.
  double own_cluster_share = 1.0;
  // phi: within-cluster substitution mass as a fraction of |own_mean|.
  double within_share = 0.3;
  // phi_bg: substitution mass spread over all other articles.
  double background_share = 0.0;
  double price_min = 10.0;
  double price_max = 100.0;
  double quantity_min = 1.0;
  double quantity_max = 50.0;

  friend bool operator==(const GeneratorConfig&,
                         const GeneratorConfig&) = default;
};

absl::Status ValidateGeneratorConfig(const GeneratorConfig& config);

// Own elasticities, per-cluster within elasticities and one background
// cross elasticity. The implied matrix is E_ii = own_i, E_ij = within_c for
// i != j in cluster c, E_ij = background otherwise.
struct ElasticityStructure {
  Eigen::VectorXd own;
  Eigen::VectorXd within;
  double background = 0.0;
  Partition partition;
};

// Where a generated system came from; serialized alongside it.
struct Provenance {
  GeneratorConfig config;
  uint64_t seed = 0;
};

// Immutable after construction; share freely across threads.
class DemandSystem {
 public:
  static absl::StatusOr<DemandSystem> Create(
      Eigen::VectorXd base_prices, Eigen::VectorXd base_quantities,
      ElasticityStructure elasticity,
      std::optional<Provenance> provenance = std::nullopt);

  int64_t size() const { return base_prices_.size(); }
  const Eigen::VectorXd& base_prices() const { return base_prices_; }
  const Eigen::VectorXd& base_quantities() const { return base_quantities_; }
  const ElasticityStructure& elasticity() const { return elasticity_; }
  const Partition& partition() const { return elasticity_.partition; }
  const std::optional<Provenance>& provenance() const { return provenance_; }

 private:
  DemandSystem() = default;

  Eigen::VectorXd base_prices_;
  Eigen::VectorXd base_quantities_;
  ElasticityStructure elasticity_;
  std::optional<Provenance> provenance_;
};

// Multiplier applied to the base price of treated articles.
struct PricePolicy {
  double treated_multiplier = 0.95;
};

absl::Status ValidatePolicy(const PricePolicy& policy);

enum class Metric { kUnits, kRevenue };

std::string_view MetricName(Metric metric);
absl::StatusOr<Metric> ParseMetric(std::string_view name);

absl::StatusOr<DemandSystem> GenerateDemandSystem(const GeneratorConfig& config,
                                                  uint64_t seed);

namespace internal {

absl::Status CheckMultipliers(int64_t n, const double* data, int64_t size);

}  // namespace internal

// Constant-elasticity demand evaluated in O(n) through per-cluster log sums:
//   q_i = q0_i * exp(own_i l_i + within_c (S_c - l_i) + background (S - S_c))
// with l = log(multipliers), S_c the log sum over cluster c, S the total.
// No validation; multipliers must be positive and of length n.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> DemandAtUnchecked(
    const DemandSystem& system, const Eigen::MatrixBase<Derived>& multipliers) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const ElasticityStructure& e = system.elasticity();
  const Partition& partition = e.partition;
  const Vector logs = multipliers.array().log().matrix();
  Vector cluster_sum = Vector::Zero(partition.num_clusters());
  for (Eigen::Index i = 0; i < logs.size(); ++i) {
    cluster_sum[partition.cluster_of(i)] += logs[i];
  }
  const Scalar total = cluster_sum.sum();
  Vector q(logs.size());
  for (Eigen::Index i = 0; i < logs.size(); ++i) {
    const int c = partition.cluster_of(i);
    const Scalar exponent = Scalar(e.own[i]) * logs[i] +
                            Scalar(e.within[c]) * (cluster_sum[c] - logs[i]) +
                            Scalar(e.background) * (total - cluster_sum[c]);
    q[i] = Scalar(system.base_quantities()[i]) * std::exp(exponent);
  }
  return q;
}

template <typename Derived>
absl::StatusOr<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>
DemandAt(const DemandSystem& system,
         const Eigen::MatrixBase<Derived>& multipliers) {
  const Eigen::Matrix<double, Eigen::Dynamic, 1> as_double =
      multipliers.template cast<double>();
  if (absl::Status s = internal::CheckMultipliers(
          system.size(), as_double.data(), as_double.size());
      !s.ok()) {
    return s;
  }
  return DemandAtUnchecked(system, multipliers);
}

// Materializes the full n x n elasticity matrix.
absl::StatusOr<Eigen::MatrixXd> DenseElasticityMatrix(
    const DemandSystem& system);

// Validation oracle: q = q0 .* exp(E * log(multipliers)) with E dense.
// Refuses systems above kDenseOracleMaxArticles.
inline constexpr int64_t kDenseOracleMaxArticles = 2000;
absl::StatusOr<Eigen::VectorXd> DenseOracle(const DemandSystem& system,
                                            const Eigen::VectorXd& multipliers);

// Sum of the metric over `subset` given the evaluated quantities.
double OutcomeFromQuantities(const DemandSystem& system,
                             const Eigen::VectorXd& multipliers,
                             const Eigen::VectorXd& quantities, Metric metric,
                             std::span<const int64_t> subset);

absl::StatusOr<double> Outcome(const DemandSystem& system,
                               const Eigen::VectorXd& multipliers,
                               Metric metric, std::span<const int64_t> subset);

// Relative lift of the metric summed over all articles when every article
// gets the treated multiplier.
absl::StatusOr<double> GlobalTreatmentEffect(const DemandSystem& system,
                                             const PricePolicy& policy,
                                             Metric metric);

}  // namespace interference

#endif  // INTERFERENCE_DEMAND_H_
