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

#ifndef INTERFERENCE_EXPERIMENT_H_
#define INTERFERENCE_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "interference/demand.h"
#include "interference/partition.h"
#include "interference/rng.h"

namespace interference {

enum class Label : uint8_t { kControl = 0, kTreatment = 1 };

struct Assignment {
  std::vector<Label> label_of;

  int64_t size() const { return static_cast<int64_t>(label_of.size()); }
  int64_t treated_count() const;
  bool treated(int64_t article) const {
    return label_of[article] == Label::kTreatment;
  }
};

class RandomizationStrategy {
 public:
  enum class Kind { kArticleLevel, kClusterLevel };

  static RandomizationStrategy ArticleLevel();
  static RandomizationStrategy ClusterLevel(Partition partition);

  Kind kind() const { return kind_; }
  // Only meaningful for kClusterLevel.
  const Partition& partition() const { return partition_; }
  // "article" or "cluster".
  std::string_view name() const;

 private:
  RandomizationStrategy(Kind kind, Partition partition)
      : kind_(kind), partition_(std::move(partition)) {}

  Kind kind_;
  Partition partition_;
};

// Balanced random split: floor(units / 2) treated units, where units are
// articles or clusters depending on the strategy.
absl::StatusOr<Assignment> Assign(const RandomizationStrategy& strategy,
                                  int64_t n, Rng& rng);

// lift = (treated_outcome / treated_base) / (control_outcome / control_base)
// - 1, with the bases measured at the identity policy.
struct Estimate {
  double lift = 0.0;
  double treated_outcome = 0.0;
  double control_outcome = 0.0;
  double treated_base = 0.0;
  double control_base = 0.0;
};

absl::StatusOr<Estimate> RunExperiment(const DemandSystem& system,
                                       const Assignment& assignment,
                                       const PricePolicy& policy,
                                       Metric metric);

// Same as RunExperiment with per-article multiplicative observation noise
// applied to the observed (not the base) outcomes. `noise` has length n.
absl::StatusOr<Estimate> RunNoisyExperiment(const DemandSystem& system,
                                            const Assignment& assignment,
                                            const PricePolicy& policy,
                                            Metric metric,
                                            const Eigen::VectorXd& noise);

struct BiasReport {
  double gte = 0.0;
  double mean_estimate = 0.0;
  // (mean_estimate - gte) / |gte|; absolute difference when !relative.
  double mean_bias = 0.0;
  double sd_estimate = 0.0;
  // sd_estimate / |gte|; sd_estimate itself when !relative.
  double relative_sd = 0.0;
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
  int p = 0;
  uint64_t seed = 0;
  // False when |gte| < kNegligibleEffect and bias is reported absolutely.
  bool relative = true;

  // Monte Carlo standard error of mean_bias, in the same units.
  double BiasStandardError() const;
};

inline constexpr double kNegligibleEffect = 1e-12;

struct MonteCarloOptions {
  int p = 1000;
  uint64_t master_seed = 0;
  // 0 picks the hardware concurrency. Never changes the result.
  int workers = 0;
};

// Draws assignment k from the stream (master_seed, k), runs the experiment
// for every k and reduces in index order.
absl::StatusOr<BiasReport> MonteCarloBias(const DemandSystem& system,
                                          const RandomizationStrategy& strategy,
                                          const PricePolicy& policy,
                                          Metric metric,
                                          const MonteCarloOptions& options);

// Nearest-rank quantile of already sorted values, prob in (0, 1].
double NearestRankQuantile(const std::vector<double>& sorted, double prob);

// Strategies available to a sweep; cluster-level uses the generated
// system's own partition.
enum class SweepStrategy { kArticleLevel, kGroundTruthCluster };

std::string_view SweepStrategyName(SweepStrategy strategy);
absl::StatusOr<SweepStrategy> ParseSweepStrategy(std::string_view name);

struct SweepRow {
  double phi = 0.0;
  SweepStrategy strategy = SweepStrategy::kArticleLevel;
  BiasReport report;
};

// One row per (phi, strategy) in input order. Every phi regenerates the
// system from the template with the same seed, so only the within-cluster
// elasticities change between rows.
absl::StatusOr<std::vector<SweepRow>> SweepSubstitution(
    const GeneratorConfig& config_template, const std::vector<double>& phis,
    const std::vector<SweepStrategy>& strategies, const PricePolicy& policy,
    Metric metric, const MonteCarloOptions& options);

inline constexpr char kSweepCsvHeader[] =
    "phi,strategy,gte,mean_estimate,mean_bias,sd_estimate,relative_sd,q05,"
    "q50,q95,p,seed";

std::string BiasReportCsvRow(double phi, std::string_view strategy,
                             const BiasReport& report);
std::string SweepTableCsv(const std::vector<SweepRow>& rows);

struct CoverageOptions {
  int p = 1000;
  uint64_t seed = 0;
  int workers = 0;
  // Sigma of the mean-one lognormal noise multiplying each observed
  // article outcome.
  double noise_sigma = 0.05;
  double z = 1.96;
};

struct CoverageReport {
  // Spread of null-policy (A/A) estimates.
  double aa_sd = 0.0;
  // Share of treated-policy intervals
  // estimate +- z * aa_sd * (1 + estimate) that contain gte.
  double coverage_rate = 0.0;
  // Mean of (estimate - gte) / (aa_sd * (1 + estimate)).
  double mean_z = 0.0;
  double gte = 0.0;
  int p = 0;
  uint64_t seed = 0;
  // False when aa_sd == 0; coverage_rate and mean_z are then NaN.
  bool defined = true;
};

absl::StatusOr<CoverageReport> CoverageAnalysis(
    const DemandSystem& system, const RandomizationStrategy& strategy,
    const PricePolicy& policy, Metric metric, const CoverageOptions& options);

inline constexpr char kCoverageCsvHeader[] =
    "strategy,gte,aa_sd,coverage_rate,mean_z,p,seed";

std::string CoverageCsv(std::string_view strategy,
                        const CoverageReport& report);

}  // namespace interference

#endif  // INTERFERENCE_EXPERIMENT_H_
