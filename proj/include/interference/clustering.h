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

#ifndef INTERFERENCE_CLUSTERING_H_
#define INTERFERENCE_CLUSTERING_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "interference/clickstream.h"
#include "interference/demand.h"
#include "interference/experiment.h"
#include "interference/partition.h"

namespace interference {

// Q = sum_c [ w_c / m - gamma * (d_c / 2m)^2 ], w_c the intra-cluster edge
// weight, d_c the summed weighted degree, m the total edge weight.
absl::StatusOr<double> Modularity(const SessionGraph& graph,
                                  const Partition& partition, double gamma);

// Moves must raise Q by more than this to be accepted.
inline constexpr double kMinModularityGain = 1e-12;

struct LouvainTrace {
  // Q of the partition after each aggregation phase.
  std::vector<double> phase_modularity;
};

// Greedy local moving followed by graph aggregation until a phase makes no
// move. Node visit order is shuffled by `seed`; among equally good target
// communities the lowest id wins.
absl::StatusOr<Partition> Louvain(const SessionGraph& graph, double gamma,
                                  uint64_t seed,
                                  LouvainTrace* trace = nullptr);

struct FrontierPoint {
  double gamma = 1.0;
  int n_clusters = 0;
  double avg_cluster_size = 0.0;
  double modularity = 0.0;
  double share_both = 0.0;
  double share_both_sd = 0.0;
  // NaN when the partition has fewer than two clusters.
  double mean_bias = 0.0;
  double relative_sd = 0.0;
  bool bias_defined = true;
  // Kept for callers that need the MC standard error.
  BiasReport report;
};

inline constexpr int kFrontierExposureDraws = 32;

// Per gamma: cluster the co-view graph, average exposure over
// kFrontierExposureDraws cluster-level assignments and measure bias with
// MonteCarloBias. Gamma point i uses the stream (seed, i). Rows are sorted
// by gamma.
absl::StatusOr<std::vector<FrontierPoint>> Frontier(
    const DemandSystem& system, const std::vector<Session>& sessions,
    std::vector<double> gammas, const PricePolicy& policy, Metric metric,
    const MonteCarloOptions& options);

inline constexpr char kFrontierCsvHeader[] =
    "gamma,n_clusters,avg_cluster_size,modularity,share_both,mean_bias,"
    "relative_sd";

std::string FrontierCsv(const std::vector<FrontierPoint>& points);

}  // namespace interference

#endif  // INTERFERENCE_CLUSTERING_H_
