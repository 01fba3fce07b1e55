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

#include "interference/clustering.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "interference/csv.h"
#include "interference/parallel.h"
#include "interference/rng.h"

namespace interference {

absl::StatusOr<double> Modularity(const SessionGraph& graph,
                                  const Partition& partition, double gamma) {
  if (partition.size() != graph.num_nodes()) {
    return absl::InvalidArgumentError(
        absl::StrCat("partition covers ", partition.size(),
                     " nodes, graph has ", graph.num_nodes()));
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    return absl::InvalidArgumentError("resolution must be positive");
  }
  const double m = graph.total_weight();
  if (!(m > 0.0)) {
    return absl::FailedPreconditionError("modularity of an edgeless graph");
  }
  std::vector<double> intra(partition.num_clusters(), 0.0);
  std::vector<double> degree(partition.num_clusters(), 0.0);
  for (int u = 0; u < graph.num_nodes(); ++u) {
    const int c = partition.cluster_of(u);
    degree[c] += graph.degree(u);
    for (const auto& [v, w] : graph.neighbors(u)) {
      if (v > u && partition.cluster_of(v) == c) intra[c] += w;
    }
  }
  double q = 0.0;
  for (int c = 0; c < partition.num_clusters(); ++c) {
    const double share = degree[c] / (2.0 * m);
    q += intra[c] / m - gamma * share * share;
  }
  return q;
}

namespace {

// Graph of one Louvain level. Nodes are communities of the level below;
// self_weight holds the edge weight already internal to a node.
struct LevelGraph {
  std::vector<std::vector<SessionGraph::Neighbor>> adjacency;
  std::vector<double> self_weight;
  std::vector<double> degree;

  int size() const { return static_cast<int>(adjacency.size()); }
};

LevelGraph FromSessionGraph(const SessionGraph& graph) {
  LevelGraph level;
  const int n = static_cast<int>(graph.num_nodes());
  level.adjacency.resize(n);
  level.self_weight.assign(n, 0.0);
  level.degree.resize(n);
  for (int u = 0; u < n; ++u) {
    level.adjacency[u] = graph.neighbors(u);
    level.degree[u] = graph.degree(u);
  }
  return level;
}

// Local moving until a full pass moves nothing. Returns whether any node
// moved; `community` ends up holding arbitrary ids in [0, n).
bool MoveNodes(const LevelGraph& level, double m, double gamma, Rng& rng,
               std::vector<int>& community) {
  const int n = level.size();
  community.resize(n);
  std::iota(community.begin(), community.end(), 0);
  std::vector<double> total = level.degree;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Shuffle(std::span<int>(order), rng);

  std::vector<double> link(n, 0.0);
  std::vector<int> touched;
  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int node : order) {
      const int current = community[node];
      const double k = level.degree[node];
      touched.clear();
      for (const auto& [neighbor, w] : level.adjacency[node]) {
        const int c = community[neighbor];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }
      total[current] -= k;
      auto gain = [&](int c) {
        return link[c] - gamma * total[c] * k / (2.0 * m);
      };
      const double stay = gain(current);
      int best = current;
      double best_gain = stay;
      for (int c : touched) {
        const double g = gain(c);
        if (g > best_gain || (g == best_gain && c < best)) {
          best = c;
          best_gain = g;
        }
      }
      if (best != current && (best_gain - stay) / m > kMinModularityGain) {
        community[node] = best;
        moved = true;
        any_move = true;
      }
      total[community[node]] += k;
      for (int c : touched) link[c] = 0.0;
    }
  }
  return any_move;
}

// Renumbers communities contiguously by first appearance and collapses
// each into one node.
LevelGraph Aggregate(const LevelGraph& level, std::vector<int>& community) {
  std::vector<int> relabel(level.size(), -1);
  int k = 0;
  for (int& c : community) {
    if (relabel[c] < 0) relabel[c] = k++;
    c = relabel[c];
  }
  LevelGraph next;
  next.adjacency.resize(k);
  next.self_weight.assign(k, 0.0);
  next.degree.assign(k, 0.0);
  std::vector<double> row(k, 0.0);
  std::vector<std::vector<int>> members(k);
  for (int u = 0; u < level.size(); ++u) members[community[u]].push_back(u);
  std::vector<int> touched;
  for (int c = 0; c < k; ++c) {
    touched.clear();
    for (int u : members[c]) {
      next.self_weight[c] += level.self_weight[u];
      next.degree[c] += level.degree[u];
      for (const auto& [v, w] : level.adjacency[u]) {
        const int d = community[v];
        if (d == c) {
          // Each internal edge is seen from both ends.
          next.self_weight[c] += 0.5 * w;
        } else {
          if (row[d] == 0.0) touched.push_back(d);
          row[d] += w;
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int d : touched) {
      next.adjacency[c].push_back({d, row[d]});
      row[d] = 0.0;
    }
  }
  return next;
}

}  // namespace

absl::StatusOr<Partition> Louvain(const SessionGraph& graph, double gamma,
                                  uint64_t seed, LouvainTrace* trace) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    return absl::InvalidArgumentError("resolution must be positive");
  }
  const double m = graph.total_weight();
  if (!(m > 0.0)) {
    return absl::FailedPreconditionError("cannot cluster an edgeless graph");
  }
  Rng rng = MakeStream(seed, 0);
  LevelGraph level = FromSessionGraph(graph);
  std::vector<int> node_community(graph.num_nodes());
  std::iota(node_community.begin(), node_community.end(), 0);
  if (trace != nullptr) {
    trace->phase_modularity.clear();
    absl::StatusOr<double> q =
        Modularity(graph, Partition::Singletons(graph.num_nodes()), gamma);
    trace->phase_modularity.push_back(*q);
  }
  std::vector<int> community;
  while (MoveNodes(level, m, gamma, rng, community)) {
    level = Aggregate(level, community);
    for (int& c : node_community) c = community[c];
    if (trace != nullptr) {
      absl::StatusOr<Partition> current =
          Partition::FromLabels(node_community);
      trace->phase_modularity.push_back(*Modularity(graph, *current, gamma));
    }
  }
  return Partition::FromLabels(node_community);
}

absl::StatusOr<std::vector<FrontierPoint>> Frontier(
    const DemandSystem& system, const std::vector<Session>& sessions,
    std::vector<double> gammas, const PricePolicy& policy, Metric metric,
    const MonteCarloOptions& options) {
  if (gammas.empty()) {
    return absl::InvalidArgumentError("frontier needs at least one gamma");
  }
  for (double gamma : gammas) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
      return absl::InvalidArgumentError(
          absl::StrCat("resolution must be positive, got ", gamma));
    }
  }
  if (options.p < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 2 permutations, got ", options.p));
  }
  if (absl::Status s = ValidatePolicy(policy); !s.ok()) return s;
  absl::StatusOr<SessionGraph> graph = BuildGraph(sessions, system.size());
  if (!graph.ok()) return graph.status();
  if (!(graph->total_weight() > 0.0)) {
    return absl::FailedPreconditionError(
        "sessions produce no co-views; nothing to cluster");
  }
  std::sort(gammas.begin(), gammas.end());

  const int64_t count = static_cast<int64_t>(gammas.size());
  std::vector<FrontierPoint> points(count);
  std::vector<absl::Status> statuses(count);
  ParallelFor(count, options.workers, [&](int64_t index) {
    const double gamma = gammas[index];
    const uint64_t point_seed = StreamSeed(options.master_seed, index);
    FrontierPoint& point = points[index];
    point.gamma = gamma;
    absl::StatusOr<Partition> partition =
        Louvain(*graph, gamma, options.master_seed);
    if (!partition.ok()) {
      statuses[index] = partition.status();
      return;
    }
    point.n_clusters = partition->num_clusters();
    point.avg_cluster_size = static_cast<double>(system.size()) /
                             static_cast<double>(point.n_clusters);
    point.modularity = *Modularity(*graph, *partition, gamma);

    if (point.n_clusters < 2) {
      // Everything lands in one arm: nobody sees both, and there is no
      // experiment to measure.
      point.share_both = 0.0;
      point.share_both_sd = 0.0;
      point.bias_defined = false;
      point.mean_bias = std::numeric_limits<double>::quiet_NaN();
      point.relative_sd = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    const RandomizationStrategy strategy =
        RandomizationStrategy::ClusterLevel(*partition);
    std::vector<double> shares(kFrontierExposureDraws);
    for (int draw = 0; draw < kFrontierExposureDraws; ++draw) {
      Rng rng = MakeStream(point_seed, draw);
      absl::StatusOr<Assignment> assignment =
          Assign(strategy, system.size(), rng);
      absl::StatusOr<ExposureReport> exposure =
          assignment.ok() ? ExposureShare(sessions, *assignment)
                          : absl::StatusOr<ExposureReport>(assignment.status());
      if (!exposure.ok()) {
        statuses[index] = exposure.status();
        return;
      }
      shares[draw] = exposure->share_both;
    }
    double mean = 0.0;
    for (double s : shares) mean += s;
    mean /= kFrontierExposureDraws;
    double ss = 0.0;
    for (double s : shares) ss += (s - mean) * (s - mean);
    point.share_both = mean;
    point.share_both_sd = std::sqrt(ss / (kFrontierExposureDraws - 1));

    MonteCarloOptions mc = options;
    mc.master_seed = point_seed;
    // Parallelism lives at the gamma level.
    mc.workers = 1;
    absl::StatusOr<BiasReport> report =
        MonteCarloBias(system, strategy, policy, metric, mc);
    if (!report.ok()) {
      statuses[index] = report.status();
      return;
    }
    point.report = *report;
    point.mean_bias = report->mean_bias;
    point.relative_sd = report->relative_sd;
  });
  for (const absl::Status& s : statuses) {
    if (!s.ok()) return s;
  }
  return points;
}

std::string FrontierCsv(const std::vector<FrontierPoint>& points) {
  std::string out = absl::StrCat(kFrontierCsvHeader, "\n");
  for (const FrontierPoint& p : points) {
    absl::StrAppend(&out, FormatDouble(p.gamma), ",", p.n_clusters, ",",
                    FormatDouble(p.avg_cluster_size), ",",
                    FormatDouble(p.modularity), ",",
                    FormatDouble(p.share_both), ",",
                    FormatDouble(p.mean_bias), ",",
                    FormatDouble(p.relative_sd), "\n");
  }
  return out;
}

}  // namespace interference
