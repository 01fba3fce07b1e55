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
#include <functional>
#include <limits>
#include <tuple>
#include <vector>

#include "gtest/gtest.h"
#include "interference/rng.h"

namespace interference {
namespace {

using Edges = std::vector<std::tuple<int, int, double>>;

SessionGraph Graph(int n, const Edges& edges) {
  absl::StatusOr<SessionGraph> g = SessionGraph::FromEdges(n, edges);
  EXPECT_TRUE(g.ok()) << g.status();
  return *std::move(g);
}

SessionGraph TwoTriangles() {
  return Graph(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1},
                   {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
}

double Q(const SessionGraph& g, const std::vector<int>& labels,
         double gamma = 1.0) {
  absl::StatusOr<Partition> p = Partition::FromLabels(labels);
  absl::StatusOr<double> q = Modularity(g, *p, gamma);
  EXPECT_TRUE(q.ok()) << q.status();
  return *q;
}

// Brute force over every set partition (restricted growth strings).
double ExhaustiveOptimum(const SessionGraph& g, double gamma) {
  const int n = static_cast<int>(g.num_nodes());
  std::vector<int> labels(n, 0);
  double best = -std::numeric_limits<double>::infinity();
  std::function<void(int, int)> visit = [&](int i, int used) {
    if (i == n) {
      best = std::max(best, Q(g, labels, gamma));
      return;
    }
    for (int c = 0; c <= used; ++c) {
      labels[i] = c;
      visit(i + 1, std::max(used, c + 1));
    }
  };
  labels[0] = 0;
  visit(1, 1);
  return best;
}

TEST(ModularityTest, TwoTrianglesUnitValues) {
  const SessionGraph g = TwoTriangles();
  EXPECT_NEAR(Q(g, {0, 0, 0, 1, 1, 1}), 2 * (3.0 / 6 - 0.25), 1e-12);
  EXPECT_NEAR(Q(g, {0, 0, 0, 1, 1, 1}), 0.5, 1e-12);
  EXPECT_NEAR(Q(g, {0, 0, 0, 0, 0, 0}), 0.0, 1e-12);
  // Every node has degree 2 and 2m = 12.
  EXPECT_NEAR(Q(g, {0, 1, 2, 3, 4, 5}), -6 * (2.0 / 12) * (2.0 / 12), 1e-12);
}

TEST(ModularityTest, AllInOneIsZeroAndLabelsDoNotMatter) {
  Rng rng = MakeStream(4, 0);
  Edges edges;
  for (int u = 0; u < 30; ++u) {
    for (int v = u + 1; v < 30; ++v) {
      if (UniformDouble(rng) < 0.2) edges.emplace_back(u, v, 1 + UniformIndex(rng, 4));
    }
  }
  const SessionGraph g = Graph(30, edges);
  EXPECT_NEAR(Q(g, std::vector<int>(30, 0)), 0.0, 1e-12);

  std::vector<int> labels(30), relabeled(30);
  for (int i = 0; i < 30; ++i) {
    labels[i] = i % 4;
    relabeled[i] = 7 - (i % 4) * 2;
  }
  EXPECT_DOUBLE_EQ(Q(g, labels), Q(g, relabeled));
}

TEST(ModularityTest, RejectsBadInput) {
  const SessionGraph g = TwoTriangles();
  EXPECT_FALSE(Modularity(g, Partition::Singletons(5), 1.0).ok());
  EXPECT_FALSE(Modularity(g, Partition::Singletons(6), 0.0).ok());
  EXPECT_FALSE(Modularity(Graph(3, {}), Partition::Singletons(3), 1.0).ok());
}

TEST(LouvainTest, RecoversTwoTriangles) {
  const SessionGraph g = TwoTriangles();
  for (uint64_t seed = 0; seed < 10; ++seed) {
    absl::StatusOr<Partition> p = Louvain(g, 1.0, seed);
    ASSERT_TRUE(p.ok());
    EXPECT_EQ(p->num_clusters(), 2);
    EXPECT_NEAR(*Modularity(g, *p, 1.0), 0.5, 1e-12);
    EXPECT_EQ(p->cluster_of(0), p->cluster_of(2));
    EXPECT_NE(p->cluster_of(0), p->cluster_of(3));
  }
}

TEST(LouvainTest, CliqueStaysWhole) {
  Edges edges;
  for (int u = 0; u < 7; ++u) {
    for (int v = u + 1; v < 7; ++v) edges.emplace_back(u, v, 1.0);
  }
  absl::StatusOr<Partition> p = Louvain(Graph(7, edges), 1.0, 3);
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->num_clusters(), 1);
}

TEST(LouvainTest, WithinToleranceOfExhaustiveOptimum) {
  for (uint64_t graph_seed = 0; graph_seed < 12; ++graph_seed) {
    Rng rng = MakeStream(99, graph_seed);
    const int n = static_cast<int>(UniformInt(rng, 4, 8));
    Edges edges;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (UniformDouble(rng) < 0.45) {
          edges.emplace_back(u, v, static_cast<double>(UniformInt(rng, 1, 5)));
        }
      }
    }
    if (edges.empty()) edges.emplace_back(0, 1, 1.0);
    const SessionGraph g = Graph(n, edges);
    for (double gamma : {0.5, 1.0, 2.0}) {
      const double optimum = ExhaustiveOptimum(g, gamma);
      absl::StatusOr<Partition> p = Louvain(g, gamma, graph_seed);
      ASSERT_TRUE(p.ok());
      const double q = *Modularity(g, *p, gamma);
      EXPECT_LE(q, optimum + 1e-12);
      EXPECT_GE(q, optimum - 0.05)
          << "graph " << graph_seed << " gamma " << gamma;
    }
  }
}

TEST(LouvainTest, PhasesNeverLowerModularity) {
  const Partition planted = *Partition::Create([] {
    std::vector<int> labels;
    for (int c = 0; c < 40; ++c) labels.insert(labels.end(), 5, c);
    return labels;
  }());
  absl::StatusOr<std::vector<Session>> sessions =
      GenerateSessions(planted, {.n_sessions = 4000, .purity = 0.8}, 2);
  absl::StatusOr<SessionGraph> g = BuildGraph(*sessions, 200);
  ASSERT_TRUE(g.ok());
  LouvainTrace trace;
  absl::StatusOr<Partition> p = Louvain(*g, 1.0, 5, &trace);
  ASSERT_TRUE(p.ok());
  ASSERT_GE(trace.phase_modularity.size(), 2u);
  EXPECT_DOUBLE_EQ(trace.phase_modularity.front(),
                   *Modularity(*g, Partition::Singletons(200), 1.0));
  for (size_t i = 1; i < trace.phase_modularity.size(); ++i) {
    EXPECT_GE(trace.phase_modularity[i], trace.phase_modularity[i - 1]);
  }
  EXPECT_NEAR(trace.phase_modularity.back(), *Modularity(*g, *p, 1.0), 1e-12);
}

TEST(LouvainTest, PlantedPartitionIsRefinedByPureSessions) {
  std::vector<int> labels;
  Rng rng = MakeStream(11, 0);
  for (int c = 0; c < 60; ++c) {
    labels.insert(labels.end(), UniformInt(rng, 2, 12), c);
  }
  const Partition planted = *Partition::Create(labels);
  absl::StatusOr<std::vector<Session>> sessions =
      GenerateSessions(planted, {.n_sessions = 6000, .purity = 1.0}, 11);
  absl::StatusOr<SessionGraph> g = BuildGraph(*sessions, planted.size());
  ASSERT_TRUE(g.ok());
  absl::StatusOr<Partition> found = Louvain(*g, 1.0, 11);
  ASSERT_TRUE(found.ok());
  EXPECT_TRUE(found->Refines(planted));
  for (int u = 0; u < g->num_nodes(); ++u) {
    for (const auto& [v, w] : g->neighbors(u)) {
      EXPECT_EQ(found->cluster_of(u), found->cluster_of(v));
    }
  }
}

TEST(LouvainTest, DeterministicPerSeed) {
  const Partition planted = Partition::FromLabels([] {
                              std::vector<int> l;
                              for (int i = 0; i < 300; ++i) l.push_back(i / 6);
                              return l;
                            }())
                                .value();
  absl::StatusOr<std::vector<Session>> sessions =
      GenerateSessions(planted, {.n_sessions = 3000, .purity = 0.6}, 1);
  absl::StatusOr<SessionGraph> g = BuildGraph(*sessions, 300);
  ASSERT_TRUE(g.ok());
  EXPECT_EQ(*Louvain(*g, 1.0, 4), *Louvain(*g, 1.0, 4));
  EXPECT_GE(*Modularity(*g, *Louvain(*g, 1.0, 4), 1.0),
            *Modularity(*g, Partition::Singletons(300), 1.0));
}

TEST(FrontierTest, ResolutionTradesExposureForSpread) {
  GeneratorConfig config{.n = 600, .within_share = 0.3,
                         .background_share = 0.1};
  absl::StatusOr<DemandSystem> system = GenerateDemandSystem(config, 3);
  ASSERT_TRUE(system.ok());
  absl::StatusOr<std::vector<Session>> sessions = GenerateSessions(
      system->partition(), {.n_sessions = 6000, .purity = 0.9}, 3);
  ASSERT_TRUE(sessions.ok());
  absl::StatusOr<std::vector<FrontierPoint>> points =
      Frontier(*system, *sessions, {30.0, 1e6}, {0.95}, Metric::kRevenue,
               {.p = 100, .master_seed = 3});
  ASSERT_TRUE(points.ok()) << points.status();
  ASSERT_EQ(points->size(), 2u);
  const FrontierPoint& coarse = (*points)[0];
  const FrontierPoint& fine = (*points)[1];
  EXPECT_EQ(coarse.gamma, 30.0);
  EXPECT_EQ(fine.n_clusters, 600);
  EXPECT_DOUBLE_EQ(fine.avg_cluster_size, 1.0);
  EXPECT_LT(coarse.share_both, fine.share_both);
  EXPECT_LT(coarse.mean_bias, fine.mean_bias);
  EXPECT_GT(coarse.relative_sd, fine.relative_sd);
  EXPECT_GT(coarse.mean_bias, 3.0 * coarse.report.BiasStandardError());

  const std::string csv = FrontierCsv(*points);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kFrontierCsvHeader);
}

TEST(FrontierTest, SingleClusterFlagsBias) {
  absl::StatusOr<DemandSystem> system =
      GenerateDemandSystem(GeneratorConfig{.n = 40, .within_share = 0.3}, 1);
  ASSERT_TRUE(system.ok());
  std::vector<Session> sessions;
  for (int i = 0; i + 1 < 40; ++i) sessions.push_back({"s", {i, i + 1}});
  for (int i = 0; i < 40; ++i) sessions.push_back({"t", {i, (i + 20) % 40}});
  absl::StatusOr<std::vector<FrontierPoint>> points = Frontier(
      *system, sessions, {1e-4}, {0.95}, Metric::kRevenue, {.p = 10});
  ASSERT_TRUE(points.ok()) << points.status();
  ASSERT_EQ((*points)[0].n_clusters, 1);
  EXPECT_FALSE((*points)[0].bias_defined);
  EXPECT_TRUE(std::isnan((*points)[0].mean_bias));
  EXPECT_EQ((*points)[0].share_both, 0.0);
}

TEST(FrontierTest, WorkerCountDoesNotChangeOutput) {
  absl::StatusOr<DemandSystem> system = GenerateDemandSystem(
      GeneratorConfig{.n = 300, .within_share = 0.3, .background_share = 0.1},
      9);
  absl::StatusOr<std::vector<Session>> sessions = GenerateSessions(
      system->partition(), {.n_sessions = 3000, .purity = 0.8}, 9);
  ASSERT_TRUE(system.ok() && sessions.ok());
  std::string first;
  for (int workers : {1, 4}) {
    absl::StatusOr<std::vector<FrontierPoint>> points =
        Frontier(*system, *sessions, {100, 10, 1}, {0.95}, Metric::kRevenue,
                 {.p = 40, .master_seed = 2, .workers = workers});
    ASSERT_TRUE(points.ok());
    if (first.empty()) {
      first = FrontierCsv(*points);
    } else {
      EXPECT_EQ(FrontierCsv(*points), first);
    }
  }
}

}  // namespace
}  // namespace interference
