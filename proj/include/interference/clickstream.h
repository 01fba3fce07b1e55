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

#ifndef INTERFERENCE_CLICKSTREAM_H_
#define INTERFERENCE_CLICKSTREAM_H_

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "interference/experiment.h"
#include "interference/partition.h"

namespace interference {

// One browsing session; `viewed` is sorted and duplicate free.
struct Session {
  std::string id;
  std::vector<int> viewed;
};

struct SessionSynthesisConfig {
  int64_t n_sessions = 20000;
  int views_min = 2;
  int views_max = 6;
  // Probability that a view stays in the session's home cluster.
  double purity = 0.9;
};

absl::Status ValidateSessionSynthesisConfig(
    const SessionSynthesisConfig& config);

// Each session picks a home cluster uniformly, then draws
// k ~ U{views_min..views_max} views: inside the home cluster with
// probability `purity`, otherwise uniformly over all articles.
absl::StatusOr<std::vector<Session>> GenerateSessions(
    const Partition& partition, const SessionSynthesisConfig& config,
    uint64_t seed);

// Clickstream CSV with header `session_id,article_id`. Sessions are returned
// in order of first appearance. Article ids outside [0, n_articles) are
// rejected with the offending line number.
absl::StatusOr<std::vector<Session>> ReadSessions(const std::string& path,
                                                  int64_t n_articles);
absl::StatusOr<std::vector<Session>> ParseSessions(const std::string& text,
                                                   int64_t n_articles);
std::string SessionsCsv(const std::vector<Session>& sessions);

// Undirected co-view graph. Edge weight counts the sessions in which both
// articles were viewed. Stored as sorted adjacency lists.
class SessionGraph {
 public:
  struct Neighbor {
    int node;
    double weight;
  };

  SessionGraph() = default;
  // Builds from (u, v, w) triples with u != v; duplicate pairs are summed.
  static absl::StatusOr<SessionGraph> FromEdges(
      int64_t n, const std::vector<std::tuple<int, int, double>>& edges);

  int64_t num_nodes() const { return static_cast<int64_t>(adjacency_.size()); }
  int64_t num_edges() const { return num_edges_; }
  double total_weight() const { return total_weight_; }
  double degree(int node) const { return degree_[node]; }
  const std::vector<Neighbor>& neighbors(int node) const {
    return adjacency_[node];
  }
  // Weight of edge (u, v) or 0.
  double weight(int u, int v) const;

 private:
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> degree_;
  double total_weight_ = 0.0;
  int64_t num_edges_ = 0;
};

absl::StatusOr<SessionGraph> BuildGraph(const std::vector<Session>& sessions,
                                        int64_t n_articles);

struct ExposureReport {
  double share_both = 0.0;
  double share_treated_only = 0.0;
  double share_control_only = 0.0;
  int64_t session_count = 0;
};

absl::StatusOr<ExposureReport> ExposureShare(
    const std::vector<Session>& sessions, const Assignment& assignment);

inline constexpr char kExposureCsvHeader[] =
    "share_both,share_treated_only,share_control_only,session_count";

std::string ExposureCsv(const ExposureReport& report);

}  // namespace interference

#endif  // INTERFERENCE_CLICKSTREAM_H_
