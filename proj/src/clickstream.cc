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

#include "interference/clickstream.h"

#include <algorithm>
#include <iostream>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "interference/csv.h"
#include "interference/rng.h"

namespace interference {

absl::Status ValidateSessionSynthesisConfig(
    const SessionSynthesisConfig& config) {
  if (config.n_sessions < 1) {
    return absl::InvalidArgumentError("n_sessions must be at least 1");
  }
  if (config.views_min < 1 || config.views_max < config.views_min) {
    return absl::InvalidArgumentError(
        absl::StrCat("views need 1 <= min <= max, got [", config.views_min,
                     ", ", config.views_max, "]"));
  }
  if (!(config.purity >= 0.0 && config.purity <= 1.0)) {
    return absl::InvalidArgumentError("purity must be in [0, 1]");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<Session>> GenerateSessions(
    const Partition& partition, const SessionSynthesisConfig& config,
    uint64_t seed) {
  if (partition.size() == 0) {
    return absl::InvalidArgumentError("cannot synthesize sessions: empty partition");
  }
  if (absl::Status s = ValidateSessionSynthesisConfig(config); !s.ok()) {
    return s;
  }
  Rng rng = MakeStream(seed, 0);
  const uint64_t n = static_cast<uint64_t>(partition.size());
  const uint64_t k = static_cast<uint64_t>(partition.num_clusters());
  std::vector<Session> sessions(config.n_sessions);
  for (int64_t s = 0; s < config.n_sessions; ++s) {
    const std::vector<int>& home = partition.members(
        static_cast<int>(UniformIndex(rng, k)));
    const int64_t views = UniformInt(rng, config.views_min, config.views_max);
    std::vector<int>& viewed = sessions[s].viewed;
    viewed.reserve(views);
    for (int64_t v = 0; v < views; ++v) {
      if (UniformDouble(rng) < config.purity) {
        viewed.push_back(home[UniformIndex(rng, home.size())]);
      } else {
        viewed.push_back(static_cast<int>(UniformIndex(rng, n)));
      }
    }
    std::sort(viewed.begin(), viewed.end());
    viewed.erase(std::unique(viewed.begin(), viewed.end()), viewed.end());
    sessions[s].id = absl::StrCat("s", s);
  }
  return sessions;
}

absl::StatusOr<std::vector<Session>> ParseSessions(const std::string& text,
                                                   int64_t n_articles) {
  std::vector<Session> sessions;
  std::unordered_map<std::string, size_t> index_of;
  size_t pos = 0;
  int64_t line_no = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "session_id,article_id") {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_no, ": expected header session_id,article_id"));
      }
      saw_header = true;
      continue;
    }
    const std::vector<std::string_view> fields = SplitCsvLine(line);
    if (fields.size() != 2 || fields[0].empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": malformed row '", std::string(line), "'"));
    }
    absl::StatusOr<int64_t> article = ParseInt(fields[1]);
    if (!article.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_no, ": ", article.status().message()));
    }
    if (*article < 0 || *article >= n_articles) {
      return absl::OutOfRangeError(
          absl::StrCat("line ", line_no, ": unknown article id ", *article,
                       " (expected 0..", n_articles - 1, ")"));
    }
    auto [it, inserted] =
        index_of.try_emplace(std::string(fields[0]), sessions.size());
    if (inserted) sessions.push_back(Session{it->first, {}});
    sessions[it->second].viewed.push_back(static_cast<int>(*article));
  }
  if (sessions.empty()) {
    std::clog << "warning: clickstream contains no sessions\n";
  }
  for (Session& session : sessions) {
    std::sort(session.viewed.begin(), session.viewed.end());
    session.viewed.erase(
        std::unique(session.viewed.begin(), session.viewed.end()),
        session.viewed.end());
  }
  return sessions;
}

absl::StatusOr<std::vector<Session>> ReadSessions(const std::string& path,
                                                  int64_t n_articles) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<std::vector<Session>> sessions =
      ParseSessions(*text, n_articles);
  if (!sessions.ok()) {
    return absl::Status(sessions.status().code(),
                        absl::StrCat(path, ": ", sessions.status().message()));
  }
  return sessions;
}

std::string SessionsCsv(const std::vector<Session>& sessions) {
  std::string out = "session_id,article_id\n";
  for (const Session& session : sessions) {
    for (int article : session.viewed) {
      absl::StrAppend(&out, session.id, ",", article, "\n");
    }
  }
  return out;
}

absl::StatusOr<SessionGraph> SessionGraph::FromEdges(
    int64_t n, const std::vector<std::tuple<int, int, double>>& edges) {
  std::vector<std::tuple<int, int, double>> normalized;
  normalized.reserve(edges.size());
  for (const auto& [u, v, w] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      return absl::OutOfRangeError(
          absl::StrCat("edge (", u, ", ", v, ") outside [0, ", n, ")"));
    }
    if (u == v) {
      return absl::InvalidArgumentError(
          absl::StrCat("self-loop on node ", u));
    }
    if (!(w > 0.0)) {
      return absl::InvalidArgumentError("edge weights must be positive");
    }
    normalized.emplace_back(std::min(u, v), std::max(u, v), w);
  }
  std::sort(normalized.begin(), normalized.end());
  SessionGraph graph;
  graph.adjacency_.resize(n);
  graph.degree_.assign(n, 0.0);
  for (size_t i = 0; i < normalized.size();) {
    const auto [u, v, first] = normalized[i];
    double w = 0.0;
    for (; i < normalized.size() && std::get<0>(normalized[i]) == u &&
           std::get<1>(normalized[i]) == v;
         ++i) {
      w += std::get<2>(normalized[i]);
    }
    graph.adjacency_[u].push_back({v, w});
    graph.adjacency_[v].push_back({u, w});
    graph.degree_[u] += w;
    graph.degree_[v] += w;
    graph.total_weight_ += w;
    ++graph.num_edges_;
  }
  for (auto& list : graph.adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) {
                return a.node < b.node;
              });
  }
  return graph;
}

double SessionGraph::weight(int u, int v) const {
  const auto& list = adjacency_[u];
  auto it = std::lower_bound(
      list.begin(), list.end(), v,
      [](const Neighbor& a, int node) { return a.node < node; });
  return it != list.end() && it->node == v ? it->weight : 0.0;
}

absl::StatusOr<SessionGraph> BuildGraph(const std::vector<Session>& sessions,
                                        int64_t n_articles) {
  if (sessions.empty()) {
    return absl::InvalidArgumentError("cannot build a graph from no sessions");
  }
  std::unordered_map<uint64_t, int64_t> counts;
  std::vector<int> viewed;
  for (const Session& session : sessions) {
    viewed = session.viewed;
    std::sort(viewed.begin(), viewed.end());
    viewed.erase(std::unique(viewed.begin(), viewed.end()), viewed.end());
    for (int article : viewed) {
      if (article < 0 || article >= n_articles) {
        return absl::OutOfRangeError(
            absl::StrCat("session ", session.id, " views unknown article ",
                         article));
      }
    }
    for (size_t a = 0; a < viewed.size(); ++a) {
      for (size_t b = a + 1; b < viewed.size(); ++b) {
        ++counts[static_cast<uint64_t>(viewed[a]) * n_articles + viewed[b]];
      }
    }
  }
  std::vector<std::tuple<int, int, double>> edges;
  edges.reserve(counts.size());
  for (const auto& [key, count] : counts) {
    edges.emplace_back(static_cast<int>(key / n_articles),
                       static_cast<int>(key % n_articles),
                       static_cast<double>(count));
  }
  return SessionGraph::FromEdges(n_articles, edges);
}

absl::StatusOr<ExposureReport> ExposureShare(
    const std::vector<Session>& sessions, const Assignment& assignment) {
  if (sessions.empty()) {
    return absl::InvalidArgumentError("exposure needs at least one session");
  }
  int64_t both = 0;
  int64_t treated_only = 0;
  int64_t control_only = 0;
  for (const Session& session : sessions) {
    if (session.viewed.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("session ", session.id, " has no views"));
    }
    bool saw_treated = false;
    bool saw_control = false;
    for (int article : session.viewed) {
      if (article < 0 || article >= assignment.size()) {
        return absl::OutOfRangeError(
            absl::StrCat("session ", session.id, " views article ", article,
                         " outside the assignment"));
      }
      (assignment.treated(article) ? saw_treated : saw_control) = true;
    }
    if (saw_treated && saw_control) {
      ++both;
    } else if (saw_treated) {
      ++treated_only;
    } else {
      ++control_only;
    }
  }
  const double total = static_cast<double>(sessions.size());
  ExposureReport report;
  report.session_count = static_cast<int64_t>(sessions.size());
  report.share_both = both / total;
  report.share_treated_only = treated_only / total;
  report.share_control_only = control_only / total;
  return report;
}

std::string ExposureCsv(const ExposureReport& r) {
  return absl::StrCat(kExposureCsvHeader, "\n", FormatDouble(r.share_both),
                      ",", FormatDouble(r.share_treated_only), ",",
                      FormatDouble(r.share_control_only), ",",
                      r.session_count, "\n");
}

}  // namespace interference
