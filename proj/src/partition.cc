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

#include "interference/partition.h"

#include <string>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "interference/csv.h"

namespace interference {

Partition::Partition(std::vector<int> cluster_of)
    : cluster_of_(std::move(cluster_of)) {
  int k = 0;
  for (int c : cluster_of_) k = std::max(k, c + 1);
  members_.resize(k);
  for (size_t i = 0; i < cluster_of_.size(); ++i) {
    members_[cluster_of_[i]].push_back(static_cast<int>(i));
  }
}

absl::StatusOr<Partition> Partition::Create(std::vector<int> cluster_of) {
  const int64_t n = static_cast<int64_t>(cluster_of.size());
  std::vector<char> seen(n, 0);
  int max_id = -1;
  for (int64_t i = 0; i < n; ++i) {
    const int c = cluster_of[i];
    if (c < 0 || c >= n) {
      return absl::InvalidArgumentError(
          absl::StrCat("article ", i, " has cluster id ", c,
                       " outside [0, ", n, ")"));
    }
    seen[c] = 1;
    max_id = std::max(max_id, c);
  }
  for (int c = 0; c <= max_id; ++c) {
    if (!seen[c]) {
      return absl::InvalidArgumentError(
          absl::StrCat("cluster ids are not contiguous: cluster ", c,
                       " is empty"));
    }
  }
  return Partition(std::move(cluster_of));
}

absl::StatusOr<Partition> Partition::FromLabels(std::span<const int> labels) {
  std::unordered_map<int, int> relabel;
  std::vector<int> cluster_of;
  cluster_of.reserve(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("negative label at article ", i));
    }
    auto [it, inserted] =
        relabel.try_emplace(labels[i], static_cast<int>(relabel.size()));
    cluster_of.push_back(it->second);
  }
  return Partition(std::move(cluster_of));
}

Partition Partition::Singletons(int64_t n) {
  std::vector<int> cluster_of(n);
  for (int64_t i = 0; i < n; ++i) cluster_of[i] = static_cast<int>(i);
  return Partition(std::move(cluster_of));
}

Partition Partition::AllInOne(int64_t n) {
  return Partition(std::vector<int>(n, 0));
}

bool Partition::Refines(const Partition& coarser) const {
  if (coarser.size() != size()) return false;
  for (const auto& cluster : members_) {
    for (int article : cluster) {
      if (coarser.cluster_of(article) != coarser.cluster_of(cluster.front())) {
        return false;
      }
    }
  }
  return true;
}

std::string PartitionCsv(const Partition& partition) {
  std::string out = "article_id,cluster_id\n";
  for (int64_t i = 0; i < partition.size(); ++i) {
    absl::StrAppend(&out, i, ",", partition.cluster_of(i), "\n");
  }
  return out;
}

absl::Status WritePartitionCsv(const std::string& path,
                               const Partition& partition) {
  return WriteFile(path, PartitionCsv(partition));
}

absl::StatusOr<Partition> ReadPartitionCsv(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  std::vector<int> cluster_of;
  std::vector<char> assigned;
  size_t pos = 0;
  int64_t line_no = 0;
  while (pos < text->size()) {
    size_t end = text->find('\n', pos);
    if (end == std::string::npos) end = text->size();
    std::string_view line(text->data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "article_id,cluster_id") {
        return absl::InvalidArgumentError(absl::StrCat(
            path, ":1: expected header article_id,cluster_id"));
      }
      continue;
    }
    const auto fields = SplitCsvLine(line);
    absl::StatusOr<int64_t> article =
        fields.size() == 2 ? ParseInt(fields[0])
                           : absl::InvalidArgumentError("expected 2 fields");
    absl::StatusOr<int64_t> cluster =
        fields.size() == 2 ? ParseInt(fields[1])
                           : absl::InvalidArgumentError("expected 2 fields");
    if (!article.ok() || !cluster.ok() || *article < 0 || *cluster < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", line_no, ": malformed row '", std::string(line), "'"));
    }
    if (*article >= static_cast<int64_t>(cluster_of.size())) {
      cluster_of.resize(*article + 1, -1);
      assigned.resize(*article + 1, 0);
    }
    if (assigned[*article]) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ":", line_no, ": article ", *article, " listed twice"));
    }
    assigned[*article] = 1;
    cluster_of[*article] = static_cast<int>(*cluster);
  }
  for (size_t i = 0; i < assigned.size(); ++i) {
    if (!assigned[i]) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": article ", i, " has no cluster"));
    }
  }
  return Partition::Create(std::move(cluster_of));
}

}  // namespace interference
