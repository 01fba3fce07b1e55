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

#ifndef INTERFERENCE_PARTITION_H_
#define INTERFERENCE_PARTITION_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace interference {

// Maps every article index 0..n-1 to a cluster id 0..k-1. Cluster ids are
// contiguous and every cluster is non-empty.
class Partition {
 public:
  Partition() = default;

  // Validates that `cluster_of` uses contiguous, non-empty ids.
  static absl::StatusOr<Partition> Create(std::vector<int> cluster_of);

  // Relabels arbitrary non-negative labels to contiguous ids in order of
  // first appearance.
  static absl::StatusOr<Partition> FromLabels(std::span<const int> labels);

  static Partition Singletons(int64_t n);
  static Partition AllInOne(int64_t n);

  int64_t size() const { return static_cast<int64_t>(cluster_of_.size()); }
  int num_clusters() const { return static_cast<int>(members_.size()); }
  int cluster_of(int64_t article) const { return cluster_of_[article]; }
  const std::vector<int>& labels() const { return cluster_of_; }
  const std::vector<int>& members(int cluster) const {
    return members_[cluster];
  }
  int cluster_size(int cluster) const {
    return static_cast<int>(members_[cluster].size());
  }

  // True when every cluster of `this` lies inside one cluster of `coarser`.
  bool Refines(const Partition& coarser) const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.cluster_of_ == b.cluster_of_;
  }

 private:
  explicit Partition(std::vector<int> cluster_of);

  std::vector<int> cluster_of_;
  std::vector<std::vector<int>> members_;
};

// CSV `article_id,cluster_id`, one row per article in index order.
absl::Status WritePartitionCsv(const std::string& path,
                               const Partition& partition);
std::string PartitionCsv(const Partition& partition);
absl::StatusOr<Partition> ReadPartitionCsv(const std::string& path);

}  // namespace interference

#endif  // INTERFERENCE_PARTITION_H_
