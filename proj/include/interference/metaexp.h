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

#ifndef INTERFERENCE_METAEXP_H_
#define INTERFERENCE_METAEXP_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace interference {

// One pair of experiments on the same treatment, one cluster-randomized
// and one article-randomized.
struct MetaExperimentInput {
  std::string label;
  double est_clustered = 0.0;
  // Confidence half-width of est_clustered, same units.
  double ci_halfwidth = 0.0;
  double est_article = 0.0;
};

struct MetaComparison {
  // (est_article - est_clustered) / est_clustered; NaN if est_clustered = 0.
  double relative_bias = 0.0;
  // (est_article - est_clustered) / (ci_halfwidth / halfwidth_divisor).
  double sigma_distance = 0.0;
  bool relative_defined = true;
};

// 1.96 reads the half-width as a 95% normal interval.
inline constexpr double kDefaultHalfwidthDivisor = 1.96;

absl::StatusOr<MetaComparison> Compare(
    const MetaExperimentInput& input,
    double halfwidth_divisor = kDefaultHalfwidthDivisor);

inline constexpr char kMetaInputCsvHeader[] =
    "label,est_clustered,ci_halfwidth,est_article";
inline constexpr char kMetaOutputCsvHeader[] =
    "label,est_clustered,ci_halfwidth,est_article,relative_bias,"
    "sigma_distance";

absl::StatusOr<std::vector<MetaExperimentInput>> ParseMetaInputs(
    const std::string& text);
absl::StatusOr<std::vector<MetaExperimentInput>> ReadMetaInputs(
    const std::string& path);

// Compares every row and renders the output CSV.
absl::StatusOr<std::string> MetaComparisonCsv(
    const std::vector<MetaExperimentInput>& inputs,
    double halfwidth_divisor = kDefaultHalfwidthDivisor);

}  // namespace interference

#endif  // INTERFERENCE_METAEXP_H_
