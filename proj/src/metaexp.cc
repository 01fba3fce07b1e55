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

#include "interference/metaexp.h"

#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "interference/csv.h"

namespace interference {

absl::StatusOr<MetaComparison> Compare(const MetaExperimentInput& input,
                                       double halfwidth_divisor) {
  if (!std::isfinite(input.est_clustered) || !std::isfinite(input.est_article)) {
    return absl::InvalidArgumentError("estimates must be finite");
  }
  if (!(input.ci_halfwidth > 0.0) || !std::isfinite(input.ci_halfwidth)) {
    return absl::InvalidArgumentError(
        absl::StrCat(input.label, ": ci_halfwidth must be positive"));
  }
  if (!(halfwidth_divisor > 0.0) || !std::isfinite(halfwidth_divisor)) {
    return absl::InvalidArgumentError("halfwidth divisor must be positive");
  }
  const double difference = input.est_article - input.est_clustered;
  MetaComparison out;
  out.sigma_distance = difference / (input.ci_halfwidth / halfwidth_divisor);
  if (input.est_clustered == 0.0) {
    out.relative_defined = false;
    out.relative_bias = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.relative_bias = difference / input.est_clustered;
  }
  return out;
}

absl::StatusOr<std::vector<MetaExperimentInput>> ParseMetaInputs(
    const std::string& text) {
  std::vector<MetaExperimentInput> inputs;
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
      if (line != kMetaInputCsvHeader) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_no, ": expected header ", kMetaInputCsvHeader));
      }
      saw_header = true;
      continue;
    }
    const auto fields = SplitCsvLine(line);
    if (fields.size() != 4) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_no, ": expected 4 fields, got ", fields.size()));
    }
    absl::StatusOr<double> clustered = ParseDouble(fields[1]);
    absl::StatusOr<double> halfwidth = ParseDouble(fields[2]);
    absl::StatusOr<double> article = ParseDouble(fields[3]);
    for (const absl::Status& s :
         {clustered.status(), halfwidth.status(), article.status()}) {
      if (!s.ok()) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_no, ": ", s.message()));
      }
    }
    inputs.push_back(MetaExperimentInput{std::string(fields[0]), *clustered,
                                         *halfwidth, *article});
  }
  return inputs;
}

absl::StatusOr<std::vector<MetaExperimentInput>> ReadMetaInputs(
    const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<std::vector<MetaExperimentInput>> inputs =
      ParseMetaInputs(*text);
  if (!inputs.ok()) {
    return absl::Status(inputs.status().code(),
                        absl::StrCat(path, ": ", inputs.status().message()));
  }
  return inputs;
}

absl::StatusOr<std::string> MetaComparisonCsv(
    const std::vector<MetaExperimentInput>& inputs, double halfwidth_divisor) {
  std::string out = absl::StrCat(kMetaOutputCsvHeader, "\n");
  for (const MetaExperimentInput& input : inputs) {
    absl::StatusOr<MetaComparison> comparison =
        Compare(input, halfwidth_divisor);
    if (!comparison.ok()) return comparison.status();
    absl::StrAppend(&out, input.label, ",", FormatDouble(input.est_clustered),
                    ",", FormatDouble(input.ci_halfwidth), ",",
                    FormatDouble(input.est_article), ",",
                    FormatDouble(comparison->relative_bias), ",",
                    FormatDouble(comparison->sigma_distance), "\n");
  }
  return out;
}

}  // namespace interference
