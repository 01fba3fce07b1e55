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

#ifndef INTERFERENCE_CSV_H_
#define INTERFERENCE_CSV_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace interference {

// Always 17 significant digits. Output is byte-stable and round-trips
// exactly.
std::string FormatDouble(double value);

// Splits one CSV line on commas. Quoting is not supported; none of the
// formats handled here need it.
std::vector<std::string_view> SplitCsvLine(std::string_view line);

absl::StatusOr<double> ParseDouble(std::string_view field);
absl::StatusOr<int64_t> ParseInt(std::string_view field);

// Reads a whole file; a missing file is NotFound.
absl::StatusOr<std::string> ReadFile(const std::string& path);

// Writes `contents`, failing if the file exists and `overwrite` is false.
absl::Status WriteFile(const std::string& path, std::string_view contents,
                       bool overwrite = true);

}  // namespace interference

#endif  // INTERFERENCE_CSV_H_
