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

#ifndef INTERFERENCE_TESTS_TEST_UTIL_H_
#define INTERFERENCE_TESTS_TEST_UTIL_H_

#include <string>
#include <vector>

#include "Eigen/Core"
#include "gtest/gtest.h"
#include "interference/demand.h"
#include "interference/partition.h"

namespace interference::testing {

inline Eigen::VectorXd Vec(std::vector<double> values) {
  return Eigen::Map<Eigen::VectorXd>(values.data(),
                                     static_cast<Eigen::Index>(values.size()));
}

// Hand-built system; fails the calling test on invalid input.
inline DemandSystem MakeSystem(std::vector<double> own,
                               std::vector<double> within, double background,
                               std::vector<int> labels,
                               std::vector<double> prices,
                               std::vector<double> quantities) {
  absl::StatusOr<Partition> partition = Partition::Create(std::move(labels));
  EXPECT_TRUE(partition.ok()) << partition.status();
  absl::StatusOr<DemandSystem> system = DemandSystem::Create(
      Vec(std::move(prices)), Vec(std::move(quantities)),
      ElasticityStructure{Vec(std::move(own)), Vec(std::move(within)),
                          background, *partition});
  EXPECT_TRUE(system.ok()) << system.status();
  return *std::move(system);
}

// The symmetric two-article, one-cluster system used by several closed
// forms: own = (-2, -2), beta = 0.5, q0 = (1, 1), p0 = (1, 1).
inline DemandSystem TwoArticleSystem() {
  return MakeSystem({-2.0, -2.0}, {0.5}, 0.0, {0, 0}, {1.0, 1.0}, {1.0, 1.0});
}

inline std::string TempPath(const std::string& name) {
  return ::testing::TempDir() + "/" + name;
}

}  // namespace interference::testing

#endif  // INTERFERENCE_TESTS_TEST_UTIL_H_
