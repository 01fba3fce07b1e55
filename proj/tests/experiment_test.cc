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

#include "interference/experiment.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "interference/rng.h"
#include "test_util.h"

namespace interference {
namespace {

using ::interference::testing::MakeSystem;
using ::interference::testing::TwoArticleSystem;

Assignment Labels(std::vector<Label> labels) { return Assignment{labels}; }

constexpr Label T = Label::kTreatment;
constexpr Label C = Label::kControl;

TEST(AssignTest, ArticleLevelIsBalanced) {
  Rng rng = MakeStream(1, 0);
  absl::StatusOr<Assignment> a =
      Assign(RandomizationStrategy::ArticleLevel(), 4, rng);
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a->treated_count(), 2);

  Rng odd_rng = MakeStream(1, 1);
  EXPECT_EQ(Assign(RandomizationStrategy::ArticleLevel(), 7, odd_rng)
                ->treated_count(),
            3);
}

TEST(AssignTest, ClusterLevelLabelsAreConstantWithinClusters) {
  const Partition partition = *Partition::Create({0, 0, 1, 1});
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = MakeStream(seed, 0);
    absl::StatusOr<Assignment> a =
        Assign(RandomizationStrategy::ClusterLevel(partition), 4, rng);
    ASSERT_TRUE(a.ok());
    EXPECT_EQ(a->label_of[0], a->label_of[1]);
    EXPECT_EQ(a->label_of[2], a->label_of[3]);
    EXPECT_NE(a->label_of[0], a->label_of[2]);
  }
}

TEST(AssignTest, SeedsGiveDifferentBalancedAssignments) {
  Rng rng_a = MakeStream(1, 0);
  Rng rng_b = MakeStream(2, 0);
  absl::StatusOr<Assignment> a =
      Assign(RandomizationStrategy::ArticleLevel(), 10000, rng_a);
  absl::StatusOr<Assignment> b =
      Assign(RandomizationStrategy::ArticleLevel(), 10000, rng_b);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->treated_count(), 5000);
  EXPECT_EQ(b->treated_count(), 5000);
  EXPECT_NE(a->label_of, b->label_of);
}

TEST(AssignTest, RejectsDegenerateInputs) {
  Rng rng = MakeStream(1, 0);
  EXPECT_FALSE(Assign(RandomizationStrategy::ArticleLevel(), 1, rng).ok());
  EXPECT_FALSE(Assign(RandomizationStrategy::ClusterLevel(
                          Partition::AllInOne(5)),
                      5, rng)
                   .ok());
  EXPECT_FALSE(Assign(RandomizationStrategy::ClusterLevel(
                          Partition::Singletons(4)),
                      5, rng)
                   .ok());
}

TEST(RunExperimentTest, NullPolicyGivesZeroLift) {
  absl::StatusOr<DemandSystem> system = GenerateDemandSystem(
      GeneratorConfig{.n = 200, .within_share = 0.4}, 3);
  ASSERT_TRUE(system.ok());
  Rng rng = MakeStream(3, 0);
  const Assignment a =
      *Assign(RandomizationStrategy::ArticleLevel(), 200, rng);
  for (Metric metric : {Metric::kUnits, Metric::kRevenue}) {
    absl::StatusOr<Estimate> e = RunExperiment(*system, a, {1.0}, metric);
    ASSERT_TRUE(e.ok());
    EXPECT_EQ(e->lift, 0.0);
  }
}

TEST(RunExperimentTest, TwoArticleClosedForm) {
  const double expected = std::pow(0.9, -2.0) / std::pow(0.9, 0.5) - 1.0;
  absl::StatusOr<Estimate> e =
      RunExperiment(TwoArticleSystem(), Labels({T, C}), {0.9}, Metric::kUnits);
  ASSERT_TRUE(e.ok());
  EXPECT_NEAR(e->lift, expected, 1e-14);
  EXPECT_DOUBLE_EQ(e->treated_base, 1.0);
  EXPECT_DOUBLE_EQ(e->control_base, 1.0);
}

TEST(RunExperimentTest, SwappingLabelsAndInvertingMultiplier) {
  const DemandSystem system = TwoArticleSystem();
  const double lift =
      RunExperiment(system, Labels({T, C}), {0.9}, Metric::kUnits)->lift;
  const double swapped =
      RunExperiment(system, Labels({C, T}), {1.0 / 0.9}, Metric::kUnits)->lift;
  EXPECT_NEAR(swapped, 1.0 / (1.0 + lift) - 1.0, 1e-14);
}

TEST(RunExperimentTest, NoInterferenceMatchesOwnEffectOnly) {
  const DemandSystem system =
      MakeSystem({-2.0, -1.5, -3.0, -2.2}, {0.0, 0.0}, 0.0, {0, 0, 1, 1},
                 {1, 1, 1, 1}, {5, 6, 7, 8});
  const double m = 0.95;
  absl::StatusOr<Estimate> e =
      RunExperiment(system, Labels({T, C, T, C}), {m}, Metric::kUnits);
  ASSERT_TRUE(e.ok());
  const double treated_after = 5 * std::pow(m, -2.0) + 7 * std::pow(m, -3.0);
  EXPECT_NEAR(e->lift, treated_after / 12.0 - 1.0, 1e-13);
  EXPECT_DOUBLE_EQ(e->control_outcome, e->control_base);
}

TEST(RunExperimentTest, RejectsEmptyGroups) {
  EXPECT_FALSE(
      RunExperiment(TwoArticleSystem(), Labels({T, T}), {0.9}, Metric::kUnits)
          .ok());
  EXPECT_FALSE(
      RunExperiment(TwoArticleSystem(), Labels({T}), {0.9}, Metric::kUnits)
          .ok());
}

TEST(MonteCarloBiasTest, TwoArticleClosedForm) {
  const double estimate = std::pow(0.9, -2.5) - 1.0;
  const double gte = std::pow(0.9, -1.5) - 1.0;
  absl::StatusOr<BiasReport> r =
      MonteCarloBias(TwoArticleSystem(), RandomizationStrategy::ArticleLevel(),
                     {0.9}, Metric::kUnits, {.p = 50, .master_seed = 4});
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->mean_estimate, estimate, 1e-12);
  EXPECT_NEAR(r->gte, gte, 1e-12);
  EXPECT_NEAR(r->mean_bias, (estimate - gte) / gte, 1e-10);
  EXPECT_NEAR(r->sd_estimate, 0.0, 1e-12);
  EXPECT_EQ(r->p, 50);
  EXPECT_EQ(r->seed, 4u);
}

TEST(MonteCarloBiasTest, NoInterferenceIsUnbiased) {
  absl::StatusOr<DemandSystem> system = GenerateDemandSystem(
      GeneratorConfig{.n = 400, .within_share = 0.0}, 12);
  ASSERT_TRUE(system.ok());
  for (const RandomizationStrategy& strategy :
       {RandomizationStrategy::ArticleLevel(),
        RandomizationStrategy::ClusterLevel(system->partition())}) {
    absl::StatusOr<BiasReport> r = MonteCarloBias(
        *system, strategy, {0.95}, Metric::kRevenue, {.p = 300, .master_seed = 1});
    ASSERT_TRUE(r.ok());
    EXPECT_LT(std::abs(r->mean_bias), 3.0 * r->BiasStandardError())
        << strategy.name();
  }
}

TEST(MonteCarloBiasTest, SubstitutionBiasIsPositive) {
  absl::StatusOr<DemandSystem> system = GenerateDemandSystem(
      GeneratorConfig{.n = 400, .within_share = 0.3, .background_share = 0.1},
      12);
  ASSERT_TRUE(system.ok());
  absl::StatusOr<BiasReport> article =
      MonteCarloBias(*system, RandomizationStrategy::ArticleLevel(), {0.95},
                     Metric::kUnits, {.p = 200, .master_seed = 2});
  absl::StatusOr<BiasReport> cluster = MonteCarloBias(
      *system, RandomizationStrategy::ClusterLevel(system->partition()),
      {0.95}, Metric::kUnits, {.p = 200, .master_seed = 2});
  ASSERT_TRUE(article.ok() && cluster.ok());
  EXPECT_GT(article->mean_bias, 3.0 * article->BiasStandardError());
  // Background substitution survives cluster randomization.
  EXPECT_GT(cluster->mean_bias, 3.0 * cluster->BiasStandardError());
  EXPECT_LT(cluster->mean_bias, article->mean_bias);
}

TEST(MonteCarloBiasTest, QuantilesAreOrdered) {
  absl::StatusOr<DemandSystem> system = GenerateDemandSystem(
      GeneratorConfig{.n = 300, .within_share = 0.3}, 1);
  absl::StatusOr<BiasReport> r =
      MonteCarloBias(*system, RandomizationStrategy::ArticleLevel(), {0.95},
                     Metric::kRevenue, {.p = 100, .master_seed = 9});
  ASSERT_TRUE(r.ok());
  EXPECT_LE(r->q05, r->q50);
  EXPECT_LE(r->q50, r->q95);
}

TEST(MonteCarloBiasTest, WorkerCountDoesNotChangeBits) {
  absl::StatusOr<DemandSystem> system = GenerateDemandSystem(
      GeneratorConfig{.n = 500, .within_share = 0.4}, 8);
  ASSERT_TRUE(system.ok());
  std::set<std::string> rows;
  for (int workers : {1, 2, 8}) {
    absl::StatusOr<BiasReport> r = MonteCarloBias(
        *system, RandomizationStrategy::ArticleLevel(), {0.95},
        Metric::kRevenue, {.p = 64, .master_seed = 5, .workers = workers});
    ASSERT_TRUE(r.ok());
    rows.insert(BiasReportCsvRow(0.4, "article", *r));
  }
  EXPECT_EQ(rows.size(), 1u);
}

TEST(MonteCarloBiasTest, NegligibleEffectReportsAbsoluteBias) {
  absl::StatusOr<BiasReport> r =
      MonteCarloBias(TwoArticleSystem(), RandomizationStrategy::ArticleLevel(),
                     {1.0}, Metric::kUnits, {.p = 10, .master_seed = 1});
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r->relative);
  EXPECT_EQ(r->gte, 0.0);
  EXPECT_EQ(r->mean_bias, 0.0);
}

TEST(MonteCarloBiasTest, RejectsTooFewPermutations) {
  EXPECT_FALSE(MonteCarloBias(TwoArticleSystem(),
                              RandomizationStrategy::ArticleLevel(), {0.9},
                              Metric::kUnits, {.p = 1})
                   .ok());
}

TEST(NearestRankQuantileTest, Values) {
  const std::vector<double> sorted = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  EXPECT_EQ(NearestRankQuantile(sorted, 0.05), 1);
  EXPECT_EQ(NearestRankQuantile(sorted, 0.5), 5);
  EXPECT_EQ(NearestRankQuantile(sorted, 0.95), 10);
  EXPECT_EQ(NearestRankQuantile(sorted, 1.0), 10);
}

TEST(SweepTest, RowsAndHeader) {
  GeneratorConfig config{.n = 300};
  absl::StatusOr<std::vector<SweepRow>> rows = SweepSubstitution(
      config, {0.0, 0.2, 0.4},
      {SweepStrategy::kArticleLevel, SweepStrategy::kGroundTruthCluster},
      {0.95}, Metric::kRevenue, {.p = 100, .master_seed = 3});
  ASSERT_TRUE(rows.ok()) << rows.status();
  ASSERT_EQ(rows->size(), 6u);
  EXPECT_EQ((*rows)[0].phi, 0.0);
  EXPECT_EQ((*rows)[1].strategy, SweepStrategy::kGroundTruthCluster);
  for (int i = 0; i < 2; ++i) {
    const BiasReport& r = (*rows)[i].report;
    EXPECT_LT(std::abs(r.mean_bias), 3.0 * r.BiasStandardError());
    EXPECT_EQ(r.seed, 3u);
  }
  EXPECT_GT((*rows)[2].report.mean_bias, (*rows)[0].report.mean_bias);
  EXPECT_GT((*rows)[4].report.mean_bias, (*rows)[2].report.mean_bias);

  const std::string csv = SweepTableCsv(*rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kSweepCsvHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(SweepTest, StrategyNames) {
  EXPECT_EQ(*ParseSweepStrategy("article"), SweepStrategy::kArticleLevel);
  EXPECT_EQ(*ParseSweepStrategy("cluster"), SweepStrategy::kGroundTruthCluster);
  EXPECT_FALSE(ParseSweepStrategy("geo").ok());
}

TEST(CoverageTest, NullPolicyCentersOnZero) {
  absl::StatusOr<DemandSystem> system = GenerateDemandSystem(
      GeneratorConfig{.n = 300, .within_share = 0.3}, 4);
  ASSERT_TRUE(system.ok());
  absl::StatusOr<CoverageReport> r =
      CoverageAnalysis(*system, RandomizationStrategy::ArticleLevel(), {1.0},
                       Metric::kRevenue, {.p = 400, .seed = 6});
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->defined);
  EXPECT_EQ(r->gte, 0.0);
  EXPECT_LT(std::abs(r->mean_z), 3.0 / std::sqrt(400.0));
  EXPECT_GT(r->coverage_rate, 0.9);
}

TEST(CoverageTest, NoNoiseLeavesCoverageUndefined) {
  absl::StatusOr<CoverageReport> r = CoverageAnalysis(
      TwoArticleSystem(), RandomizationStrategy::ArticleLevel(), {0.9},
      Metric::kUnits, {.p = 10, .seed = 1, .noise_sigma = 0.0});
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r->defined);
  EXPECT_EQ(r->aa_sd, 0.0);
  EXPECT_TRUE(std::isnan(r->coverage_rate));
  const std::string csv = CoverageCsv("article", *r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCoverageCsvHeader);
}

}  // namespace
}  // namespace interference
