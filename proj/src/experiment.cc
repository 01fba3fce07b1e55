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
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "interference/csv.h"
#include "interference/parallel.h"

namespace interference {

int64_t Assignment::treated_count() const {
  return std::count(label_of.begin(), label_of.end(), Label::kTreatment);
}

RandomizationStrategy RandomizationStrategy::ArticleLevel() {
  return RandomizationStrategy(Kind::kArticleLevel, Partition());
}

RandomizationStrategy RandomizationStrategy::ClusterLevel(Partition partition) {
  return RandomizationStrategy(Kind::kClusterLevel, std::move(partition));
}

std::string_view RandomizationStrategy::name() const {
  return kind_ == Kind::kArticleLevel ? "article" : "cluster";
}

absl::StatusOr<Assignment> Assign(const RandomizationStrategy& strategy,
                                  int64_t n, Rng& rng) {
  if (n < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 2 articles to randomize, got ", n));
  }
  Assignment assignment;
  assignment.label_of.assign(n, Label::kControl);
  if (strategy.kind() == RandomizationStrategy::Kind::kArticleLevel) {
    std::vector<int64_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Shuffle(std::span<int64_t>(order), rng);
    for (int64_t i = 0; i < n / 2; ++i) {
      assignment.label_of[order[i]] = Label::kTreatment;
    }
    return assignment;
  }
  const Partition& partition = strategy.partition();
  if (partition.size() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("cluster partition covers ", partition.size(),
                     " articles, expected ", n));
  }
  const int k = partition.num_clusters();
  if (k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 2 clusters to randomize, got ", k));
  }
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  Shuffle(std::span<int>(order), rng);
  for (int i = 0; i < k / 2; ++i) {
    for (int article : partition.members(order[i])) {
      assignment.label_of[article] = Label::kTreatment;
    }
  }
  return assignment;
}

namespace {

absl::Status CheckAssignment(const DemandSystem& system,
                             const Assignment& assignment) {
  if (assignment.size() != system.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("assignment covers ", assignment.size(),
                     " articles, system has ", system.size()));
  }
  const int64_t treated = assignment.treated_count();
  if (treated == 0 || treated == assignment.size()) {
    return absl::InvalidArgumentError(
        "both treatment and control groups must be non-empty");
  }
  return absl::OkStatus();
}

// Assumes a checked assignment. `noise` may be null.
Estimate EstimateUnchecked(const DemandSystem& system,
                           const Assignment& assignment, double multiplier,
                           Metric metric, const Eigen::VectorXd* noise) {
  const int64_t n = system.size();
  Eigen::VectorXd multipliers(n);
  for (int64_t i = 0; i < n; ++i) {
    multipliers[i] = assignment.treated(i) ? multiplier : 1.0;
  }
  const Eigen::VectorXd q = DemandAtUnchecked(system, multipliers);
  const Eigen::VectorXd& price = system.base_prices();
  const Eigen::VectorXd& q0 = system.base_quantities();
  Estimate e;
  for (int64_t i = 0; i < n; ++i) {
    double observed = metric == Metric::kUnits
                          ? q[i]
                          : multipliers[i] * price[i] * q[i];
    if (noise != nullptr) observed *= (*noise)[i];
    const double base = metric == Metric::kUnits ? q0[i] : price[i] * q0[i];
    if (assignment.treated(i)) {
      e.treated_outcome += observed;
      e.treated_base += base;
    } else {
      e.control_outcome += observed;
      e.control_base += base;
    }
  }
  e.lift = (e.treated_outcome / e.treated_base) /
               (e.control_outcome / e.control_base) -
           1.0;
  return e;
}

double SampleSd(const std::vector<double>& values, double mean) {
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double Mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Lognormal with unit mean.
Eigen::VectorXd DrawNoise(int64_t n, double sigma, Rng& rng) {
  Eigen::VectorXd noise(n);
  for (int64_t i = 0; i < n; ++i) {
    noise[i] = std::exp(sigma * StandardNormal(rng) - 0.5 * sigma * sigma);
  }
  return noise;
}

absl::Status FirstError(const std::vector<absl::Status>& statuses) {
  for (const absl::Status& s : statuses) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Estimate> RunExperiment(const DemandSystem& system,
                                       const Assignment& assignment,
                                       const PricePolicy& policy,
                                       Metric metric) {
  if (absl::Status s = ValidatePolicy(policy); !s.ok()) return s;
  if (absl::Status s = CheckAssignment(system, assignment); !s.ok()) return s;
  return EstimateUnchecked(system, assignment, policy.treated_multiplier,
                           metric, nullptr);
}

absl::StatusOr<Estimate> RunNoisyExperiment(const DemandSystem& system,
                                            const Assignment& assignment,
                                            const PricePolicy& policy,
                                            Metric metric,
                                            const Eigen::VectorXd& noise) {
  if (absl::Status s = ValidatePolicy(policy); !s.ok()) return s;
  if (absl::Status s = CheckAssignment(system, assignment); !s.ok()) return s;
  if (noise.size() != system.size() || !(noise.array() > 0.0).all()) {
    return absl::InvalidArgumentError(
        "noise must hold one positive factor per article");
  }
  return EstimateUnchecked(system, assignment, policy.treated_multiplier,
                           metric, &noise);
}

double BiasReport::BiasStandardError() const {
  const double se = sd_estimate / std::sqrt(static_cast<double>(p));
  return relative ? se / std::abs(gte) : se;
}

double NearestRankQuantile(const std::vector<double>& sorted, double prob) {
  const double n = static_cast<double>(sorted.size());
  const size_t rank = static_cast<size_t>(
      std::clamp(std::ceil(prob * n), 1.0, n));
  return sorted[rank - 1];
}

absl::StatusOr<BiasReport> MonteCarloBias(const DemandSystem& system,
                                          const RandomizationStrategy& strategy,
                                          const PricePolicy& policy,
                                          Metric metric,
                                          const MonteCarloOptions& options) {
  if (options.p < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 2 permutations, got ", options.p));
  }
  absl::StatusOr<double> gte = GlobalTreatmentEffect(system, policy, metric);
  if (!gte.ok()) return gte.status();

  std::vector<double> estimates(options.p);
  std::vector<absl::Status> statuses(options.p);
  ParallelFor(options.p, options.workers, [&](int64_t k) {
    Rng rng = MakeStream(options.master_seed, k);
    absl::StatusOr<Assignment> assignment =
        Assign(strategy, system.size(), rng);
    if (!assignment.ok()) {
      statuses[k] = assignment.status();
      return;
    }
    if (absl::Status s = CheckAssignment(system, *assignment); !s.ok()) {
      statuses[k] = s;
      return;
    }
    estimates[k] = EstimateUnchecked(system, *assignment,
                                     policy.treated_multiplier, metric, nullptr)
                       .lift;
  });
  if (absl::Status s = FirstError(statuses); !s.ok()) return s;

  BiasReport report;
  report.gte = *gte;
  report.p = options.p;
  report.seed = options.master_seed;
  report.mean_estimate = Mean(estimates);
  report.sd_estimate = SampleSd(estimates, report.mean_estimate);
  report.relative = std::abs(*gte) >= kNegligibleEffect;
  const double scale = report.relative ? std::abs(*gte) : 1.0;
  report.mean_bias = (report.mean_estimate - *gte) / scale;
  report.relative_sd = report.sd_estimate / scale;
  std::vector<double> sorted = estimates;
  std::sort(sorted.begin(), sorted.end());
  report.q05 = NearestRankQuantile(sorted, 0.05);
  report.q50 = NearestRankQuantile(sorted, 0.50);
  report.q95 = NearestRankQuantile(sorted, 0.95);
  return report;
}

std::string_view SweepStrategyName(SweepStrategy strategy) {
  return strategy == SweepStrategy::kArticleLevel ? "article" : "cluster";
}

absl::StatusOr<SweepStrategy> ParseSweepStrategy(std::string_view name) {
  if (name == "article") return SweepStrategy::kArticleLevel;
  if (name == "cluster") return SweepStrategy::kGroundTruthCluster;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown strategy '", std::string(name), "' (expected article or cluster)"));
}

namespace {

// Assignment streams of a sweep are derived from the generator seed so the
// two never share a stream.
constexpr uint64_t kSweepAssignmentStream = 0x5157'ee70ULL;

}  // namespace

absl::StatusOr<std::vector<SweepRow>> SweepSubstitution(
    const GeneratorConfig& config_template, const std::vector<double>& phis,
    const std::vector<SweepStrategy>& strategies, const PricePolicy& policy,
    Metric metric, const MonteCarloOptions& options) {
  for (double phi : phis) {
    if (!(phi >= 0.0 && phi < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("phi values must lie in [0, 1), got ", phi));
    }
  }
  MonteCarloOptions mc = options;
  mc.master_seed = StreamSeed(options.master_seed, kSweepAssignmentStream);
  std::vector<SweepRow> rows;
  for (double phi : phis) {
    GeneratorConfig config = config_template;
    config.within_share = phi;
    absl::StatusOr<DemandSystem> system =
        GenerateDemandSystem(config, options.master_seed);
    if (!system.ok()) {
      return absl::Status(system.status().code(),
                          absl::StrCat("phi = ", phi, ": ",
                                       system.status().message()));
    }
    for (SweepStrategy strategy : strategies) {
      const RandomizationStrategy randomization =
          strategy == SweepStrategy::kArticleLevel
              ? RandomizationStrategy::ArticleLevel()
              : RandomizationStrategy::ClusterLevel(system->partition());
      absl::StatusOr<BiasReport> report =
          MonteCarloBias(*system, randomization, policy, metric, mc);
      if (!report.ok()) return report.status();
      report->seed = options.master_seed;
      rows.push_back(SweepRow{phi, strategy, *report});
    }
  }
  return rows;
}

std::string BiasReportCsvRow(double phi, std::string_view strategy,
                             const BiasReport& r) {
  return absl::StrCat(FormatDouble(phi), ",", std::string(strategy), ",",
                      FormatDouble(r.gte), ",", FormatDouble(r.mean_estimate),
                      ",", FormatDouble(r.mean_bias), ",",
                      FormatDouble(r.sd_estimate), ",",
                      FormatDouble(r.relative_sd), ",", FormatDouble(r.q05),
                      ",", FormatDouble(r.q50), ",", FormatDouble(r.q95), ",",
                      r.p, ",", r.seed, "\n");
}

std::string SweepTableCsv(const std::vector<SweepRow>& rows) {
  std::string out = absl::StrCat(kSweepCsvHeader, "\n");
  for (const SweepRow& row : rows) {
    out += BiasReportCsvRow(row.phi, SweepStrategyName(row.strategy),
                            row.report);
  }
  return out;
}

absl::StatusOr<CoverageReport> CoverageAnalysis(
    const DemandSystem& system, const RandomizationStrategy& strategy,
    const PricePolicy& policy, Metric metric, const CoverageOptions& options) {
  if (options.p < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 2 permutations, got ", options.p));
  }
  if (!(options.noise_sigma >= 0.0) || !std::isfinite(options.noise_sigma)) {
    return absl::InvalidArgumentError("noise_sigma must be non-negative");
  }
  absl::StatusOr<double> gte = GlobalTreatmentEffect(system, policy, metric);
  if (!gte.ok()) return gte.status();

  const int64_t n = system.size();
  std::vector<double> null_estimates(options.p);
  std::vector<double> estimates(options.p);
  std::vector<absl::Status> statuses(options.p);
  ParallelFor(options.p, options.workers, [&](int64_t k) {
    Rng rng = MakeStream(options.seed, k);
    absl::StatusOr<Assignment> assignment = Assign(strategy, n, rng);
    if (!assignment.ok()) {
      statuses[k] = assignment.status();
      return;
    }
    if (absl::Status s = CheckAssignment(system, *assignment); !s.ok()) {
      statuses[k] = s;
      return;
    }
    const Eigen::VectorXd null_noise = DrawNoise(n, options.noise_sigma, rng);
    const Eigen::VectorXd noise = DrawNoise(n, options.noise_sigma, rng);
    null_estimates[k] =
        EstimateUnchecked(system, *assignment, 1.0, metric, &null_noise).lift;
    estimates[k] = EstimateUnchecked(system, *assignment,
                                     policy.treated_multiplier, metric, &noise)
                       .lift;
  });
  if (absl::Status s = FirstError(statuses); !s.ok()) return s;

  CoverageReport report;
  report.gte = *gte;
  report.p = options.p;
  report.seed = options.seed;
  report.aa_sd = SampleSd(null_estimates, Mean(null_estimates));
  if (!(report.aa_sd > 0.0)) {
    report.defined = false;
    report.coverage_rate = std::numeric_limits<double>::quiet_NaN();
    report.mean_z = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  int64_t covered = 0;
  double z_sum = 0.0;
  // Observation noise is multiplicative in the lift factor, so the A/A
  // spread applies to (1 + estimate) rather than to the lift itself.
  for (double estimate : estimates) {
    const double z = (estimate - *gte) / (report.aa_sd * (1.0 + estimate));
    if (std::abs(z) <= options.z) ++covered;
    z_sum += z;
  }
  report.coverage_rate =
      static_cast<double>(covered) / static_cast<double>(options.p);
  report.mean_z = z_sum / static_cast<double>(options.p);
  return report;
}

std::string CoverageCsv(std::string_view strategy,
                        const CoverageReport& r) {
  return absl::StrCat(kCoverageCsvHeader, "\n", std::string(strategy), ",",
                      FormatDouble(r.gte), ",", FormatDouble(r.aa_sd), ",",
                      FormatDouble(r.coverage_rate), ",",
                      FormatDouble(r.mean_z), ",", r.p, ",", r.seed, "\n");
}

}  // namespace interference
