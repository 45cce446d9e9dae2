/*
 * Copyright 2026 The idpgp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "idpgp/data.hpp"
#include "idpgp/hyperopt.hpp"
#include "idpgp/kernels.hpp"

namespace idpgp {

/// r2 is the squared Pearson correlation; me is mean(pred - true).
struct Metrics {
    double r2 = 0.0;
    double me = 0.0;
    double rmse = 0.0;
};

/// Throws Data when y_true is constant (r2 undefined). A constant prediction
/// has no linear association with the truth and scores r2 = 0.
Metrics compute_metrics(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

struct ExperimentConfig {
    SubsetFilter filter;
    std::size_t runs = 100;
    double train_fraction = 0.75;
    std::uint64_t base_seed = 0;
    /// The seed field is ignored; run r optimizes with base_seed + r.
    BOConfig bo;
    SpaceBounds bounds;
    /// Runs executed concurrently. Results do not depend on it.
    std::size_t workers = 1;

    void validate() const;
};

struct RunResult {
    std::size_t run_index = 0;
    Metrics metrics;
    /// gamma is aligned with ExperimentResult::feature_names; a feature that
    /// was constant on this run's training fold gets gamma 0.
    HyperParams fitted;
    double lml = 0.0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
};

struct MetricSummary {
    double mean = 0.0;
    /// Population standard deviation over runs.
    double std = 0.0;
};

struct AggregateReport {
    std::string subset;
    std::size_t n_events = 0;
    std::size_t runs = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    MetricSummary r2;
    MetricSummary me;
    MetricSummary rmse;
};

struct FeatureRanking {
    struct Entry {
        std::string feature;
        double gamma_median = 0.0;
        double mean_rank = 0.0;
    };
    /// Most relevant first.
    std::vector<Entry> entries;
};

struct ExperimentResult {
    AggregateReport report;
    std::vector<RunResult> runs;
    FeatureRanking ranking;
    std::vector<std::string> feature_names;
    /// Events dropped for missing feature values before splitting.
    std::vector<std::string> dropped_events;
};

/// Repeated random-split evaluation. Run r splits with seed base_seed + r,
/// standardizes on the training fold, runs Type-II ML by BO, fits and scores
/// the test fold in log space.
ExperimentResult run_experiment(const EventTable& table, const ExperimentConfig& config);

/// Ranks features by gamma within each fit (rank 1 = largest, ties by input
/// order), then orders by mean rank with input order breaking ties. The
/// reported gamma is the per-feature median across fits.
FeatureRanking rank_features(const std::vector<HyperParams>& fitted,
                             const std::vector<std::string>& feature_names);

/// Standalone SVG horizontal bar chart; bar length is proportional to the
/// median gamma, most relevant feature on top.
std::string render_ranking_chart(const FeatureRanking& ranking, const std::string& title = "");

void write_report_csv(std::ostream& out, const AggregateReport& report);
void write_runs_csv(std::ostream& out, const std::vector<RunResult>& runs,
                    const std::vector<std::string>& feature_names);
/// feature,gamma_median,mean_rank
void write_ranking_csv(std::ostream& out, const FeatureRanking& ranking);

}  // namespace idpgp
