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
#include "idpgp/serialization.hpp"

#include <cmath>

#include "idpgp/error.hpp"

namespace idpgp {

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from_json(const json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        rows.push_back(vector_to_json(m.row(i).transpose()));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index cols) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
    Eigen::Index i = 0;
    for (const auto& row : j) {
        const Eigen::VectorXd v = vector_from_json(row);
        if (v.size() != cols) {
            fail(ErrorCode::Data, "model x_train row " + std::to_string(i) + " has " +
                                      std::to_string(v.size()) + " values, expected " +
                                      std::to_string(cols));
        }
        m.row(i++) = v.transpose();
    }
    return m;
}

json summary_to_json(const MetricSummary& s) {
    return {{"mean", s.mean}, {"std", s.std}};
}

json count_to_json(const ValidationReport::Count& c) {
    return {{"label", c.label},
            {"expected_events", c.expected_events},
            {"observed_events", c.observed_events},
            {"expected_idps", c.expected_idps},
            {"observed_idps", c.observed_idps},
            {"match", c.matches()}};
}

}  // namespace

json to_json(const HyperParams& hp) {
    return {{"nu", hp.nu}, {"gamma", vector_to_json(hp.gamma)}, {"sigma_n", hp.sigma_n}};
}

HyperParams hyperparams_from_json(const json& j) {
    HyperParams hp;
    hp.nu = j.at("nu").get<double>();
    hp.gamma = vector_from_json(j.at("gamma"));
    hp.sigma_n = j.at("sigma_n").get<double>();
    hp.validate();
    return hp;
}

json to_json(const StandardizationStats& s) {
    return {{"feature_names", s.feature_names},   {"mean", vector_to_json(s.mean)},
            {"std", vector_to_json(s.std)},       {"log_features", s.log_features},
            {"dropped_features", s.dropped_features}, {"target_mean", s.target_mean}};
}

StandardizationStats stats_from_json(const json& j) {
    StandardizationStats s;
    s.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    s.mean = vector_from_json(j.at("mean"));
    s.std = vector_from_json(j.at("std"));
    s.log_features = j.at("log_features").get<std::vector<std::string>>();
    s.dropped_features = j.at("dropped_features").get<std::vector<std::string>>();
    s.target_mean = j.at("target_mean").get<double>();
    const auto d = static_cast<Eigen::Index>(s.feature_names.size());
    if (s.mean.size() != d || s.std.size() != d) {
        fail(ErrorCode::Data, "standardization statistics have inconsistent lengths");
    }
    if (!(s.std.array() > 0.0).all()) {
        fail(ErrorCode::Data, "standardization statistics contain a non-positive std");
    }
    return s;
}

json to_json(const ModelBundle& b) {
    const TrainedModel& m = b.model;
    json j = {{"format", kModelFormat},
              {"version", kModelFormatVersion},
              {"hyperparameters", to_json(m.hyperparams())},
              {"feature_names", b.feature_names},
              {"x_train", matrix_to_json(m.x_train())},
              {"y_train", vector_to_json(m.y_train())},
              {"alpha", vector_to_json(m.alpha())},
              {"jitter", m.jitter_used()}};
    j["preprocessing"] = b.stats ? to_json(*b.stats) : json(nullptr);
    return j;
}

ModelBundle model_from_json(const json& j) {
    try {
        if (j.at("format").get<std::string>() != kModelFormat) {
            fail(ErrorCode::Data, "not an idpgp model document");
        }
        const int version = j.at("version").get<int>();
        if (version != kModelFormatVersion) {
            fail(ErrorCode::Data, "unsupported model version " + std::to_string(version));
        }
        const HyperParams hp = hyperparams_from_json(j.at("hyperparameters"));
        ModelBundle b;
        b.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        if (static_cast<Eigen::Index>(b.feature_names.size()) != hp.dim()) {
            fail(ErrorCode::Data, "feature_names and gamma differ in length");
        }
        const Eigen::MatrixXd X = matrix_from_json(j.at("x_train"), hp.dim());
        const Eigen::VectorXd y = vector_from_json(j.at("y_train"));
        const Eigen::VectorXd alpha = vector_from_json(j.at("alpha"));
        FitOptions options;
        if (const double jitter = j.value("jitter", 0.0); jitter > 0.0) {
            options.jitter = jitter;
        }
        b.model = fit(X, y, hp, options);
        if (alpha.size() != b.model.alpha().size() ||
            !((alpha - b.model.alpha()).array().abs() <=
              1e-6 * (1.0 + alpha.array().abs())).all()) {
            fail(ErrorCode::Data, "stored alpha does not match the refitted model");
        }
        if (j.contains("preprocessing") && !j.at("preprocessing").is_null()) {
            b.stats = stats_from_json(j.at("preprocessing"));
            if (b.stats->feature_names != b.feature_names) {
                fail(ErrorCode::Data, "preprocessing features differ from model features");
            }
        }
        return b;
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, std::string("malformed model document: ") + e.what());
    }
}

json to_json(const ValidationReport& r) {
    json rows = json::array();
    for (const auto& c : r.rows) {
        rows.push_back(count_to_json(c));
    }
    json totals = json::array();
    for (const auto& c : r.totals) {
        totals.push_back(count_to_json(c));
    }
    return {{"n_events", r.n_events},
            {"flood_events", r.flood_events},
            {"storm_events", r.storm_events},
            {"africa_events", r.africa_events},
            {"asia_events", r.asia_events},
            {"event_totals_match", r.event_totals_match()},
            {"idp_totals_match", r.idp_totals_match()},
            {"row_mismatches", r.row_mismatches()},
            {"unknown_countries", r.unknown_countries},
            {"totals", totals},
            {"rows", rows}};
}

json to_json(const AggregateReport& r) {
    return {{"subset", r.subset},   {"n_events", r.n_events},
            {"runs", r.runs},       {"n_train", r.n_train},
            {"n_test", r.n_test},   {"r2", summary_to_json(r.r2)},
            {"me", summary_to_json(r.me)}, {"rmse", summary_to_json(r.rmse)}};
}

json to_json(const std::vector<RunResult>& runs, const std::vector<std::string>& feature_names) {
    json out = json::array();
    for (const auto& r : runs) {
        out.push_back({{"run", r.run_index},
                       {"r2", r.metrics.r2},
                       {"me", r.metrics.me},
                       {"rmse", r.metrics.rmse},
                       {"lml", r.lml},
                       {"n_train", r.n_train},
                       {"n_test", r.n_test},
                       {"feature_names", feature_names},
                       {"hyperparameters", to_json(r.fitted)}});
    }
    return out;
}

json to_json(const FeatureRanking& ranking) {
    json out = json::array();
    for (const auto& e : ranking.entries) {
        out.push_back(
            {{"feature", e.feature}, {"gamma_median", e.gamma_median}, {"mean_rank", e.mean_rank}});
    }
    return out;
}

}  // namespace idpgp
