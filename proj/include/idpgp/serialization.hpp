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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idpgp/data.hpp"
#include "idpgp/experiment.hpp"
#include "idpgp/gp.hpp"

namespace idpgp {

inline constexpr const char* kModelFormat = "idpgp-model";
inline constexpr int kModelFormatVersion = 1;

/// A fitted model together with what is needed to score raw events.
struct ModelBundle {
    TrainedModel model;
    std::vector<std::string> feature_names;
    /// Unset for models fitted directly on standardized matrices.
    std::optional<StandardizationStats> stats;
};

nlohmann::json to_json(const HyperParams& hp);
HyperParams hyperparams_from_json(const nlohmann::json& j);

nlohmann::json to_json(const StandardizationStats& stats);
StandardizationStats stats_from_json(const nlohmann::json& j);

/// Versioned document: hyperparameters, training inputs and targets, alpha,
/// feature names and optional preprocessing statistics.
nlohmann::json to_json(const ModelBundle& bundle);
/// Refactorizes the training covariance and checks the stored alpha against
/// it; a mismatch or unknown format/version throws Data.
ModelBundle model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const AggregateReport& report);
nlohmann::json to_json(const std::vector<RunResult>& runs,
                       const std::vector<std::string>& feature_names);
nlohmann::json to_json(const FeatureRanking& ranking);

}  // namespace idpgp
