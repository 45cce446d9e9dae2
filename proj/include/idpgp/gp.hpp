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

#include <Eigen/Core>

#include "idpgp/kernels.hpp"

namespace idpgp {

struct FitOptions {
    // Added to the diagonal only when the first Cholesky attempt fails.
    double jitter = 1e-10;
};

/// Exact GP posterior for a fixed training set and hyperparameters.
///
/// Immutable once built; predictions only read from it.
class TrainedModel {
public:
    const FeatureMatrix& x_train() const { return x_train_; }
    const Eigen::VectorXd& y_train() const { return y_train_; }
    const HyperParams& hyperparams() const { return hp_; }
    /// Lower factor L with L L' = K + sigma_n^2 I (+ jitter if it was needed).
    const Eigen::MatrixXd& chol_factor() const { return chol_; }
    /// Weights alpha = (K + sigma_n^2 I)^-1 y.
    const Eigen::VectorXd& alpha() const { return alpha_; }
    /// Diagonal jitter that was added, 0 when the plain factorization succeeded.
    double jitter_used() const { return jitter_used_; }

    Eigen::Index size() const { return x_train_.rows(); }
    Eigen::Index dim() const { return x_train_.cols(); }

private:
    friend TrainedModel fit(const FeatureMatrix&, const Eigen::VectorXd&, const HyperParams&,
                            const FitOptions&);

    FeatureMatrix x_train_;
    Eigen::VectorXd y_train_;
    HyperParams hp_;
    Eigen::MatrixXd chol_;
    Eigen::VectorXd alpha_;
    double jitter_used_ = 0.0;
};

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
};

TrainedModel fit(const FeatureMatrix& X, const Eigen::VectorXd& y, const HyperParams& hp,
                 const FitOptions& options = {});

/// Posterior of a noisy observation at x_star: the variance includes sigma_n^2.
Prediction predict(const TrainedModel& model, const FeatureVector& x_star);

double log_marginal_likelihood(const FeatureMatrix& X, const Eigen::VectorXd& y,
                               const HyperParams& hp, const FitOptions& options = {});

}  // namespace idpgp
