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
#include "idpgp/gp.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>

#include "idpgp/error.hpp"

namespace idpgp {

namespace {

constexpr double kNegativeVarianceTolerance = 1e-10;

void check_inputs(const FeatureMatrix& X, const Eigen::VectorXd& y, const HyperParams& hp) {
    if (X.rows() == 0) {
        fail(ErrorCode::InvalidArgument, "training set is empty");
    }
    if (y.size() != X.rows()) {
        fail(ErrorCode::Dimension, "X has " + std::to_string(X.rows()) + " rows but y has " +
                                       std::to_string(y.size()) + " entries");
    }
    if (!X.allFinite() || !y.allFinite()) {
        fail(ErrorCode::Data, "training data contains non-finite values");
    }
    hp.validate(X.cols());
}

bool usable_factor(const Eigen::LLT<Eigen::MatrixXd>& llt) {
    if (llt.info() != Eigen::Success) {
        return false;
    }
    const auto diag = llt.matrixLLT().diagonal();
    return diag.allFinite() && (diag.array() > 0.0).all();
}

struct Factorization {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;
};

Factorization factorize(const FeatureMatrix& X, const HyperParams& hp, const FitOptions& options) {
    Eigen::MatrixXd K = kernel_matrix(X, hp, true);
    Factorization f;
    f.llt.compute(K);
    if (usable_factor(f.llt)) {
        return f;
    }
    if (options.jitter > 0.0) {
        K.diagonal().array() += options.jitter;
        f.llt.compute(K);
        f.jitter = options.jitter;
        if (usable_factor(f.llt)) {
            return f;
        }
    }
    fail(ErrorCode::IllConditioned, "Cholesky factorization of the training covariance failed");
}

}  // namespace

TrainedModel fit(const FeatureMatrix& X, const Eigen::VectorXd& y, const HyperParams& hp,
                 const FitOptions& options) {
    check_inputs(X, y, hp);
    Factorization f = factorize(X, hp, options);

    TrainedModel model;
    model.x_train_ = X;
    model.y_train_ = y;
    model.hp_ = hp;
    model.chol_ = f.llt.matrixL();
    model.alpha_ = f.llt.solve(y);
    model.jitter_used_ = f.jitter;
    return model;
}

Prediction predict(const TrainedModel& model, const FeatureVector& x_star) {
    const HyperParams& hp = model.hyperparams();
    const Eigen::VectorXd k_star = cross_kernel_vector(x_star, model.x_train(), hp);

    Prediction p;
    p.mean = k_star.dot(model.alpha());

    const Eigen::VectorXd v =
        model.chol_factor().triangularView<Eigen::Lower>().solve(k_star);
    const double prior = composite_kernel(x_star, x_star, hp, false) + hp.sigma_n * hp.sigma_n;
    double variance = prior - v.squaredNorm();
    if (variance < 0.0) {
        if (variance < -kNegativeVarianceTolerance) {
            fail(ErrorCode::IllConditioned,
                 "predictive variance is negative (" + std::to_string(variance) + ")");
        }
        variance = 0.0;
    }
    p.variance = variance;
    return p;
}

double log_marginal_likelihood(const FeatureMatrix& X, const Eigen::VectorXd& y,
                               const HyperParams& hp, const FitOptions& options) {
    check_inputs(X, y, hp);
    const Factorization f = factorize(X, hp, options);

    // L^-1 y gives the data-fit term as a squared norm.
    const Eigen::VectorXd w = f.llt.matrixL().solve(y);
    const double log_det = 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();
    const double n = static_cast<double>(X.rows());
    return -0.5 * w.squaredNorm() - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

}  // namespace idpgp
