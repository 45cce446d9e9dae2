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

namespace idpgp {

using FeatureVector = Eigen::VectorXd;
// One training point per row.
using FeatureMatrix = Eigen::MatrixXd;

/// Hyperparameters of the linear + ARD composite covariance.
///
/// The covariance between two inputs is
///   k(a, b) = a'b + nu * exp(-sum_d gamma_d (a_d - b_d)^2) + sigma_n^2 [a is b].
/// A zero gamma_d removes dimension d from the ARD term entirely.
struct HyperParams {
    double nu = 1.0;
    Eigen::VectorXd gamma;
    double sigma_n = 1.0;

    Eigen::Index dim() const { return gamma.size(); }

    /// Throws InvalidArgument unless nu > 0, sigma_n > 0 and gamma >= 0 (all
    /// finite); Dimension if gamma does not have `expected_dim` entries.
    void validate(Eigen::Index expected_dim) const;
    void validate() const { validate(gamma.size()); }
};

double linear_kernel(const FeatureVector& a, const FeatureVector& b);
double ard_kernel(const FeatureVector& a, const FeatureVector& b, const HyperParams& hp);

/// `same_index` adds the sigma_n^2 noise term; it should be true only for the
/// diagonal of a training covariance.
double composite_kernel(const FeatureVector& a, const FeatureVector& b, const HyperParams& hp,
                        bool same_index);

/// N x N covariance over the rows of X. Exactly symmetric: the upper triangle
/// is computed and mirrored.
Eigen::MatrixXd kernel_matrix(const FeatureMatrix& X, const HyperParams& hp, bool with_noise);

/// Covariances between x_star and every row of X. Never includes noise.
Eigen::VectorXd cross_kernel_vector(const FeatureVector& x_star, const FeatureMatrix& X,
                                    const HyperParams& hp);

}  // namespace idpgp
