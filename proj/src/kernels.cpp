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
#include "idpgp/kernels.hpp"

#include <cmath>
#include <string>

#include "idpgp/error.hpp"

namespace idpgp {

namespace {

void require_same_length(const FeatureVector& a, const FeatureVector& b) {
    if (a.size() != b.size()) {
        fail(ErrorCode::Dimension, "feature vectors have lengths " + std::to_string(a.size()) +
                                       " and " + std::to_string(b.size()));
    }
}

void require_gamma_length(const HyperParams& hp, Eigen::Index d) {
    if (hp.gamma.size() != d) {
        fail(ErrorCode::Dimension, "gamma has " + std::to_string(hp.gamma.size()) +
                                       " entries, inputs have " + std::to_string(d));
    }
}

// Plain loops so that kernel_matrix, cross_kernel_vector and the scalar
// kernels agree bit for bit.
double dot_unchecked(const double* a, const double* b, Eigen::Index d) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        s += a[k] * b[k];
    }
    return s;
}

double ard_unchecked(const double* a, const double* b, const double* gamma, Eigen::Index d,
                     double nu) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        const double diff = a[k] - b[k];
        s += gamma[k] * diff * diff;
    }
    return nu * std::exp(-s);
}

}  // namespace

void HyperParams::validate(Eigen::Index expected_dim) const {
    if (!(std::isfinite(nu) && nu > 0.0)) {
        fail(ErrorCode::InvalidArgument, "nu must be positive and finite");
    }
    if (!(std::isfinite(sigma_n) && sigma_n > 0.0)) {
        fail(ErrorCode::InvalidArgument, "sigma_n must be positive and finite");
    }
    require_gamma_length(*this, expected_dim);
    for (Eigen::Index k = 0; k < gamma.size(); ++k) {
        if (!(std::isfinite(gamma[k]) && gamma[k] >= 0.0)) {
            fail(ErrorCode::InvalidArgument,
                 "gamma[" + std::to_string(k) + "] must be non-negative and finite");
        }
    }
}

double linear_kernel(const FeatureVector& a, const FeatureVector& b) {
    require_same_length(a, b);
    return dot_unchecked(a.data(), b.data(), a.size());
}

double ard_kernel(const FeatureVector& a, const FeatureVector& b, const HyperParams& hp) {
    require_same_length(a, b);
    require_gamma_length(hp, a.size());
    return ard_unchecked(a.data(), b.data(), hp.gamma.data(), a.size(), hp.nu);
}

double composite_kernel(const FeatureVector& a, const FeatureVector& b, const HyperParams& hp,
                        bool same_index) {
    double k = linear_kernel(a, b) + ard_kernel(a, b, hp);
    if (same_index) {
        k += hp.sigma_n * hp.sigma_n;
    }
    return k;
}

Eigen::MatrixXd kernel_matrix(const FeatureMatrix& X, const HyperParams& hp, bool with_noise) {
    const Eigen::Index n = X.rows();
    const Eigen::Index d = X.cols();
    if (n == 0) {
        fail(ErrorCode::InvalidArgument, "kernel_matrix needs at least one input");
    }
    require_gamma_length(hp, d);

    // Row-major copy so each point is contiguous.
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = X;
    const double noise = with_noise ? hp.sigma_n * hp.sigma_n : 0.0;

    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double* xi = rows.row(i).data();
        K(i, i) = dot_unchecked(xi, xi, d) + hp.nu + noise;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double* xj = rows.row(j).data();
            const double v = dot_unchecked(xi, xj, d) + ard_unchecked(xi, xj, hp.gamma.data(), d, hp.nu);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

Eigen::VectorXd cross_kernel_vector(const FeatureVector& x_star, const FeatureMatrix& X,
                                    const HyperParams& hp) {
    if (x_star.size() != X.cols()) {
        fail(ErrorCode::Dimension, "test point has " + std::to_string(x_star.size()) +
                                       " features, training inputs have " +
                                       std::to_string(X.cols()));
    }
    require_gamma_length(hp, X.cols());
    Eigen::VectorXd k(X.rows());
    for (Eigen::Index n = 0; n < X.rows(); ++n) {
        const FeatureVector xn = X.row(n).transpose();
        k[n] = dot_unchecked(x_star.data(), xn.data(), x_star.size()) + ard_unchecked(x_star.data(), xn.data(), hp.gamma.data(),
                                              x_star.size(), hp.nu);
    }
    return k;
}

}  // namespace idpgp
