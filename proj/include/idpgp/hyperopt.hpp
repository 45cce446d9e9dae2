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
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "idpgp/kernels.hpp"

namespace idpgp {

struct Bound {
    double lower = 0.0;
    double upper = 1.0;
};

/// log10 bounds shared by every gamma_d; expands to a SearchSpace once the
/// feature count is known.
struct SpaceBounds {
    Bound log_nu{-3.0, 3.0};
    Bound log_gamma{-6.0, 2.0};
    Bound log_sigma_n{-3.0, 1.0};
};

/// Box in log10 space over (nu, gamma_1..gamma_D, sigma_n), in that order.
struct SearchSpace {
    std::vector<Bound> bounds;

    /// nu in [1e-3, 1e3], gamma_d in [1e-6, 1e2], sigma_n in [1e-3, 1e1].
    static SearchSpace defaults(Eigen::Index feature_dim);
    static SearchSpace make(Eigen::Index feature_dim, const SpaceBounds& bounds);

    std::size_t dim() const { return bounds.size(); }
    Eigen::Index feature_dim() const { return static_cast<Eigen::Index>(bounds.size()) - 2; }
    void validate() const;
    bool contains(const Eigen::VectorXd& theta_log) const;
    HyperParams to_hyperparams(const Eigen::VectorXd& theta_log) const;
    Eigen::VectorXd to_unit(const Eigen::VectorXd& theta_log) const;
    Eigen::VectorXd from_unit(const Eigen::VectorXd& u) const;
};

struct BOConfig {
    /// Unset means 2 * (D + 2).
    std::optional<std::size_t> initial_design_size;
    std::size_t iterations = 200;
    std::size_t candidate_pool_size = 2000;
    /// Share of the candidate pool drawn from the trust region around the
    /// incumbent; the rest is uniform over the whole space. 0 disables the
    /// trust region.
    double local_fraction = 0.8;
    /// Proposals after the initial design that use the uniform pool only,
    /// before the first trust region starts.
    std::size_t global_iterations = 100;
    std::uint64_t seed = 0;

    std::size_t resolved_initial_size(std::size_t space_dim) const {
        return initial_design_size.value_or(2 * space_dim);
    }
    void validate() const;
};

struct EvaluationRecord {
    Eigen::VectorXd theta_log;
    /// Log marginal likelihood, or -infinity when the evaluation failed.
    double objective = 0.0;
};

struct OptimizationResult {
    HyperParams best;
    Eigen::VectorXd best_theta_log;
    double best_objective = 0.0;
    std::vector<EvaluationRecord> history;
};

using Objective = std::function<double(const Eigen::VectorXd& theta_log)>;

/// Latin hypercube: each coordinate's projection hits `size` distinct strata.
std::vector<Eigen::VectorXd> initial_design(const SearchSpace& space, std::size_t size,
                                            std::uint64_t seed);

/// EI for maximization.
double expected_improvement(double mu, double sigma, double best);

/// Isotropic squared-exponential GP over the unit-cube image of the search
/// space, used to score candidates. Objective values are mapped through
/// -log(1 + best - y) and standardized; failed evaluations take the worst
/// finite value. Lengthscale and noise ratio are picked by a grid search on
/// the surrogate's own marginal likelihood.
class Surrogate {
public:
    Surrogate(const std::vector<EvaluationRecord>& history, const SearchSpace& space);

    /// Posterior of the latent surrogate (no noise) at a unit-cube point.
    void predict(const Eigen::MatrixXd& unit_points, Eigen::VectorXd& mean,
                 Eigen::VectorXd& stddev) const;
    /// Best transformed value, the incumbent for EI.
    double incumbent() const { return incumbent_; }
    double lengthscale() const { return lengthscale_; }
    double noise() const { return noise_; }

private:
    Eigen::MatrixXd points_;  // one unit-cube point per row
    Eigen::MatrixXd chol_;
    Eigen::VectorXd alpha_;
    double lengthscale_ = 1.0;
    double noise_ = 1e-6;
    double incumbent_ = 0.0;
};

/// Next point to evaluate: the expected-improvement maximizer over a candidate
/// pool, scored by a surrogate fitted to the records nearest the trust-region
/// centre. The first global_iterations proposals after the initial design use
/// the uniform pool only. The trust region is replayed from `history`; after it
/// collapses the following proposals are a fresh Latin hypercube design. With no finite
/// record yet a uniform random point is returned.
Eigen::VectorXd propose_next(const std::vector<EvaluationRecord>& history,
                             const SearchSpace& space, const BOConfig& config,
                             std::mt19937_64& rng);

/// Bayesian optimization of an arbitrary objective over `space`.
OptimizationResult maximize(const Objective& objective, const SearchSpace& space,
                            const BOConfig& config);

/// Type-II maximum likelihood: BO on the log marginal likelihood. Failed
/// factorizations score -infinity.
OptimizationResult optimize_hyperparameters(const FeatureMatrix& X, const Eigen::VectorXd& y,
                                            const SearchSpace& space, const BOConfig& config);

OptimizationResult random_search(const Objective& objective, const SearchSpace& space,
                                 std::size_t budget, std::uint64_t seed);
OptimizationResult random_search(const FeatureMatrix& X, const Eigen::VectorXd& y,
                                 const SearchSpace& space, std::size_t budget,
                                 std::uint64_t seed);

/// Objective used by optimize_hyperparameters and random_search. Holds
/// references to X, y and space, which must outlive it.
Objective lml_objective(const FeatureMatrix& X, const Eigen::VectorXd& y,
                        const SearchSpace& space);

/// CSV: iteration,log10_nu,log10_gamma_1..D,log10_sigma_n,objective
void write_trace_csv(std::ostream& out, const std::vector<EvaluationRecord>& history);

}  // namespace idpgp
