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
#include "idpgp/hyperopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

#include <Eigen/Cholesky>

#include "idpgp/error.hpp"
#include "idpgp/format.hpp"
#include "idpgp/gp.hpp"

namespace idpgp {

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

// Grid for the surrogate's own two hyperparameters. Lengthscales are in units
// of sqrt(dim) so the grid spans the same relative range in any dimension.
constexpr double kLengthscaleGrid[] = {0.05, 0.1, 0.2, 0.3, 0.45, 0.7, 1.0, 1.5};
constexpr double kNoiseGrid[] = {1e-6, 1e-4, 1e-2, 1e-1};

std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      stream};
    return std::mt19937_64(seq);
}

double evaluate(const Objective& objective, const Eigen::VectorXd& theta) {
    const double v = objective(theta);
    return std::isfinite(v) ? v : kMinusInf;
}

OptimizationResult select_best(std::vector<EvaluationRecord> history, const SearchSpace& space) {
    std::size_t best = history.size();
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (!std::isfinite(history[i].objective)) {
            continue;
        }
        if (best == history.size() || history[i].objective > history[best].objective) {
            best = i;
        }
    }
    if (best == history.size()) {
        fail(ErrorCode::OptimizationFailed,
             "all " + std::to_string(history.size()) + " objective evaluations failed");
    }
    OptimizationResult result;
    result.best_theta_log = history[best].theta_log;
    result.best = space.to_hyperparams(result.best_theta_log);
    result.best_objective = history[best].objective;
    result.history = std::move(history);
    return result;
}

Eigen::VectorXd uniform_unit_point(std::size_t dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd u(static_cast<Eigen::Index>(dim));
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        u[k] = unif(rng);
    }
    return u;
}

std::vector<Eigen::VectorXd> latin_hypercube(const SearchSpace& space, std::size_t size,
                                             std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Eigen::Index dim = static_cast<Eigen::Index>(space.dim());
    Eigen::MatrixXd unit(static_cast<Eigen::Index>(size), dim);
    std::vector<std::size_t> strata(size);
    for (Eigen::Index k = 0; k < dim; ++k) {
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        std::shuffle(strata.begin(), strata.end(), rng);
        for (std::size_t i = 0; i < size; ++i) {
            unit(static_cast<Eigen::Index>(i), k) =
                (static_cast<double>(strata[i]) + unif(rng)) / static_cast<double>(size);
        }
    }
    std::vector<Eigen::VectorXd> points;
    points.reserve(size);
    for (Eigen::Index i = 0; i < unit.rows(); ++i) {
        points.push_back(space.from_unit(unit.row(i).transpose()));
    }
    return points;
}

// The surrogate is fitted to at most this many records, those closest to the
// trust-region centre, which keeps each proposal cheap and the model local.
constexpr std::size_t kSurrogatePoints = 120;

std::vector<EvaluationRecord> nearest_records(const std::vector<EvaluationRecord>& history,
                                              const Eigen::VectorXd& centre,
                                              const SearchSpace& space, std::size_t limit) {
    if (history.size() <= limit) {
        return history;
    }
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(history.size());
    for (std::size_t i = 0; i < history.size(); ++i) {
        dist.emplace_back((space.to_unit(history[i].theta_log) - centre).squaredNorm(), i);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(limit), dist.end());
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < limit; ++k) {
        keep.push_back(dist[k].second);
    }
    std::sort(keep.begin(), keep.end());
    std::vector<EvaluationRecord> subset;
    subset.reserve(limit);
    for (const std::size_t i : keep) {
        subset.push_back(history[i]);
    }
    return subset;
}

// Trust-region state, replayed from the history so proposals stay a pure
// function of (history, config, rng). The side length in the unit cube doubles
// after kSuccessTol consecutive improvements and halves after a run of misses.
// When it collapses the search restarts: a fresh Latin hypercube design is
// evaluated and a new region grows around the best point found since.
struct TrustRegion {
    static constexpr double kInitial = 0.8;
    static constexpr double kMax = 1.6;
    static constexpr double kMin = 1.0 / 64.0;
    static constexpr int kSuccessTol = 3;

    double length = kInitial;
    std::size_t restarts = 0;
    std::size_t segment_start = 0;
    std::size_t incumbent = 0;  // best finite record of the current segment
    bool has_incumbent = false;

    // `warmup` extends the first segment's design phase by that many
    // globally chosen proposals.
    static TrustRegion replay(const std::vector<EvaluationRecord>& history, std::size_t init,
                              std::size_t warmup, std::size_t dim) {
        const int failure_tol = std::max(4, static_cast<int>(dim) / 2);
        TrustRegion tr;
        int successes = 0;
        int failures = 0;
        for (std::size_t i = 0; i < history.size(); ++i) {
            const double v = history[i].objective;
            const double best =
                tr.has_incumbent ? history[tr.incumbent].objective : kMinusInf;
            const bool improved =
                std::isfinite(v) && (!tr.has_incumbent || v > best + 1e-3 * std::abs(best));
            if (std::isfinite(v) && (!tr.has_incumbent || v > best)) {
                tr.incumbent = i;
                tr.has_incumbent = true;
            }
            if (i < tr.segment_start + init + (tr.restarts == 0 ? warmup : 0)) {
                continue;  // design points only seed the incumbent
            }
            if (improved) {
                ++successes;
                failures = 0;
            } else {
                ++failures;
                successes = 0;
            }
            if (successes == kSuccessTol) {
                tr.length = std::min(2.0 * tr.length, kMax);
                successes = 0;
            } else if (failures == failure_tol) {
                tr.length /= 2.0;
                failures = 0;
                if (tr.length < kMin) {
                    tr.length = kInitial;
                    ++tr.restarts;
                    tr.segment_start = i + 1;
                    tr.has_incumbent = false;
                }
            }
        }
        return tr;
    }
};

// Candidates drawn uniformly from the trust region around `centre`.
void fill_local_candidates(const Eigen::VectorXd& centre, double length, Eigen::Index first,
                           Eigen::MatrixXd& candidates, std::mt19937_64& rng) {
    const Eigen::VectorXd lo = (centre.array() - 0.5 * length).max(0.0);
    const Eigen::VectorXd hi = (centre.array() + 0.5 * length).min(1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Eigen::Index i = first; i < candidates.rows(); ++i) {
        for (Eigen::Index k = 0; k < candidates.cols(); ++k) {
            candidates(i, k) = lo[k] + (hi[k] - lo[k]) * unif(rng);
        }
    }
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd d2(a.rows(), b.rows());
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            d2(i, j) = (a.row(i) - b.row(j)).squaredNorm();
        }
    }
    return d2;
}

}  // namespace

SearchSpace SearchSpace::defaults(Eigen::Index feature_dim) {
    return make(feature_dim, SpaceBounds{});
}

SearchSpace SearchSpace::make(Eigen::Index feature_dim, const SpaceBounds& b) {
    if (feature_dim < 1) {
        fail(ErrorCode::InvalidArgument, "search space needs at least one feature");
    }
    SearchSpace space;
    space.bounds.reserve(static_cast<std::size_t>(feature_dim) + 2);
    space.bounds.push_back(b.log_nu);
    for (Eigen::Index d = 0; d < feature_dim; ++d) {
        space.bounds.push_back(b.log_gamma);
    }
    space.bounds.push_back(b.log_sigma_n);
    space.validate();
    return space;
}

void SearchSpace::validate() const {
    if (bounds.size() < 3) {
        fail(ErrorCode::InvalidArgument, "search space must cover nu, at least one gamma and sigma_n");
    }
    for (std::size_t k = 0; k < bounds.size(); ++k) {
        const Bound& b = bounds[k];
        if (!(std::isfinite(b.lower) && std::isfinite(b.upper) && b.lower < b.upper)) {
            fail(ErrorCode::InvalidArgument,
                 "search bound " + std::to_string(k) + " must satisfy lower < upper");
        }
    }
}

bool SearchSpace::contains(const Eigen::VectorXd& theta_log) const {
    if (static_cast<std::size_t>(theta_log.size()) != bounds.size()) {
        return false;
    }
    for (std::size_t k = 0; k < bounds.size(); ++k) {
        const double v = theta_log[static_cast<Eigen::Index>(k)];
        if (!(v >= bounds[k].lower && v <= bounds[k].upper)) {
            return false;
        }
    }
    return true;
}

HyperParams SearchSpace::to_hyperparams(const Eigen::VectorXd& theta_log) const {
    if (static_cast<std::size_t>(theta_log.size()) != bounds.size()) {
        fail(ErrorCode::Dimension, "theta has " + std::to_string(theta_log.size()) +
                                       " entries, search space has " +
                                       std::to_string(bounds.size()));
    }
    const Eigen::Index last = theta_log.size() - 1;
    HyperParams hp;
    hp.nu = std::pow(10.0, theta_log[0]);
    hp.gamma = theta_log.segment(1, last - 1).unaryExpr([](double v) { return std::pow(10.0, v); });
    hp.sigma_n = std::pow(10.0, theta_log[last]);
    return hp;
}

Eigen::VectorXd SearchSpace::to_unit(const Eigen::VectorXd& theta_log) const {
    Eigen::VectorXd u(theta_log.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        const Bound& b = bounds[static_cast<std::size_t>(k)];
        u[k] = (theta_log[k] - b.lower) / (b.upper - b.lower);
    }
    return u;
}

Eigen::VectorXd SearchSpace::from_unit(const Eigen::VectorXd& u) const {
    Eigen::VectorXd theta(u.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        const Bound& b = bounds[static_cast<std::size_t>(k)];
        theta[k] = std::clamp(b.lower + u[k] * (b.upper - b.lower), b.lower, b.upper);
    }
    return theta;
}

void BOConfig::validate() const {
    if (initial_design_size && *initial_design_size < 1) {
        fail(ErrorCode::InvalidArgument, "initial design size must be at least 1");
    }
    if (candidate_pool_size < 1) {
        fail(ErrorCode::InvalidArgument, "candidate pool size must be at least 1");
    }
    if (!(local_fraction >= 0.0 && local_fraction <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "local candidate fraction must lie in [0, 1]");
    }
}

std::vector<Eigen::VectorXd> initial_design(const SearchSpace& space, std::size_t size,
                                            std::uint64_t seed) {
    space.validate();
    if (size < 1) {
        fail(ErrorCode::InvalidArgument, "initial design size must be at least 1");
    }
    std::mt19937_64 rng = make_rng(seed, 0);
    return latin_hypercube(space, size, rng);
}

double expected_improvement(double mu, double sigma, double best) {
    const double gain = mu - best;
    if (!(sigma > 0.0)) {
        return std::max(0.0, gain);
    }
    const double z = gain / sigma;
    const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    return std::max(0.0, gain * cdf + sigma * pdf);
}

Surrogate::Surrogate(const std::vector<EvaluationRecord>& history, const SearchSpace& space) {
    const Eigen::Index n = static_cast<Eigen::Index>(history.size());
    double best = kMinusInf;
    for (const auto& r : history) {
        if (std::isfinite(r.objective)) {
            best = std::max(best, r.objective);
        }
    }
    if (n == 0 || !std::isfinite(best)) {
        fail(ErrorCode::InvalidArgument, "surrogate needs at least one finite evaluation");
    }

    points_.resize(n, static_cast<Eigen::Index>(space.dim()));
    Eigen::VectorXd t(n);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = history[static_cast<std::size_t>(i)];
        points_.row(i) = space.to_unit(r.theta_log).transpose();
        if (std::isfinite(r.objective)) {
            t[i] = -std::log1p(best - r.objective);
            worst = std::min(worst, t[i]);
        } else {
            t[i] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::isnan(t[i])) {
            t[i] = worst;
        }
    }
    const double mean = t.mean();
    const double sd = std::sqrt((t.array() - mean).square().mean());
    const Eigen::VectorXd z = (t.array() - mean) / (sd > 0.0 ? sd : 1.0);
    incumbent_ = z.maxCoeff();

    const Eigen::MatrixXd d2 = squared_distances(points_, points_);
    const double scale = std::sqrt(static_cast<double>(space.dim()));
    double best_lml = kMinusInf;
    for (const double l : kLengthscaleGrid) {
        const double ls = l * scale;
        Eigen::MatrixXd base = (-d2.array() / (2.0 * ls * ls)).exp().matrix();
        for (const double noise : kNoiseGrid) {
            Eigen::MatrixXd K = base;
            K.diagonal().array() += noise;
            Eigen::LLT<Eigen::MatrixXd> llt(K);
            if (llt.info() != Eigen::Success) {
                continue;
            }
            const Eigen::VectorXd w = llt.matrixL().solve(z);
            const double lml =
                -0.5 * w.squaredNorm() - llt.matrixLLT().diagonal().array().log().sum();
            if (std::isfinite(lml) && lml > best_lml) {
                best_lml = lml;
                lengthscale_ = ls;
                noise_ = noise;
                chol_ = llt.matrixL();
                alpha_ = llt.solve(z);
            }
        }
    }
    if (!std::isfinite(best_lml)) {
        fail(ErrorCode::IllConditioned, "surrogate covariance could not be factorized");
    }
}

void Surrogate::predict(const Eigen::MatrixXd& unit_points, Eigen::VectorXd& mean,
                        Eigen::VectorXd& stddev) const {
    const Eigen::MatrixXd cross =
        (-squared_distances(points_, unit_points).array() / (2.0 * lengthscale_ * lengthscale_))
            .exp()
            .matrix();
    mean = cross.transpose() * alpha_;
    const Eigen::MatrixXd v = chol_.triangularView<Eigen::Lower>().solve(cross);
    stddev = (1.0 - v.colwise().squaredNorm().array()).max(0.0).sqrt().matrix().transpose();
}

Eigen::VectorXd propose_next(const std::vector<EvaluationRecord>& history,
                             const SearchSpace& space, const BOConfig& config,
                             std::mt19937_64& rng) {
    if (history.empty()) {
        fail(ErrorCode::InvalidArgument, "propose_next needs a non-empty history");
    }
    const bool any_finite = std::any_of(history.begin(), history.end(), [](const auto& r) {
        return std::isfinite(r.objective);
    });
    if (!any_finite) {
        return space.from_unit(uniform_unit_point(space.dim(), rng));
    }

    const std::size_t init = config.resolved_initial_size(space.dim());
    const TrustRegion tr =
        TrustRegion::replay(history, init, config.global_iterations, space.dim());
    const std::size_t position = history.size() - tr.segment_start;
    if (tr.restarts > 0 && position < init) {
        std::mt19937_64 design_rng =
            make_rng(config.seed, 2 + static_cast<std::uint32_t>(tr.restarts));
        return latin_hypercube(space, init, design_rng)[position];
    }
    std::size_t centre_index = tr.incumbent;
    if (!tr.has_incumbent) {
        for (std::size_t i = 0; i < history.size(); ++i) {
            if (history[i].objective > history[centre_index].objective) {
                centre_index = i;
            }
        }
    }
    const Eigen::VectorXd centre = space.to_unit(history[centre_index].theta_log);
    const Surrogate surrogate(nearest_records(history, centre, space, kSurrogatePoints), space);

    const Eigen::Index pool = static_cast<Eigen::Index>(config.candidate_pool_size);
    Eigen::MatrixXd candidates(pool, static_cast<Eigen::Index>(space.dim()));
    const bool warming_up =
        tr.restarts == 0 && history.size() < init + config.global_iterations;
    const auto n_local = warming_up ? Eigen::Index{0}
                                    : static_cast<Eigen::Index>(std::llround(
                                          config.local_fraction * static_cast<double>(pool)));
    for (Eigen::Index i = 0; i < pool - n_local; ++i) {
        candidates.row(i) = uniform_unit_point(space.dim(), rng).transpose();
    }
    fill_local_candidates(centre, tr.length, pool - n_local, candidates, rng);

    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;
    surrogate.predict(candidates, mean, stddev);

    Eigen::Index best = 0;
    double best_ei = -1.0;
    for (Eigen::Index i = 0; i < pool; ++i) {
        const double ei = expected_improvement(mean[i], stddev[i], surrogate.incumbent());
        if (ei > best_ei) {
            best_ei = ei;
            best = i;
        }
    }
    return space.from_unit(candidates.row(best).transpose());
}

OptimizationResult maximize(const Objective& objective, const SearchSpace& space,
                            const BOConfig& config) {
    space.validate();
    config.validate();

    std::vector<EvaluationRecord> history;
    const std::size_t init = config.resolved_initial_size(space.dim());
    history.reserve(init + config.iterations);
    for (auto& theta : initial_design(space, init, config.seed)) {
        const double v = evaluate(objective, theta);
        history.push_back({std::move(theta), v});
    }

    std::mt19937_64 rng = make_rng(config.seed, 1);
    for (std::size_t it = 0; it < config.iterations; ++it) {
        Eigen::VectorXd theta = propose_next(history, space, config, rng);
        const double v = evaluate(objective, theta);
        history.push_back({std::move(theta), v});
    }
    return select_best(std::move(history), space);
}

Objective lml_objective(const FeatureMatrix& X, const Eigen::VectorXd& y,
                        const SearchSpace& space) {
    if (X.cols() != space.feature_dim()) {
        fail(ErrorCode::Dimension, "search space covers " + std::to_string(space.feature_dim()) +
                                       " features, data has " + std::to_string(X.cols()));
    }
    return [&X, &y, &space](const Eigen::VectorXd& theta) {
        try {
            return log_marginal_likelihood(X, y, space.to_hyperparams(theta));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::IllConditioned) {
                return kMinusInf;
            }
            throw;
        }
    };
}

OptimizationResult optimize_hyperparameters(const FeatureMatrix& X, const Eigen::VectorXd& y,
                                            const SearchSpace& space, const BOConfig& config) {
    return maximize(lml_objective(X, y, space), space, config);
}

OptimizationResult random_search(const Objective& objective, const SearchSpace& space,
                                 std::size_t budget, std::uint64_t seed) {
    space.validate();
    if (budget < 1) {
        fail(ErrorCode::InvalidArgument, "random search budget must be at least 1");
    }
    std::mt19937_64 rng = make_rng(seed, 2);
    std::vector<EvaluationRecord> history;
    history.reserve(budget);
    for (std::size_t i = 0; i < budget; ++i) {
        Eigen::VectorXd theta = space.from_unit(uniform_unit_point(space.dim(), rng));
        const double v = evaluate(objective, theta);
        history.push_back({std::move(theta), v});
    }
    return select_best(std::move(history), space);
}

OptimizationResult random_search(const FeatureMatrix& X, const Eigen::VectorXd& y,
                                 const SearchSpace& space, std::size_t budget,
                                 std::uint64_t seed) {
    return random_search(lml_objective(X, y, space), space, budget, seed);
}

void write_trace_csv(std::ostream& out, const std::vector<EvaluationRecord>& history) {
    out << "iteration,log10_nu";
    const Eigen::Index dim = history.empty() ? 0 : history.front().theta_log.size();
    for (Eigen::Index d = 1; d + 1 < dim; ++d) {
        out << ",log10_gamma_" << d;
    }
    out << ",log10_sigma_n,objective\n";
    for (std::size_t i = 0; i < history.size(); ++i) {
        out << i;
        for (Eigen::Index k = 0; k < history[i].theta_log.size(); ++k) {
            out << ',' << format_double(history[i].theta_log[k]);
        }
        out << ',' << format_double(history[i].objective) << '\n';
    }
}

}  // namespace idpgp
