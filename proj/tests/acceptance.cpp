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
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Budgets below are part of each criterion's definition.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "idpgp/data.hpp"
#include "idpgp/experiment.hpp"
#include "idpgp/gp.hpp"
#include "idpgp/hyperopt.hpp"
#include "idpgp/synthetic.hpp"
#include "oracle.hpp"

namespace {

using namespace idpgp;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

// Planted-relevance data pushed through the regular event pipeline.
struct Prepared {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<std::string> names;
};

Prepared planted(std::size_t n, std::uint64_t seed) {
    const SynthData data = generate(SynthSpec::planted(n, 10, {1, 4}, 0.3, seed));
    const Preprocessed pre = preprocess(to_event_table(data), SubsetFilter{});
    return {pre.dataset.X, (pre.dataset.y.array() - pre.stats.target_mean).matrix(),
            pre.stats.feature_names};
}

Outcome oracle_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20190601);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const oracle::Instance in = oracle::random_instance(rng, 8, 3);
        const TrainedModel m = fit(in.X, in.y, in.hp);
        const Prediction p = predict(m, in.x_star);
        const oracle::Posterior o = oracle::posterior(in.X, in.y, in.hp, in.x_star);
        worst = std::max({worst, std::abs(p.mean - o.mean), std::abs(p.variance - o.variance),
                          std::abs(log_marginal_likelihood(in.X, in.y, in.hp) -
                                   oracle::lml(in.X, in.y, in.hp))});
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-8 && dt < 10.0, fmt("max deviation %.2e over 100 instances, %.2f s", worst, dt)};
}

Outcome interpolation() {
    std::mt19937_64 rng(77);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        oracle::Instance in = oracle::random_instance(rng, 8, 3);
        in.hp.sigma_n = 1e-6;
        const TrainedModel m = fit(in.X, in.y, in.hp);
        for (Eigen::Index i = 0; i < in.X.rows(); ++i) {
            const double mu = predict(m, in.X.row(i).transpose()).mean;
            worst = std::max(worst, std::abs(mu - in.y[i]));
        }
    }
    return {worst <= 1e-4, fmt("max |mean - y| at training points %.2e on 20 instances", worst)};
}

Outcome ard_recovery() {
    const auto t0 = Clock::now();
    int hits = 0;
    std::string misses;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Prepared p = planted(200, seed);
        BOConfig bo;
        bo.seed = seed;
        bo.iterations = 1000;
        const OptimizationResult r =
            optimize_hyperparameters(p.X, p.y, SearchSpace::defaults(p.X.cols()), bo);
        const FeatureRanking rk = rank_features({r.best}, p.names);
        std::vector<std::string> top = {rk.entries[0].feature, rk.entries[1].feature};
        std::sort(top.begin(), top.end());
        if (top == std::vector<std::string>{"x1", "x4"}) {
            ++hits;
        } else {
            misses += " seed " + std::to_string(seed) + " -> {" + top[0] + "," + top[1] + "}";
        }
    }
    const double dt = seconds_since(t0);
    return {hits >= 18 && dt < 600.0,
            fmt("top-2 = {x1,x4} in %.0f/20 trials, %.0f s", hits, dt) + misses};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Outcome bo_vs_random() {
    const auto t0 = Clock::now();
    std::vector<double> bo_best, rs_best;
    // One dataset, ten paired optimizer seeds at the default budget.
    const Prepared p = planted(200, 7);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SearchSpace space = SearchSpace::defaults(p.X.cols());
        BOConfig bo;
        bo.seed = seed;
        const std::size_t budget = bo.resolved_initial_size(space.dim()) + bo.iterations;
        const OptimizationResult b = optimize_hyperparameters(p.X, p.y, space, bo);
        const OptimizationResult r = random_search(p.X, p.y, space, budget, seed);
        if (b.history.size() != budget || r.history.size() != budget) {
            return {false, "evaluation budgets differ"};
        }
        bo_best.push_back(b.best_objective);
        rs_best.push_back(r.best_objective);
    }
    const double mb = median(bo_best);
    const double mr = median(rs_best);
    const double dt = seconds_since(t0);
    return {mb >= mr && dt < 600.0,
            fmt("median best LML: BO %.2f vs random %.2f over 10 seeds, %.0f s", mb, mr, dt)};
}

Outcome protocol_fidelity() {
    const auto t0 = Clock::now();
    const EventTable table = to_event_table(generate(SynthSpec::planted(229, 10, {1, 4}, 0.3, 2019)));
    ExperimentConfig cfg;
    cfg.runs = 100;
    cfg.train_fraction = 0.75;
    const ExperimentResult res = run_experiment(table, cfg);
    const AggregateReport& a = res.report;
    bool sizes = a.runs == 100 && a.n_events == 229;
    for (const auto& r : res.runs) sizes = sizes && r.n_train == 172 && r.n_test == 57;
    const bool finite = std::isfinite(a.r2.std) && std::isfinite(a.me.std) &&
                        std::isfinite(a.rmse.std) && a.r2.std >= 0.0;
    const double dt = seconds_since(t0);
    return {sizes && finite && a.r2.mean >= 0.6,
            fmt("r2 %.3f +- %.3f, ", a.r2.mean, a.r2.std) +
                fmt("ME %.3f +- %.3f, ", a.me.mean, a.me.std) +
                fmt("RMSE %.3f +- %.3f; 100 runs of 172/57, ", a.rmse.mean, a.rmse.std) +
                fmt("%.0f s", dt)};
}

Outcome metric_identities() {
    bool ok = true;
    const auto vec = [](std::initializer_list<double> v) {
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.begin(), static_cast<Eigen::Index>(v.size())));
    };
    const Eigen::VectorXd y = vec({0.3, -1.2, 2.5, 0.9});
    Metrics m = compute_metrics(y, y);
    ok = ok && m.r2 == 1.0 && m.me == 0.0 && m.rmse == 0.0;
    m = compute_metrics(y, (y.array() + 0.5).matrix());
    ok = ok && std::abs(m.r2 - 1.0) < 1e-12 && std::abs(m.me - 0.5) < 1e-12 &&
         std::abs(m.rmse - 0.5) < 1e-12;
    m = compute_metrics(vec({0, 1, 2}), vec({0, 2, 4}));
    ok = ok && std::abs(m.r2 - 1.0) < 1e-12 && std::abs(m.me - 1.0) < 1e-12 &&
         std::abs(m.rmse - std::sqrt(5.0 / 3.0)) < 1e-12;
    const bool examples = ok;

    std::mt19937_64 rng(6);
    std::normal_distribution<double> normal;
    double worst_identity = 0.0;
    double worst_affine = 0.0;
    for (int t = 0; t < 500; ++t) {
        const Eigen::Index n = 3 + t % 40;
        Eigen::VectorXd a(n), b(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            a[i] = normal(rng);
            b[i] = 0.6 * a[i] + normal(rng) + 0.2;
        }
        const Metrics mm = compute_metrics(a, b);
        const Eigen::ArrayXd r = (b - a).array();
        const double var = (r - r.mean()).square().mean();
        worst_identity = std::max(worst_identity, std::abs(mm.rmse * mm.rmse - (mm.me * mm.me + var)));
        const double scale = std::exp(2.0 * normal(rng));
        const Eigen::VectorXd q = (scale * b.array() + 5.0 * normal(rng)).matrix();
        worst_affine = std::max(worst_affine, std::abs(compute_metrics(a, q).r2 - mm.r2));
    }
    return {examples && worst_identity <= 1e-10 && worst_affine <= 1e-10,
            std::string("hand examples ") + (examples ? "exact" : "WRONG") +
                fmt(", identity residual %.1e, affine r2 drift %.1e", worst_identity, worst_affine)};
}

Outcome dataset_validation() {
    const EventTable t = load_csv(IDPGP_FIXTURE_CSV);
    const ValidationReport r = validate_reference_counts(t);
    std::uint64_t bangladesh = 0;
    for (const auto& row : r.rows) {
        if (row.label == "Bangladesh/Storm") bangladesh = row.observed_idps;
    }
    const bool ok = r.n_events == 229 && r.flood_events == 149 && r.storm_events == 80 &&
                    r.africa_events == 93 && r.asia_events == 136 && bangladesh == 4263000;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%zu events, %zu flood / %zu storm, Africa %zu / Asia %zu, "
                  "Bangladesh storm IDPs %llu",
                  r.n_events, r.flood_events, r.storm_events, r.africa_events, r.asia_events,
                  static_cast<unsigned long long>(bangladesh));
    return {ok, buf};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Outcome end_to_end_determinism() {
    const fs::path root = fs::temp_directory_path() / "idpgp_acceptance_e2e";
    fs::remove_all(root);
    const auto evaluate = [&](const std::string& name, int workers) {
        const fs::path out = root / name;
        const std::string cmd = std::string("\"") + IDPGP_CLI_PATH + "\" evaluate --input \"" +
                                IDPGP_FIXTURE_CSV + "\" --out \"" + out.string() +
                                "\" --seed 0 --runs 4 --workers " + std::to_string(workers) +
                                " > /dev/null";
        return std::system(cmd.c_str()) == 0;
    };
    if (!evaluate("a", 1) || !evaluate("b", 1) || !evaluate("c", 4)) {
        return {false, "idpgp-cli evaluate failed"};
    }
    std::string differing;
    for (const char* f : {"report.csv", "report.json", "runs.csv", "runs.json"}) {
        const std::string a = slurp(root / "a" / f);
        if (a.empty() || a != slurp(root / "b" / f) || a != slurp(root / "c" / f)) {
            differing += std::string(" ") + f;
        }
    }
    fs::remove_all(root);
    return {differing.empty(), differing.empty()
                                   ? "report.csv, report.json, runs.csv, runs.json byte-identical "
                                     "across reruns and --workers 1 vs 4"
                                   : "differences in" + differing};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"oracle equivalence", oracle_equivalence},
        {"interpolation", interpolation},
        {"ARD recovery", ard_recovery},
        {"BO vs random search", bo_vs_random},
        {"protocol fidelity", protocol_fidelity},
        {"metric identities", metric_identities},
        {"dataset validation", dataset_validation},
        {"end-to-end determinism", end_to_end_determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
