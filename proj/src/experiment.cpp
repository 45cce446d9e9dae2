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
#include "idpgp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "csv.hpp"
#include "idpgp/error.hpp"
#include "idpgp/format.hpp"
#include "idpgp/gp.hpp"

namespace idpgp {

namespace {

MetricSummary summarize(const std::vector<double>& values) {
    MetricSummary s;
    if (values.empty()) {
        return s;
    }
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (const double v : values) {
        ss += (v - s.mean) * (v - s.mean);
    }
    s.std = std::sqrt(ss / n);
    return s;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

EventTable rows_of(const EventTable& table, const std::vector<std::size_t>& idx) {
    EventTable out;
    out.feature_names = table.feature_names;
    out.records.reserve(idx.size());
    for (const std::size_t i : idx) {
        out.records.push_back(table.records[i]);
    }
    return out;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

struct RunInputs {
    const EventTable* table;
    const ExperimentConfig* config;
    const std::vector<std::string>* features;
};

RunResult execute_run(const RunInputs& in, std::size_t r) {
    const ExperimentConfig& config = *in.config;
    const std::uint64_t seed = config.base_seed + r;
    const Split parts = split(in.table->size(), config.train_fraction, seed);

    PreprocessOptions opts;
    opts.features = *in.features;
    const Preprocessed train =
        preprocess(rows_of(*in.table, parts.train), SubsetFilter{}, std::nullopt, opts);
    const Preprocessed test =
        preprocess(rows_of(*in.table, parts.test), SubsetFilter{}, train.stats);

    const double offset = train.stats.target_mean;
    const Eigen::VectorXd y_train = train.dataset.y.array() - offset;
    const SearchSpace space = SearchSpace::make(train.dataset.dim(), config.bounds);
    BOConfig bo = config.bo;
    bo.seed = seed;
    const OptimizationResult opt =
        optimize_hyperparameters(train.dataset.X, y_train, space, bo);
    const TrainedModel model = fit(train.dataset.X, y_train, opt.best);

    Eigen::VectorXd pred(test.dataset.size());
    for (Eigen::Index i = 0; i < pred.size(); ++i) {
        pred[i] = predict(model, test.dataset.X.row(i).transpose()).mean + offset;
    }

    RunResult result;
    result.run_index = r;
    result.metrics = compute_metrics(test.dataset.y, pred);
    result.lml = opt.best_objective;
    result.n_train = static_cast<std::size_t>(train.dataset.size());
    result.n_test = static_cast<std::size_t>(test.dataset.size());
    result.fitted.nu = opt.best.nu;
    result.fitted.sigma_n = opt.best.sigma_n;
    result.fitted.gamma = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(in.features->size()));
    for (std::size_t k = 0; k < train.stats.feature_names.size(); ++k) {
        const auto pos = std::find(in.features->begin(), in.features->end(),
                                   train.stats.feature_names[k]) -
                         in.features->begin();
        result.fitted.gamma[pos] = opt.best.gamma[static_cast<Eigen::Index>(k)];
    }
    return result;
}

}  // namespace

Metrics compute_metrics(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
    if (y_true.size() != y_pred.size()) {
        fail(ErrorCode::Dimension, "metric inputs differ in length");
    }
    if (y_true.size() == 0) {
        fail(ErrorCode::InvalidArgument, "metrics need at least one value");
    }
    if (y_true.maxCoeff() == y_true.minCoeff()) {
        fail(ErrorCode::Data, "r2 is undefined for a constant target");
    }
    const Eigen::ArrayXd resid = (y_pred - y_true).array();
    Metrics m;
    m.me = resid.mean();
    m.rmse = std::sqrt(resid.square().mean());

    const Eigen::ArrayXd t = y_true.array() - y_true.mean();
    const Eigen::ArrayXd p = y_pred.array() - y_pred.mean();
    const double stt = t.square().sum();
    const double spp = p.square().sum();
    if (spp > 0.0) {
        const double stp = (t * p).sum();
        m.r2 = std::clamp(stp * stp / (stt * spp), 0.0, 1.0);
    }
    return m;
}

void ExperimentConfig::validate() const {
    if (runs < 1) {
        fail(ErrorCode::InvalidArgument, "runs must be at least 1");
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        fail(ErrorCode::InvalidArgument, "train fraction must lie strictly between 0 and 1");
    }
    if (workers < 1) {
        fail(ErrorCode::InvalidArgument, "workers must be at least 1");
    }
    bo.validate();
}

ExperimentResult run_experiment(const EventTable& table, const ExperimentConfig& config) {
    config.validate();
    const EventTable subset = select(table, config.filter);

    ExperimentResult result;
    // Rows with missing values and globally constant features are removed once
    // so that every run sees the same rows and the same feature list.
    EventTable complete;
    complete.feature_names = subset.feature_names;
    for (const auto& rec : subset.records) {
        if (std::all_of(rec.features.begin(), rec.features.end(),
                        [](const auto& v) { return v.has_value(); })) {
            complete.records.push_back(rec);
        } else {
            result.dropped_events.push_back(rec.event_id);
        }
    }
    if (complete.size() < 8) {
        fail(ErrorCode::Data, "subset " + config.filter.label() + " has " +
                                  std::to_string(complete.size()) +
                                  " complete events, at least 8 are needed");
    }
    result.feature_names = preprocess(complete, SubsetFilter{}).stats.feature_names;

    const RunInputs inputs{&complete, &config, &result.feature_names};
    result.runs.resize(config.runs);
    std::vector<std::exception_ptr> errors(config.runs);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t r = next++; r < config.runs; r = next++) {
            try {
                result.runs[r] = execute_run(inputs, r);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    const std::size_t n_threads = std::min(config.workers, config.runs);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    for (std::size_t r = 0; r < config.runs; ++r) {
        if (!errors[r]) {
            continue;
        }
        try {
            std::rethrow_exception(errors[r]);
        } catch (const Error& e) {
            fail(e.code(), "run " + std::to_string(r) + ": " + e.what());
        } catch (const std::exception& e) {
            fail(ErrorCode::InvalidArgument, "run " + std::to_string(r) + ": " + e.what());
        }
    }

    AggregateReport& rep = result.report;
    rep.subset = config.filter.label();
    rep.n_events = complete.size();
    rep.runs = config.runs;
    rep.n_train = result.runs.front().n_train;
    rep.n_test = result.runs.front().n_test;
    std::vector<double> r2, me, rmse;
    std::vector<HyperParams> fitted;
    for (const auto& run : result.runs) {
        r2.push_back(run.metrics.r2);
        me.push_back(run.metrics.me);
        rmse.push_back(run.metrics.rmse);
        fitted.push_back(run.fitted);
    }
    rep.r2 = summarize(r2);
    rep.me = summarize(me);
    rep.rmse = summarize(rmse);
    result.ranking = rank_features(fitted, result.feature_names);
    return result;
}

FeatureRanking rank_features(const std::vector<HyperParams>& fitted,
                             const std::vector<std::string>& feature_names) {
    const std::size_t d = feature_names.size();
    if (fitted.empty()) {
        fail(ErrorCode::InvalidArgument, "no fitted hyperparameters to rank");
    }
    std::vector<std::size_t> rank_sum(d, 0);
    std::vector<std::vector<double>> gammas(d);
    std::vector<std::size_t> order(d);
    for (std::size_t r = 0; r < fitted.size(); ++r) {
        const Eigen::VectorXd& g = fitted[r].gamma;
        if (static_cast<std::size_t>(g.size()) != d) {
            fail(ErrorCode::Dimension, "fit " + std::to_string(r) + " has " +
                                           std::to_string(g.size()) + " gammas, expected " +
                                           std::to_string(d));
        }
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return g[static_cast<Eigen::Index>(a)] > g[static_cast<Eigen::Index>(b)];
        });
        for (std::size_t pos = 0; pos < d; ++pos) {
            rank_sum[order[pos]] += pos + 1;
            gammas[order[pos]].push_back(g[static_cast<Eigen::Index>(order[pos])]);
        }
    }

    std::iota(order.begin(), order.end(), std::size_t{0});
    // Integer sums keep equal mean ranks exactly equal.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rank_sum[a] < rank_sum[b]; });
    FeatureRanking ranking;
    for (const std::size_t k : order) {
        ranking.entries.push_back({feature_names[k], median(gammas[k]),
                                   static_cast<double>(rank_sum[k]) /
                                       static_cast<double>(fitted.size())});
    }
    return ranking;
}

std::string render_ranking_chart(const FeatureRanking& ranking, const std::string& title) {
    constexpr double kLabelWidth = 140.0;
    constexpr double kBarMax = 440.0;
    constexpr double kBarHeight = 18.0;
    constexpr double kGap = 6.0;
    constexpr double kTop = 36.0;
    const double width = kLabelWidth + kBarMax + 100.0;
    const double height = kTop + static_cast<double>(ranking.entries.size()) * (kBarHeight + kGap) + 12.0;

    double max_gamma = 0.0;
    for (const auto& e : ranking.entries) {
        max_gamma = std::max(max_gamma, e.gamma_median);
    }

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed3(width) << "\" height=\""
        << fixed3(height) << "\" viewBox=\"0 0 " << fixed3(width) << ' ' << fixed3(height)
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    const std::string heading = title.empty() ? "Feature relevance (median gamma)" : title;
    svg << "  <title>" << xml_escape(heading) << "</title>\n"
        << "  <text x=\"" << fixed3(kLabelWidth) << "\" y=\"20\" font-size=\"14\">"
        << xml_escape(heading) << "</text>\n";
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        const auto& e = ranking.entries[i];
        const double y = kTop + static_cast<double>(i) * (kBarHeight + kGap);
        const double w = max_gamma > 0.0 ? kBarMax * e.gamma_median / max_gamma : 0.0;
        svg << "  <g class=\"bar\">\n"
            << "    <text x=\"" << fixed3(kLabelWidth - 8.0) << "\" y=\"" << fixed3(y + 13.0)
            << "\" text-anchor=\"end\">" << xml_escape(e.feature) << "</text>\n"
            << "    <rect x=\"" << fixed3(kLabelWidth) << "\" y=\"" << fixed3(y) << "\" width=\""
            << fixed3(w) << "\" height=\"" << fixed3(kBarHeight) << "\" fill=\"#3b6ea5\"/>\n"
            << "    <text x=\"" << fixed3(kLabelWidth + w + 6.0) << "\" y=\"" << fixed3(y + 13.0)
            << "\">" << xml_escape(format_double(e.gamma_median)) << "</text>\n"
            << "  </g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_report_csv(std::ostream& out, const AggregateReport& report) {
    out << "subset,n_events,runs,n_train,n_test,r2_mean,r2_std,me_mean,me_std,rmse_mean,rmse_std\n"
        << csv::escape(report.subset) << ',' << report.n_events << ',' << report.runs << ','
        << report.n_train << ',' << report.n_test << ',' << format_double(report.r2.mean) << ','
        << format_double(report.r2.std) << ',' << format_double(report.me.mean) << ','
        << format_double(report.me.std) << ',' << format_double(report.rmse.mean) << ','
        << format_double(report.rmse.std) << '\n';
}

void write_runs_csv(std::ostream& out, const std::vector<RunResult>& runs,
                    const std::vector<std::string>& feature_names) {
    out << "run,r2,me,rmse,lml,n_train,n_test,nu,sigma_n";
    for (const auto& name : feature_names) {
        out << ',' << csv::escape("gamma_" + name);
    }
    out << '\n';
    for (const auto& r : runs) {
        out << r.run_index << ',' << format_double(r.metrics.r2) << ','
            << format_double(r.metrics.me) << ',' << format_double(r.metrics.rmse) << ','
            << format_double(r.lml) << ',' << r.n_train << ',' << r.n_test << ','
            << format_double(r.fitted.nu) << ',' << format_double(r.fitted.sigma_n);
        for (Eigen::Index k = 0; k < r.fitted.gamma.size(); ++k) {
            out << ',' << format_double(r.fitted.gamma[k]);
        }
        out << '\n';
    }
}

void write_ranking_csv(std::ostream& out, const FeatureRanking& ranking) {
    out << "feature,gamma_median,mean_rank\n";
    for (const auto& e : ranking.entries) {
        out << csv::escape(e.feature) << ',' << format_double(e.gamma_median) << ','
            << format_double(e.mean_rank) << '\n';
    }
}

}  // namespace idpgp
