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
#include "idpgp/idpgp.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "idpgp/data.hpp"
#include "idpgp/error.hpp"
#include "idpgp/experiment.hpp"
#include "idpgp/format.hpp"
#include "idpgp/gp.hpp"
#include "idpgp/hyperopt.hpp"
#include "idpgp/serialization.hpp"
#include "idpgp/synthetic.hpp"

struct idpgp_events {
    idpgp::EventTable table;
};

struct idpgp_experiment {
    idpgp::ExperimentResult result;
};

struct idpgp_model {
    idpgp::ModelBundle bundle;
    std::vector<idpgp::EvaluationRecord> history;
    std::string subset;
};

namespace {

thread_local std::string g_last_error;

idpgp_status to_status(idpgp::ErrorCode code) {
    using idpgp::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return IDPGP_ERR_INVALID_ARGUMENT;
        case ErrorCode::Dimension: return IDPGP_ERR_DIMENSION;
        case ErrorCode::IllConditioned: return IDPGP_ERR_ILL_CONDITIONED;
        case ErrorCode::Data: return IDPGP_ERR_DATA;
        case ErrorCode::Schema: return IDPGP_ERR_SCHEMA;
        case ErrorCode::Parse: return IDPGP_ERR_PARSE;
        case ErrorCode::Io: return IDPGP_ERR_IO;
        case ErrorCode::OptimizationFailed: return IDPGP_ERR_OPTIMIZATION_FAILED;
    }
    return IDPGP_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into a status and the thread-local message.
template <typename F>
idpgp_status guarded(F&& body) {
    try {
        body();
        return IDPGP_OK;
    } catch (const idpgp::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
    } catch (const std::exception& e) {
        g_last_error = e.what();
    } catch (...) {
        g_last_error = "unknown error";
    }
    return IDPGP_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
    if (p == nullptr) {
        idpgp::fail(idpgp::ErrorCode::InvalidArgument, std::string(what) + " is null");
    }
}

idpgp::SubsetFilter to_filter(idpgp_region region, idpgp_disaster disaster) {
    idpgp::SubsetFilter f;
    if (region == IDPGP_REGION_AFRICA) f.region = idpgp::Region::Africa;
    if (region == IDPGP_REGION_ASIA) f.region = idpgp::Region::Asia;
    if (disaster == IDPGP_DISASTER_FLOOD) f.disaster = idpgp::Disaster::Flood;
    if (disaster == IDPGP_DISASTER_STORM) f.disaster = idpgp::Disaster::Storm;
    return f;
}

idpgp::ExperimentConfig to_experiment_config(const idpgp_config& c) {
    idpgp::ExperimentConfig e;
    e.filter = to_filter(c.region, c.disaster);
    e.runs = c.runs;
    e.train_fraction = c.train_fraction;
    e.base_seed = c.seed;
    e.bo.iterations = c.bo_iterations;
    if (c.bo_initial > 0) {
        e.bo.initial_design_size = c.bo_initial;
    }
    e.bo.candidate_pool_size = c.bo_candidates;
    e.bo.seed = c.seed;
    e.bounds.log_nu = {c.log10_nu[0], c.log10_nu[1]};
    e.bounds.log_gamma = {c.log10_gamma[0], c.log10_gamma[1]};
    e.bounds.log_sigma_n = {c.log10_sigma_n[0], c.log10_sigma_n[1]};
    e.workers = c.workers;
    return e;
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        idpgp::fail(idpgp::ErrorCode::Io, "cannot write '" + path.string() + "'");
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out = open_output(path);
    out << text;
    if (!out) {
        idpgp::fail(idpgp::ErrorCode::Io, "failed writing '" + path.string() + "'");
    }
}

std::string json_text(const nlohmann::json& j) {
    return j.dump(2) + "\n";
}

void write_ranking_files(const std::filesystem::path& dir, const idpgp::FeatureRanking& ranking,
                         const std::string& title) {
    std::ostringstream csv;
    idpgp::write_ranking_csv(csv, ranking);
    write_text(dir / "ranking.csv", csv.str());
    write_text(dir / "ranking.svg", idpgp::render_ranking_chart(ranking, title));
}

}  // namespace

extern "C" {

IDPGP_API const char* idpgp_version(void) { return "1.0.0"; }

IDPGP_API const char* idpgp_last_error(void) { return g_last_error.c_str(); }

IDPGP_API const char* idpgp_status_name(idpgp_status status) {
    switch (status) {
        case IDPGP_OK: return "ok";
        case IDPGP_ERR_INVALID_ARGUMENT: return "invalid argument";
        case IDPGP_ERR_DIMENSION: return "dimension mismatch";
        case IDPGP_ERR_ILL_CONDITIONED: return "ill-conditioned kernel";
        case IDPGP_ERR_DATA: return "data error";
        case IDPGP_ERR_SCHEMA: return "schema error";
        case IDPGP_ERR_PARSE: return "parse error";
        case IDPGP_ERR_IO: return "i/o error";
        case IDPGP_ERR_OPTIMIZATION_FAILED: return "optimization failed";
        case IDPGP_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

IDPGP_API idpgp_status idpgp_parse_region(const char* text, idpgp_region* out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        const auto r = idpgp::parse_region(text);
        if (!r) {
            idpgp::fail(idpgp::ErrorCode::InvalidArgument,
                        std::string("unknown region '") + text + "' (expected Africa or Asia)");
        }
        *out = *r == idpgp::Region::Africa ? IDPGP_REGION_AFRICA : IDPGP_REGION_ASIA;
    });
}

IDPGP_API idpgp_status idpgp_parse_disaster(const char* text, idpgp_disaster* out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        const auto d = idpgp::parse_disaster(text);
        if (!d) {
            idpgp::fail(idpgp::ErrorCode::InvalidArgument,
                        std::string("unknown disaster '") + text + "' (expected Flood or Storm)");
        }
        *out = *d == idpgp::Disaster::Flood ? IDPGP_DISASTER_FLOOD : IDPGP_DISASTER_STORM;
    });
}

IDPGP_API idpgp_status idpgp_events_load(const char* path, int require_target,
                                         idpgp_events** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        idpgp::LoadOptions options;
        options.require_target = require_target != 0;
        *out = new idpgp_events{idpgp::load_csv(path, options)};
    });
}

IDPGP_API idpgp_status idpgp_events_write(const idpgp_events* events, const char* path) {
    return guarded([&] {
        require(events, "events");
        require(path, "path");
        std::ostringstream csv;
        idpgp::write_csv(csv, events->table);
        write_text(path, csv.str());
    });
}

IDPGP_API size_t idpgp_events_count(const idpgp_events* events) {
    return events ? events->table.size() : 0;
}

IDPGP_API idpgp_status idpgp_events_count_subset(const idpgp_events* events,
                                                 idpgp_region region, idpgp_disaster disaster,
                                                 size_t* out) {
    return guarded([&] {
        require(events, "events");
        require(out, "out");
        *out = idpgp::select(events->table, to_filter(region, disaster)).size();
    });
}

IDPGP_API void idpgp_events_free(idpgp_events* events) { delete events; }

IDPGP_API idpgp_status idpgp_validate(const idpgp_events* events, const char* reference_path,
                                      const char* report_json_path,
                                      idpgp_validation_summary* out) {
    return guarded([&] {
        require(events, "events");
        require(out, "out");
        std::optional<idpgp::ReferenceTable> custom;
        if (reference_path) {
            custom = idpgp::ReferenceTable::load(reference_path);
        }
        const idpgp::ValidationReport report = idpgp::validate_reference_counts(
            events->table, custom ? *custom : idpgp::ReferenceTable::bundled());
        if (report_json_path) {
            write_text(report_json_path, json_text(idpgp::to_json(report)));
        }
        out->n_events = report.n_events;
        out->flood_events = report.flood_events;
        out->storm_events = report.storm_events;
        out->africa_events = report.africa_events;
        out->asia_events = report.asia_events;
        out->row_mismatches = report.row_mismatches();
        out->event_totals_match = report.event_totals_match() ? 1 : 0;
        out->idp_totals_match = report.idp_totals_match() ? 1 : 0;
    });
}

IDPGP_API void idpgp_synth_config_default(idpgp_synth_config* config) {
    static const size_t kRelevant[] = {1, 4};
    if (!config) {
        return;
    }
    config->n = 200;
    config->d = 10;
    config->relevant = kRelevant;
    config->n_relevant = 2;
    config->noise_sigma = 0.3;
    config->nu = 4.0;
    config->gamma_relevant = 0.5;
    config->seed = 0;
}

IDPGP_API idpgp_status idpgp_synth_generate(const idpgp_synth_config* config,
                                            idpgp_events** out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        if (config->n_relevant > 0) {
            require(config->relevant, "relevant");
        }
        std::vector<std::size_t> relevant(config->relevant,
                                          config->relevant + config->n_relevant);
        const auto spec =
            idpgp::SynthSpec::planted(config->n, config->d, std::move(relevant),
                                      config->noise_sigma, config->seed, config->nu,
                                      config->gamma_relevant);
        *out = new idpgp_events{idpgp::to_event_table(idpgp::generate(spec))};
    });
}

IDPGP_API idpgp_status idpgp_reference_fixture(uint64_t seed, idpgp_events** out) {
    return guarded([&] {
        require(out, "out");
        *out = new idpgp_events{idpgp::reference_fixture(seed)};
    });
}

IDPGP_API void idpgp_config_default(idpgp_config* config) {
    if (!config) {
        return;
    }
    const idpgp::ExperimentConfig e;
    const idpgp::SpaceBounds b;
    config->region = IDPGP_REGION_ANY;
    config->disaster = IDPGP_DISASTER_ANY;
    config->runs = e.runs;
    config->train_fraction = e.train_fraction;
    config->seed = 0;
    config->bo_iterations = e.bo.iterations;
    config->bo_initial = 0;
    config->bo_candidates = e.bo.candidate_pool_size;
    config->log10_nu[0] = b.log_nu.lower;
    config->log10_nu[1] = b.log_nu.upper;
    config->log10_gamma[0] = b.log_gamma.lower;
    config->log10_gamma[1] = b.log_gamma.upper;
    config->log10_sigma_n[0] = b.log_sigma_n.lower;
    config->log10_sigma_n[1] = b.log_sigma_n.upper;
    config->workers = 1;
}

IDPGP_API idpgp_status idpgp_config_set_bounds_json(idpgp_config* config, const char* json) {
    return guarded([&] {
        require(config, "config");
        require(json, "json");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json);
        } catch (const nlohmann::json::exception& e) {
            idpgp::fail(idpgp::ErrorCode::Parse, std::string("bounds: ") + e.what());
        }
        if (!j.is_object()) {
            idpgp::fail(idpgp::ErrorCode::Parse, "bounds must be a JSON object");
        }
        idpgp_config updated = *config;
        for (const auto& [key, value] : j.items()) {
            double* target = nullptr;
            if (key == "log10_nu") target = updated.log10_nu;
            else if (key == "log10_gamma") target = updated.log10_gamma;
            else if (key == "log10_sigma_n") target = updated.log10_sigma_n;
            else idpgp::fail(idpgp::ErrorCode::InvalidArgument, "unknown bounds key '" + key + "'");
            if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
                !value[1].is_number()) {
                idpgp::fail(idpgp::ErrorCode::Parse, "bounds '" + key + "' must be [lower, upper]");
            }
            target[0] = value[0].get<double>();
            target[1] = value[1].get<double>();
            if (!(target[0] < target[1])) {
                idpgp::fail(idpgp::ErrorCode::InvalidArgument,
                            "bounds '" + key + "' need lower < upper");
            }
        }
        *config = updated;
    });
}

IDPGP_API idpgp_status idpgp_experiment_run(const idpgp_events* events,
                                            const idpgp_config* config,
                                            idpgp_experiment** out) {
    return guarded([&] {
        require(events, "events");
        require(config, "config");
        require(out, "out");
        *out = new idpgp_experiment{
            idpgp::run_experiment(events->table, to_experiment_config(*config))};
    });
}

IDPGP_API idpgp_status idpgp_experiment_report(const idpgp_experiment* experiment,
                                               idpgp_report* out) {
    return guarded([&] {
        require(experiment, "experiment");
        require(out, "out");
        const auto& r = experiment->result.report;
        *out = {r.n_events, r.runs,    r.n_train, r.n_test,     r.r2.mean,
                r.r2.std,   r.me.mean, r.me.std,  r.rmse.mean, r.rmse.std};
    });
}

IDPGP_API size_t idpgp_experiment_feature_count(const idpgp_experiment* experiment) {
    return experiment ? experiment->result.feature_names.size() : 0;
}

IDPGP_API idpgp_status idpgp_experiment_ranking_entry(const idpgp_experiment* experiment,
                                                      size_t index, const char** feature,
                                                      double* gamma_median, double* mean_rank) {
    return guarded([&] {
        require(experiment, "experiment");
        const auto& entries = experiment->result.ranking.entries;
        if (index >= entries.size()) {
            idpgp::fail(idpgp::ErrorCode::InvalidArgument, "ranking index out of range");
        }
        if (feature) *feature = entries[index].feature.c_str();
        if (gamma_median) *gamma_median = entries[index].gamma_median;
        if (mean_rank) *mean_rank = entries[index].mean_rank;
    });
}

IDPGP_API idpgp_status idpgp_experiment_write_reports(const idpgp_experiment* experiment,
                                                      const char* out_dir) {
    return guarded([&] {
        require(experiment, "experiment");
        require(out_dir, "out_dir");
        const std::filesystem::path dir(out_dir);
        const auto& res = experiment->result;
        std::ostringstream report_csv;
        idpgp::write_report_csv(report_csv, res.report);
        write_text(dir / "report.csv", report_csv.str());
        write_text(dir / "report.json", json_text(idpgp::to_json(res.report)));
        std::ostringstream runs_csv;
        idpgp::write_runs_csv(runs_csv, res.runs, res.feature_names);
        write_text(dir / "runs.csv", runs_csv.str());
        write_text(dir / "runs.json", json_text(idpgp::to_json(res.runs, res.feature_names)));
    });
}

IDPGP_API idpgp_status idpgp_experiment_write_ranking(const idpgp_experiment* experiment,
                                                      const char* out_dir) {
    return guarded([&] {
        require(experiment, "experiment");
        require(out_dir, "out_dir");
        const auto& res = experiment->result;
        write_ranking_files(out_dir, res.ranking,
                            "Feature relevance, " + res.report.subset + " (" +
                                std::to_string(res.report.runs) + " runs)");
    });
}

IDPGP_API void idpgp_experiment_free(idpgp_experiment* experiment) { delete experiment; }

IDPGP_API idpgp_status idpgp_model_fit(const idpgp_events* events, const idpgp_config* config,
                                       idpgp_model** out) {
    return guarded([&] {
        require(events, "events");
        require(config, "config");
        require(out, "out");
        const idpgp::ExperimentConfig cfg = to_experiment_config(*config);
        cfg.bo.validate();
        const idpgp::Preprocessed pre = idpgp::preprocess(events->table, cfg.filter);
        const Eigen::VectorXd y = pre.dataset.y.array() - pre.stats.target_mean;
        const idpgp::SearchSpace space = idpgp::SearchSpace::make(pre.dataset.dim(), cfg.bounds);
        idpgp::OptimizationResult opt =
            idpgp::optimize_hyperparameters(pre.dataset.X, y, space, cfg.bo);

        auto model = std::make_unique<idpgp_model>();
        model->bundle.model = idpgp::fit(pre.dataset.X, y, opt.best);
        model->bundle.feature_names = pre.stats.feature_names;
        model->bundle.stats = pre.stats;
        model->history = std::move(opt.history);
        model->subset = cfg.filter.label();
        *out = model.release();
    });
}

IDPGP_API idpgp_status idpgp_model_save(const idpgp_model* model, const char* path) {
    return guarded([&] {
        require(model, "model");
        require(path, "path");
        write_text(path, json_text(idpgp::to_json(model->bundle)));
    });
}

IDPGP_API idpgp_status idpgp_model_load(const char* path, idpgp_model** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            idpgp::fail(idpgp::ErrorCode::Io, std::string("cannot open '") + path + "'");
        }
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            idpgp::fail(idpgp::ErrorCode::Parse, std::string(path) + ": " + e.what());
        }
        auto model = std::make_unique<idpgp_model>();
        model->bundle = idpgp::model_from_json(j);
        *out = model.release();
    });
}

IDPGP_API size_t idpgp_model_feature_count(const idpgp_model* model) {
    return model ? model->bundle.feature_names.size() : 0;
}

IDPGP_API idpgp_status idpgp_model_predict(const idpgp_model* model, const double* x,
                                           size_t length, double* mean, double* variance) {
    return guarded([&] {
        require(model, "model");
        require(x, "x");
        const Eigen::Map<const Eigen::VectorXd> xv(x, static_cast<Eigen::Index>(length));
        const idpgp::Prediction p = idpgp::predict(model->bundle.model, xv);
        if (mean) *mean = p.mean;
        if (variance) *variance = p.variance;
    });
}

IDPGP_API idpgp_status idpgp_model_predict_events(const idpgp_model* model,
                                                  const idpgp_events* events,
                                                  const char* out_csv, size_t* scored) {
    return guarded([&] {
        require(model, "model");
        require(events, "events");
        require(out_csv, "out_csv");
        if (!model->bundle.stats) {
            idpgp::fail(idpgp::ErrorCode::Data,
                        "model has no preprocessing statistics and cannot score raw events");
        }
        const auto& stats = *model->bundle.stats;
        std::vector<std::size_t> kept;
        const Eigen::MatrixXd X = idpgp::standardize_features(events->table, stats, kept);
        std::ostringstream csv;
        csv << "event_id,log_idp_mean,log_idp_variance,idp_mean\n";
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const auto p = idpgp::predict(model->bundle.model, X.row(i).transpose());
            const double log_mean = p.mean + stats.target_mean;
            // Mean of the log-normal predictive distribution.
            const double idp_mean = std::exp(log_mean + 0.5 * p.variance);
            csv << events->table.records[kept[static_cast<std::size_t>(i)]].event_id << ','
                << idpgp::format_double(log_mean) << ',' << idpgp::format_double(p.variance)
                << ',' << idpgp::format_double(idp_mean) << '\n';
        }
        write_text(out_csv, csv.str());
        if (scored) {
            *scored = kept.size();
        }
    });
}

IDPGP_API idpgp_status idpgp_model_write_trace(const idpgp_model* model, const char* path) {
    return guarded([&] {
        require(model, "model");
        require(path, "path");
        if (model->history.empty()) {
            idpgp::fail(idpgp::ErrorCode::InvalidArgument, "model carries no optimization trace");
        }
        std::ostringstream csv;
        idpgp::write_trace_csv(csv, model->history);
        write_text(path, csv.str());
    });
}

IDPGP_API idpgp_status idpgp_model_write_ranking(const idpgp_model* model, const char* out_dir) {
    return guarded([&] {
        require(model, "model");
        require(out_dir, "out_dir");
        const auto ranking = idpgp::rank_features({model->bundle.model.hyperparams()},
                                                  model->bundle.feature_names);
        const std::string title =
            model->subset.empty() ? "Feature relevance" : "Feature relevance, " + model->subset;
        write_ranking_files(out_dir, ranking, title);
    });
}

IDPGP_API void idpgp_model_free(idpgp_model* model) { delete model; }

}  // extern "C"
