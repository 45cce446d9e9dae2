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
// Command-line front end. Links only against the C API of libidpgp.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idpgp/idpgp.h"

namespace {

class CommandError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void check(idpgp_status status, const std::string& context) {
    if (status != IDPGP_OK) {
        throw CommandError(context + ": " + idpgp_status_name(status) + ": " + idpgp_last_error());
    }
}

struct EventsDeleter {
    void operator()(idpgp_events* p) const { idpgp_events_free(p); }
};
struct ExperimentDeleter {
    void operator()(idpgp_experiment* p) const { idpgp_experiment_free(p); }
};
struct ModelDeleter {
    void operator()(idpgp_model* p) const { idpgp_model_free(p); }
};
using EventsPtr = std::unique_ptr<idpgp_events, EventsDeleter>;
using ExperimentPtr = std::unique_ptr<idpgp_experiment, ExperimentDeleter>;
using ModelPtr = std::unique_ptr<idpgp_model, ModelDeleter>;

EventsPtr load_events(const std::string& path, bool require_target) {
    idpgp_events* raw = nullptr;
    check(idpgp_events_load(path.c_str(), require_target ? 1 : 0, &raw), path);
    return EventsPtr(raw);
}

// Flags shared by evaluate, rank and fit.
struct RunFlags {
    std::string input;
    std::string out;
    std::string region;
    std::string disaster;
    std::size_t runs = 0;
    double train_frac = 0.0;
    std::uint64_t seed = 0;
    std::size_t bo_iters = 0;
    std::size_t bo_init = 0;
    std::size_t bo_candidates = 0;
    std::string bounds;
    std::size_t workers = 1;

    void bind(CLI::App* cmd, bool experiment) {
        idpgp_config defaults;
        idpgp_config_default(&defaults);
        runs = defaults.runs;
        train_frac = defaults.train_fraction;
        bo_iters = defaults.bo_iterations;
        bo_candidates = defaults.bo_candidates;

        cmd->add_option("--input", input, "Event CSV")->required()->check(CLI::ExistingFile);
        cmd->add_option("--region", region, "Africa or Asia (default: all)");
        cmd->add_option("--disaster", disaster, "Flood or Storm (default: all)");
        cmd->add_option("--seed", seed, "Base seed; run r uses seed + r")->capture_default_str();
        cmd->add_option("--bo-iters", bo_iters, "Bayesian optimization iterations")
            ->capture_default_str();
        cmd->add_option("--bo-init", bo_init, "Initial design size (0: 2 x (D + 2))")
            ->capture_default_str();
        cmd->add_option("--bo-candidates", bo_candidates, "Acquisition candidate pool size")
            ->capture_default_str();
        cmd->add_option("--bounds", bounds,
                        "Search bounds as JSON or a JSON file, e.g. "
                        "{\"log10_gamma\":[-4,1]}");
        if (experiment) {
            cmd->add_option("--runs", runs, "Number of random splits")->capture_default_str();
            cmd->add_option("--train-frac", train_frac, "Training fraction per split")
                ->capture_default_str();
            cmd->add_option("--workers", workers, "Concurrent runs")->capture_default_str();
        }
    }

    idpgp_config config() const {
        idpgp_config c;
        idpgp_config_default(&c);
        if (!region.empty()) check(idpgp_parse_region(region.c_str(), &c.region), "--region");
        if (!disaster.empty()) {
            check(idpgp_parse_disaster(disaster.c_str(), &c.disaster), "--disaster");
        }
        c.runs = runs;
        c.train_fraction = train_frac;
        c.seed = seed;
        c.bo_iterations = bo_iters;
        c.bo_initial = bo_init;
        c.bo_candidates = bo_candidates;
        c.workers = workers;
        if (!bounds.empty()) {
            std::string text = bounds;
            if (std::filesystem::is_regular_file(bounds)) {
                std::ifstream in(bounds);
                std::ostringstream ss;
                ss << in.rdbuf();
                text = ss.str();
            }
            check(idpgp_config_set_bounds_json(&c, text.c_str()), "--bounds");
        }
        return c;
    }
};

std::string subset_label(const idpgp_config& c) {
    std::string label;
    if (c.region == IDPGP_REGION_AFRICA) label = "Africa";
    if (c.region == IDPGP_REGION_ASIA) label = "Asia";
    if (c.disaster != IDPGP_DISASTER_ANY) {
        if (!label.empty()) label += '+';
        label += c.disaster == IDPGP_DISASTER_FLOOD ? "Flood" : "Storm";
    }
    return label.empty() ? "Global" : label;
}

ExperimentPtr run(const RunFlags& flags) {
    const idpgp_config cfg = flags.config();
    EventsPtr events = load_events(flags.input, true);
    idpgp_experiment* raw = nullptr;
    check(idpgp_experiment_run(events.get(), &cfg, &raw), "experiment");
    ExperimentPtr exp(raw);

    idpgp_report r;
    check(idpgp_experiment_report(exp.get(), &r), "report");
    std::printf("%s: N=%zu, %zu runs (%zu train / %zu test)\n", subset_label(cfg).c_str(),
                r.n_events, r.runs, r.n_train, r.n_test);
    std::printf("  r2   %.4f +/- %.4f\n  ME   %.4f +/- %.4f\n  RMSE %.4f +/- %.4f\n", r.r2_mean,
                r.r2_std, r.me_mean, r.me_std, r.rmse_mean, r.rmse_std);
    return exp;
}

int cmd_validate(const std::string& input, const std::string& reference,
                 const std::string& out) {
    EventsPtr events = load_events(input, true);
    std::string report_path;
    if (!out.empty()) {
        std::filesystem::create_directories(out);
        report_path = (std::filesystem::path(out) / "validation.json").string();
    }
    idpgp_validation_summary s;
    check(idpgp_validate(events.get(), reference.empty() ? nullptr : reference.c_str(),
                         report_path.empty() ? nullptr : report_path.c_str(), &s),
          "validate");
    // The published IDP totals are not the sums of the per-country rows, so
    // only the event totals decide the verdict; IDP differences are reported.
    const bool ok = s.event_totals_match != 0;
    std::printf("%zu events, %zu flood, %zu storm: %s\n", s.n_events, s.flood_events,
                s.storm_events, ok ? "OK" : "MISMATCH");
    std::printf("Africa %zu, Asia %zu\n", s.africa_events, s.asia_events);
    if (!s.event_totals_match) std::printf("event totals differ from the reference\n");
    if (!s.idp_totals_match) std::printf("note: IDP totals differ from the reference totals\n");
    if (s.row_mismatches > 0) {
        std::printf("%zu per-country rows differ from the reference table\n", s.row_mismatches);
    }
    return ok ? 0 : 1;
}

int cmd_evaluate(const RunFlags& flags) {
    ExperimentPtr exp = run(flags);
    check(idpgp_experiment_write_reports(exp.get(), flags.out.c_str()), flags.out);
    return 0;
}

int cmd_rank(const RunFlags& flags, const std::string& model_path) {
    if (!model_path.empty()) {
        idpgp_model* raw = nullptr;
        check(idpgp_model_load(model_path.c_str(), &raw), model_path);
        ModelPtr model(raw);
        check(idpgp_model_write_ranking(model.get(), flags.out.c_str()), flags.out);
        std::printf("ranking of %zu features written to %s\n",
                    idpgp_model_feature_count(model.get()), flags.out.c_str());
        return 0;
    }
    if (flags.input.empty()) {
        throw CommandError("rank needs --input or --model");
    }
    ExperimentPtr exp = run(flags);
    check(idpgp_experiment_write_ranking(exp.get(), flags.out.c_str()), flags.out);
    const std::size_t n = idpgp_experiment_feature_count(exp.get());
    for (std::size_t i = 0; i < n; ++i) {
        const char* name = nullptr;
        double gamma = 0.0;
        double rank = 0.0;
        check(idpgp_experiment_ranking_entry(exp.get(), i, &name, &gamma, &rank), "ranking");
        std::printf("%2zu. %-12s gamma %.4g  mean rank %.2f\n", i + 1, name, gamma, rank);
    }
    return 0;
}

int cmd_fit(const RunFlags& flags, const std::string& trace) {
    const idpgp_config cfg = flags.config();
    EventsPtr events = load_events(flags.input, true);
    idpgp_model* raw = nullptr;
    check(idpgp_model_fit(events.get(), &cfg, &raw), "fit");
    ModelPtr model(raw);
    check(idpgp_model_save(model.get(), flags.out.c_str()), flags.out);
    if (!trace.empty()) {
        check(idpgp_model_write_trace(model.get(), trace.c_str()), trace);
    }
    std::printf("model with %zu features written to %s\n", idpgp_model_feature_count(model.get()),
                flags.out.c_str());
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& input,
                const std::string& out) {
    idpgp_model* raw = nullptr;
    check(idpgp_model_load(model_path.c_str(), &raw), model_path);
    ModelPtr model(raw);
    EventsPtr events = load_events(input, false);
    std::size_t scored = 0;
    check(idpgp_model_predict_events(model.get(), events.get(), out.c_str(), &scored), input);
    std::printf("scored %zu of %zu events\n", scored, idpgp_events_count(events.get()));
    return 0;
}

struct SynthFlags {
    bool fixture = false;
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<std::size_t> relevant;
    double noise = 0.0;
    double nu = 0.0;
    double gamma_relevant = 0.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
};

int cmd_synth(const SynthFlags& f) {
    idpgp_events* raw = nullptr;
    if (f.fixture) {
        check(idpgp_reference_fixture(f.seed_set ? f.seed : 2019, &raw), "fixture");
    } else {
        idpgp_synth_config c;
        idpgp_synth_config_default(&c);
        c.n = f.n;
        c.d = f.d;
        c.relevant = f.relevant.data();
        c.n_relevant = f.relevant.size();
        c.noise_sigma = f.noise;
        c.nu = f.nu;
        c.gamma_relevant = f.gamma_relevant;
        c.seed = f.seed;
        check(idpgp_synth_generate(&c, &raw), "synth");
    }
    EventsPtr events(raw);
    check(idpgp_events_write(events.get(), f.out.c_str()), f.out);
    std::printf("%zu events written to %s\n", idpgp_events_count(events.get()), f.out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpretable GP regression of disaster displacement"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(idpgp_version()));

    std::string validate_input;
    std::string validate_reference;
    std::string validate_out;
    auto* validate = app.add_subcommand("validate", "Check event counts against the reference");
    validate->add_option("--input", validate_input, "Event CSV")
        ->required()
        ->check(CLI::ExistingFile);
    validate->add_option("--reference", validate_reference, "Reference CSV (default: bundled)")
        ->check(CLI::ExistingFile);
    validate->add_option("--out", validate_out, "Directory for validation.json");

    RunFlags evaluate_flags;
    auto* evaluate = app.add_subcommand("evaluate", "Repeated random-split evaluation");
    evaluate_flags.bind(evaluate, true);
    evaluate->add_option("--out", evaluate_flags.out, "Output directory")->required();

    RunFlags rank_flags;
    std::string rank_model;
    auto* rank = app.add_subcommand("rank", "Feature relevance ranking (CSV and SVG)");
    rank_flags.bind(rank, true);
    rank->get_option("--input")->required(false);
    rank->add_option("--model", rank_model, "Rank a saved model instead of running splits")
        ->check(CLI::ExistingFile)
        ->excludes("--input");
    rank->add_option("--out", rank_flags.out, "Output directory")->required();

    RunFlags fit_flags;
    std::string fit_trace;
    auto* fit = app.add_subcommand("fit", "Optimize hyperparameters and save a model");
    fit_flags.bind(fit, false);
    fit->add_option("--out", fit_flags.out, "Model JSON path")->required();
    fit->add_option("--trace", fit_trace, "Optimization trace CSV path");

    std::string predict_model;
    std::string predict_input;
    std::string predict_out;
    auto* predict = app.add_subcommand("predict", "Score events with a saved model");
    predict->add_option("--model", predict_model, "Model JSON")
        ->required()
        ->check(CLI::ExistingFile);
    predict->add_option("--input", predict_input, "Event CSV (idp_count may be empty)")
        ->required()
        ->check(CLI::ExistingFile);
    predict->add_option("--out", predict_out, "Prediction CSV path")->required();

    SynthFlags synth_flags;
    {
        idpgp_synth_config d;
        idpgp_synth_config_default(&d);
        synth_flags.n = d.n;
        synth_flags.d = d.d;
        synth_flags.relevant.assign(d.relevant, d.relevant + d.n_relevant);
        synth_flags.noise = d.noise_sigma;
        synth_flags.nu = d.nu;
        synth_flags.gamma_relevant = d.gamma_relevant;
    }
    auto* synth = app.add_subcommand("synth", "Write a synthetic event CSV");
    synth->add_flag("--fixture", synth_flags.fixture,
                    "Reference-consistent 229-event fixture instead of a planted dataset");
    synth->add_option("--n", synth_flags.n, "Rows")->capture_default_str();
    synth->add_option("--d", synth_flags.d, "Features")->capture_default_str();
    synth->add_option("--relevant", synth_flags.relevant, "1-based relevant features")
        ->delimiter(',')
        ->capture_default_str();
    synth->add_option("--noise", synth_flags.noise, "Noise standard deviation")
        ->capture_default_str();
    synth->add_option("--nu", synth_flags.nu, "ARD signal scale")->capture_default_str();
    synth->add_option("--gamma-relevant", synth_flags.gamma_relevant,
                      "Precision of relevant features")
        ->capture_default_str();
    synth->add_option("--seed", synth_flags.seed, "Seed");
    synth->add_option("--out", synth_flags.out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version exit 0; usage errors share the failure code.
        return app.exit(e) == 0 ? 0 : 2;
    }
    synth_flags.seed_set = synth->count("--seed") > 0;

    try {
        if (*validate) return cmd_validate(validate_input, validate_reference, validate_out);
        if (*evaluate) return cmd_evaluate(evaluate_flags);
        if (*rank) return cmd_rank(rank_flags, rank_model);
        if (*fit) return cmd_fit(fit_flags, fit_trace);
        if (*predict) return cmd_predict(predict_model, predict_input, predict_out);
        if (*synth) return cmd_synth(synth_flags);
    } catch (const std::exception& e) {
        std::cerr << "idpgp: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
