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
#ifndef IDPGP_IDPGP_H
#define IDPGP_IDPGP_H

/*
 * C interface to the idpgp library. All objects are opaque handles created
 * and destroyed through this API. Every fallible call returns an
 * idpgp_status; on failure idpgp_last_error() describes the problem (the
 * message is per thread and valid until the next failing call on it).
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define IDPGP_API __declspec(dllexport)
#else
#  define IDPGP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum idpgp_status {
    IDPGP_OK = 0,
    IDPGP_ERR_INVALID_ARGUMENT = 1,
    IDPGP_ERR_DIMENSION = 2,
    IDPGP_ERR_ILL_CONDITIONED = 3,
    IDPGP_ERR_DATA = 4,
    IDPGP_ERR_SCHEMA = 5,
    IDPGP_ERR_PARSE = 6,
    IDPGP_ERR_IO = 7,
    IDPGP_ERR_OPTIMIZATION_FAILED = 8,
    IDPGP_ERR_INTERNAL = 99
} idpgp_status;

typedef enum idpgp_region {
    IDPGP_REGION_ANY = 0,
    IDPGP_REGION_AFRICA = 1,
    IDPGP_REGION_ASIA = 2
} idpgp_region;

typedef enum idpgp_disaster {
    IDPGP_DISASTER_ANY = 0,
    IDPGP_DISASTER_FLOOD = 1,
    IDPGP_DISASTER_STORM = 2
} idpgp_disaster;

typedef struct idpgp_events idpgp_events;
typedef struct idpgp_experiment idpgp_experiment;
typedef struct idpgp_model idpgp_model;

IDPGP_API const char* idpgp_version(void);
IDPGP_API const char* idpgp_last_error(void);
IDPGP_API const char* idpgp_status_name(idpgp_status status);

/* Parses a region/disaster name ("Africa", "flood", ...). */
IDPGP_API idpgp_status idpgp_parse_region(const char* text, idpgp_region* out);
IDPGP_API idpgp_status idpgp_parse_disaster(const char* text, idpgp_disaster* out);

/* ---- Event tables ------------------------------------------------------ */

/* require_target = 0 allows an absent or empty idp_count column. */
IDPGP_API idpgp_status idpgp_events_load(const char* path, int require_target,
                                         idpgp_events** out);
IDPGP_API idpgp_status idpgp_events_write(const idpgp_events* events, const char* path);
IDPGP_API size_t idpgp_events_count(const idpgp_events* events);
IDPGP_API idpgp_status idpgp_events_count_subset(const idpgp_events* events,
                                                 idpgp_region region, idpgp_disaster disaster,
                                                 size_t* out);
IDPGP_API void idpgp_events_free(idpgp_events* events);

/* ---- Reference validation --------------------------------------------- */

typedef struct idpgp_validation_summary {
    size_t n_events;
    size_t flood_events;
    size_t storm_events;
    size_t africa_events;
    size_t asia_events;
    size_t row_mismatches;
    int event_totals_match;
    int idp_totals_match;
} idpgp_validation_summary;

/* reference_path NULL uses the bundled table; report_json_path NULL skips
   writing the full report. */
IDPGP_API idpgp_status idpgp_validate(const idpgp_events* events, const char* reference_path,
                                      const char* report_json_path,
                                      idpgp_validation_summary* out);

/* ---- Synthetic data ---------------------------------------------------- */

typedef struct idpgp_synth_config {
    size_t n;
    size_t d;
    const size_t* relevant; /* 1-based feature indices */
    size_t n_relevant;
    double noise_sigma;
    double nu;
    double gamma_relevant;
    uint64_t seed;
} idpgp_synth_config;

/* n = 200, d = 10, relevant = {1, 4}, noise 0.3, nu 4, gamma 0.5, seed 0. */
IDPGP_API void idpgp_synth_config_default(idpgp_synth_config* config);
IDPGP_API idpgp_status idpgp_synth_generate(const idpgp_synth_config* config,
                                            idpgp_events** out);
/* Event table consistent with the bundled reference totals. */
IDPGP_API idpgp_status idpgp_reference_fixture(uint64_t seed, idpgp_events** out);

/* ---- Experiment and fitting configuration ----------------------------- */

typedef struct idpgp_config {
    idpgp_region region;
    idpgp_disaster disaster;
    size_t runs;
    double train_fraction;
    uint64_t seed;
    size_t bo_iterations;
    size_t bo_initial; /* 0 means 2 * (D + 2) */
    size_t bo_candidates;
    double log10_nu[2];
    double log10_gamma[2];
    double log10_sigma_n[2];
    size_t workers;
} idpgp_config;

IDPGP_API void idpgp_config_default(idpgp_config* config);
/* Overrides bounds from {"log10_nu":[lo,hi],"log10_gamma":[lo,hi],
   "log10_sigma_n":[lo,hi]}; absent keys keep their value. */
IDPGP_API idpgp_status idpgp_config_set_bounds_json(idpgp_config* config, const char* json);

/* ---- Repeated-split experiments --------------------------------------- */

typedef struct idpgp_report {
    size_t n_events;
    size_t runs;
    size_t n_train;
    size_t n_test;
    double r2_mean, r2_std;
    double me_mean, me_std;
    double rmse_mean, rmse_std;
} idpgp_report;

IDPGP_API idpgp_status idpgp_experiment_run(const idpgp_events* events,
                                            const idpgp_config* config,
                                            idpgp_experiment** out);
IDPGP_API idpgp_status idpgp_experiment_report(const idpgp_experiment* experiment,
                                               idpgp_report* out);
/* Entry `index` of the aggregated ranking (0 = most relevant). The name stays
   valid for the lifetime of the handle. */
IDPGP_API size_t idpgp_experiment_feature_count(const idpgp_experiment* experiment);
IDPGP_API idpgp_status idpgp_experiment_ranking_entry(const idpgp_experiment* experiment,
                                                      size_t index, const char** feature,
                                                      double* gamma_median, double* mean_rank);
/* report.csv, report.json, runs.csv, runs.json */
IDPGP_API idpgp_status idpgp_experiment_write_reports(const idpgp_experiment* experiment,
                                                      const char* out_dir);
/* ranking.csv, ranking.svg */
IDPGP_API idpgp_status idpgp_experiment_write_ranking(const idpgp_experiment* experiment,
                                                      const char* out_dir);
IDPGP_API void idpgp_experiment_free(idpgp_experiment* experiment);

/* ---- Single models ---------------------------------------------------- */

/* Type-II ML on every event of the configured subset, then an exact fit. */
IDPGP_API idpgp_status idpgp_model_fit(const idpgp_events* events, const idpgp_config* config,
                                       idpgp_model** out);
IDPGP_API idpgp_status idpgp_model_save(const idpgp_model* model, const char* path);
IDPGP_API idpgp_status idpgp_model_load(const char* path, idpgp_model** out);
IDPGP_API size_t idpgp_model_feature_count(const idpgp_model* model);
/* Prediction at a standardized feature vector of length feature_count; the
   mean is in the model's (centred log) target space. */
IDPGP_API idpgp_status idpgp_model_predict(const idpgp_model* model, const double* x,
                                           size_t length, double* mean, double* variance);
/* Scores raw events; writes event_id,log_idp_mean,log_idp_variance,idp_mean. */
IDPGP_API idpgp_status idpgp_model_predict_events(const idpgp_model* model,
                                                  const idpgp_events* events,
                                                  const char* out_csv, size_t* scored);
/* Optimization trace CSV; only models produced by idpgp_model_fit have one. */
IDPGP_API idpgp_status idpgp_model_write_trace(const idpgp_model* model, const char* path);
/* ranking.csv and ranking.svg for this single fit. */
IDPGP_API idpgp_status idpgp_model_write_ranking(const idpgp_model* model, const char* out_dir);
IDPGP_API void idpgp_model_free(idpgp_model* model);

#ifdef __cplusplus
}
#endif

#endif /* IDPGP_IDPGP_H */
