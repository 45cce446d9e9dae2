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
#include "idpgp/serialization.hpp"

#include <random>

#include <gtest/gtest.h>

#include "idpgp/error.hpp"
#include "idpgp/synthetic.hpp"

namespace idpgp {
namespace {

using nlohmann::json;

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an idpgp::Error";
    return ErrorCode::Io;
}

ModelBundle small_bundle() {
    const SynthData d = generate(SynthSpec::planted(15, 3, {1, 2}, 0.2, 8));
    ModelBundle b;
    b.model = fit(d.dataset.X, d.dataset.y, d.spec.true_hp);
    b.feature_names = d.dataset.feature_names;
    return b;
}

TEST(HyperParamsJson, RoundTripIsExact) {
    HyperParams hp;
    hp.nu = 0.1 + 0.2;
    hp.gamma = Eigen::Vector3d(1.0 / 3.0, 0.0, 2e-300);
    hp.sigma_n = 7.5e-4;
    const HyperParams back = hyperparams_from_json(json::parse(to_json(hp).dump()));
    EXPECT_EQ(back.nu, hp.nu);
    EXPECT_EQ(back.gamma, hp.gamma);
    EXPECT_EQ(back.sigma_n, hp.sigma_n);
}

TEST(HyperParamsJson, InvalidValuesRejected) {
    EXPECT_EQ(code_of([] {
                  hyperparams_from_json({{"nu", -1.0}, {"gamma", {1.0}}, {"sigma_n", 0.1}});
              }),
              ErrorCode::InvalidArgument);
}

TEST(ModelJson, RoundTripPredictsIdentically) {
    const ModelBundle b = small_bundle();
    const ModelBundle back = model_from_json(json::parse(to_json(b).dump()));
    EXPECT_EQ(back.feature_names, b.feature_names);
    EXPECT_FALSE(back.stats.has_value());
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    for (int t = 0; t < 10; ++t) {
        const Eigen::Vector3d x(normal(rng), normal(rng), normal(rng));
        const Prediction p = predict(b.model, x);
        const Prediction q = predict(back.model, x);
        EXPECT_EQ(p.mean, q.mean);
        EXPECT_EQ(p.variance, q.variance);
    }
}

TEST(ModelJson, StatsRoundTrip) {
    const Preprocessed p = preprocess(reference_fixture(), {});
    ModelBundle b;
    HyperParams hp;
    hp.gamma = Eigen::VectorXd::Constant(p.dataset.dim(), 0.1);
    hp.sigma_n = 0.5;
    b.model = fit(p.dataset.X, p.dataset.y.array() - p.stats.target_mean, hp);
    b.feature_names = p.stats.feature_names;
    b.stats = p.stats;
    const ModelBundle back = model_from_json(to_json(b));
    ASSERT_TRUE(back.stats.has_value());
    EXPECT_EQ(back.stats->mean, p.stats.mean);
    EXPECT_EQ(back.stats->std, p.stats.std);
    EXPECT_EQ(back.stats->log_features, p.stats.log_features);
    EXPECT_EQ(back.stats->target_mean, p.stats.target_mean);
}

TEST(ModelJson, TamperedAlphaIsDataError) {
    json j = to_json(small_bundle());
    j["alpha"][0] = j["alpha"][0].get<double>() + 1.0;
    EXPECT_EQ(code_of([&] { model_from_json(j); }), ErrorCode::Data);
}

TEST(ModelJson, FormatAndVersionChecked) {
    json j = to_json(small_bundle());
    j["version"] = 99;
    EXPECT_EQ(code_of([&] { model_from_json(j); }), ErrorCode::Data);
    j = to_json(small_bundle());
    j["format"] = "something-else";
    EXPECT_EQ(code_of([&] { model_from_json(j); }), ErrorCode::Data);
    j = to_json(small_bundle());
    j.erase("y_train");
    EXPECT_EQ(code_of([&] { model_from_json(j); }), ErrorCode::Parse);
    j = to_json(small_bundle());
    j["feature_names"].push_back("extra");
    EXPECT_EQ(code_of([&] { model_from_json(j); }), ErrorCode::Data);
}

TEST(ReportJson, FieldsPresent) {
    AggregateReport r;
    r.subset = "Asia";
    r.runs = 3;
    r.r2 = {0.6, 0.05};
    const json j = to_json(r);
    EXPECT_EQ(j.at("subset"), "Asia");
    EXPECT_EQ(j.at("r2").at("mean"), 0.6);
    EXPECT_EQ(j.at("r2").at("std"), 0.05);

    const json v = to_json(validate_reference_counts(reference_fixture()));
    EXPECT_EQ(v.at("n_events"), 229);
    EXPECT_EQ(v.at("event_totals_match"), true);
}

}  // namespace
}  // namespace idpgp
