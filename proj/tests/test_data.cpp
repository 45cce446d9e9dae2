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
#include "idpgp/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "idpgp/error.hpp"
#include "idpgp/synthetic.hpp"

namespace idpgp {
namespace {

const char* const kThreeRows =
    "event_id,country,region,disaster,date,idp_count,Pop,T\n"
    "e1,Kenya,Africa,Flood,2018-04,1000,5000,30.5\n"
    "e2,Nepal,asia,storm,2017-08,250,NA,28\n"
    "e3,\"Sri Lanka\",Asia,Flood,,1,1200,\n";

EventTable parse(const std::string& text, LoadOptions options = {}) {
    std::istringstream in(text);
    return read_csv(in, "test.csv", options);
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an idpgp::Error";
    return ErrorCode::InvalidArgument;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

// Builds a table with integer-valued features; `pop` is the Pop column.
EventTable table_with(const std::vector<std::uint64_t>& idp, const std::vector<double>& pop,
                      const std::vector<double>& a, const std::vector<double>& constant) {
    EventTable t;
    t.feature_names = {"Pop", "A", "C"};
    for (std::size_t i = 0; i < idp.size(); ++i) {
        EventRecord r;
        r.event_id = "e" + std::to_string(i);
        r.country = "Kenya";
        r.region = i % 2 == 0 ? Region::Africa : Region::Asia;
        r.disaster = i % 3 == 0 ? Disaster::Storm : Disaster::Flood;
        r.idp_count = idp[i];
        r.features = {pop[i], a[i], constant[i]};
        t.records.push_back(r);
    }
    return t;
}

TEST(ReadCsv, WellFormedRows) {
    const EventTable t = parse(kThreeRows);
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t.feature_names, (std::vector<std::string>{"Pop", "T"}));
    EXPECT_EQ(t.records[1].region, Region::Asia);
    EXPECT_EQ(t.records[1].disaster, Disaster::Storm);
    EXPECT_FALSE(t.records[1].features[0].has_value());
    EXPECT_EQ(t.records[2].country, "Sri Lanka");
    EXPECT_EQ(t.records[2].date, "");
    EXPECT_EQ(*t.records[2].idp_count, 1u);
    EXPECT_FALSE(t.records[2].features[1].has_value());
    EXPECT_DOUBLE_EQ(*t.records[0].features[1], 30.5);
}

TEST(ReadCsv, MissingMandatoryColumnNamesIt) {
    const auto f = [] { parse("event_id,country,region,disaster,Pop\ne1,Kenya,Africa,Flood,3\n"); };
    EXPECT_EQ(code_of(f), ErrorCode::Schema);
    EXPECT_NE(message_of(f).find("idp_count"), std::string::npos);
}

TEST(ReadCsv, TargetOptionalForScoring) {
    LoadOptions options;
    options.require_target = false;
    const EventTable t =
        parse("event_id,country,region,disaster,idp_count,Pop\ne1,Kenya,Africa,Flood,,3\n",
              options);
    ASSERT_EQ(t.size(), 1u);
    EXPECT_FALSE(t.records[0].idp_count.has_value());
    EXPECT_EQ(code_of([] {
                  parse("event_id,country,region,disaster,idp_count\ne1,Kenya,Africa,Flood,\n");
              }),
              ErrorCode::Parse);
}

TEST(ReadCsv, ThousandsSeparatorsRejected) {
    const auto f = [] {
        parse("event_id,country,region,disaster,idp_count\n"
              "b1,Bangladesh,Asia,Storm,\"4,263,000\"\n");
    };
    EXPECT_EQ(code_of(f), ErrorCode::Parse);
    EXPECT_NE(message_of(f).find("line 2"), std::string::npos);
}

TEST(ReadCsv, ReportsEveryMalformedLine) {
    const std::string msg = message_of([] {
        parse("event_id,country,region,disaster,idp_count,T\n"
              "a,Kenya,Africa,Flood,10,1\n"
              "b,Kenya,Europe,Flood,10,1\n"
              "c,Kenya,Africa,Flood,10,abc\n"
              "d,Kenya,Africa,Flood,0,1\n"
              "e,Kenya,Africa\n");
    });
    for (const char* line : {"line 3", "line 4", "line 5", "line 6"}) {
        EXPECT_NE(msg.find(line), std::string::npos) << line;
    }
    EXPECT_EQ(msg.find("line 2"), std::string::npos);
}

TEST(ReadCsv, QuotedMultilineFieldsAndBom) {
    const EventTable t = parse(
        "\xEF\xBB\xBF" "event_id,country,region,disaster,idp_count\n"
        "\"x\"\"1\",\"Congo\nBrazzaville\",Africa,Flood,5\n\n"
        "x2,Congo,Africa,Flood,6\n");
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t.records[0].event_id, "x\"1");
    EXPECT_EQ(t.records[0].country, "Congo\nBrazzaville");
}

TEST(ReadCsv, BadDateAndDuplicateColumns) {
    EXPECT_EQ(code_of([] {
                  parse("event_id,country,region,disaster,date,idp_count\n"
                        "a,Kenya,Africa,Flood,2018-13,4\n");
              }),
              ErrorCode::Parse);
    EXPECT_EQ(code_of([] { parse("event_id,country,region,disaster,idp_count,T,T\n"); }),
              ErrorCode::Schema);
    EXPECT_EQ(code_of([] { parse(""); }), ErrorCode::Schema);
}

TEST(ReadCsv, WriteRoundTrip) {
    const EventTable t = parse(kThreeRows);
    std::ostringstream out;
    write_csv(out, t);
    const EventTable back = parse(out.str());
    ASSERT_EQ(back.size(), t.size());
    EXPECT_EQ(back.feature_names, t.feature_names);
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(back.records[i].event_id, t.records[i].event_id);
        EXPECT_EQ(back.records[i].country, t.records[i].country);
        EXPECT_EQ(back.records[i].date, t.records[i].date);
        EXPECT_EQ(back.records[i].idp_count, t.records[i].idp_count);
        EXPECT_EQ(back.records[i].features, t.records[i].features);
    }
}

TEST(LoadCsv, MissingFileIsIoError) {
    EXPECT_EQ(code_of([] { load_csv("/nonexistent/events.csv"); }), ErrorCode::Io);
}

TEST(SubsetFilter, LabelsAndSelection) {
    const EventTable t = parse(kThreeRows);
    SubsetFilter f;
    EXPECT_EQ(f.label(), "Global");
    EXPECT_EQ(select(t, f).size(), 3u);
    f.region = Region::Asia;
    EXPECT_EQ(f.label(), "Asia");
    EXPECT_EQ(select(t, f).size(), 2u);
    f.disaster = Disaster::Flood;
    EXPECT_EQ(f.label(), "Asia+Flood");
    const EventTable s = select(t, f);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s.records[0].event_id, "e3");
    SubsetFilter storms;
    storms.disaster = Disaster::Storm;
    EXPECT_EQ(storms.label(), "Storm");
}

TEST(SubsetFilter, CommutesWithLoading) {
    const EventTable all = reference_fixture();
    std::ostringstream out;
    write_csv(out, all);
    const EventTable loaded = parse(out.str());
    for (auto region : {std::optional<Region>{}, std::optional(Region::Africa)}) {
        for (auto disaster : {std::optional<Disaster>{}, std::optional(Disaster::Storm)}) {
            const SubsetFilter f{region, disaster};
            const EventTable s = select(loaded, f);
            std::size_t expected = 0;
            for (const auto& r : all.records) expected += f.matches(r) ? 1 : 0;
            EXPECT_EQ(s.size(), expected);
            for (const auto& r : s.records) EXPECT_TRUE(f.matches(r));
        }
    }
}

TEST(ParseEnums, CaseInsensitive) {
    EXPECT_EQ(parse_region(" AFRICA "), Region::Africa);
    EXPECT_EQ(parse_disaster("Storm"), Disaster::Storm);
    EXPECT_FALSE(parse_region("Europe").has_value());
    EXPECT_FALSE(parse_disaster("quake").has_value());
}

TEST(ReferenceTable, BundledContents) {
    const ReferenceTable& ref = ReferenceTable::bundled();
    EXPECT_EQ(ref.countries.size(), 27u);
    const auto* bangladesh = ref.find("Bangladesh");
    ASSERT_NE(bangladesh, nullptr);
    EXPECT_EQ(bangladesh->storm_idps, 4263000u);
    EXPECT_EQ(bangladesh->storm_events, 4u);
    EXPECT_EQ(ref.total.flood_events, 149u);
    EXPECT_EQ(ref.total.storm_events, 80u);
    EXPECT_EQ(ref.africa.flood_events + ref.africa.storm_events, 93u);
    EXPECT_EQ(ref.asia.flood_events + ref.asia.storm_events, 136u);
    EXPECT_EQ(ref.find("Atlantis"), nullptr);
}

TEST(ReferenceTable, ParseErrors) {
    std::istringstream bad_header("a,b\n");
    EXPECT_EQ(code_of([&] { ReferenceTable::parse(bad_header); }), ErrorCode::Schema);
    std::istringstream bad_count(
        "kind,country,region,flood_events,flood_idps,storm_events,storm_idps\n"
        "country,Kenya,Africa,x,1,0,0\n");
    EXPECT_EQ(code_of([&] { ReferenceTable::parse(bad_count); }), ErrorCode::Parse);
}

TEST(ValidateReferenceCounts, FixtureTotals) {
    const EventTable fixture = reference_fixture();
    const ValidationReport r = validate_reference_counts(fixture);
    EXPECT_EQ(r.n_events, 229u);
    EXPECT_EQ(r.flood_events, 149u);
    EXPECT_EQ(r.storm_events, 80u);
    EXPECT_EQ(r.africa_events, 93u);
    EXPECT_EQ(r.asia_events, 136u);
    EXPECT_TRUE(r.event_totals_match());
    EXPECT_TRUE(r.unknown_countries.empty());
    const auto it = std::find_if(r.rows.begin(), r.rows.end(), [](const auto& c) {
        return c.label == "Bangladesh/Storm";
    });
    ASSERT_NE(it, r.rows.end());
    EXPECT_EQ(it->observed_idps, 4263000u);
    EXPECT_TRUE(it->matches());
}

TEST(ValidateReferenceCounts, DetectsDifferencesWithoutMutating) {
    EventTable t = reference_fixture();
    t.records.pop_back();
    EventRecord stray = t.records.front();
    stray.event_id = "stray";
    stray.country = "Atlantis";
    t.records.push_back(stray);
    const EventTable before = t;
    const ValidationReport r = validate_reference_counts(t);
    EXPECT_EQ(r.unknown_countries, (std::vector<std::string>{"Atlantis"}));
    EXPECT_GT(r.row_mismatches(), 0u);
    EXPECT_EQ(t.size(), before.size());
    EXPECT_EQ(t.records.back().country, "Atlantis");
}

TEST(Preprocess, TargetIsNaturalLog) {
    const EventTable t = table_with({1, 10, 100, 1000}, {10, 20, 30, 40}, {1, 2, 3, 5},
                                    {7, 7, 7, 7});
    const Preprocessed p = preprocess(t, {});
    EXPECT_EQ(p.dataset.y[0], 0.0);
    EXPECT_NEAR(p.dataset.y[3], std::log(1000.0), 1e-15);
    EXPECT_NEAR(p.stats.target_mean, p.dataset.y.mean(), 1e-15);
}

TEST(Preprocess, ConstantFeatureDroppedAndReported) {
    const EventTable t = table_with({1, 2, 3, 4}, {10, 20, 30, 40}, {1, 2, 3, 5}, {7, 7, 7, 7});
    const Preprocessed p = preprocess(t, {});
    EXPECT_EQ(p.stats.dropped_features, (std::vector<std::string>{"C"}));
    EXPECT_EQ(p.dataset.feature_names, (std::vector<std::string>{"Pop", "A"}));
    EXPECT_EQ(p.dataset.dim(), 2);
}

TEST(Preprocess, PopulationZScore) {
    EventTable t = table_with({1, 2, 3, 4}, {1, 1, 1, 1}, {1, 2, 3, 2}, {0, 0, 0, 0});
    t.feature_names = {"P", "A", "C"};
    const Preprocessed p = preprocess(t, {});
    // Column A is [1, 2, 3, 2]: mean 2, population variance 0.5.
    const Eigen::VectorXd col = p.dataset.X.col(0);
    const double m = 2.0;
    const double s = std::sqrt(0.5);
    EXPECT_NEAR(p.stats.mean[0], m, 1e-15);
    EXPECT_NEAR(p.stats.std[0], s, 1e-15);
    EXPECT_NEAR(col[0], -1.0 / s, 1e-12);
}

TEST(Preprocess, ThreeValueColumnHandZScore) {
    // [1, 2, 3] repeated twice has the same mean and population std as [1, 2, 3].
    EventTable t = table_with({1, 2, 3, 4, 5, 6}, {1, 1, 1, 1, 1, 1}, {1, 2, 3, 1, 2, 3},
                              {0, 0, 0, 0, 0, 0});
    t.feature_names = {"P", "A", "C"};
    const Preprocessed p = preprocess(t, {});
    ASSERT_EQ(p.dataset.size(), 6);
    EXPECT_NEAR(p.stats.mean[0], 2.0, 1e-15);
    EXPECT_NEAR(p.stats.std[0], 0.8165, 1e-4);
    EXPECT_NEAR(p.dataset.X(0, 0), -1.2247, 1e-4);
    EXPECT_NEAR(p.dataset.X(1, 0), 0.0, 1e-15);
    EXPECT_NEAR(p.dataset.X(2, 0), 1.2247, 1e-4);
}

TEST(Preprocess, PopIsLogScaled) {
    const EventTable t = table_with({1, 2, 3, 4}, {1, std::exp(1.0), std::exp(2.0), std::exp(3.0)},
                                    {1, 2, 3, 5}, {7, 7, 7, 7});
    const Preprocessed p = preprocess(t, {});
    EXPECT_EQ(p.stats.log_features, (std::vector<std::string>{"Pop"}));
    EXPECT_NEAR(p.stats.mean[0], 1.5, 1e-12);
}

TEST(Preprocess, NonPositivePopIsDataError) {
    const EventTable t = table_with({1, 2, 3, 4}, {10, -20, 30, 40}, {1, 2, 3, 5}, {7, 7, 7, 7});
    EXPECT_EQ(code_of([&] { preprocess(t, {}); }), ErrorCode::Data);
}

TEST(Preprocess, EmptyOrTinySubsetIsError) {
    const EventTable t = table_with({1, 2, 3, 4}, {10, 20, 30, 40}, {1, 2, 3, 5}, {7, 7, 7, 7});
    EventTable africa_only = t;
    for (auto& r : africa_only.records) r.region = Region::Africa;
    EXPECT_EQ(code_of([&] { preprocess(africa_only, SubsetFilter{Region::Asia, std::nullopt}); }),
              ErrorCode::Data);
    EXPECT_EQ(code_of([&] { preprocess(t, SubsetFilter{Region::Asia, std::nullopt}); }),
              ErrorCode::Data);
}

TEST(Preprocess, RowsWithMissingValuesDroppedWithReport) {
    EventTable t = table_with({1, 2, 3, 4, 5}, {10, 20, 30, 40, 50}, {1, 2, 3, 5, 8},
                              {7, 7, 7, 7, 7});
    t.records[2].features[1] = std::nullopt;
    const Preprocessed p = preprocess(t, {});
    EXPECT_EQ(p.dataset.size(), 4);
    EXPECT_EQ(p.dataset.dropped_events, (std::vector<std::string>{"e2"}));
}

TEST(Preprocess, TestPathUsesTrainStatsOnly) {
    const EventTable train =
        table_with({1, 2, 3, 4}, {10, 20, 30, 40}, {1, 2, 3, 5}, {7, 7, 7, 7});
    const Preprocessed fitted = preprocess(train, {});
    EventTable test = table_with({9, 9}, {15, 1e6}, {-100, 100}, {3, 4});
    const Preprocessed applied = preprocess(test, {}, fitted.stats);
    EXPECT_TRUE(applied.stats.mean.isApprox(fitted.stats.mean));
    EXPECT_EQ(applied.stats.target_mean, fitted.stats.target_mean);
    EXPECT_NEAR(applied.dataset.X(0, 1), (-100.0 - fitted.stats.mean[1]) / fitted.stats.std[1],
                1e-12);
    test.records[1].features[1] = 1e9;
    const Preprocessed again = preprocess(test, {}, fitted.stats);
    EXPECT_TRUE(again.stats.std.isApprox(fitted.stats.std));
}

TEST(Preprocess, StandardizationRoundTrip) {
    const EventTable fixture = reference_fixture();
    const Preprocessed p = preprocess(fixture, {});
    const Eigen::MatrixXd raw = unstandardize(p.dataset.X, p.stats);
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
        const auto& rec = fixture.records[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < p.stats.feature_names.size(); ++j) {
            const double expected = *rec.features[*fixture.feature_index(p.stats.feature_names[j])];
            EXPECT_NEAR(raw(i, static_cast<Eigen::Index>(j)), expected,
                        1e-10 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST(Preprocess, ScoringMatrixMatchesTestPath) {
    const EventTable fixture = reference_fixture();
    const Preprocessed p = preprocess(fixture, SubsetFilter{Region::Africa, std::nullopt});
    std::vector<std::size_t> kept;
    const Eigen::MatrixXd X = standardize_features(fixture, p.stats, kept);
    EXPECT_EQ(kept.size(), fixture.size());
    const Preprocessed asia =
        preprocess(fixture, SubsetFilter{Region::Asia, std::nullopt}, p.stats);
    EXPECT_TRUE(X.row(0).isApprox(asia.dataset.X.row(0)));
}

TEST(Split, TableSizes) {
    const Split s = split(229, 0.75, 1);
    EXPECT_EQ(s.train.size(), 172u);
    EXPECT_EQ(s.test.size(), 57u);
}

TEST(Split, DeterministicPartition) {
    for (std::uint64_t seed : {0u, 1u, 99u}) {
        const Split a = split(50, 0.6, seed);
        const Split b = split(50, 0.6, seed);
        EXPECT_EQ(a.train, b.train);
        EXPECT_EQ(a.test, b.test);
        EXPECT_TRUE(std::is_sorted(a.train.begin(), a.train.end()));
        std::set<std::size_t> all(a.train.begin(), a.train.end());
        for (auto i : a.test) EXPECT_TRUE(all.insert(i).second);
        EXPECT_EQ(all.size(), 50u);
        EXPECT_EQ(*all.rbegin(), 49u);
    }
    EXPECT_NE(split(50, 0.6, 1).train, split(50, 0.6, 2).train);
}

TEST(Split, EmptySideIsError) {
    EXPECT_EQ(code_of([] { split(3, 0.1, 0); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { split(3, 0.9, 0); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { split(10, 1.0, 0); }), ErrorCode::InvalidArgument);
}

}  // namespace
}  // namespace idpgp
