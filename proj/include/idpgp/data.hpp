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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace idpgp {

enum class Region { Africa, Asia };
enum class Disaster { Flood, Storm };

std::string_view to_string(Region region);
std::string_view to_string(Disaster disaster);
/// Case-insensitive.
std::optional<Region> parse_region(std::string_view text);
std::optional<Disaster> parse_disaster(std::string_view text);

struct EventRecord {
    std::string event_id;
    std::string country;
    Region region = Region::Africa;
    Disaster disaster = Disaster::Flood;
    /// "YYYY-MM", or empty when the column is absent.
    std::string date;
    /// Displaced persons; absent only in tables loaded without a target.
    std::optional<std::uint64_t> idp_count;
    /// Aligned with EventTable::feature_names; nullopt marks a missing value.
    std::vector<std::optional<double>> features;
};

struct EventTable {
    std::vector<std::string> feature_names;
    std::vector<EventRecord> records;

    std::size_t size() const { return records.size(); }
    /// Index of a feature column, or nullopt.
    std::optional<std::size_t> feature_index(std::string_view name) const;
};

struct LoadOptions {
    /// When false the idp_count column may be absent or empty (scoring new events).
    bool require_target = true;
};

/// Columns: event_id,country,region,disaster[,date],idp_count,<feature...>.
/// Every other column is read as a numeric feature; empty cells and "NA" are
/// missing. Numbers use '.' as the decimal point and no digit grouping.
/// Throws Schema for missing mandatory columns and Parse (listing line
/// numbers) for malformed rows.
EventTable read_csv(std::istream& in, const std::string& source_name,
                    const LoadOptions& options = {});
EventTable load_csv(const std::string& path, const LoadOptions& options = {});
void write_csv(std::ostream& out, const EventTable& table);

struct SubsetFilter {
    std::optional<Region> region;
    std::optional<Disaster> disaster;

    bool matches(const EventRecord& record) const;
    /// "Global", "Africa", "Flood", "Africa+Flood", ...
    std::string label() const;
};

EventTable select(const EventTable& table, const SubsetFilter& filter);

/// Published reference counts: events and displaced persons per country
/// and disaster, plus the published regional and grand totals.
struct ReferenceTable {
    struct CountryRow {
        std::string country;
        Region region = Region::Africa;
        std::uint64_t flood_events = 0;
        std::uint64_t flood_idps = 0;
        std::uint64_t storm_events = 0;
        std::uint64_t storm_idps = 0;
    };
    struct Totals {
        std::uint64_t flood_events = 0;
        std::uint64_t flood_idps = 0;
        std::uint64_t storm_events = 0;
        std::uint64_t storm_idps = 0;
    };

    std::vector<CountryRow> countries;
    Totals africa;
    Totals asia;
    Totals total;

    /// The table shipped with the library.
    static const ReferenceTable& bundled();
    static ReferenceTable parse(std::istream& in);
    static ReferenceTable load(const std::string& path);

    const CountryRow* find(std::string_view country) const;
};

struct ValidationReport {
    struct Count {
        std::string label;
        std::uint64_t expected_events = 0;
        std::uint64_t observed_events = 0;
        std::uint64_t expected_idps = 0;
        std::uint64_t observed_idps = 0;

        bool events_match() const { return expected_events == observed_events; }
        bool idps_match() const { return expected_idps == observed_idps; }
        bool matches() const { return events_match() && idps_match(); }
    };

    /// One entry per (country, disaster) in the reference, then any country
    /// the reference does not list.
    std::vector<Count> rows;
    /// Region x disaster, disaster, region and global totals.
    std::vector<Count> totals;
    std::vector<std::string> unknown_countries;

    std::size_t n_events = 0;
    std::size_t flood_events = 0;
    std::size_t storm_events = 0;
    std::size_t africa_events = 0;
    std::size_t asia_events = 0;

    bool event_totals_match() const;
    bool idp_totals_match() const;
    std::size_t row_mismatches() const;
};

/// Report-only comparison; never modifies the input.
ValidationReport validate_reference_counts(const EventTable& table,
                                           const ReferenceTable& reference =
                                               ReferenceTable::bundled());

/// Per-feature standardization computed on a training fold.
struct StandardizationStats {
    std::vector<std::string> feature_names;
    Eigen::VectorXd mean;
    Eigen::VectorXd std;
    /// Features replaced by their natural log before standardizing.
    std::vector<std::string> log_features;
    /// Zero-variance features removed on the training fold.
    std::vector<std::string> dropped_features;
    /// Mean of ln(idp_count) on the training fold. Models are fitted to
    /// targets centred on this value.
    double target_mean = 0.0;
};

struct EventMeta {
    std::string event_id;
    std::string country;
    Region region = Region::Africa;
    Disaster disaster = Disaster::Flood;
};

struct Dataset {
    std::vector<std::string> feature_names;
    Eigen::MatrixXd X;
    /// ln(idp_count).
    Eigen::VectorXd y;
    std::vector<EventMeta> meta;
    /// Event ids removed because a retained feature was missing.
    std::vector<std::string> dropped_events;

    Eigen::Index size() const { return X.rows(); }
    Eigen::Index dim() const { return X.cols(); }
};

struct PreprocessOptions {
    /// Restrict the candidate features (training path only). Unset means all.
    std::optional<std::vector<std::string>> features;
};

struct Preprocessed {
    Dataset dataset;
    StandardizationStats stats;
};

/// Features whose raw values are log-scaled before standardization.
inline constexpr std::string_view kLogScaledFeature = "Pop";

/// Filters, log-scales the target and Pop, and z-scores the features. With
/// `stats` unset the statistics come from these rows (training path, needs
/// N >= 4); otherwise the given statistics are applied unchanged.
Preprocessed preprocess(const EventTable& table, const SubsetFilter& filter,
                        const std::optional<StandardizationStats>& stats = std::nullopt,
                        const PreprocessOptions& options = {});

/// Standardized feature matrix for scoring; rows with missing values are
/// skipped and `kept` lists the surviving record indices.
Eigen::MatrixXd standardize_features(const EventTable& table, const StandardizationStats& stats,
                                     std::vector<std::size_t>& kept);

/// Inverse of the feature transform (z-score, then log where applied).
Eigen::MatrixXd unstandardize(const Eigen::MatrixXd& X, const StandardizationStats& stats);

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Uniform random partition; train size is round(train_fraction * n). Both
/// index lists are sorted.
Split split(std::size_t n, double train_fraction, std::uint64_t seed);

}  // namespace idpgp
