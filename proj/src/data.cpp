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
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "idpgp/error.hpp"
#include "idpgp/format.hpp"

namespace idpgp {

extern const char* const kBundledReferenceCsv;

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::optional<double> parse_real(const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::optional<std::uint64_t> parse_count(const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
        return std::nullopt;
    }
    std::uint64_t v = 0;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) {
        return std::nullopt;
    }
    return v;
}

bool valid_year_month(const std::string& s) {
    if (s.size() != 7 || s[4] != '-') {
        return false;
    }
    for (std::size_t i : {0, 1, 2, 3, 5, 6}) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            return false;
        }
    }
    const int month = (s[5] - '0') * 10 + (s[6] - '0');
    return month >= 1 && month <= 12;
}

bool is_missing(const std::string& s) {
    return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "nan";
}

constexpr std::string_view kMandatory[] = {"event_id", "country", "region", "disaster",
                                           "idp_count"};

double population_std(const Eigen::VectorXd& v, double mean) {
    return std::sqrt((v.array() - mean).square().mean());
}

// Raw (log-transformed where requested) values for the given rows and columns.
struct Gathered {
    Eigen::MatrixXd X;
    std::vector<std::size_t> rows;
    std::vector<std::string> dropped_events;
};

Gathered gather(const EventTable& table, const std::vector<std::size_t>& rows,
                const std::vector<std::size_t>& cols, const std::vector<std::string>& names,
                const std::vector<std::string>& log_features) {
    Gathered g;
    for (const std::size_t r : rows) {
        const auto& rec = table.records[r];
        const bool complete = std::all_of(cols.begin(), cols.end(), [&](std::size_t c) {
            return rec.features[c].has_value();
        });
        if (complete) {
            g.rows.push_back(r);
        } else {
            g.dropped_events.push_back(rec.event_id);
        }
    }
    g.X.resize(static_cast<Eigen::Index>(g.rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const bool log_scale =
            std::find(log_features.begin(), log_features.end(), names[j]) != log_features.end();
        for (std::size_t i = 0; i < g.rows.size(); ++i) {
            const auto& rec = table.records[g.rows[i]];
            double v = *rec.features[cols[j]];
            if (log_scale) {
                if (!(v > 0.0)) {
                    fail(ErrorCode::Data, "event " + rec.event_id + ": " + names[j] +
                                              " must be positive for log-scaling, got " +
                                              format_double(v));
                }
                v = std::log(v);
            }
            g.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    }
    return g;
}

std::vector<std::size_t> resolve_columns(const EventTable& table,
                                         const std::vector<std::string>& names) {
    std::vector<std::size_t> cols;
    cols.reserve(names.size());
    for (const auto& name : names) {
        const auto idx = table.feature_index(name);
        if (!idx) {
            fail(ErrorCode::Schema, "feature column '" + name + "' is missing");
        }
        cols.push_back(*idx);
    }
    return cols;
}

}  // namespace

std::string_view to_string(Region region) {
    return region == Region::Africa ? "Africa" : "Asia";
}

std::string_view to_string(Disaster disaster) {
    return disaster == Disaster::Flood ? "Flood" : "Storm";
}

std::optional<Region> parse_region(std::string_view text) {
    const std::string s = lower(trim(text));
    if (s == "africa") return Region::Africa;
    if (s == "asia") return Region::Asia;
    return std::nullopt;
}

std::optional<Disaster> parse_disaster(std::string_view text) {
    const std::string s = lower(trim(text));
    if (s == "flood") return Disaster::Flood;
    if (s == "storm") return Disaster::Storm;
    return std::nullopt;
}

std::optional<std::size_t> EventTable::feature_index(std::string_view name) const {
    const auto it = std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - feature_names.begin());
}

EventTable read_csv(std::istream& in, const std::string& source_name, const LoadOptions& options) {
    csv::Reader reader(in);
    csv::Row header;
    if (!reader.next(header)) {
        fail(ErrorCode::Schema, source_name + ": missing header row");
    }
    for (auto& h : header.fields) {
        h = trim(h);
    }

    std::map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
        if (header.fields[i].empty()) {
            fail(ErrorCode::Schema, source_name + ": empty column name at position " +
                                        std::to_string(i + 1));
        }
        if (!column.emplace(header.fields[i], i).second) {
            fail(ErrorCode::Schema, source_name + ": duplicate column '" + header.fields[i] + "'");
        }
    }
    for (const auto name : kMandatory) {
        if (name == "idp_count" && !options.require_target) {
            continue;
        }
        if (!column.count(std::string(name))) {
            fail(ErrorCode::Schema,
                 source_name + ": missing mandatory column '" + std::string(name) + "'");
        }
    }

    EventTable table;
    std::vector<std::size_t> feature_cols;
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
        const auto& name = header.fields[i];
        const bool known = name == "date" ||
                           std::find(std::begin(kMandatory), std::end(kMandatory), name) !=
                               std::end(kMandatory);
        if (!known) {
            table.feature_names.push_back(name);
            feature_cols.push_back(i);
        }
    }

    const auto col_of = [&](const char* name) -> std::optional<std::size_t> {
        const auto it = column.find(name);
        return it == column.end() ? std::nullopt : std::optional<std::size_t>(it->second);
    };
    const std::size_t c_id = *col_of("event_id");
    const std::size_t c_country = *col_of("country");
    const std::size_t c_region = *col_of("region");
    const std::size_t c_disaster = *col_of("disaster");
    const auto c_date = col_of("date");
    const auto c_idp = col_of("idp_count");

    std::vector<std::string> problems;
    csv::Row row;
    while (reader.next(row)) {
        const auto bad = [&](const std::string& msg) {
            problems.push_back("line " + std::to_string(row.line) + ": " + msg);
        };
        if (row.fields.size() != header.fields.size()) {
            bad("expected " + std::to_string(header.fields.size()) + " fields, found " +
                std::to_string(row.fields.size()));
            continue;
        }
        for (auto& f : row.fields) {
            f = trim(f);
        }

        EventRecord rec;
        bool ok = true;
        rec.event_id = row.fields[c_id];
        rec.country = row.fields[c_country];
        if (rec.event_id.empty()) {
            bad("empty event_id");
            ok = false;
        }
        if (rec.country.empty()) {
            bad("empty country");
            ok = false;
        }
        if (const auto r = parse_region(row.fields[c_region])) {
            rec.region = *r;
        } else {
            bad("unknown region '" + row.fields[c_region] + "'");
            ok = false;
        }
        if (const auto d = parse_disaster(row.fields[c_disaster])) {
            rec.disaster = *d;
        } else {
            bad("unknown disaster '" + row.fields[c_disaster] + "'");
            ok = false;
        }
        if (c_date) {
            rec.date = row.fields[*c_date];
            if (!rec.date.empty() && !valid_year_month(rec.date)) {
                bad("date '" + rec.date + "' is not YYYY-MM");
                ok = false;
            }
        }
        if (c_idp) {
            const std::string& s = row.fields[*c_idp];
            if (s.empty() && !options.require_target) {
                // scoring input without a target
            } else if (const auto n = parse_count(s); n && *n >= 1) {
                rec.idp_count = *n;
            } else {
                bad("idp_count '" + s + "' is not a positive integer");
                ok = false;
            }
        }
        rec.features.reserve(feature_cols.size());
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            const std::string& s = row.fields[feature_cols[j]];
            if (is_missing(s)) {
                rec.features.emplace_back(std::nullopt);
            } else if (const auto v = parse_real(s)) {
                rec.features.emplace_back(*v);
            } else {
                bad("feature '" + table.feature_names[j] + "' value '" + s + "' is not a number");
                ok = false;
            }
        }
        if (ok) {
            table.records.push_back(std::move(rec));
        }
    }

    if (!problems.empty()) {
        std::ostringstream msg;
        msg << source_name << ": " << problems.size() << " malformed row(s)";
        for (const auto& p : problems) {
            msg << "\n  " << p;
        }
        fail(ErrorCode::Parse, msg.str());
    }
    return table;
}

EventTable load_csv(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open '" + path + "'");
    }
    return read_csv(in, path, options);
}

void write_csv(std::ostream& out, const EventTable& table) {
    out << "event_id,country,region,disaster,date,idp_count";
    for (const auto& name : table.feature_names) {
        out << ',' << csv::escape(name);
    }
    out << '\n';
    for (const auto& rec : table.records) {
        out << csv::escape(rec.event_id) << ',' << csv::escape(rec.country) << ','
            << to_string(rec.region) << ',' << to_string(rec.disaster) << ',' << rec.date << ',';
        if (rec.idp_count) {
            out << *rec.idp_count;
        }
        for (const auto& v : rec.features) {
            out << ',';
            if (v) {
                out << format_double(*v);
            } else {
                out << "NA";
            }
        }
        out << '\n';
    }
}

bool SubsetFilter::matches(const EventRecord& record) const {
    return (!region || record.region == *region) && (!disaster || record.disaster == *disaster);
}

std::string SubsetFilter::label() const {
    if (!region && !disaster) {
        return "Global";
    }
    std::string out;
    if (region) {
        out += to_string(*region);
    }
    if (disaster) {
        if (!out.empty()) {
            out += '+';
        }
        out += to_string(*disaster);
    }
    return out;
}

EventTable select(const EventTable& table, const SubsetFilter& filter) {
    EventTable out;
    out.feature_names = table.feature_names;
    std::copy_if(table.records.begin(), table.records.end(), std::back_inserter(out.records),
                 [&](const EventRecord& r) { return filter.matches(r); });
    return out;
}

// ---------------------------------------------------------------------------
// Reference counts

const ReferenceTable& ReferenceTable::bundled() {
    static const ReferenceTable table = [] {
        std::istringstream in(kBundledReferenceCsv);
        return parse(in);
    }();
    return table;
}

ReferenceTable ReferenceTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open '" + path + "'");
    }
    return parse(in);
}

ReferenceTable ReferenceTable::parse(std::istream& in) {
    static const std::vector<std::string> expected = {
        "kind", "country", "region", "flood_events", "flood_idps", "storm_events", "storm_idps"};
    csv::Reader reader(in);
    csv::Row row;
    if (!reader.next(row) || row.fields != expected) {
        fail(ErrorCode::Schema, "reference table header must be kind,country,region,"
                                "flood_events,flood_idps,storm_events,storm_idps");
    }
    ReferenceTable ref;
    bool have_africa = false, have_asia = false, have_total = false;
    while (reader.next(row)) {
        const auto where = "reference line " + std::to_string(row.line);
        if (row.fields.size() != expected.size()) {
            fail(ErrorCode::Parse, where + ": expected 7 fields");
        }
        std::uint64_t n[4];
        for (std::size_t k = 0; k < 4; ++k) {
            const auto v = parse_count(trim(row.fields[3 + k]));
            if (!v) {
                fail(ErrorCode::Parse, where + ": '" + row.fields[3 + k] + "' is not a count");
            }
            n[k] = *v;
        }
        const Totals counts{n[0], n[1], n[2], n[3]};
        const std::string kind = trim(row.fields[0]);
        const auto region = parse_region(row.fields[2]);
        if (kind == "country") {
            if (!region) {
                fail(ErrorCode::Parse, where + ": unknown region");
            }
            ref.countries.push_back(
                {trim(row.fields[1]), *region, n[0], n[1], n[2], n[3]});
        } else if (kind == "region_total") {
            if (!region) {
                fail(ErrorCode::Parse, where + ": unknown region");
            }
            (*region == Region::Africa ? ref.africa : ref.asia) = counts;
            (*region == Region::Africa ? have_africa : have_asia) = true;
        } else if (kind == "grand_total") {
            ref.total = counts;
            have_total = true;
        } else {
            fail(ErrorCode::Parse, where + ": unknown row kind '" + kind + "'");
        }
    }
    if (!have_africa || !have_asia || !have_total) {
        fail(ErrorCode::Schema, "reference table needs Africa, Asia and grand total rows");
    }
    return ref;
}

const ReferenceTable::CountryRow* ReferenceTable::find(std::string_view country) const {
    const std::string key = lower(trim(country));
    for (const auto& c : countries) {
        if (lower(c.country) == key) {
            return &c;
        }
    }
    return nullptr;
}

bool ValidationReport::event_totals_match() const {
    return std::all_of(totals.begin(), totals.end(), [](const Count& c) { return c.events_match(); });
}

bool ValidationReport::idp_totals_match() const {
    return std::all_of(totals.begin(), totals.end(), [](const Count& c) { return c.idps_match(); });
}

std::size_t ValidationReport::row_mismatches() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const Count& c) { return !c.matches(); }));
}

ValidationReport validate_reference_counts(const EventTable& table,
                                           const ReferenceTable& reference) {
    struct Tally {
        std::uint64_t events = 0;
        std::uint64_t idps = 0;
        void add(const EventRecord& r) {
            ++events;
            idps += r.idp_count.value_or(0);
        }
    };
    // Keyed by lower-cased country name.
    std::map<std::pair<std::string, Disaster>, Tally> by_country;
    std::map<std::pair<Region, Disaster>, Tally> by_region;
    std::vector<std::string> seen_order;
    std::set<std::string> seen;

    ValidationReport report;
    for (const auto& r : table.records) {
        const std::string key = lower(trim(r.country));
        by_country[{key, r.disaster}].add(r);
        by_region[{r.region, r.disaster}].add(r);
        if (seen.insert(key).second) {
            seen_order.push_back(r.country);
        }
        ++report.n_events;
        (r.disaster == Disaster::Flood ? report.flood_events : report.storm_events)++;
        (r.region == Region::Africa ? report.africa_events : report.asia_events)++;
    }

    const auto tally = [&](const std::string& country, Disaster d) {
        const auto it = by_country.find({lower(trim(country)), d});
        return it == by_country.end() ? Tally{} : it->second;
    };
    for (const auto& c : reference.countries) {
        for (const Disaster d : {Disaster::Flood, Disaster::Storm}) {
            const Tally t = tally(c.country, d);
            const bool flood = d == Disaster::Flood;
            report.rows.push_back({c.country + "/" + std::string(to_string(d)),
                                   flood ? c.flood_events : c.storm_events, t.events,
                                   flood ? c.flood_idps : c.storm_idps, t.idps});
        }
    }
    for (const auto& country : seen_order) {
        if (reference.find(country)) {
            continue;
        }
        report.unknown_countries.push_back(country);
        for (const Disaster d : {Disaster::Flood, Disaster::Storm}) {
            const Tally t = tally(country, d);
            if (t.events > 0) {
                report.rows.push_back(
                    {country + "/" + std::string(to_string(d)), 0, t.events, 0, t.idps});
            }
        }
    }

    const auto region_tally = [&](std::optional<Region> region, std::optional<Disaster> d) {
        Tally sum;
        for (const auto& [key, t] : by_region) {
            if ((!region || key.first == *region) && (!d || key.second == *d)) {
                sum.events += t.events;
                sum.idps += t.idps;
            }
        }
        return sum;
    };
    const auto add_total = [&](const std::string& label, std::optional<Region> region,
                               std::optional<Disaster> d, std::uint64_t events,
                               std::uint64_t idps) {
        const Tally t = region_tally(region, d);
        report.totals.push_back({label, events, t.events, idps, t.idps});
    };
    const auto& af = reference.africa;
    const auto& as = reference.asia;
    const auto& all = reference.total;
    add_total("Africa/Flood", Region::Africa, Disaster::Flood, af.flood_events, af.flood_idps);
    add_total("Africa/Storm", Region::Africa, Disaster::Storm, af.storm_events, af.storm_idps);
    add_total("Asia/Flood", Region::Asia, Disaster::Flood, as.flood_events, as.flood_idps);
    add_total("Asia/Storm", Region::Asia, Disaster::Storm, as.storm_events, as.storm_idps);
    add_total("Flood", std::nullopt, Disaster::Flood, all.flood_events, all.flood_idps);
    add_total("Storm", std::nullopt, Disaster::Storm, all.storm_events, all.storm_idps);
    add_total("Africa", Region::Africa, std::nullopt, af.flood_events + af.storm_events,
              af.flood_idps + af.storm_idps);
    add_total("Asia", Region::Asia, std::nullopt, as.flood_events + as.storm_events,
              as.flood_idps + as.storm_idps);
    add_total("Global", std::nullopt, std::nullopt, all.flood_events + all.storm_events,
              all.flood_idps + all.storm_idps);
    return report;
}

// ---------------------------------------------------------------------------
// Preprocessing

Preprocessed preprocess(const EventTable& table, const SubsetFilter& filter,
                        const std::optional<StandardizationStats>& stats,
                        const PreprocessOptions& options) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < table.records.size(); ++i) {
        if (filter.matches(table.records[i])) {
            rows.push_back(i);
        }
    }
    if (rows.empty()) {
        fail(ErrorCode::Data, "subset " + filter.label() + " is empty");
    }

    Preprocessed out;
    StandardizationStats& st = out.stats;
    Gathered g;
    if (stats) {
        st = *stats;
        g = gather(table, rows, resolve_columns(table, st.feature_names), st.feature_names,
                   st.log_features);
        if (g.rows.empty()) {
            fail(ErrorCode::Data, "no complete rows left in subset " + filter.label());
        }
    } else {
        const std::vector<std::string> candidates =
            options.features.value_or(table.feature_names);
        for (const auto& name : candidates) {
            if (name == kLogScaledFeature) {
                st.log_features.push_back(name);
            }
        }
        g = gather(table, rows, resolve_columns(table, candidates), candidates, st.log_features);
        if (g.rows.size() < 4) {
            fail(ErrorCode::Data, "subset " + filter.label() + " has " +
                                      std::to_string(g.rows.size()) +
                                      " complete rows, at least 4 are needed");
        }

        std::vector<Eigen::Index> keep;
        std::vector<double> means, stds;
        for (Eigen::Index j = 0; j < g.X.cols(); ++j) {
            const Eigen::VectorXd col = g.X.col(j);
            const double m = col.mean();
            const double s = population_std(col, m);
            const std::string& name = candidates[static_cast<std::size_t>(j)];
            if (s <= 1e-12 * std::max(1.0, std::abs(m))) {
                st.dropped_features.push_back(name);
                continue;
            }
            keep.push_back(j);
            st.feature_names.push_back(name);
            means.push_back(m);
            stds.push_back(s);
        }
        if (keep.empty()) {
            fail(ErrorCode::Data, "every feature is constant in subset " + filter.label());
        }
        Eigen::MatrixXd kept(g.X.rows(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t k = 0; k < keep.size(); ++k) {
            kept.col(static_cast<Eigen::Index>(k)) = g.X.col(keep[k]);
        }
        g.X = std::move(kept);
        std::erase_if(st.log_features, [&](const std::string& f) {
            return std::find(st.feature_names.begin(), st.feature_names.end(), f) ==
                   st.feature_names.end();
        });
        st.mean = Eigen::Map<const Eigen::VectorXd>(means.data(), static_cast<Eigen::Index>(means.size()));
        st.std = Eigen::Map<const Eigen::VectorXd>(stds.data(), static_cast<Eigen::Index>(stds.size()));
    }

    Dataset& ds = out.dataset;
    ds.feature_names = st.feature_names;
    ds.dropped_events = std::move(g.dropped_events);
    ds.X = (g.X.rowwise() - st.mean.transpose()).array().rowwise() / st.std.transpose().array();
    ds.y.resize(static_cast<Eigen::Index>(g.rows.size()));
    for (std::size_t i = 0; i < g.rows.size(); ++i) {
        const auto& rec = table.records[g.rows[i]];
        if (!rec.idp_count) {
            fail(ErrorCode::Data, "event " + rec.event_id + " has no idp_count");
        }
        ds.y[static_cast<Eigen::Index>(i)] = std::log(static_cast<double>(*rec.idp_count));
        ds.meta.push_back({rec.event_id, rec.country, rec.region, rec.disaster});
    }
    if (!stats) {
        st.target_mean = ds.y.mean();
    }
    return out;
}

Eigen::MatrixXd standardize_features(const EventTable& table, const StandardizationStats& stats,
                                     std::vector<std::size_t>& kept) {
    std::vector<std::size_t> rows(table.records.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    Gathered g = gather(table, rows, resolve_columns(table, stats.feature_names),
                        stats.feature_names, stats.log_features);
    kept = std::move(g.rows);
    return (g.X.rowwise() - stats.mean.transpose()).array().rowwise() /
           stats.std.transpose().array();
}

Eigen::MatrixXd unstandardize(const Eigen::MatrixXd& X, const StandardizationStats& stats) {
    Eigen::MatrixXd raw =
        (X.array().rowwise() * stats.std.transpose().array()).rowwise() + stats.mean.transpose().array();
    for (std::size_t j = 0; j < stats.feature_names.size(); ++j) {
        const auto& name = stats.feature_names[j];
        if (std::find(stats.log_features.begin(), stats.log_features.end(), name) !=
            stats.log_features.end()) {
            raw.col(static_cast<Eigen::Index>(j)) = raw.col(static_cast<Eigen::Index>(j)).array().exp();
        }
    }
    return raw;
}

Split split(std::size_t n, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        fail(ErrorCode::InvalidArgument, "train fraction must lie strictly between 0 and 1");
    }
    const auto n_train =
        static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train >= n) {
        fail(ErrorCode::InvalidArgument, "split of " + std::to_string(n) + " rows at fraction " +
                                             format_double(train_fraction) +
                                             " leaves an empty side");
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    Split s;
    s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

}  // namespace idpgp
