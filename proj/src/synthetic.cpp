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
#include "idpgp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>

#include <Eigen/Cholesky>

#include "idpgp/error.hpp"

namespace idpgp {

SynthSpec SynthSpec::planted(std::size_t n, std::size_t d, std::vector<std::size_t> relevant,
                             double noise_sigma, std::uint64_t seed, double nu,
                             double gamma_relevant) {
    SynthSpec spec;
    spec.n = n;
    spec.d = d;
    spec.relevant = std::move(relevant);
    spec.noise_sigma = noise_sigma;
    spec.seed = seed;
    spec.true_hp.nu = nu;
    spec.true_hp.gamma = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    for (const std::size_t r : spec.relevant) {
        if (r >= 1 && r <= d) {
            spec.true_hp.gamma[static_cast<Eigen::Index>(r - 1)] = gamma_relevant;
        }
    }
    spec.true_hp.sigma_n = noise_sigma > 0.0 ? noise_sigma : 1e-3;
    spec.validate();
    return spec;
}

void SynthSpec::validate() const {
    if (n < 2 || d < 1) {
        fail(ErrorCode::InvalidArgument, "synthetic data needs n >= 2 and d >= 1");
    }
    if (!(noise_sigma >= 0.0 && std::isfinite(noise_sigma))) {
        fail(ErrorCode::InvalidArgument, "noise_sigma must be non-negative");
    }
    true_hp.validate(static_cast<Eigen::Index>(d));
    const std::set<std::size_t> rel(relevant.begin(), relevant.end());
    for (const std::size_t r : rel) {
        if (r < 1 || r > d) {
            fail(ErrorCode::InvalidArgument,
                 "relevant feature " + std::to_string(r) + " is outside 1.." + std::to_string(d));
        }
    }
    for (std::size_t k = 1; k <= d; ++k) {
        const bool zero = true_hp.gamma[static_cast<Eigen::Index>(k - 1)] == 0.0;
        if (zero == rel.count(k) > 0) {
            fail(ErrorCode::InvalidArgument,
                 "true gamma must be nonzero exactly on the relevant features");
        }
    }
}

Eigen::VectorXd sample_gp_function(const FeatureMatrix& X, const HyperParams& hp,
                                   std::mt19937_64& rng) {
    Eigen::MatrixXd K = kernel_matrix(X, hp, false);
    K.diagonal().array() += 1e-10;
    const Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success) {
        fail(ErrorCode::IllConditioned, "prior covariance is not positive definite");
    }
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(X.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        z[i] = normal(rng);
    }
    return llt.matrixL() * z;
}

SynthData generate(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal;

    const auto n = static_cast<Eigen::Index>(spec.n);
    const auto d = static_cast<Eigen::Index>(spec.d);
    SynthData out;
    out.spec = spec;
    Dataset& ds = out.dataset;
    ds.X.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < d; ++k) {
            ds.X(i, k) = normal(rng);
        }
    }
    out.latent = sample_gp_function(ds.X, spec.true_hp, rng);
    ds.y = out.latent;
    for (Eigen::Index i = 0; i < n; ++i) {
        ds.y[i] += spec.noise_sigma * normal(rng);
    }
    for (Eigen::Index k = 1; k <= d; ++k) {
        ds.feature_names.push_back("x" + std::to_string(k));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        char id[32];
        std::snprintf(id, sizeof(id), "S%05ld", static_cast<long>(i + 1));
        ds.meta.push_back({id, "Synthland", i % 2 == 0 ? Region::Africa : Region::Asia,
                           (i / 2) % 2 == 0 ? Disaster::Flood : Disaster::Storm});
    }
    return out;
}

EventTable to_event_table(const SynthData& data) {
    const Dataset& ds = data.dataset;
    // Counts go through llround, so the largest must stay below e^43.5. The
    // smallest sits at e^10 when the span allows (rounding error below 5e-5
    // in log space) and never below e^3.
    const double lo = ds.y.minCoeff();
    const double hi = ds.y.maxCoeff();
    const double floor_log = std::min(10.0, 43.5 - (hi - lo));
    if (floor_log < 3.0) {
        fail(ErrorCode::Data, "synthetic targets span too many decades for integer counts");
    }
    const double offset = floor_log - lo;

    EventTable table;
    table.feature_names = ds.feature_names;
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
        EventRecord rec;
        const EventMeta& m = ds.meta[static_cast<std::size_t>(i)];
        rec.event_id = m.event_id;
        rec.country = m.country;
        rec.region = m.region;
        rec.disaster = m.disaster;
        rec.date = "2018-01";
        rec.idp_count = static_cast<std::uint64_t>(std::llround(std::exp(ds.y[i] + offset)));
        for (Eigen::Index k = 0; k < ds.dim(); ++k) {
            rec.features.emplace_back(ds.X(i, k));
        }
        table.records.push_back(std::move(rec));
    }
    return table;
}

namespace {

// Event-count reassignments that reconcile the reference rows with the
// published totals; per-country displacement sums are unchanged.
const std::map<std::pair<std::string, Disaster>, std::uint64_t>& fixture_event_overrides() {
    static const std::map<std::pair<std::string, Disaster>, std::uint64_t> overrides = {
        {{"Niger", Disaster::Flood}, 10},        {{"Niger", Disaster::Storm}, 1},
        {{"Mozambique", Disaster::Storm}, 3},    {{"Philippines", Disaster::Flood}, 8},
        {{"Philippines", Disaster::Storm}, 18},
    };
    return overrides;
}

// Splits `total` into `k` positive integers with random proportions.
std::vector<std::uint64_t> split_total(std::uint64_t total, std::uint64_t k, std::mt19937_64& rng) {
    std::lognormal_distribution<double> weight(0.0, 1.0);
    std::vector<double> w(k);
    double sum = 0.0;
    for (auto& v : w) {
        v = weight(rng);
        sum += v;
    }
    const std::uint64_t spare = total - k;
    std::vector<std::uint64_t> parts(k);
    std::uint64_t assigned = 0;
    for (std::uint64_t i = 0; i < k; ++i) {
        parts[i] = 1 + static_cast<std::uint64_t>(std::floor(static_cast<double>(spare) * w[i] / sum));
        assigned += parts[i];
    }
    // Floor rounding leaves at most k - 1 persons; give them to the first event.
    parts[0] += total - assigned;
    return parts;
}

}  // namespace

EventTable reference_fixture(std::uint64_t seed) {
    const ReferenceTable& ref = ReferenceTable::bundled();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> year(2017, 2019);
    std::uniform_int_distribution<int> month(1, 12);

    EventTable table;
    table.feature_names = {"Pop", "Lat", "PrR", "Eva", "VPD", "T", "LE", "ARL", "CO", "GE", "MS"};

    for (const auto& c : ref.countries) {
        // Structural factors are per country.
        const double lat = (c.region == Region::Africa ? 2.0 : 20.0) + 8.0 * normal(rng);
        const double le = (c.region == Region::Africa ? 61.0 : 70.0) + 3.0 * normal(rng);
        const double arl = std::clamp(25.0 + 15.0 * normal(rng), 1.0, 80.0);
        const double co = std::max(0.0, 3000.0 + 4000.0 * normal(rng));
        const double ge = -0.6 + 0.5 * normal(rng);
        const double ms = std::max(0.5, 30.0 + 20.0 * normal(rng));

        for (const Disaster d : {Disaster::Flood, Disaster::Storm}) {
            const bool flood = d == Disaster::Flood;
            std::uint64_t events = flood ? c.flood_events : c.storm_events;
            const std::uint64_t idps = flood ? c.flood_idps : c.storm_idps;
            if (const auto it = fixture_event_overrides().find({c.country, d});
                it != fixture_event_overrides().end()) {
                events = it->second;
            }
            if (events == 0) {
                continue;
            }
            if (idps < events) {
                fail(ErrorCode::Data, "reference row " + c.country + " has fewer persons than events");
            }
            const auto counts = split_total(idps, events, rng);
            for (std::uint64_t e = 0; e < events; ++e) {
                EventRecord rec;
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%s-%s-%02llu", c.country.c_str(),
                              flood ? "F" : "S", static_cast<unsigned long long>(e + 1));
                rec.event_id = buf;
                std::replace(rec.event_id.begin(), rec.event_id.end(), ' ', '_');
                rec.country = c.country;
                rec.region = c.region;
                rec.disaster = d;
                std::snprintf(buf, sizeof(buf), "%04d-%02d", year(rng), month(rng));
                rec.date = buf;
                rec.idp_count = counts[e];
                const double pop = std::exp(13.0 + 1.5 * normal(rng));
                rec.features = {
                    std::round(pop),
                    lat + 0.5 * normal(rng),
                    std::max(0.0, (flood ? 12.0 : 18.0) + 5.0 * normal(rng)),
                    normal(rng),
                    std::max(0.0, 1.2 + 0.4 * normal(rng)),
                    30.0 + 4.0 * normal(rng),
                    le,
                    arl,
                    co,
                    ge,
                    ms,
                };
                table.records.push_back(std::move(rec));
            }
        }
    }
    return table;
}

}  // namespace idpgp
