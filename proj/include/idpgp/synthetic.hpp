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
#include <random>
#include <vector>

#include <Eigen/Core>

#include "idpgp/data.hpp"
#include "idpgp/kernels.hpp"

namespace idpgp {

/// Ground truth for a planted-relevance dataset.
struct SynthSpec {
    std::size_t n = 200;
    std::size_t d = 10;
    /// 1-based indices of the features with nonzero gamma.
    std::vector<std::size_t> relevant = {1, 4};
    HyperParams true_hp;
    double noise_sigma = 0.3;
    std::uint64_t seed = 0;

    /// gamma_d = gamma_relevant on the relevant set and 0 elsewhere;
    /// sigma_n = noise_sigma (1e-3 when the noise is zero).
    static SynthSpec planted(std::size_t n, std::size_t d, std::vector<std::size_t> relevant,
                             double noise_sigma, std::uint64_t seed, double nu = 4.0,
                             double gamma_relevant = 0.5);

    void validate() const;
};

struct SynthData {
    /// Features x1..xd, y = f + noise.
    Dataset dataset;
    /// Noise-free latent values f.
    Eigen::VectorXd latent;
    SynthSpec spec;
};

/// Draws f ~ GP(0, k) at the rows of X using the noise-free composite kernel
/// (plus 1e-10 on the diagonal).
Eigen::VectorXd sample_gp_function(const FeatureMatrix& X, const HyperParams& hp,
                                   std::mt19937_64& rng);

/// X ~ N(0, I) row by row, then f, then the noise, all from one seeded stream.
SynthData generate(const SynthSpec& spec);

/// Event-table form of a synthetic dataset, loadable by the regular pipeline.
/// idp_count = round(exp(y + offset)). The offset puts the smallest count at
/// e^10 (less when the targets span more than 33.5 log units), so rounding is
/// negligible in log space; metadata alternates over the region and disaster
/// values. Throws Data when the span exceeds 40.5.
EventTable to_event_table(const SynthData& data);

/// Event-level fixture consistent with the bundled reference totals, with
/// synthetic covariates (Pop, Lat, PrR, Eva, VPD, T, LE, ARL, CO, GE, MS).
EventTable reference_fixture(std::uint64_t seed = 2019);

}  // namespace idpgp
