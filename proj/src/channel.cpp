// SPDX-License-Identifier: Apache-2.0
//
// dabprec - distortion-aware precoding for nonlinearly amplified MISO downlinks
// Copyright (C) 2026 dabprec contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "dabprec/channel.hpp"

#include <cmath>
#include <numbers>

#include "dabprec/errors.hpp"
#include "dabprec/rng.hpp"

namespace dabprec {

void validate(const GeometryConfig &cfg) {
    if (cfg.M < 1 || cfg.K < 1 || cfg.L < 1)
        throw InvalidInputError("geometry counts M, K, L must all be at least 1");
    if (!(cfg.gamma2 > 0.0) || !std::isfinite(cfg.gamma2))
        throw InvalidInputError("average path loss gamma2 must be positive and finite");
    if (!(cfg.aod_min_deg >= 0.0 && cfg.aod_max_deg <= 180.0 && cfg.aod_min_deg < cfg.aod_max_deg))
        throw InvalidInputError("departure-angle interval must satisfy 0 <= min < max <= 180");
}

Eigen::VectorXcd array_response(double psi_deg, Eigen::Index M) {
    if (M < 1)
        throw InvalidInputError("antenna count must be at least 1");
    const double c = std::cos(psi_deg * std::numbers::pi / 180.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    Eigen::VectorXcd a(M);
    for (Eigen::Index m = 0; m < M; m++) {
        const double phase = -std::numbers::pi * static_cast<double>(m) * c;
        a(m) = std::complex<double>(scale * std::cos(phase), scale * std::sin(phase));
    }
    return a;
}

ChannelSet draw_channels(const GeometryConfig &cfg, std::uint64_t seed) {
    validate(cfg);
    Crng rng(seed);

    ChannelSet out;
    out.seed = seed;
    out.H.setZero(cfg.K, cfg.M);
    out.aods_deg.resize(cfg.K, cfg.L);
    out.gains.resize(cfg.K, cfg.L);

    const double amp = std::sqrt(cfg.gamma2);
    const double path_scale = std::sqrt(static_cast<double>(cfg.M) / static_cast<double>(cfg.L));
    for (Eigen::Index k = 0; k < cfg.K; k++) {
        for (Eigen::Index l = 0; l < cfg.L; l++) {
            const double aod = cfg.aod_min_deg + rng.uniform() * (cfg.aod_max_deg - cfg.aod_min_deg);
            const std::complex<double> gain = amp * rng.gaussian();
            out.aods_deg(k, l) = aod;
            out.gains(k, l) = gain;
            out.H.row(k) += (path_scale * gain) * array_response(aod, cfg.M).transpose();
        }
    }
    return out;
}

ChannelSet steering_channels(const std::vector<double> &user_aods_deg, Eigen::Index M) {
    if (user_aods_deg.empty())
        throw InvalidInputError("at least one user departure angle is required");
    if (M < 1)
        throw InvalidInputError("antenna count must be at least 1");
    for (const double a : user_aods_deg)
        if (!(a >= 0.0 && a <= 180.0))
            throw InvalidInputError("user departure angles must lie in [0, 180] degrees");

    const Eigen::Index K = static_cast<Eigen::Index>(user_aods_deg.size());
    ChannelSet out;
    out.H.resize(K, M);
    out.aods_deg.resize(K, 1);
    out.gains.resize(K, 1);
    // h_k = sqrt(M/1) * gain * a(psi_k) with gain = 1/sqrt(M) reduces to
    // h_k = a(psi_k), keeping the stored paths consistent with the formula.
    const double gain = 1.0 / std::sqrt(static_cast<double>(M));
    for (Eigen::Index k = 0; k < K; k++) {
        out.aods_deg(k, 0) = user_aods_deg[static_cast<std::size_t>(k)];
        out.gains(k, 0) = gain;
        out.H.row(k) = array_response(out.aods_deg(k, 0), M).transpose();
    }
    return out;
}

double noise_power(double snr, double gamma2, double p_tot) {
    if (!(snr > 0.0) || !(gamma2 > 0.0) || !(p_tot > 0.0))
        throw InvalidInputError("snr, gamma2, and p_tot must all be positive");
    return gamma2 * p_tot / snr;
}

} // namespace dabprec
