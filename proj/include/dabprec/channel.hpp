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

#ifndef DABPREC_CHANNEL_HPP
#define DABPREC_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

// Geometric multipath channels for a half-wavelength-spaced uniform linear
// array: h_k = sqrt(M/L) sum_l alpha_{k,l} a(psi_{k,l}) with path gains
// alpha ~ CN(0, gamma2) and departure angles uniform over the configured
// interval. Angles are degrees at every interface and converted to radians
// exactly once, internally.

namespace dabprec {

struct GeometryConfig {
    Eigen::Index M = 1;       // transmit antennas
    Eigen::Index K = 1;       // single-antenna users
    Eigen::Index L = 1;       // propagation paths per user
    double gamma2 = 1.0;      // average path loss, linear
    double aod_min_deg = 0.0; // departure-angle interval
    double aod_max_deg = 180.0;
};

// Throws InvalidInputError on out-of-range fields.
void validate(const GeometryConfig &cfg);

struct ChannelSet {
    // Row k is h_k^T, so H * x stacks the per-user inner products h_k^T x.
    Eigen::MatrixXcd H;        // K x M
    Eigen::MatrixXd aods_deg;  // K x L
    Eigen::MatrixXcd gains;    // K x L
    std::uint64_t seed = 0;

    Eigen::Index users() const { return H.rows(); }
    Eigen::Index antennas() const { return H.cols(); }
    // h_k as a column vector.
    Eigen::VectorXcd user_channel(Eigen::Index k) const { return H.row(k).transpose(); }
};

// Unit-norm steering vector, entry m (0-based): exp(-j pi m cos(psi)) / sqrt(M).
Eigen::VectorXcd array_response(double psi_deg, Eigen::Index M);

// Draws one channel realization; deterministic in the seed. Per user k, the
// AoD then the complex gain of each path are drawn in path order.
ChannelSet draw_channels(const GeometryConfig &cfg, std::uint64_t seed);

// Fixed line-of-sight construction h_k = a(psi_k) with unit path loss, for
// radiation-pattern scenarios.
ChannelSet steering_channels(const std::vector<double> &user_aods_deg, Eigen::Index M);

// N0 = gamma2 * p_tot / snr (all linear, powers in watts).
double noise_power(double snr, double gamma2, double p_tot);

} // namespace dabprec

#endif
