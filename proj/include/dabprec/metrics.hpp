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

#ifndef DABPREC_METRICS_HPP
#define DABPREC_METRICS_HPP

#include <vector>

#include <Eigen/Dense>

#include "dabprec/channel.hpp"
#include "dabprec/pa_model.hpp"

// Closed-form link metrics under the Bussgang decomposition: per-user SINDR
// with its signal / multiuser-interference / distortion split, the achievable
// sum rate, and far-field radiation patterns of the linear and distortion
// components. Everything here is exact in the model; Monte Carlo estimates
// exist only in the test suites.

namespace dabprec {

struct SindrBreakdown {
    double signal = 0.0; // |h_k^T B p_k|^2, watts
    double mui = 0.0;    // sum_{r != k} |h_k^T B p_r|^2, watts
    double dist = 0.0;   // h_k^T C_e h_k*, watts
    double noise = 0.0;  // N0, watts
    double sindr = 0.0;  // signal / (mui + dist + noise)
};

// Shared intermediates for rate and gradient evaluation at one precoder.
struct RateParts {
    Eigen::VectorXcd b;    // Bussgang gain diagonal, length M
    Eigen::MatrixXcd G;    // P P^H
    Eigen::MatrixXcd Ce;   // distortion covariance
    Eigen::MatrixXcd U;    // K x K, U(k, r) = h_k^T B p_r
    Eigen::VectorXd signal; // per-user, watts
    Eigen::VectorXd mui;
    Eigen::VectorXd dist;
};

RateParts rate_parts(const Eigen::MatrixXcd &P, const ChannelSet &H, const PaParams &pa);

// Breakdown for user index k (0-based). Throws InvalidInputError when k is
// out of range.
SindrBreakdown sindr(const Eigen::MatrixXcd &P, const ChannelSet &H, Eigen::Index k,
                     const PaParams &pa, double n0);

// sum_k log2(1 + SINDR_k), bits per channel use.
double sum_rate(const Eigen::MatrixXcd &P, const ChannelSet &H, const PaParams &pa, double n0);
double sum_rate(const RateParts &parts, double n0);

struct PatternPoint {
    double psi_deg = 0.0;
    double linear_power = 0.0;     // a^T(psi) B PP^H B^H a*(psi), watts
    double distortion_power = 0.0; // a^T(psi) C_e a*(psi), watts
};

// Evaluates both pattern components on the given angle grid. Both quadratic
// forms are Hermitian PSD, so values are real up to rounding; sub-rounding
// negatives are clipped to zero.
std::vector<PatternPoint> radiation_pattern(const Eigen::MatrixXcd &P, const PaParams &pa,
                                            const std::vector<double> &psi_grid_deg);

} // namespace dabprec

#endif
