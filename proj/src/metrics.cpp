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

#include "dabprec/metrics.hpp"

#include <cmath>
#include <numbers>

#include "dabprec/errors.hpp"

namespace dabprec {

RateParts rate_parts(const Eigen::MatrixXcd &P, const ChannelSet &H, const PaParams &pa) {
    if (P.rows() != H.antennas() || P.cols() != H.users())
        throw InvalidInputError("precoder shape does not match the channel set");

    RateParts parts;
    parts.b = bussgang_gain(P, pa);
    parts.G = P * P.adjoint();
    parts.Ce = (2.0 * std::norm(pa.beta3) * parts.G.array().abs2() * parts.G.array()).matrix();
    parts.U = H.H * (parts.b.asDiagonal() * P);

    const Eigen::Index K = H.users();
    parts.signal.resize(K);
    parts.mui.resize(K);
    parts.dist.resize(K);
    const Eigen::VectorXd row_power = parts.U.rowwise().squaredNorm();
    const Eigen::VectorXd quad =
        (H.H * parts.Ce).cwiseProduct(H.H.conjugate()).rowwise().sum().real();
    for (Eigen::Index k = 0; k < K; k++) {
        parts.signal(k) = std::norm(parts.U(k, k));
        parts.mui(k) = std::max(0.0, row_power(k) - parts.signal(k));
        parts.dist(k) = std::max(0.0, quad(k));
    }
    return parts;
}

SindrBreakdown sindr(const Eigen::MatrixXcd &P, const ChannelSet &H, Eigen::Index k,
                     const PaParams &pa, double n0) {
    if (k < 0 || k >= H.users())
        throw InvalidInputError("user index " + std::to_string(k) + " out of range");
    if (!(n0 > 0.0))
        throw InvalidInputError("noise power must be positive");

    const RateParts parts = rate_parts(P, H, pa);
    SindrBreakdown out;
    out.signal = parts.signal(k);
    out.mui = parts.mui(k);
    out.dist = parts.dist(k);
    out.noise = n0;
    out.sindr = out.signal / (out.mui + out.dist + out.noise);
    return out;
}

double sum_rate(const RateParts &parts, double n0) {
    if (!(n0 > 0.0))
        throw InvalidInputError("noise power must be positive");
    double rate = 0.0;
    for (Eigen::Index k = 0; k < parts.signal.size(); k++) {
        const double s = parts.signal(k) / (parts.mui(k) + parts.dist(k) + n0);
        rate += std::log1p(s) / std::numbers::ln2;
    }
    return rate;
}

double sum_rate(const Eigen::MatrixXcd &P, const ChannelSet &H, const PaParams &pa, double n0) {
    return sum_rate(rate_parts(P, H, pa), n0);
}

std::vector<PatternPoint> radiation_pattern(const Eigen::MatrixXcd &P, const PaParams &pa,
                                            const std::vector<double> &psi_grid_deg) {
    if (psi_grid_deg.empty())
        throw InvalidInputError("pattern grid must be nonempty");

    const Eigen::Index M = P.rows();
    const Eigen::VectorXcd b = bussgang_gain(P, pa);
    const Eigen::MatrixXcd G = P * P.adjoint();
    const Eigen::MatrixXcd lin_kernel = b.asDiagonal() * G * b.conjugate().asDiagonal();
    const Eigen::MatrixXcd Ce =
        (2.0 * std::norm(pa.beta3) * G.array().abs2() * G.array()).matrix();

    const Eigen::Index n = static_cast<Eigen::Index>(psi_grid_deg.size());
    std::vector<PatternPoint> out(psi_grid_deg.size());
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; i++) {
        const Eigen::VectorXcd a = array_response(psi_grid_deg[static_cast<std::size_t>(i)], M);
        const Eigen::VectorXcd ac = a.conjugate();
        PatternPoint pt;
        pt.psi_deg = psi_grid_deg[static_cast<std::size_t>(i)];
        pt.linear_power = std::max(0.0, (a.transpose() * (lin_kernel * ac))(0).real());
        pt.distortion_power = std::max(0.0, (a.transpose() * (Ce * ac))(0).real());
        out[static_cast<std::size_t>(i)] = pt;
    }
    return out;
}

} // namespace dabprec
