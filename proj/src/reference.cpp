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

#include "dabprec/reference.hpp"

#include <cmath>
#include <numbers>

#include "dabprec/errors.hpp"
#include "dabprec/optimizer.hpp"

namespace dabprec::ref {

namespace {

using cxd = std::complex<double>;

Eigen::MatrixXcd gram(const Eigen::MatrixXcd &P) {
    const Eigen::Index M = P.rows();
    Eigen::MatrixXcd G(M, M);
    for (Eigen::Index i = 0; i < M; i++)
        for (Eigen::Index j = 0; j < M; j++) {
            cxd acc(0.0, 0.0);
            for (Eigen::Index k = 0; k < P.cols(); k++)
                acc += P(i, k) * std::conj(P(j, k));
            G(i, j) = acc;
        }
    return G;
}

} // namespace

Eigen::VectorXcd bussgang_gain(const Eigen::MatrixXcd &P, const PaParams &pa) {
    const Eigen::Index M = P.rows();
    Eigen::VectorXcd b(M);
    for (Eigen::Index m = 0; m < M; m++) {
        double s2 = 0.0;
        for (Eigen::Index k = 0; k < P.cols(); k++)
            s2 += std::norm(P(m, k));
        b(m) = pa.beta1 + 2.0 * pa.beta3 * s2;
    }
    return b;
}

Eigen::MatrixXcd distortion_covariance(const Eigen::MatrixXcd &P, const PaParams &pa) {
    const Eigen::MatrixXcd G = gram(P);
    const double c = 2.0 * std::norm(pa.beta3);
    Eigen::MatrixXcd C(G.rows(), G.cols());
    for (Eigen::Index i = 0; i < G.rows(); i++)
        for (Eigen::Index j = 0; j < G.cols(); j++)
            C(i, j) = c * std::norm(G(i, j)) * G(i, j);
    return C;
}

double expected_output_power(const Eigen::MatrixXcd &P, const PaParams &pa) {
    const Eigen::MatrixXcd G = gram(P);
    const Eigen::VectorXcd b = ref::bussgang_gain(P, pa);
    const Eigen::MatrixXcd C = ref::distortion_covariance(P, pa);
    double total = 0.0;
    for (Eigen::Index m = 0; m < P.rows(); m++)
        total += std::norm(b(m)) * G(m, m).real() + C(m, m).real();
    return total;
}

double sum_rate(const Eigen::MatrixXcd &P, const ChannelSet &H, const PaParams &pa, double n0) {
    if (!(n0 > 0.0))
        throw InvalidInputError("noise power must be positive");
    const Eigen::Index K = H.users();
    const Eigen::Index M = H.antennas();
    const Eigen::VectorXcd b = ref::bussgang_gain(P, pa);
    const Eigen::MatrixXcd C = ref::distortion_covariance(P, pa);

    double rate = 0.0;
    for (Eigen::Index k = 0; k < K; k++) {
        double signal = 0.0, mui = 0.0, dist = 0.0;
        for (Eigen::Index r = 0; r < K; r++) {
            cxd u(0.0, 0.0);
            for (Eigen::Index m = 0; m < M; m++)
                u += H.H(k, m) * b(m) * P(m, r);
            (r == k ? signal : mui) += std::norm(u);
        }
        for (Eigen::Index i = 0; i < M; i++)
            for (Eigen::Index j = 0; j < M; j++)
                dist += (H.H(k, i) * C(i, j) * std::conj(H.H(k, j))).real();
        rate += std::log1p(signal / (mui + dist + n0)) / std::numbers::ln2;
    }
    return rate;
}

Eigen::MatrixXcd sum_rate_gradient(const Eigen::MatrixXcd &P, const ChannelSet &H,
                                   const PaParams &pa, double n0) {
    if (!(n0 > 0.0))
        throw InvalidInputError("noise power must be positive");
    const Eigen::Index K = H.users();
    const Eigen::Index M = H.antennas();
    const Eigen::VectorXcd b = ref::bussgang_gain(P, pa);
    const Eigen::MatrixXcd G = gram(P);
    const Eigen::MatrixXcd C = ref::distortion_covariance(P, pa);
    const double cdist = 2.0 * std::norm(pa.beta3);

    Eigen::MatrixXcd grad = Eigen::MatrixXcd::Zero(M, K);
    for (Eigen::Index k = 0; k < K; k++) {
        const Eigen::VectorXcd h = H.user_channel(k);

        double signal = 0.0, mui = 0.0, dist = 0.0;
        for (Eigen::Index r = 0; r < K; r++) {
            cxd u(0.0, 0.0);
            for (Eigen::Index m = 0; m < M; m++)
                u += h(m) * b(m) * P(m, r);
            (r == k ? signal : mui) += std::norm(u);
        }
        for (Eigen::Index i = 0; i < M; i++)
            for (Eigen::Index j = 0; j < M; j++)
                dist += (h(i) * C(i, j) * std::conj(h(j))).real();

        const Eigen::MatrixXcd Gam = gamma_matrix(P, h, pa);
        Eigen::MatrixXcd dn = Eigen::MatrixXcd::Zero(M, K);
        Eigen::MatrixXcd dd = Eigen::MatrixXcd::Zero(M, K);
        for (Eigen::Index kp = 0; kp < K; kp++) {
            // Signal term: the direct Gamma part only for kp == k; the
            // coupling through the gains always uses the (k, k) pairing.
            dn.col(kp) = upsilon_matrix(P, h, P.col(k), pa) * P.col(kp);
            if (kp == k)
                dn.col(kp) += Gam * P.col(kp);

            // Interference term: direct part for kp != k, couplings summed
            // over the interfering columns.
            if (kp != k)
                dd.col(kp) += Gam * P.col(kp);
            for (Eigen::Index r = 0; r < K; r++)
                if (r != k)
                    dd.col(kp) += upsilon_matrix(P, h, P.col(r), pa) * P.col(kp);

            // Distortion term, element by element.
            for (Eigen::Index m = 0; m < M; m++) {
                cxd acc(0.0, 0.0);
                for (Eigen::Index mp = 0; mp < M; mp++) {
                    acc += 2.0 * std::conj(h(m)) * std::norm(G(m, mp)) * h(mp) * P(mp, kp);
                    acc += h(m) * G(m, mp) * G(m, mp) * std::conj(h(mp)) * P(mp, kp);
                }
                dd(m, kp) += cdist * acc;
            }
        }

        const double dk = mui + dist + n0;
        const double ck = 2.0 / (std::numbers::ln2 * dk * (dk + signal));
        grad += ck * (dk * dn - signal * dd);
    }
    return grad;
}

std::vector<PatternPoint> radiation_pattern(const Eigen::MatrixXcd &P, const PaParams &pa,
                                            const std::vector<double> &psi_grid_deg) {
    const Eigen::Index M = P.rows();
    const Eigen::VectorXcd b = ref::bussgang_gain(P, pa);
    const Eigen::MatrixXcd G = gram(P);
    const Eigen::MatrixXcd C = ref::distortion_covariance(P, pa);

    std::vector<PatternPoint> out;
    out.reserve(psi_grid_deg.size());
    for (const double psi : psi_grid_deg) {
        const Eigen::VectorXcd a = array_response(psi, M);
        double lin = 0.0, dist = 0.0;
        for (Eigen::Index i = 0; i < M; i++)
            for (Eigen::Index j = 0; j < M; j++) {
                const cxd w = a(i) * std::conj(a(j));
                lin += (w * b(i) * G(i, j) * std::conj(b(j))).real();
                dist += (w * C(i, j)).real();
            }
        out.push_back({psi, std::max(0.0, lin), std::max(0.0, dist)});
    }
    return out;
}

} // namespace dabprec::ref
