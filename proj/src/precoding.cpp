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

#include "dabprec/precoding.hpp"

#include <cmath>

#include "dabprec/errors.hpp"

namespace dabprec {

Eigen::MatrixXcd mrt(const ChannelSet &H) {
    const Eigen::Index K = H.users();
    const Eigen::Index M = H.antennas();
    if (K < 1 || M < 1)
        throw InvalidInputError("channel set is empty");

    Eigen::MatrixXcd P(M, K);
    for (Eigen::Index k = 0; k < K; k++) {
        const Eigen::VectorXcd h = H.user_channel(k);
        const double nrm = h.norm();
        if (nrm == 0.0)
            throw DegenerateChannelError("zero channel vector for user " + std::to_string(k));
        P.col(k) = h.conjugate() / nrm;
    }
    return P;
}

Eigen::MatrixXcd zf(const ChannelSet &H) {
    const Eigen::Index K = H.users();
    const Eigen::Index M = H.antennas();
    if (K < 1 || M < 1)
        throw InvalidInputError("channel set is empty");
    if (K > M)
        throw SingularChannelError("interference nulling needs K <= M, got K = " +
                                   std::to_string(K) + ", M = " + std::to_string(M));

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H.H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double smin = sv(K - 1);
    if (smin == 0.0 || sv(0) / smin > 1e12)
        throw SingularChannelError("stacked channel matrix is rank deficient or too ill-conditioned");

    // H^H (H H^H)^{-1} = V diag(1/s) U^H for the thin SVD H = U diag(s) V^H.
    Eigen::MatrixXcd P =
        svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
    for (Eigen::Index k = 0; k < K; k++)
        P.col(k) /= P.col(k).norm();
    return P;
}

Eigen::MatrixXcd project_power(const Eigen::MatrixXcd &P, const PaParams &pa, double p_tot) {
    validate(pa);
    if (!P.allFinite())
        throw InvalidInputError("precoder must be finite");
    if (!(p_tot > 0.0) || !std::isfinite(p_tot))
        throw InvalidInputError("power budget must be positive and finite");

    const Eigen::VectorXd sigma2 = P.rowwise().squaredNorm();
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (Eigen::Index m = 0; m < sigma2.size(); m++) {
        const double s = sigma2(m);
        s1 += s;
        s2 += s * s;
        s3 += s * s * s;
    }
    if (s1 == 0.0)
        throw InvalidInputError("cannot project a zero precoder");

    // E||phi(alpha P s)||^2 = a t + b t^2 + c t^3 in t = alpha^2.
    const double a = std::norm(pa.beta1) * s1;
    const double b = 4.0 * (std::conj(pa.beta1) * pa.beta3).real() * s2;
    const double c = 6.0 * std::norm(pa.beta3) * s3;
    const double t_lin = p_tot / a;

    double t = t_lin;
    if (pa.beta3 != std::complex<double>(0.0, 0.0)) {
        const auto g = [&](double tt) { return tt * (a + tt * (b + tt * c)) - p_tot; };
        double lo = 0.0;
        double hi = 16.0 * t_lin;
        if (g(hi) < 0.0)
            throw ProjectionInfeasibleError(
                "output-power equation has no root in the search bracket");
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; it++) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) < 0.0 ? lo : hi) = mid;
        }
        t = hi;
    }

    const double achieved = expected_output_power(Eigen::VectorXd(t * sigma2), pa);
    if (!(std::abs(achieved - p_tot) <= 1e-8 * p_tot))
        throw ProjectionInfeasibleError("projected power misses the budget beyond tolerance");
    return std::sqrt(t) * P;
}

} // namespace dabprec
