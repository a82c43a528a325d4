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

#include "dabprec/pa_model.hpp"

#include <cmath>
#include <vector>

#include "dabprec/errors.hpp"
#include "dabprec/rng.hpp"

namespace dabprec {

namespace {

constexpr Eigen::Index kMcChunk = 16384;

bool finite(const std::complex<double> &z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Symbol matrix for Monte Carlo chunk c: K x count, column-major draw order.
Eigen::MatrixXcd chunk_symbols(Eigen::Index K, Eigen::Index count, std::uint64_t seed,
                               Eigen::Index chunk) {
    Crng rng(derive_seed(seed, streams::kSymbols, static_cast<std::uint64_t>(chunk)));
    return rng.gaussian_matrix(K, count);
}

} // namespace

void validate(const PaParams &pa) {
    if (!finite(pa.beta1) || !finite(pa.beta3))
        throw InvalidInputError("PA coefficients must be finite");
    if (pa.beta1 == std::complex<double>(0.0, 0.0))
        throw InvalidInputError("PA linear gain beta1 must be nonzero");
}

Eigen::VectorXcd apply_pa(const Eigen::VectorXcd &x, const PaParams &pa) {
    validate(pa);
    if (!x.allFinite())
        throw InvalidInputError("PA input vector must be finite");
    return pa.beta1 * x.array() + pa.beta3 * x.array() * x.array().abs2();
}

Eigen::VectorXcd bussgang_gain(const Eigen::MatrixXcd &P, const PaParams &pa) {
    validate(pa);
    if (!P.allFinite())
        throw InvalidInputError("precoder must be finite");
    const Eigen::VectorXd sigma2 = P.rowwise().squaredNorm();
    return (pa.beta1 + 2.0 * pa.beta3 * sigma2.array()).matrix();
}

Eigen::MatrixXcd distortion_covariance(const Eigen::MatrixXcd &P, const PaParams &pa) {
    validate(pa);
    if (!P.allFinite())
        throw InvalidInputError("precoder must be finite");
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(P.rows(), P.rows());
    G.selfadjointView<Eigen::Lower>().rankUpdate(P);
    G = G.selfadjointView<Eigen::Lower>();
    const double c = 2.0 * std::norm(pa.beta3);
    return (c * G.array().abs2() * G.array()).matrix();
}

double expected_output_power(const Eigen::VectorXd &sigma2, const PaParams &pa) {
    validate(pa);
    if (!sigma2.allFinite() || (sigma2.array() < 0.0).any())
        throw InvalidInputError("per-antenna input powers must be finite and nonnegative");
    const double a1 = std::norm(pa.beta1);
    const double a2 = 4.0 * (std::conj(pa.beta1) * pa.beta3).real();
    const double a3 = 6.0 * std::norm(pa.beta3);
    double total = 0.0;
    for (Eigen::Index m = 0; m < sigma2.size(); m++) {
        const double s = sigma2(m);
        total += a1 * s + a2 * s * s + a3 * s * s * s;
    }
    return total;
}

double expected_output_power(const Eigen::MatrixXcd &P, const PaParams &pa) {
    if (!P.allFinite())
        throw InvalidInputError("precoder must be finite");
    return expected_output_power(Eigen::VectorXd(P.rowwise().squaredNorm()), pa);
}

DistortionSample sample_distortion(const Eigen::MatrixXcd &P, const PaParams &pa, Eigen::Index n,
                                   std::uint64_t seed) {
    validate(pa);
    if (n < 1)
        throw InvalidInputError("sample count must be at least 1");
    const Eigen::Index M = P.rows();
    const Eigen::VectorXcd b = bussgang_gain(P, pa);

    DistortionSample out;
    out.x.resize(M, n);
    out.e.resize(M, n);
    for (Eigen::Index start = 0, chunk = 0; start < n; start += kMcChunk, chunk++) {
        const Eigen::Index count = std::min(kMcChunk, n - start);
        const Eigen::MatrixXcd s = chunk_symbols(P.cols(), count, seed, chunk);
        const Eigen::MatrixXcd x = P * s;
        for (Eigen::Index j = 0; j < count; j++) {
            out.x.col(start + j) = x.col(j);
            out.e.col(start + j) = apply_pa(x.col(j), pa) - b.cwiseProduct(x.col(j));
        }
    }
    return out;
}

DistortionMoments distortion_moments(const Eigen::MatrixXcd &P, const PaParams &pa, Eigen::Index n,
                                     std::uint64_t seed) {
    validate(pa);
    if (n < 1)
        throw InvalidInputError("sample count must be at least 1");
    const Eigen::Index M = P.rows();
    const Eigen::VectorXcd b = bussgang_gain(P, pa);
    const Eigen::Index nchunks = (n + kMcChunk - 1) / kMcChunk;

    std::vector<Eigen::MatrixXcd> xe_sum(nchunks), ee_sum(nchunks);
    std::vector<Eigen::MatrixXd> xe_sq(nchunks), ee_sq(nchunks);

#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index c = 0; c < nchunks; c++) {
        const Eigen::Index start = c * kMcChunk;
        const Eigen::Index count = std::min(kMcChunk, n - start);
        const Eigen::MatrixXcd s = chunk_symbols(P.cols(), count, seed, c);
        Eigen::MatrixXcd xe = Eigen::MatrixXcd::Zero(M, M);
        Eigen::MatrixXcd ee = Eigen::MatrixXcd::Zero(M, M);
        Eigen::MatrixXd xe2 = Eigen::MatrixXd::Zero(M, M);
        Eigen::MatrixXd ee2 = Eigen::MatrixXd::Zero(M, M);
        const Eigen::MatrixXcd xall = P * s;
        for (Eigen::Index j = 0; j < count; j++) {
            const Eigen::VectorXcd x = xall.col(j);
            const Eigen::VectorXcd e = apply_pa(x, pa) - b.cwiseProduct(x);
            const Eigen::MatrixXcd zx = x * e.adjoint();
            const Eigen::MatrixXcd ze = e * e.adjoint();
            xe += zx;
            ee += ze;
            xe2 += zx.array().abs2().matrix();
            ee2 += ze.array().abs2().matrix();
        }
        xe_sum[c] = xe;
        ee_sum[c] = ee;
        xe_sq[c] = xe2;
        ee_sq[c] = ee2;
    }

    Eigen::MatrixXcd xe = Eigen::MatrixXcd::Zero(M, M);
    Eigen::MatrixXcd ee = Eigen::MatrixXcd::Zero(M, M);
    Eigen::MatrixXd xe2 = Eigen::MatrixXd::Zero(M, M);
    Eigen::MatrixXd ee2 = Eigen::MatrixXd::Zero(M, M);
    for (Eigen::Index c = 0; c < nchunks; c++) {
        xe += xe_sum[c];
        ee += ee_sum[c];
        xe2 += xe_sq[c];
        ee2 += ee_sq[c];
    }

    const double dn = static_cast<double>(n);
    DistortionMoments out;
    out.n = n;
    out.xe = xe / dn;
    out.ee = ee / dn;
    out.xe_se = ((xe2 / dn - out.xe.array().abs2().matrix()).cwiseMax(0.0) / dn).cwiseSqrt();
    out.ee_se = ((ee2 / dn - out.ee.array().abs2().matrix()).cwiseMax(0.0) / dn).cwiseSqrt();
    return out;
}

double mc_output_power(const Eigen::MatrixXcd &P, const PaParams &pa, Eigen::Index n,
                       std::uint64_t seed) {
    validate(pa);
    if (n < 1)
        throw InvalidInputError("sample count must be at least 1");
    const Eigen::Index nchunks = (n + kMcChunk - 1) / kMcChunk;
    std::vector<double> partial(nchunks, 0.0);

#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index c = 0; c < nchunks; c++) {
        const Eigen::Index start = c * kMcChunk;
        const Eigen::Index count = std::min(kMcChunk, n - start);
        const Eigen::MatrixXcd s = chunk_symbols(P.cols(), count, seed, c);
        const Eigen::MatrixXcd x = P * s;
        double acc = 0.0;
        for (Eigen::Index j = 0; j < count; j++)
            acc += apply_pa(x.col(j), pa).squaredNorm();
        partial[c] = acc;
    }

    double total = 0.0;
    for (Eigen::Index c = 0; c < nchunks; c++)
        total += partial[c];
    return total / static_cast<double>(n);
}

} // namespace dabprec
