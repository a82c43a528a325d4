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

#ifndef DABPREC_PA_MODEL_HPP
#define DABPREC_PA_MODEL_HPP

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

// Third-order memoryless power-amplifier model phi(x) = beta1*x + beta3*x|x|^2
// applied per antenna, and its Bussgang decomposition phi(x) = Bx + e for
// circularly symmetric Gaussian x = Ps: B is diagonal with entries
// beta1 + 2*beta3*sigma2_m (sigma2_m = [PP^H]_mm), and the distortion e is
// uncorrelated with x with covariance C_e = 2|beta3|^2 (PP^H @ P*P^T @ PP^H)
// where @ is the elementwise product.

namespace dabprec {

struct PaParams {
    std::complex<double> beta1{1.0, 0.0};
    std::complex<double> beta3{0.0, 0.0};
};

// Throws InvalidInputError unless both coefficients are finite and beta1 != 0.
void validate(const PaParams &pa);

// Elementwise phi(x_m) = beta1*x_m + beta3*x_m*|x_m|^2.
Eigen::VectorXcd apply_pa(const Eigen::VectorXcd &x, const PaParams &pa);

// Diagonal of the Bussgang gain matrix B(P), length M. B is provably
// diagonal under the per-antenna memoryless model, so only the diagonal is
// ever stored.
Eigen::VectorXcd bussgang_gain(const Eigen::MatrixXcd &P, const PaParams &pa);

// Distortion covariance C_e(P); entry (i,j) = 2|beta3|^2 |G_ij|^2 G_ij with
// G = PP^H. Hermitian positive semidefinite.
Eigen::MatrixXcd distortion_covariance(const Eigen::MatrixXcd &P, const PaParams &pa);

// Average PA output power E||phi(Ps)||^2 in watts for s ~ CN(0, I), from the
// Gaussian moments E|x|^4 = 2 sigma^4 and E|x|^6 = 6 sigma^6:
//   sum_m ( |beta1|^2 s2_m + 4 Re(beta1* beta3) s2_m^2 + 6 |beta3|^2 s2_m^3 )
// with s2_m = [PP^H]_mm. Equals trace(B PP^H B^H) + trace(C_e) exactly.
double expected_output_power(const Eigen::MatrixXcd &P, const PaParams &pa);

// Same moment formula from per-antenna input powers sigma2_m directly.
double expected_output_power(const Eigen::VectorXd &sigma2, const PaParams &pa);

// n joint samples of the PA input x = Ps and the Bussgang distortion
// e = phi(x) - B(P)x, stored column per sample. Materializes both matrices;
// use distortion_moments() for large n.
struct DistortionSample {
    Eigen::MatrixXcd x; // M x n
    Eigen::MatrixXcd e; // M x n
};
DistortionSample sample_distortion(const Eigen::MatrixXcd &P, const PaParams &pa, Eigen::Index n,
                                   std::uint64_t seed);

// Streaming empirical moments of (x, e) over n samples:
//   xe = (1/n) sum x e^H,   ee = (1/n) sum e e^H,
// with per-entry complex standard errors (sqrt of complex sample variance
// of the per-sample products, divided by sqrt(n)). Samples are drawn in
// fixed-size chunks with one derived sub-stream per chunk and reduced in
// chunk order, so the result is identical for any thread count and matches
// sample_distortion() for the same seed.
struct DistortionMoments {
    Eigen::MatrixXcd xe;
    Eigen::MatrixXcd ee;
    Eigen::MatrixXd xe_se;
    Eigen::MatrixXd ee_se;
    Eigen::Index n = 0;
};
DistortionMoments distortion_moments(const Eigen::MatrixXcd &P, const PaParams &pa, Eigen::Index n,
                                     std::uint64_t seed);

// Monte Carlo estimate of E||phi(Ps)||^2 over n samples; same chunked
// deterministic scheme as distortion_moments.
double mc_output_power(const Eigen::MatrixXcd &P, const PaParams &pa, Eigen::Index n,
                       std::uint64_t seed);

} // namespace dabprec

#endif
