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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dabprec/errors.hpp"
#include "dabprec/metrics.hpp"
#include "dabprec/reference.hpp"
#include "test_common.hpp"

using namespace dabprec;
using cxd = std::complex<double>;

namespace {
ChannelSet wrap(const Eigen::MatrixXcd &H) {
    ChannelSet ch;
    ch.H = H;
    return ch;
}
} // namespace

TEST_CASE("single-user linear amplifier reduces to scalar snr") {
    PaParams linear;
    linear.beta1 = {0.98, 0.0};
    Eigen::MatrixXcd H(1, 1), P(1, 1);
    H << cxd(2.0, 0.0);
    P << cxd(1.0, 0.0);
    const ChannelSet ch = wrap(H);
    const SindrBreakdown s = sindr(P, ch, 0, linear, 0.5);
    CHECK(s.signal == doctest::Approx(4.0 * 0.9604).epsilon(1e-14));
    CHECK(s.mui == 0.0);
    CHECK(s.dist == 0.0);
    CHECK(s.noise == 0.5);
    CHECK(s.sindr == doctest::Approx(4.0 * 0.9604 / 0.5).epsilon(1e-14));
    CHECK(sum_rate(P, ch, linear, 0.5) ==
          doctest::Approx(std::log2(1.0 + 4.0 * 0.9604 / 0.5)).epsilon(1e-14));
}

TEST_CASE("orthogonal users with identity precoder see no interference") {
    PaParams linear;
    linear.beta1 = {1.0, 0.0};
    const ChannelSet ch = wrap(Eigen::MatrixXcd::Identity(2, 2));
    const Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(2, 2);
    for (Eigen::Index k = 0; k < 2; k++) {
        const SindrBreakdown s = sindr(P, ch, k, linear, 0.1);
        CHECK(s.mui == 0.0);
        CHECK(s.signal == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(sindr(P, ch, 2, linear, 0.1), InvalidInputError);
}

TEST_CASE("received power splits into signal, interference, and distortion") {
    const PaParams pa = test::amplifier();
    const double p_tot = test::budget_watts();
    GeometryConfig geo{4, 2, 3, 1.0};
    const ChannelSet ch = draw_channels(geo, 51);
    const Eigen::MatrixXcd P = test::random_feasible(4, 2, pa, p_tot, 53);
    const RateParts parts = rate_parts(P, ch, pa);

    const Eigen::Index n = 200000;
    const DistortionSample smp = sample_distortion(P, pa, n, 57);
    for (Eigen::Index k = 0; k < 2; k++) {
        const Eigen::VectorXcd h = ch.user_channel(k);
        const Eigen::RowVectorXcd he = h.transpose() * smp.e;
        const Eigen::RowVectorXcd hy =
            h.transpose() * (parts.b.asDiagonal() * smp.x) + he;
        const double dist_mc = he.squaredNorm() / static_cast<double>(n);
        const double total_mc = hy.squaredNorm() / static_cast<double>(n);
        const double dist = parts.dist(k);
        const double total = parts.signal(k) + parts.mui(k) + parts.dist(k);
        CHECK(std::abs(dist_mc - dist) <= 0.02 * dist);
        CHECK(std::abs(total_mc - total) <= 0.02 * total);
    }
}

TEST_CASE("sum rate decreases with noise power") {
    const PaParams pa = test::amplifier();
    GeometryConfig geo{8, 2, 5, 1.0};
    const ChannelSet ch = draw_channels(geo, 61);
    const Eigen::MatrixXcd P = test::random_feasible(8, 2, pa, test::budget_watts(), 63);
    CHECK(sum_rate(P, ch, pa, 0.1) > sum_rate(P, ch, pa, 0.2));
    CHECK(sum_rate(P, ch, pa, 0.2) > sum_rate(P, ch, pa, 0.4));
}

TEST_CASE("sum rate agrees with the loop reference") {
    const PaParams pa = test::amplifier();
    GeometryConfig geo{6, 3, 4, 1.0};
    const ChannelSet ch = draw_channels(geo, 67);
    const Eigen::MatrixXcd P = test::random_feasible(6, 3, pa, test::budget_watts(), 71);
    const double a = sum_rate(P, ch, pa, 0.3);
    const double b = ref::sum_rate(P, ch, pa, 0.3);
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
}

TEST_CASE("broadside steering yields the pattern peak at 90 degrees") {
    const PaParams pa = test::amplifier();
    const ChannelSet ch = steering_channels({90.0}, 16);
    const Eigen::MatrixXcd P = project_power(mrt(ch), pa, test::budget_watts());
    std::vector<double> grid;
    for (int i = 0; i <= 180; i++)
        grid.push_back(static_cast<double>(i));
    const std::vector<PatternPoint> pts = radiation_pattern(P, pa, grid);
    double best = -1.0;
    double best_psi = -1.0;
    for (const auto &pt : pts)
        if (pt.linear_power > best) {
            best = pt.linear_power;
            best_psi = pt.psi_deg;
        }
    CHECK(best_psi == 90.0);
}

TEST_CASE("pattern averaged uniformly in cos psi recovers the radiated powers") {
    const PaParams pa = test::amplifier();
    const Eigen::Index M = 8;
    const Eigen::MatrixXcd P = test::random_feasible(M, 2, pa, test::budget_watts(), 73);
    const Eigen::VectorXcd b = bussgang_gain(P, pa);
    const Eigen::MatrixXcd G = P * P.adjoint();
    const Eigen::MatrixXcd Ce = distortion_covariance(P, pa);

    const int n = 2048;
    std::vector<double> grid;
    for (int i = 0; i < n; i++) {
        const double c = -1.0 + (i + 0.5) * (2.0 / n);
        grid.push_back(std::acos(c) * 180.0 / std::numbers::pi);
    }
    const std::vector<PatternPoint> pts = radiation_pattern(P, pa, grid);
    double lin = 0.0, dist = 0.0;
    for (const auto &pt : pts) {
        lin += pt.linear_power;
        dist += pt.distortion_power;
    }
    lin = lin / n * static_cast<double>(M);
    dist = dist / n * static_cast<double>(M);

    const double lin_expect = (b.cwiseAbs2().array() * G.diagonal().real().array()).sum();
    const double dist_expect = Ce.trace().real();
    CHECK(std::abs(lin - lin_expect) <= 0.005 * lin_expect);
    CHECK(std::abs(dist - dist_expect) <= 0.005 * dist_expect);
}

TEST_CASE("pattern agrees with the loop reference") {
    const PaParams pa = test::amplifier();
    const Eigen::MatrixXcd P = test::random_feasible(8, 2, pa, test::budget_watts(), 79);
    const std::vector<double> grid{0.0, 17.3, 45.0, 90.0, 133.7, 180.0};
    const auto a = radiation_pattern(P, pa, grid);
    const auto b = ref::radiation_pattern(P, pa, grid);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); i++) {
        CHECK(std::abs(a[i].linear_power - b[i].linear_power) <= 1e-12 * b[i].linear_power);
        CHECK(std::abs(a[i].distortion_power - b[i].distortion_power) <=
              1e-12 * b[i].distortion_power);
    }
}
