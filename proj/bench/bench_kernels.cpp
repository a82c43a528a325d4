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
//
// Vectorized kernels vs. the serial loop reference, plus the effect of the
// worker thread count on a full multi-start ascent.

#include <benchmark/benchmark.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dabprec/channel.hpp"
#include "dabprec/metrics.hpp"
#include "dabprec/optimizer.hpp"
#include "dabprec/pa_model.hpp"
#include "dabprec/precoding.hpp"
#include "dabprec/reference.hpp"
#include "dabprec/rng.hpp"
#include "dabprec/units.hpp"

namespace {

const dabprec::PaParams kPa{{0.98, 0.0}, {-0.04, -0.01}};

struct Fixture {
    dabprec::ChannelSet ch;
    Eigen::MatrixXcd P;
    double n0;

    Fixture(Eigen::Index M, Eigen::Index K) {
        dabprec::GeometryConfig geo{M, K, 10, 1.0};
        ch = dabprec::draw_channels(geo, 7);
        const double p_tot = dabprec::dbm_to_watts(43.0);
        dabprec::Crng rng(11);
        P = dabprec::project_power(rng.gaussian_matrix(M, K), kPa, p_tot);
        n0 = dabprec::noise_power(dabprec::db_to_linear(20.0), 1.0, p_tot);
    }
};

void BM_distortion_covariance(benchmark::State &state) {
    const Fixture f(state.range(0), 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(dabprec::distortion_covariance(f.P, kPa));
}

void BM_distortion_covariance_ref(benchmark::State &state) {
    const Fixture f(state.range(0), 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(dabprec::ref::distortion_covariance(f.P, kPa));
}

void BM_gradient(benchmark::State &state) {
    const Fixture f(state.range(0), 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(dabprec::sum_rate_gradient(f.P, f.ch, kPa, f.n0));
}

void BM_gradient_ref(benchmark::State &state) {
    const Fixture f(state.range(0), 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(dabprec::ref::sum_rate_gradient(f.P, f.ch, kPa, f.n0));
}

std::vector<double> pattern_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 720; i++)
        grid.push_back(0.25 * i);
    return grid;
}

void BM_radiation_pattern(benchmark::State &state) {
    const Fixture f(state.range(0), 4);
    const auto grid = pattern_grid();
    for (auto _ : state)
        benchmark::DoNotOptimize(dabprec::radiation_pattern(f.P, kPa, grid));
}

void BM_radiation_pattern_ref(benchmark::State &state) {
    const Fixture f(state.range(0), 4);
    const auto grid = pattern_grid();
    for (auto _ : state)
        benchmark::DoNotOptimize(dabprec::ref::radiation_pattern(f.P, kPa, grid));
}

void BM_multi_init_dab(benchmark::State &state) {
#ifdef _OPENMP
    omp_set_num_threads(static_cast<int>(state.range(0)));
#endif
    const Fixture f(16, 2);
    const double p_tot = dabprec::dbm_to_watts(43.0);
    dabprec::OptimizerOptions opts;
    opts.n_random_inits = 16;
    opts.seed = 3;
    for (auto _ : state)
        benchmark::DoNotOptimize(dabprec::multi_init_dab(f.ch, kPa, f.n0, p_tot, opts));
}

} // namespace

BENCHMARK(BM_distortion_covariance)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_distortion_covariance_ref)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_gradient)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_gradient_ref)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_radiation_pattern)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_radiation_pattern_ref)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_multi_init_dab)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
