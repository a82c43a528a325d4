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

#ifndef DABPREC_RNG_HPP
#define DABPREC_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include <Eigen/Dense>

// Reproducibility scheme
// ----------------------
// Every random quantity in the library is produced by a SplitMix64 stream
// whose seed is derived from (master seed, stream tag, index) through
// derive_seed(). Workers never share generator state, so results are
// independent of thread count, scheduling, and batch size: realization r is
// always drawn from derive_seed(master, kChannel, r), random initialization
// j from derive_seed(run_seed, kRandomInit, j), Monte Carlo chunk c from
// derive_seed(seed, kSymbols, c), and so on. All generation uses only
// 64-bit integer arithmetic plus libm, identical across platforms.

namespace dabprec {

inline constexpr std::uint64_t kSeedIncrement = 0x9e3779b97f4a7c15ull;

// SplitMix64 output finalizer (stateless bijective mixer).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class SplitMix64 {
  public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += kSeedIncrement;
        return mix64(state_);
    }

  private:
    std::uint64_t state_;
};

// Derives an independent sub-seed for (stream, index) under a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
    const std::uint64_t x = mix64(master + kSeedIncrement * (stream + 1));
    return mix64(x + kSeedIncrement * (index + 1));
}

namespace streams {
inline constexpr std::uint64_t kChannel = 1;    // channel realizations, index = realization
inline constexpr std::uint64_t kRandomInit = 2; // optimizer random starts, index = init
inline constexpr std::uint64_t kSymbols = 3;    // Monte Carlo symbol draws, index = chunk
inline constexpr std::uint64_t kRun = 4;        // per-(realization, operating point) run seeds
} // namespace streams

// Deterministic scalar/complex-Gaussian source.
class Crng {
  public:
    explicit Crng(std::uint64_t seed) : gen_(seed) {}

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(gen_.next() >> 11) * 0x1.0p-53; }

    // Circularly symmetric complex Gaussian, zero mean, unit total variance
    // (real and imaginary parts each have variance 1/2). Box-Muller on
    // u1 in (0, 1] keeps the logarithm finite.
    std::complex<double> gaussian() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));
        const double th = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(th), r * std::sin(th)};
    }

    Eigen::VectorXcd gaussian_vector(Eigen::Index n) {
        Eigen::VectorXcd v(n);
        for (Eigen::Index i = 0; i < n; i++)
            v(i) = gaussian();
        return v;
    }

    // Column-major fill order.
    Eigen::MatrixXcd gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXcd m(rows, cols);
        for (Eigen::Index c = 0; c < cols; c++)
            for (Eigen::Index r = 0; r < rows; r++)
                m(r, c) = gaussian();
        return m;
    }

  private:
    SplitMix64 gen_;
};

} // namespace dabprec

#endif
