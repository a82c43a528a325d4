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

#ifndef DABPREC_REFERENCE_HPP
#define DABPREC_REFERENCE_HPP

#include <vector>

#include <Eigen/Dense>

#include "dabprec/channel.hpp"
#include "dabprec/metrics.hpp"
#include "dabprec/pa_model.hpp"

// Serial, loop-based reference implementations of the hot kernels. These
// favor element-by-element transcription over vectorization and, where
// possible, an independent computational route (the output power goes
// through the trace identity, the gradient is assembled column by column
// from gamma_matrix / upsilon_matrix products). The test suites compare the
// optimized kernels against these; the benchmark target measures the gap.

namespace dabprec::ref {

Eigen::VectorXcd bussgang_gain(const Eigen::MatrixXcd &P, const PaParams &pa);

Eigen::MatrixXcd distortion_covariance(const Eigen::MatrixXcd &P, const PaParams &pa);

// trace(B PP^H B^H) + trace(C_e), which must equal the moment formula.
double expected_output_power(const Eigen::MatrixXcd &P, const PaParams &pa);

double sum_rate(const Eigen::MatrixXcd &P, const ChannelSet &H, const PaParams &pa, double n0);

Eigen::MatrixXcd sum_rate_gradient(const Eigen::MatrixXcd &P, const ChannelSet &H,
                                   const PaParams &pa, double n0);

std::vector<PatternPoint> radiation_pattern(const Eigen::MatrixXcd &P, const PaParams &pa,
                                            const std::vector<double> &psi_grid_deg);

} // namespace dabprec::ref

#endif
