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

#ifndef DABPREC_PRECODING_HPP
#define DABPREC_PRECODING_HPP

#include <Eigen/Dense>

#include "dabprec/channel.hpp"
#include "dabprec/pa_model.hpp"

// Baseline precoders and the output-power projection. Baselines are returned
// with unit column norms (equal per-user power split) and must be passed
// through project_power() before use under the power constraint.

namespace dabprec {

// Conjugate beamforming: column k is h_k* / ||h_k||, the unit vector
// maximizing |h_k^T p_k|. Throws DegenerateChannelError on a zero channel.
Eigen::MatrixXcd mrt(const ChannelSet &H);

// Interference nulling: P = H^H (H H^H)^{-1} with rows h_k^T, rescaled to
// unit column norms, so h_k^T p_r = 0 for r != k. Throws
// SingularChannelError when K > M or the stacked channel matrix has
// condition number above 1e12.
Eigen::MatrixXcd zf(const ChannelSet &H);

// Scales P by the unique alpha > 0 with E||phi(alpha P s)||^2 = p_tot,
// found by bisection on the cubic (in alpha^2) output-power polynomial over
// (0, 4*alpha_lin] where alpha_lin solves the linear-PA case. Only the
// direction of P matters: project_power(cP) = project_power(P) for c > 0.
// The result is verified to meet p_tot within 1e-8 relative before return.
// Throws InvalidInputError for a zero precoder and
// ProjectionInfeasibleError when no root exists in the bracket (amplifier
// driven outside the validity region of the third-order model).
Eigen::MatrixXcd project_power(const Eigen::MatrixXcd &P, const PaParams &pa, double p_tot);

} // namespace dabprec

#endif
