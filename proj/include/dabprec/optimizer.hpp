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

#ifndef DABPREC_OPTIMIZER_HPP
#define DABPREC_OPTIMIZER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dabprec/channel.hpp"
#include "dabprec/metrics.hpp"
#include "dabprec/pa_model.hpp"

// Projected gradient ascent on the sum rate: closed-form conjugate-coordinate
// gradient, step halving with reset on acceptance, and a multi-start driver.

namespace dabprec {

struct OptimizerOptions {
    int max_iters = 50;
    double mu0 = 1.0;       // initial step size, restored after every accepted step
    int n_random_inits = 48;
    bool include_mrt = true;
    bool include_zf = true;
    std::uint64_t seed = 0; // master seed for the random starts
    // Early stop once an accepted step improves the rate by less than
    // stall_tol relative; 0 disables and all max_iters iterations run.
    // Rejected steps never trigger it (they are part of the step search).
    double stall_tol = 0.0;
};

void validate(const OptimizerOptions &opts);

// Per-iteration record of one ascent run. rates has length max_iters + 1
// (rates[0] evaluates the start); step_sizes[i] and accepted[i] describe the
// candidate of iteration i + 1. On early stop the tail is padded with the
// final rate and accepted = 0 so lengths are always the same.
struct AscentTrace {
    std::vector<double> rates;
    std::vector<double> step_sizes;
    std::vector<char> accepted;
};

// The rank-one signal-term curvature matrix for user channel h_k: with
// c = b(P) (elementwise) h_k it equals c* c^T, expanded here term by term in
// (beta1, beta3):
//   |b1|^2 h*h^T + 2 b1 b3* D h*h^T + 2 b1* b3 h*h^T D + 4 |b3|^2 D h*h^T D,
// D = diag of per-antenna input powers.
Eigen::MatrixXcd gamma_matrix(const Eigen::MatrixXcd &P, const Eigen::VectorXcd &h_k,
                              const PaParams &pa);

// Diagonal coupling matrix capturing how the per-antenna Bussgang gains move
// with column p_r: with v = h_k (elementwise) p_r, s0 = sum(v) and
// s2 = sum of per-antenna input power times v,
//   diag( 2 b1* b3 v s0* + 2 b1 b3* v* s0 + 4 |b3|^2 (v s2* + v* s2) ),
// which is real elementwise.
Eigen::MatrixXcd upsilon_matrix(const Eigen::MatrixXcd &P, const Eigen::VectorXcd &h_k,
                                const Eigen::VectorXcd &p_r, const PaParams &pa);

// Conjugate-coordinate (Wirtinger) gradient of the sum rate, M x K. The
// scaling is pinned so that entrywise it equals the full real-coordinate
// gradient dR/dRe + j dR/dIm; its direction is the steepest ascent
// direction. See reference.hpp for the loop-based construction from
// gamma_matrix / upsilon_matrix that this vectorized form must match.
Eigen::MatrixXcd sum_rate_gradient(const Eigen::MatrixXcd &P, const ChannelSet &H,
                                   const PaParams &pa, double n0);

struct DabResult {
    Eigen::MatrixXcd P;
    AscentTrace trace;
};

// One ascent run from start P0 (which must already satisfy the power
// constraint): candidate = project_power(P + mu * grad); accept only on
// strict rate improvement, resetting mu to mu0; otherwise halve mu. An
// infeasible projection counts as a rejection, never an abort. The returned
// trace is non-decreasing and the final precoder meets the power budget.
DabResult dab_precoder(const ChannelSet &H, const PaParams &pa, double n0, double p_tot,
                       const Eigen::MatrixXcd &P0, const OptimizerOptions &opts);

struct MultiInitResult {
    Eigen::MatrixXcd P;                 // best final precoder
    std::string winner;                 // label of the winning start
    double rate = 0.0;                  // its final sum rate
    std::vector<std::string> labels;    // all starts, execution order
    std::vector<AscentTrace> traces;    // one per label
    std::vector<std::string> warnings;  // skipped or failed starts
};

// Runs dab_precoder from projected MRT, projected ZF, and n_random_inits
// CN(0,1) starts (seeds derived per init index). Starts that cannot be
// built (e.g. singular channel for ZF) are recorded and skipped. Runs may
// execute concurrently; results are reduced in start order with strict
// greater-than, so exact rate ties go to the earliest start and the output
// never depends on thread count.
MultiInitResult multi_init_dab(const ChannelSet &H, const PaParams &pa, double n0, double p_tot,
                               const OptimizerOptions &opts);

} // namespace dabprec

#endif
