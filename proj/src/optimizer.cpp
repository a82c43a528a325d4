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

#include "dabprec/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "dabprec/errors.hpp"
#include "dabprec/precoding.hpp"
#include "dabprec/rng.hpp"

namespace dabprec {

namespace {
using cxd = std::complex<double>;
}

void validate(const OptimizerOptions &opts) {
    if (opts.max_iters < 1)
        throw InvalidInputError("iteration budget must be at least 1");
    if (!(opts.mu0 > 0.0) || !std::isfinite(opts.mu0))
        throw InvalidInputError("initial step size must be positive and finite");
    if (opts.n_random_inits < 0)
        throw InvalidInputError("random start count must be nonnegative");
    if (!(opts.stall_tol >= 0.0))
        throw InvalidInputError("stall tolerance must be nonnegative");
}

Eigen::MatrixXcd gamma_matrix(const Eigen::MatrixXcd &P, const Eigen::VectorXcd &h_k,
                              const PaParams &pa) {
    validate(pa);
    if (P.rows() != h_k.size())
        throw InvalidInputError("precoder and channel dimensions do not match");
    const Eigen::VectorXcd s2 = P.rowwise().squaredNorm().cast<cxd>();
    const Eigen::MatrixXcd A0 = h_k.conjugate() * h_k.transpose();
    Eigen::MatrixXcd out = std::norm(pa.beta1) * A0;
    out += (2.0 * pa.beta1 * std::conj(pa.beta3)) * (s2.asDiagonal() * A0);
    out += (2.0 * std::conj(pa.beta1) * pa.beta3) * (A0 * s2.asDiagonal());
    out += (4.0 * std::norm(pa.beta3)) * (s2.asDiagonal() * A0 * s2.asDiagonal());
    return out;
}

Eigen::MatrixXcd upsilon_matrix(const Eigen::MatrixXcd &P, const Eigen::VectorXcd &h_k,
                                const Eigen::VectorXcd &p_r, const PaParams &pa) {
    validate(pa);
    if (P.rows() != h_k.size() || P.rows() != p_r.size())
        throw InvalidInputError("precoder and vector dimensions do not match");
    const Eigen::VectorXcd s2 = P.rowwise().squaredNorm().cast<cxd>();
    const Eigen::VectorXcd v = h_k.cwiseProduct(p_r);
    const cxd s0 = v.sum();
    const cxd sp = v.cwiseProduct(s2).sum();

    const cxd c1 = 2.0 * std::conj(pa.beta1) * pa.beta3;
    const double c3 = 4.0 * std::norm(pa.beta3);
    Eigen::VectorXcd d = c1 * std::conj(s0) * v + std::conj(c1) * s0 * v.conjugate() +
                         c3 * (std::conj(sp) * v + sp * v.conjugate());
    return Eigen::MatrixXcd(d.asDiagonal());
}

Eigen::MatrixXcd sum_rate_gradient(const Eigen::MatrixXcd &P, const ChannelSet &H,
                                   const PaParams &pa, double n0) {
    if (!(n0 > 0.0))
        throw InvalidInputError("noise power must be positive");
    const RateParts parts = rate_parts(P, H, pa);
    const Eigen::Index M = P.rows();
    const Eigen::Index K = P.cols();

    const double cdist = 2.0 * std::norm(pa.beta3);
    const Eigen::MatrixXcd Q = parts.G.cwiseAbs2().cast<cxd>();
    const Eigen::MatrixXcd G2 = parts.G.cwiseProduct(parts.G);

    Eigen::MatrixXcd grad = Eigen::MatrixXcd::Zero(M, K);
    for (Eigen::Index k = 0; k < K; k++) {
        const Eigen::VectorXcd h = H.user_channel(k);
        const Eigen::VectorXcd hc = h.conjugate();
        const Eigen::VectorXcd bh_conj = parts.b.cwiseProduct(h).conjugate();
        const Eigen::MatrixXcd V = h.asDiagonal() * P;

        // eta(m, r) = 2 Re(2 beta3 U(k, r)* V(m, r)), the diagonal of the
        // gain-coupling matrix for the (k, r) term.
        const Eigen::RowVectorXcd urow = parts.U.row(k);
        const Eigen::MatrixXd eta =
            2.0 * ((2.0 * pa.beta3) * (V.array().rowwise() * urow.conjugate().array()))
                      .real()
                      .matrix();

        // Signal term: Gamma_k contributes only to column k; the coupling
        // diagonal eta(:, k) acts on every column.
        Eigen::MatrixXcd dN = eta.col(k).cast<cxd>().asDiagonal() * P;
        dN.col(k) += parts.U(k, k) * bh_conj;

        // Interference term: direct parts for r != k plus summed couplings.
        Eigen::RowVectorXcd umask = urow;
        umask(k) = cxd(0.0, 0.0);
        const Eigen::VectorXcd etasum = (eta.rowwise().sum() - eta.col(k)).cast<cxd>();
        Eigen::MatrixXcd dD = bh_conj * umask + etasum.asDiagonal() * P;

        // Distortion term: 2|b3|^2 (2 diag(h*) |G|^2 diag(h)
        //                           + diag(h) (G o G) diag(h*)) applied to P.
        dD.noalias() += cdist * (2.0 * (hc.asDiagonal() * (Q * V)) +
                                 h.asDiagonal() * (G2 * (hc.asDiagonal() * P)));

        const double nk = parts.signal(k);
        const double dk = parts.mui(k) + parts.dist(k) + n0;
        const double ck = 2.0 / (std::numbers::ln2 * dk * (dk + nk));
        grad += ck * (dk * dN - nk * dD);
    }
    return grad;
}

DabResult dab_precoder(const ChannelSet &H, const PaParams &pa, double n0, double p_tot,
                       const Eigen::MatrixXcd &P0, const OptimizerOptions &opts) {
    validate(opts);
    if (!(p_tot > 0.0))
        throw InvalidInputError("power budget must be positive");
    const double p0 = expected_output_power(P0, pa);
    if (!(std::abs(p0 - p_tot) <= 1e-6 * p_tot))
        throw InvalidInputError("start precoder does not satisfy the power constraint");

    DabResult res;
    res.P = P0;
    double rate = sum_rate(res.P, H, pa, n0);

    AscentTrace &trace = res.trace;
    trace.rates.reserve(static_cast<std::size_t>(opts.max_iters) + 1);
    trace.step_sizes.reserve(static_cast<std::size_t>(opts.max_iters));
    trace.accepted.reserve(static_cast<std::size_t>(opts.max_iters));
    trace.rates.push_back(rate);

    double mu = opts.mu0;
    Eigen::MatrixXcd grad;
    bool grad_valid = false; // the gradient only changes when a step is accepted

    for (int i = 0; i < opts.max_iters; i++) {
        if (!grad_valid) {
            grad = sum_rate_gradient(res.P, H, pa, n0);
            grad_valid = true;
        }
        trace.step_sizes.push_back(mu);

        bool improved = false;
        Eigen::MatrixXcd cand;
        double cand_rate = 0.0;
        try {
            cand = project_power(res.P + mu * grad, pa, p_tot);
            cand_rate = sum_rate(cand, H, pa, n0);
            improved = cand_rate > rate;
        } catch (const ProjectionInfeasibleError &) {
        } catch (const InvalidInputError &) { // candidate direction collapsed to zero
        }

        if (improved) {
            const double prev = rate;
            res.P = std::move(cand);
            rate = cand_rate;
            mu = opts.mu0;
            grad_valid = false;
            trace.accepted.push_back(1);
            trace.rates.push_back(rate);
            if (opts.stall_tol > 0.0 && prev > 0.0 && rate - prev < opts.stall_tol * prev)
                break;
        } else {
            mu *= 0.5;
            trace.accepted.push_back(0);
            trace.rates.push_back(rate);
        }
    }

    while (trace.rates.size() < static_cast<std::size_t>(opts.max_iters) + 1) {
        trace.rates.push_back(rate);
        trace.step_sizes.push_back(mu);
        trace.accepted.push_back(0);
    }
    return res;
}

MultiInitResult multi_init_dab(const ChannelSet &H, const PaParams &pa, double n0, double p_tot,
                               const OptimizerOptions &opts) {
    validate(opts);
    const Eigen::Index M = H.antennas();
    const Eigen::Index K = H.users();

    MultiInitResult res;
    std::vector<Eigen::MatrixXcd> starts;
    if (opts.include_mrt) {
        try {
            starts.push_back(project_power(mrt(H), pa, p_tot));
            res.labels.push_back("mrt");
        } catch (const std::exception &e) {
            res.warnings.push_back(std::string("mrt start skipped: ") + e.what());
        }
    }
    if (opts.include_zf) {
        try {
            starts.push_back(project_power(zf(H), pa, p_tot));
            res.labels.push_back("zf");
        } catch (const std::exception &e) {
            res.warnings.push_back(std::string("zf start skipped: ") + e.what());
        }
    }
    for (int j = 0; j < opts.n_random_inits; j++) {
        Crng rng(derive_seed(opts.seed, streams::kRandomInit, static_cast<std::uint64_t>(j)));
        try {
            starts.push_back(project_power(rng.gaussian_matrix(M, K), pa, p_tot));
            res.labels.push_back("random" + std::to_string(j));
        } catch (const std::exception &e) {
            res.warnings.push_back("random" + std::to_string(j) + " start skipped: " + e.what());
        }
    }
    if (starts.empty())
        throw InvalidInputError("no usable optimizer start");

    const Eigen::Index n = static_cast<Eigen::Index>(starts.size());
    res.traces.resize(starts.size());
    std::vector<Eigen::MatrixXcd> finals(starts.size());
    std::vector<std::string> errors(starts.size());

#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index i = 0; i < n; i++) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            DabResult r = dab_precoder(H, pa, n0, p_tot, starts[idx], opts);
            finals[idx] = std::move(r.P);
            res.traces[idx] = std::move(r.trace);
        } catch (const std::exception &e) {
            errors[idx] = e.what();
        }
    }

    // Reduce in start order; strict comparison sends ties to the earliest.
    Eigen::Index best = -1;
    double best_rate = 0.0;
    for (Eigen::Index i = 0; i < n; i++) {
        const auto idx = static_cast<std::size_t>(i);
        if (!errors[idx].empty()) {
            res.warnings.push_back(res.labels[idx] + " run failed: " + errors[idx]);
            res.traces[idx].rates.assign(static_cast<std::size_t>(opts.max_iters) + 1, 0.0);
            res.traces[idx].step_sizes.assign(static_cast<std::size_t>(opts.max_iters), 0.0);
            res.traces[idx].accepted.assign(static_cast<std::size_t>(opts.max_iters), 0);
            continue;
        }
        const double r = res.traces[idx].rates.back();
        if (best < 0 || r > best_rate) {
            best = i;
            best_rate = r;
        }
    }
    if (best < 0)
        throw InvalidInputError("every optimizer start failed");

    res.P = finals[static_cast<std::size_t>(best)];
    res.winner = res.labels[static_cast<std::size_t>(best)];
    res.rate = best_rate;
    return res;
}

} // namespace dabprec
