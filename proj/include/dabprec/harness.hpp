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

#ifndef DABPREC_HARNESS_HPP
#define DABPREC_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dabprec/channel.hpp"
#include "dabprec/optimizer.hpp"
#include "dabprec/pa_model.hpp"

// Configuration-driven experiment runners. Configs are JSON with a strict
// schema: unknown keys are hard errors reported with their full dotted path,
// decibel quantities are converted to linear watts exactly once here, and
// every run is deterministic in (config, seed) independent of thread count.
// All CSV output carries a header row and serializes floating point with 17
// significant digits.

namespace dabprec {

struct SweepConfig {
    GeometryConfig geometry;
    double gamma2_db = 0.0; // boundary value; geometry.gamma2 is derived from it
    PaParams pa;
    double p_tot_dbm = 43.0;
    std::vector<double> snr_db_list;
    int n_channels = 100;
    OptimizerOptions optimizer;
    std::vector<std::string> precoders{"mrt", "zf", "dab"};
    std::string output_path;
};

struct PatternConfig {
    std::vector<double> user_aods_deg;
    double snr_db = 30.0;
    PaParams pa;
    Eigen::Index M = 16;
    double p_tot_dbm = 43.0;
    double grid_step_deg = 0.25;
    OptimizerOptions optimizer;
    std::string output_path;
};

// Parsers throw ConfigError naming the offending key. Serializers emit every
// semantic field, so parse(serialize(parse(x))) == parse(x) exactly.
SweepConfig parse_sweep_config(const nlohmann::json &j);
PatternConfig parse_pattern_config(const nlohmann::json &j);
SweepConfig load_sweep_config(const std::string &path);
PatternConfig load_pattern_config(const std::string &path);
nlohmann::json to_json(const SweepConfig &cfg);
nlohmann::json to_json(const PatternConfig &cfg);

// "dir/name.csv" -> "dir/name_summary.csv" (suffix appended when there is
// no extension).
std::string summary_path(const std::string &output_path);

// Ergodic sum-rate sweep. Writes one row per (snr_db, realization, precoder)
// to output_path with columns
//   snr_db,realization,precoder,sum_rate_bits
// plus per-SNR aggregates to summary_path(output_path) with columns
//   snr_db,precoder,mean_rate,stderr_rate,n_channels.
// Channel realization r comes from sub-seed (seed, channel-stream, r) and is
// shared across the SNR grid; the optimizer run at (r, snr index s) uses
// sub-seed (seed, run-stream, r * n_snr + s).
void run_sweep(const SweepConfig &cfg);

// Mean best-so-far sum rate per ascent iteration, averaged over
// realizations, at exactly one SNR point (snr_db_list must have one entry).
// Iteration 0 is the best initialization rate. Columns:
//   iteration,mean_rate,snr_db
void run_convergence(const SweepConfig &cfg);

// Far-field patterns for fixed steering channels h_k = a(psi_k) (unit path
// loss). Runs MRT and the ascent precoder, evaluates both pattern
// components over a 0..180 degree grid, and writes columns
//   psi_deg,precoder,linear_power_db,distortion_power_db
// normalized per precoder to its own maximum linear-component power, with a
// -100 dB floor.
void run_pattern(const PatternConfig &cfg);

// Compact oracle/invariant suite (Monte Carlo moment checks, finite
// difference gradient probes, projection and determinism properties).
// Prints one line per check to `out`; returns the number of failures.
int run_validate(std::uint64_t seed, std::ostream &out);

} // namespace dabprec

#endif
