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

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "dabprec/errors.hpp"
#include "dabprec/harness.hpp"

namespace {

// Thread count precedence: --threads flag, then DABPREC_THREADS, then the
// OpenMP runtime default. Results are thread-count independent either way.
void apply_threads(int cli_threads) {
    int n = 0;
    if (cli_threads > 0) {
        n = cli_threads;
    } else if (const char *env = std::getenv("DABPREC_THREADS")) {
        n = std::atoi(env);
        if (n <= 0)
            throw dabprec::ConfigError("DABPREC_THREADS must be a positive integer");
    }
#ifdef _OPENMP
    if (n > 0)
        omp_set_num_threads(n);
#else
    (void)n;
#endif
}

const char *error_kind(const std::exception &e) {
    if (dynamic_cast<const dabprec::ConfigError *>(&e))
        return "config_error";
    if (dynamic_cast<const dabprec::DegenerateChannelError *>(&e))
        return "degenerate_channel";
    if (dynamic_cast<const dabprec::SingularChannelError *>(&e))
        return "singular_channel";
    if (dynamic_cast<const dabprec::ProjectionInfeasibleError *>(&e))
        return "projection_infeasible";
    if (dynamic_cast<const dabprec::InvalidInputError *>(&e))
        return "invalid_input";
    return "error";
}

void print_error(const char *kind, const std::string &message) {
    std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"dabprec: distortion-aware precoding experiment harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    int threads = 0;

    CLI::App *sweep = app.add_subcommand("sweep", "per-realization sum rates over an SNR grid");
    CLI::App *converge =
        app.add_subcommand("converge", "mean best-so-far rate per ascent iteration");
    CLI::App *pattern =
        app.add_subcommand("pattern", "angular linear/distortion radiation patterns");
    CLI::App *validate = app.add_subcommand("validate", "run the oracle and invariant suite");

    for (CLI::App *sub : {sweep, converge, pattern}) {
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--seed", seed, "master seed override");
        sub->add_option("--out", out_path, "output CSV path override");
        sub->add_option("--threads", threads, "worker thread count");
    }
    validate->add_option("--seed", seed, "master seed for the statistical checks");
    validate->add_option("--threads", threads, "worker thread count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        print_error("usage_error", e.what());
        return 2;
    }

    try {
        apply_threads(threads);
        if (sweep->parsed() || converge->parsed()) {
            CLI::App *sub = sweep->parsed() ? sweep : converge;
            dabprec::SweepConfig cfg = dabprec::load_sweep_config(config_path);
            if (sub->count("--seed") > 0)
                cfg.optimizer.seed = seed;
            if (sub->count("--out") > 0)
                cfg.output_path = out_path;
            if (sweep->parsed())
                dabprec::run_sweep(cfg);
            else
                dabprec::run_convergence(cfg);
        } else if (pattern->parsed()) {
            dabprec::PatternConfig cfg = dabprec::load_pattern_config(config_path);
            if (pattern->count("--seed") > 0)
                cfg.optimizer.seed = seed;
            if (pattern->count("--out") > 0)
                cfg.output_path = out_path;
            dabprec::run_pattern(cfg);
        } else {
            const std::uint64_t s = validate->count("--seed") > 0 ? seed : 1;
            const int failures = dabprec::run_validate(s, std::cout);
            if (failures > 0) {
                print_error("validation_failed", std::to_string(failures) + " check(s) failed");
                return 1;
            }
        }
    } catch (const std::exception &e) {
        print_error(error_kind(e), e.what());
        return 1;
    }
    return 0;
}
