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

#include "dabprec/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dabprec/errors.hpp"
#include "dabprec/metrics.hpp"
#include "dabprec/precoding.hpp"
#include "dabprec/reference.hpp"
#include "dabprec/rng.hpp"
#include "dabprec/units.hpp"

namespace dabprec {

namespace {

using nlohmann::json;
using cxd = std::complex<double>;

[[noreturn]] void fail(const std::string &msg) { throw ConfigError(msg); }

std::string joined(const std::string &scope, const std::string &key) {
    return scope.empty() ? key : scope + "." + key;
}

void check_object(const json &j, const std::string &scope,
                  const std::vector<std::string> &allowed) {
    if (!j.is_object())
        fail("config section \"" + scope + "\" must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            fail("unknown config key \"" + joined(scope, it.key()) + "\"");
}

const json &require_key(const json &j, const std::string &scope, const std::string &key) {
    const auto it = j.find(key);
    if (it == j.end())
        fail("missing required config key \"" + joined(scope, key) + "\"");
    return *it;
}

double get_number(const json &j, const std::string &path) {
    if (!j.is_number())
        fail("config key \"" + path + "\" must be a number");
    return j.get<double>();
}

std::int64_t get_integer(const json &j, const std::string &path) {
    if (!j.is_number_integer())
        fail("config key \"" + path + "\" must be an integer");
    return j.get<std::int64_t>();
}

std::uint64_t get_seed(const json &j, const std::string &path) {
    if (!(j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0)))
        fail("config key \"" + path + "\" must be a nonnegative integer");
    return j.get<std::uint64_t>();
}

bool get_bool(const json &j, const std::string &path) {
    if (!j.is_boolean())
        fail("config key \"" + path + "\" must be a boolean");
    return j.get<bool>();
}

std::string get_string(const json &j, const std::string &path) {
    if (!j.is_string() || j.get<std::string>().empty())
        fail("config key \"" + path + "\" must be a nonempty string");
    return j.get<std::string>();
}

std::vector<double> get_number_list(const json &j, const std::string &path) {
    if (!j.is_array() || j.empty())
        fail("config key \"" + path + "\" must be a nonempty array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto &v : j) {
        if (!v.is_number())
            fail("config key \"" + path + "\" must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

cxd get_complex(const json &j, const std::string &path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail("config key \"" + path + "\" must be a [real, imag] number pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

PaParams parse_pa(const json &j, const std::string &scope) {
    check_object(j, scope, {"beta1", "beta3"});
    PaParams pa;
    pa.beta1 = get_complex(require_key(j, scope, "beta1"), joined(scope, "beta1"));
    pa.beta3 = get_complex(require_key(j, scope, "beta3"), joined(scope, "beta3"));
    try {
        validate(pa);
    } catch (const std::exception &e) {
        fail("config section \"" + scope + "\" is invalid: " + e.what());
    }
    return pa;
}

OptimizerOptions parse_optimizer(const json &j, const std::string &scope) {
    check_object(j, scope,
                 {"max_iters", "mu0", "n_random_inits", "include_mrt", "include_zf", "seed",
                  "stall_tol"});
    OptimizerOptions opts;
    if (j.contains("max_iters"))
        opts.max_iters = static_cast<int>(get_integer(j["max_iters"], joined(scope, "max_iters")));
    if (j.contains("mu0"))
        opts.mu0 = get_number(j["mu0"], joined(scope, "mu0"));
    if (j.contains("n_random_inits"))
        opts.n_random_inits =
            static_cast<int>(get_integer(j["n_random_inits"], joined(scope, "n_random_inits")));
    if (j.contains("include_mrt"))
        opts.include_mrt = get_bool(j["include_mrt"], joined(scope, "include_mrt"));
    if (j.contains("include_zf"))
        opts.include_zf = get_bool(j["include_zf"], joined(scope, "include_zf"));
    if (j.contains("seed"))
        opts.seed = get_seed(j["seed"], joined(scope, "seed"));
    if (j.contains("stall_tol"))
        opts.stall_tol = get_number(j["stall_tol"], joined(scope, "stall_tol"));
    try {
        validate(opts);
    } catch (const std::exception &e) {
        fail("config section \"" + scope + "\" is invalid: " + e.what());
    }
    return opts;
}

json optimizer_to_json(const OptimizerOptions &opts) {
    return json{{"max_iters", opts.max_iters},
                {"mu0", opts.mu0},
                {"n_random_inits", opts.n_random_inits},
                {"include_mrt", opts.include_mrt},
                {"include_zf", opts.include_zf},
                {"seed", opts.seed},
                {"stall_tol", opts.stall_tol}};
}

json pa_to_json(const PaParams &pa) {
    return json{{"beta1", {pa.beta1.real(), pa.beta1.imag()}},
                {"beta3", {pa.beta3.real(), pa.beta3.imag()}}};
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::string &path, const std::string &content) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        fail("cannot open output path \"" + path + "\"");
    f << content;
    f.flush();
    if (!f)
        fail("failed while writing \"" + path + "\"");
}

std::vector<double> pattern_grid(double step_deg) {
    std::vector<double> grid;
    for (Eigen::Index i = 0;; i++) {
        const double psi = static_cast<double>(i) * step_deg;
        if (psi > 180.0 + 1e-9)
            break;
        grid.push_back(std::min(psi, 180.0));
    }
    return grid;
}

double floor_db(double ratio) {
    if (!(ratio > 0.0))
        return -100.0;
    return std::max(-100.0, 10.0 * std::log10(ratio));
}

} // namespace

SweepConfig parse_sweep_config(const json &j) {
    check_object(j, "", {"geometry", "pa", "p_tot_dbm", "snr_db_list", "n_channels", "optimizer",
                         "precoders", "output_path"});

    SweepConfig cfg;
    const json &geo = require_key(j, "", "geometry");
    check_object(geo, "geometry", {"m", "k", "l", "gamma2_db", "aod_range_deg"});
    cfg.geometry.M = get_integer(require_key(geo, "geometry", "m"), "geometry.m");
    cfg.geometry.K = get_integer(require_key(geo, "geometry", "k"), "geometry.k");
    cfg.geometry.L = get_integer(require_key(geo, "geometry", "l"), "geometry.l");
    cfg.gamma2_db = get_number(require_key(geo, "geometry", "gamma2_db"), "geometry.gamma2_db");
    cfg.geometry.gamma2 = db_to_linear(cfg.gamma2_db);
    if (geo.contains("aod_range_deg")) {
        const auto range = get_number_list(geo["aod_range_deg"], "geometry.aod_range_deg");
        if (range.size() != 2)
            fail("config key \"geometry.aod_range_deg\" must be a [min, max] pair");
        cfg.geometry.aod_min_deg = range[0];
        cfg.geometry.aod_max_deg = range[1];
    }
    try {
        validate(cfg.geometry);
    } catch (const std::exception &e) {
        fail(std::string("config section \"geometry\" is invalid: ") + e.what());
    }

    cfg.pa = parse_pa(require_key(j, "", "pa"), "pa");
    cfg.p_tot_dbm = get_number(require_key(j, "", "p_tot_dbm"), "p_tot_dbm");
    if (!std::isfinite(cfg.p_tot_dbm))
        fail("config key \"p_tot_dbm\" must be finite");
    cfg.snr_db_list = get_number_list(require_key(j, "", "snr_db_list"), "snr_db_list");
    cfg.n_channels = static_cast<int>(get_integer(require_key(j, "", "n_channels"), "n_channels"));
    if (cfg.n_channels < 1)
        fail("config key \"n_channels\" must be at least 1");
    if (j.contains("optimizer"))
        cfg.optimizer = parse_optimizer(j["optimizer"], "optimizer");
    if (j.contains("precoders")) {
        const json &p = j["precoders"];
        if (!p.is_array() || p.empty())
            fail("config key \"precoders\" must be a nonempty array");
        cfg.precoders.clear();
        for (const auto &v : p) {
            const std::string name = v.is_string() ? v.get<std::string>() : "";
            if (name != "mrt" && name != "zf" && name != "dab")
                fail("config key \"precoders\" entries must be \"mrt\", \"zf\", or \"dab\"");
            if (std::find(cfg.precoders.begin(), cfg.precoders.end(), name) !=
                cfg.precoders.end())
                fail("config key \"precoders\" has duplicate entry \"" + name + "\"");
            cfg.precoders.push_back(name);
        }
    }
    cfg.output_path = get_string(require_key(j, "", "output_path"), "output_path");
    return cfg;
}

PatternConfig parse_pattern_config(const json &j) {
    check_object(j, "", {"user_aods_deg", "snr_db", "pa", "m", "p_tot_dbm", "grid_step_deg",
                         "optimizer", "output_path"});

    PatternConfig cfg;
    cfg.user_aods_deg = get_number_list(require_key(j, "", "user_aods_deg"), "user_aods_deg");
    for (const double a : cfg.user_aods_deg)
        if (!(a >= 0.0 && a <= 180.0))
            fail("config key \"user_aods_deg\" entries must lie in [0, 180]");
    cfg.snr_db = get_number(require_key(j, "", "snr_db"), "snr_db");
    cfg.pa = parse_pa(require_key(j, "", "pa"), "pa");
    cfg.M = get_integer(require_key(j, "", "m"), "m");
    if (cfg.M < 1)
        fail("config key \"m\" must be at least 1");
    cfg.p_tot_dbm = get_number(require_key(j, "", "p_tot_dbm"), "p_tot_dbm");
    if (j.contains("grid_step_deg")) {
        cfg.grid_step_deg = get_number(j["grid_step_deg"], "grid_step_deg");
        if (!(cfg.grid_step_deg > 0.0 && cfg.grid_step_deg <= 180.0))
            fail("config key \"grid_step_deg\" must be in (0, 180]");
    }
    if (j.contains("optimizer"))
        cfg.optimizer = parse_optimizer(j["optimizer"], "optimizer");
    cfg.output_path = get_string(require_key(j, "", "output_path"), "output_path");
    return cfg;
}

namespace {
json load_json(const std::string &path) {
    std::ifstream f(path);
    if (!f)
        fail("cannot open config file \"" + path + "\"");
    json j;
    try {
        f >> j;
    } catch (const json::parse_error &e) {
        fail("config file \"" + path + "\" is not valid JSON: " + e.what());
    }
    return j;
}
} // namespace

SweepConfig load_sweep_config(const std::string &path) {
    return parse_sweep_config(load_json(path));
}

PatternConfig load_pattern_config(const std::string &path) {
    return parse_pattern_config(load_json(path));
}

json to_json(const SweepConfig &cfg) {
    return json{{"geometry",
                 {{"m", cfg.geometry.M},
                  {"k", cfg.geometry.K},
                  {"l", cfg.geometry.L},
                  {"gamma2_db", cfg.gamma2_db},
                  {"aod_range_deg", {cfg.geometry.aod_min_deg, cfg.geometry.aod_max_deg}}}},
                {"pa", pa_to_json(cfg.pa)},
                {"p_tot_dbm", cfg.p_tot_dbm},
                {"snr_db_list", cfg.snr_db_list},
                {"n_channels", cfg.n_channels},
                {"optimizer", optimizer_to_json(cfg.optimizer)},
                {"precoders", cfg.precoders},
                {"output_path", cfg.output_path}};
}

json to_json(const PatternConfig &cfg) {
    return json{{"user_aods_deg", cfg.user_aods_deg},
                {"snr_db", cfg.snr_db},
                {"pa", pa_to_json(cfg.pa)},
                {"m", cfg.M},
                {"p_tot_dbm", cfg.p_tot_dbm},
                {"grid_step_deg", cfg.grid_step_deg},
                {"optimizer", optimizer_to_json(cfg.optimizer)},
                {"output_path", cfg.output_path}};
}

std::string summary_path(const std::string &output_path) {
    const auto slash = output_path.find_last_of('/');
    const auto dot = output_path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return output_path + "_summary";
    return output_path.substr(0, dot) + "_summary" + output_path.substr(dot);
}

void run_sweep(const SweepConfig &cfg) {
    validate(cfg.geometry);
    validate(cfg.pa);
    validate(cfg.optimizer);
    if (cfg.snr_db_list.empty() || cfg.precoders.empty() || cfg.output_path.empty())
        fail("sweep config is incomplete");

    const double p_tot = dbm_to_watts(cfg.p_tot_dbm);
    const Eigen::Index nR = cfg.n_channels;
    const Eigen::Index nS = static_cast<Eigen::Index>(cfg.snr_db_list.size());
    const Eigen::Index nP = static_cast<Eigen::Index>(cfg.precoders.size());
    const std::uint64_t master = cfg.optimizer.seed;

    std::vector<double> rate(static_cast<std::size_t>(nR * nS * nP), 0.0);
    std::vector<std::string> errors(static_cast<std::size_t>(nR));

#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index r = 0; r < nR; r++) {
        try {
            const ChannelSet ch =
                draw_channels(cfg.geometry, derive_seed(master, streams::kChannel,
                                                        static_cast<std::uint64_t>(r)));
            Eigen::MatrixXcd p_mrt, p_zf;
            for (const auto &name : cfg.precoders) {
                if (name == "mrt")
                    p_mrt = project_power(mrt(ch), cfg.pa, p_tot);
                else if (name == "zf")
                    p_zf = project_power(zf(ch), cfg.pa, p_tot);
            }
            for (Eigen::Index si = 0; si < nS; si++) {
                const double n0 = noise_power(db_to_linear(cfg.snr_db_list[static_cast<std::size_t>(si)]),
                                              cfg.geometry.gamma2, p_tot);
                for (Eigen::Index pi = 0; pi < nP; pi++) {
                    const std::string &name = cfg.precoders[static_cast<std::size_t>(pi)];
                    double value = 0.0;
                    if (name == "mrt") {
                        value = sum_rate(p_mrt, ch, cfg.pa, n0);
                    } else if (name == "zf") {
                        value = sum_rate(p_zf, ch, cfg.pa, n0);
                    } else {
                        OptimizerOptions opts = cfg.optimizer;
                        opts.seed = derive_seed(master, streams::kRun,
                                                static_cast<std::uint64_t>(r * nS + si));
                        value = multi_init_dab(ch, cfg.pa, n0, p_tot, opts).rate;
                    }
                    rate[static_cast<std::size_t>((r * nS + si) * nP + pi)] = value;
                }
            }
        } catch (const std::exception &e) {
            errors[static_cast<std::size_t>(r)] = e.what();
        }
    }
    for (Eigen::Index r = 0; r < nR; r++)
        if (!errors[static_cast<std::size_t>(r)].empty())
            throw std::runtime_error("sweep realization " + std::to_string(r) +
                                     " failed: " + errors[static_cast<std::size_t>(r)]);

    std::string csv = "snr_db,realization,precoder,sum_rate_bits\n";
    for (Eigen::Index si = 0; si < nS; si++)
        for (Eigen::Index r = 0; r < nR; r++)
            for (Eigen::Index pi = 0; pi < nP; pi++) {
                csv += fmt(cfg.snr_db_list[static_cast<std::size_t>(si)]);
                csv += ',';
                csv += std::to_string(r);
                csv += ',';
                csv += cfg.precoders[static_cast<std::size_t>(pi)];
                csv += ',';
                csv += fmt(rate[static_cast<std::size_t>((r * nS + si) * nP + pi)]);
                csv += '\n';
            }

    std::string summary = "snr_db,precoder,mean_rate,stderr_rate,n_channels\n";
    for (Eigen::Index si = 0; si < nS; si++)
        for (Eigen::Index pi = 0; pi < nP; pi++) {
            double mean = 0.0;
            for (Eigen::Index r = 0; r < nR; r++)
                mean += rate[static_cast<std::size_t>((r * nS + si) * nP + pi)];
            mean /= static_cast<double>(nR);
            double var = 0.0;
            for (Eigen::Index r = 0; r < nR; r++) {
                const double d = rate[static_cast<std::size_t>((r * nS + si) * nP + pi)] - mean;
                var += d * d;
            }
            const double stderr_rate =
                nR > 1 ? std::sqrt(var / static_cast<double>(nR - 1) / static_cast<double>(nR))
                       : 0.0;
            summary += fmt(cfg.snr_db_list[static_cast<std::size_t>(si)]);
            summary += ',';
            summary += cfg.precoders[static_cast<std::size_t>(pi)];
            summary += ',';
            summary += fmt(mean);
            summary += ',';
            summary += fmt(stderr_rate);
            summary += ',';
            summary += std::to_string(nR);
            summary += '\n';
        }

    write_file(cfg.output_path, csv);
    write_file(summary_path(cfg.output_path), summary);
}

void run_convergence(const SweepConfig &cfg) {
    if (cfg.snr_db_list.size() != 1)
        fail("convergence runs need exactly one entry in \"snr_db_list\"");
    validate(cfg.geometry);
    validate(cfg.pa);
    validate(cfg.optimizer);

    const double p_tot = dbm_to_watts(cfg.p_tot_dbm);
    const double snr_db = cfg.snr_db_list[0];
    const double n0 = noise_power(db_to_linear(snr_db), cfg.geometry.gamma2, p_tot);
    const Eigen::Index nR = cfg.n_channels;
    const std::size_t len = static_cast<std::size_t>(cfg.optimizer.max_iters) + 1;
    const std::uint64_t master = cfg.optimizer.seed;

    std::vector<std::vector<double>> best(static_cast<std::size_t>(nR));
    std::vector<std::string> errors(static_cast<std::size_t>(nR));

#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index r = 0; r < nR; r++) {
        try {
            const ChannelSet ch =
                draw_channels(cfg.geometry, derive_seed(master, streams::kChannel,
                                                        static_cast<std::uint64_t>(r)));
            OptimizerOptions opts = cfg.optimizer;
            opts.seed = derive_seed(master, streams::kRun, static_cast<std::uint64_t>(r));
            const MultiInitResult res = multi_init_dab(ch, cfg.pa, n0, p_tot, opts);
            std::vector<double> trace(len, 0.0);
            for (const auto &t : res.traces)
                for (std::size_t i = 0; i < len; i++)
                    trace[i] = std::max(trace[i], t.rates[i]);
            best[static_cast<std::size_t>(r)] = std::move(trace);
        } catch (const std::exception &e) {
            errors[static_cast<std::size_t>(r)] = e.what();
        }
    }
    for (Eigen::Index r = 0; r < nR; r++)
        if (!errors[static_cast<std::size_t>(r)].empty())
            throw std::runtime_error("convergence realization " + std::to_string(r) +
                                     " failed: " + errors[static_cast<std::size_t>(r)]);

    std::string csv = "iteration,mean_rate,snr_db\n";
    for (std::size_t i = 0; i < len; i++) {
        double mean = 0.0;
        for (Eigen::Index r = 0; r < nR; r++)
            mean += best[static_cast<std::size_t>(r)][i];
        mean /= static_cast<double>(nR);
        csv += std::to_string(i);
        csv += ',';
        csv += fmt(mean);
        csv += ',';
        csv += fmt(snr_db);
        csv += '\n';
    }
    write_file(cfg.output_path, csv);
}

void run_pattern(const PatternConfig &cfg) {
    validate(cfg.pa);
    validate(cfg.optimizer);
    if (cfg.output_path.empty())
        fail("pattern config is incomplete");

    const ChannelSet ch = steering_channels(cfg.user_aods_deg, cfg.M);
    const double p_tot = dbm_to_watts(cfg.p_tot_dbm);
    const double n0 = noise_power(db_to_linear(cfg.snr_db), 1.0, p_tot);
    const std::vector<double> grid = pattern_grid(cfg.grid_step_deg);

    const Eigen::MatrixXcd p_mrt = project_power(mrt(ch), cfg.pa, p_tot);
    const Eigen::MatrixXcd p_dab = multi_init_dab(ch, cfg.pa, n0, p_tot, cfg.optimizer).P;

    std::string csv = "psi_deg,precoder,linear_power_db,distortion_power_db\n";
    const std::pair<const char *, const Eigen::MatrixXcd *> runs[] = {{"mrt", &p_mrt},
                                                                      {"dab", &p_dab}};
    for (const auto &[name, P] : runs) {
        const std::vector<PatternPoint> pts = radiation_pattern(*P, cfg.pa, grid);
        double ref = 0.0;
        for (const auto &pt : pts)
            ref = std::max(ref, pt.linear_power);
        if (!(ref > 0.0))
            throw std::runtime_error("pattern reference power is zero");
        for (const auto &pt : pts) {
            csv += fmt(pt.psi_deg);
            csv += ',';
            csv += name;
            csv += ',';
            csv += fmt(floor_db(pt.linear_power / ref));
            csv += ',';
            csv += fmt(floor_db(pt.distortion_power / ref));
            csv += '\n';
        }
    }
    write_file(cfg.output_path, csv);
}

namespace {

Eigen::MatrixXcd fd_gradient(const Eigen::MatrixXcd &P, const ChannelSet &H, const PaParams &pa,
                             double n0, double step) {
    Eigen::MatrixXcd g(P.rows(), P.cols());
    for (Eigen::Index c = 0; c < P.cols(); c++)
        for (Eigen::Index m = 0; m < P.rows(); m++) {
            Eigen::MatrixXcd Pp = P, Pm = P;
            Pp(m, c) += step;
            Pm(m, c) -= step;
            const double dre = (sum_rate(Pp, H, pa, n0) - sum_rate(Pm, H, pa, n0)) / (2.0 * step);
            Pp = P;
            Pm = P;
            Pp(m, c) += cxd(0.0, step);
            Pm(m, c) -= cxd(0.0, step);
            const double dim = (sum_rate(Pp, H, pa, n0) - sum_rate(Pm, H, pa, n0)) / (2.0 * step);
            g(m, c) = cxd(dre, dim);
        }
    return g;
}

double rel_err(const Eigen::MatrixXcd &got, const Eigen::MatrixXcd &want) {
    const double floor = 1e-4 * want.cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (Eigen::Index c = 0; c < want.cols(); c++)
        for (Eigen::Index m = 0; m < want.rows(); m++) {
            const double denom = std::max(std::abs(want(m, c)), floor);
            worst = std::max(worst, std::abs(got(m, c) - want(m, c)) / denom);
        }
    return worst;
}

struct CheckLog {
    std::ostream &out;
    int failures = 0;

    void note(bool ok, const std::string &name, const std::string &detail) {
        out << (ok ? "[ok]   " : "[FAIL] ") << name << ": " << detail << "\n";
        if (!ok)
            failures++;
    }
};

} // namespace

int run_validate(std::uint64_t seed, std::ostream &out) {
    CheckLog log{out};
    const PaParams pa{{0.98, 0.0}, {-0.04, -0.01}};
    const double p_tot = dbm_to_watts(43.0);

    {
        Crng rng(derive_seed(seed, 101));
        const Eigen::MatrixXcd P = project_power(rng.gaussian_matrix(8, 2), pa, p_tot);
        const double opt = expected_output_power(P, pa);
        const double refv = ref::expected_output_power(P, pa);
        const double err = std::abs(opt - refv) / std::abs(opt);
        log.note(err <= 1e-10, "output-power trace identity", "rel err " + fmt(err));
        const double mc = mc_output_power(P, pa, 1000000, derive_seed(seed, 102));
        const double mcerr = std::abs(mc - opt) / opt;
        log.note(mcerr <= 0.01, "output-power Monte Carlo (1e6 samples)", "rel err " + fmt(mcerr));
    }

    {
        Crng rng(derive_seed(seed, 103));
        const Eigen::MatrixXcd P = project_power(rng.gaussian_matrix(4, 2), pa, p_tot);
        const Eigen::MatrixXcd Ce = distortion_covariance(P, pa);
        const DistortionMoments mom = distortion_moments(P, pa, 200000, derive_seed(seed, 104));
        double worst_xe = 0.0, worst_ee = 0.0;
        for (Eigen::Index i = 0; i < 4; i++)
            for (Eigen::Index j = 0; j < 4; j++) {
                worst_xe = std::max(worst_xe, std::abs(mom.xe(i, j)) / mom.xe_se(i, j));
                worst_ee =
                    std::max(worst_ee, std::abs(mom.ee(i, j) - Ce(i, j)) / mom.ee_se(i, j));
            }
        log.note(worst_xe <= 3.0, "distortion uncorrelated with input (2e5 samples)",
                 "worst deviation " + fmt(worst_xe) + " standard errors");
        log.note(worst_ee <= 3.0, "distortion covariance Monte Carlo (2e5 samples)",
                 "worst deviation " + fmt(worst_ee) + " standard errors");
    }

    {
        Crng rng(derive_seed(seed, 105));
        double worst_pw = 0.0, worst_idem = 0.0, worst_hom = 0.0;
        for (int t = 0; t < 5; t++) {
            const Eigen::MatrixXcd P0 = rng.gaussian_matrix(16, 2);
            const Eigen::MatrixXcd P = project_power(P0, pa, p_tot);
            worst_pw = std::max(worst_pw, std::abs(expected_output_power(P, pa) - p_tot) / p_tot);
            worst_idem =
                std::max(worst_idem, (project_power(P, pa, p_tot) - P).norm() / P.norm());
            worst_hom =
                std::max(worst_hom, (project_power(3.0 * P0, pa, p_tot) - P).norm() / P.norm());
        }
        log.note(worst_pw <= 1e-8, "power projection accuracy", "worst rel err " + fmt(worst_pw));
        log.note(worst_idem <= 1e-10, "power projection idempotence",
                 "worst rel err " + fmt(worst_idem));
        log.note(worst_hom <= 1e-12, "power projection scale invariance",
                 "worst rel err " + fmt(worst_hom));
    }

    {
        double worst_fd = 0.0, worst_ref = 0.0;
        for (int t = 0; t < 5; t++) {
            Crng rng(derive_seed(seed, 106, static_cast<std::uint64_t>(t)));
            GeometryConfig geo{4, 2, 3, 1.0};
            const ChannelSet ch = draw_channels(geo, derive_seed(seed, 107, static_cast<std::uint64_t>(t)));
            const Eigen::MatrixXcd P = project_power(rng.gaussian_matrix(4, 2), pa, p_tot);
            const double n0 = noise_power(db_to_linear(10.0), 1.0, p_tot);
            const Eigen::MatrixXcd g = sum_rate_gradient(P, ch, pa, n0);
            worst_fd = std::max(worst_fd, rel_err(g, fd_gradient(P, ch, pa, n0, 1e-5)));
            worst_ref = std::max(worst_ref, rel_err(g, ref::sum_rate_gradient(P, ch, pa, n0)));
        }
        log.note(worst_fd <= 1e-5, "gradient vs finite differences",
                 "worst rel err " + fmt(worst_fd));
        log.note(worst_ref <= 1e-10, "gradient vs serial reference",
                 "worst rel err " + fmt(worst_ref));
    }

    {
        GeometryConfig geo{4, 1, 4, 0.5};
        const int draws = 20000;
        double mean = 0.0, sq = 0.0;
        for (int d = 0; d < draws; d++) {
            const double v =
                draw_channels(geo, derive_seed(seed, 108, static_cast<std::uint64_t>(d)))
                    .H.squaredNorm();
            mean += v;
            sq += v * v;
        }
        mean /= draws;
        const double se = std::sqrt((sq / draws - mean * mean) / draws);
        const double target = static_cast<double>(geo.M) * geo.gamma2;
        const double dev = std::abs(mean - target) / se;
        log.note(dev <= 3.0, "channel second moment (2e4 draws)",
                 "deviation " + fmt(dev) + " standard errors");
    }

    {
        const double n0 = noise_power(db_to_linear(10.0), 1.0, p_tot);
        OptimizerOptions opts;
        opts.n_random_inits = 4;
        opts.max_iters = 30;
        double worst_slack = 0.0;
        bool deterministic = true;
        for (int t = 0; t < 3; t++) {
            GeometryConfig geo{8, 2, 10, 1.0};
            const ChannelSet ch = draw_channels(geo, derive_seed(seed, 109, static_cast<std::uint64_t>(t)));
            opts.seed = derive_seed(seed, 110, static_cast<std::uint64_t>(t));
            const MultiInitResult a = multi_init_dab(ch, pa, n0, p_tot, opts);
            const MultiInitResult b = multi_init_dab(ch, pa, n0, p_tot, opts);
            deterministic = deterministic && (a.P - b.P).norm() == 0.0 && a.rate == b.rate;
            const double base = std::max(sum_rate(project_power(mrt(ch), pa, p_tot), ch, pa, n0),
                                         sum_rate(project_power(zf(ch), pa, p_tot), ch, pa, n0));
            worst_slack = std::min(worst_slack, a.rate - base);
        }
        log.note(worst_slack >= -1e-9, "ascent dominates MRT/ZF starts",
                 "worst slack " + fmt(worst_slack) + " bits");
        log.note(deterministic, "repeated runs identical", deterministic ? "bitwise" : "mismatch");
    }

    out << (log.failures == 0 ? "all checks passed\n"
                              : std::to_string(log.failures) + " check(s) failed\n");
    return log.failures;
}

} // namespace dabprec
