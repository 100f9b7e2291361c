// Copyright 2026 The ptwirl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptwirl/builder.hpp"
#include "ptwirl/noise_spec.hpp"
#include "ptwirl/report.hpp"
#include "ptwirl/sim.hpp"

namespace ptwirl::cli {

enum class Command { kDecompose, kBuild, kVerify, kSimulate, kTables };

inline std::string command_name(Command c) {
    switch (c) {
        case Command::kDecompose: return "decompose";
        case Command::kBuild: return "build";
        case Command::kVerify: return "verify";
        case Command::kSimulate: return "simulate";
        case Command::kTables: return "tables";
    }
    return "?";
}

struct RunConfig {
    Command command = Command::kBuild;
    std::string input;
    std::string output;  // empty: JSON to stdout
    std::uint64_t seed = 0;
    std::size_t samples = 10000;
    double tol = 1e-10;
    double threshold = 0.0;
    std::size_t dense_limit = kDefaultDenseLimit;
    std::vector<std::string> stabilisers;
    bool baseline = false;
    std::size_t table_size = 3;
    std::size_t random_states = 5;

    void validate() const {
        if (!(tol > 0.0)) throw std::invalid_argument("--tol must be positive");
        if (threshold < 0.0) throw std::invalid_argument("--threshold must be non-negative");
        if (samples == 0) throw std::invalid_argument("--samples must be positive");
        if (command != Command::kTables && input.empty()) throw std::invalid_argument("--input is required");
    }
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<PauliString> parse_stabilisers(const std::vector<std::string>& items, std::size_t n) {
    std::vector<PauliString> out;
    for (const auto& s : items) out.push_back(PauliString::parse(s, n));
    return out;
}

/// sum_b w_b exact_twirl(W, M_b, rho).
inline Matrix twirl_channel(const NoiseChannel& ch, std::span<const PauliString> W, const Matrix& rho, std::size_t limit) {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (std::size_t b = 0; b < ch.size(); ++b) out += ch.weight(b) * exact_twirl(W, ch.dense(b, limit), rho);
    return out;
}

inline Json run_decompose(const RunConfig& cfg, const NoiseChannel& ch, VerificationReport&, std::string& summary) {
    Json branches = Json::array();
    std::ostringstream os;
    for (std::size_t b = 0; b < ch.size(); ++b) {
        const PauliSum s = ch.pauli_sum(b, cfg.threshold, cfg.dense_limit);
        branches.push_back(Json{{"weight", sig12(ch.weight(b))}, {"terms", pauli_sum_json(s)}});
        os << "branch " << b << ":";
        for (const auto& [p, c] : s.terms()) os << "  (" << fmt12(c.real()) << "," << fmt12(c.imag()) << ")" << p.str();
        os << "\n";
    }
    summary = os.str();
    return Json{{"n", ch.n()}, {"branches", branches}, {"V", paulis_json(pauli_basis(ch, cfg.threshold, cfg.dense_limit))}};
}

inline Json substitution_json(const SubstitutionResult& r) {
    return Json{{"active", paulis_json(r.active)},
                {"absorbed", paulis_json(r.absorbed)},
                {"in_stabiliser_group", paulis_json(r.in_stabiliser_group)}};
}

inline Json run_build(const RunConfig& cfg, const NoiseChannel& ch, VerificationReport& checks, std::string& summary) {
    const TwirlPlan plan = build_twirl_plan(ch, {cfg.threshold, cfg.dense_limit});
    Json j = plan_json(plan);
    summary = plan_summary(plan);
    if (!cfg.stabilisers.empty()) {
        auto sub = substitute_stabilisers(plan, parse_stabilisers(cfg.stabilisers, plan.n));
        j["stabiliser_substitution"] = substitution_json(sub);
        summary += "active Wtilde after stabiliser substitution: " + join(sub.active) + "\n";
    }
    checks.add_flag("twirling_condition", plan.condition.ok);
    checks.add_flag("table_consistency", plan.table_consistent());
    return j;
}

inline Json run_verify(const RunConfig& cfg, const NoiseChannel& ch, VerificationReport& checks, std::string& summary) {
    const TwirlPlan plan = build_twirl_plan(ch, {cfg.threshold, cfg.dense_limit});
    const auto& d = plan.diagnostics;
    const auto W = plan.W();

    checks.add("twirling_condition_violations", 0.0, static_cast<double>(plan.condition.violations.size()));
    checks.add_flag("table_consistency", plan.table_consistent());
    checks.add_flag("size_bounds", d.lower_bound <= d.size_wtilde && d.size_wtilde <= d.size_vtilde &&
                                       plan.V.size() <= plan.size_w());

    const PauliChannel raw = predicted_channel(ch, Normalisation::kRaw, cfg.threshold, cfg.dense_limit);
    const std::size_t state_limit = std::min(kStateLimit, cfg.dense_limit);
    if (plan.n <= state_limit) {
        std::mt19937_64 rng(cfg.seed);
        double worst = 0.0;
        for (std::size_t i = 0; i < cfg.random_states; ++i) {
            const auto rho = DensityMatrix::random(plan.n, rng);
            worst = std::max(worst, max_abs_diff(twirl_channel(ch, W, rho, cfg.dense_limit), raw.apply(rho)));
        }
        checks.add("state_twirl_matches_pauli_channel", cfg.tol, worst);
    }
    if (plan.n <= std::min(kChoiLimit, cfg.dense_limit)) {
        const auto c = choi([&](const Matrix& r) { return twirl_channel(ch, W, r, cfg.dense_limit); }, plan.n);
        checks.add("choi_off_diagonal", cfg.tol, c.max_off_diagonal());
        double diag = 0.0;
        for (std::size_t a = 0; a < c.basis.size(); ++a) {
            const auto idx = static_cast<Eigen::Index>(a);
            diag = std::max(diag, std::abs(c.entries(idx, idx) - Complex{raw.prob(c.basis[a]), 0.0}));
        }
        checks.add("choi_diagonal_matches_prediction", cfg.tol, diag);
    }

    Json j;
    j["plan"] = plan_json(plan);
    j["predicted_channel"] = pauli_channel_json(predicted_channel(ch, Normalisation::kPerBranch, cfg.threshold, cfg.dense_limit));
    std::ostringstream os;
    os << plan_summary(plan);
    if (cfg.baseline) {
        const auto base = full_pauli_baseline(plan.n);
        Json b{{"generators", paulis_json(base)}, {"size_Wtilde", base.size()}, {"size_Wtilde_constructed", plan.Wtilde.size()}};
        const std::uint64_t pairs = static_cast<std::uint64_t>(plan.V.size()) * (plan.V.size() - 1) / 2;
        if (base.size() <= 20 && (std::uint64_t{1} << base.size()) * std::max<std::uint64_t>(pairs, 1) <= (std::uint64_t{1} << 32)) {
            const auto cond = verify_condition(span(base, plan.n), plan.V);
            b["condition"] = condition_json(cond);
            checks.add_flag("baseline_twirling_condition", cond.ok);
        }
        j["baseline"] = b;
        os << "baseline    : " << base.size() << " generators vs " << plan.Wtilde.size() << " constructed\n";
    }
    if (!cfg.stabilisers.empty()) {
        j["stabiliser_substitution"] = substitution_json(substitute_stabilisers(plan, parse_stabilisers(cfg.stabilisers, plan.n)));
    }
    summary = os.str();
    return j;
}

inline Json run_simulate(const RunConfig& cfg, const NoiseChannel& ch, VerificationReport& checks, std::string& summary) {
    const TwirlPlan plan = build_twirl_plan(ch, {cfg.threshold, cfg.dense_limit});
    check_dense_limit(plan.n, std::min(kStateLimit, cfg.dense_limit), "simulate");
    const auto W = plan.W();
    std::mt19937_64 rng(cfg.seed);
    const auto rho = DensityMatrix::random(plan.n, rng);
    const Matrix exact = twirl_channel(ch, W, rho, cfg.dense_limit);
    Matrix sampled = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
    for (std::size_t b = 0; b < ch.size(); ++b) {
        sampled += ch.weight(b) * random_twirl(W, ch.dense(b, cfg.dense_limit), rho, cfg.samples, cfg.seed + 1 + b);
    }
    const PauliChannel raw = predicted_channel(ch, Normalisation::kRaw, cfg.threshold, cfg.dense_limit);
    const double residual = max_abs_diff(exact, raw.apply(rho));
    checks.add("exact_twirl_matches_pauli_channel", cfg.tol, residual);
    const double td = trace_distance(exact, sampled);

    Json j;
    j["n"] = plan.n;
    j["seed"] = cfg.seed;
    j["samples"] = cfg.samples;
    j["Wtilde"] = paulis_json(plan.Wtilde);
    j["predicted_channel"] = pauli_channel_json(predicted_channel(ch, Normalisation::kPerBranch, cfg.threshold, cfg.dense_limit));
    j["input_state"] = matrix_json(rho);
    j["exact_twirl"] = matrix_json(exact);
    j["random_twirl"] = matrix_json(sampled);
    j["trace_distance_random_vs_exact"] = sig12(td);
    summary = "Wtilde: " + join(plan.Wtilde) + "\nrandom twirl (" + std::to_string(cfg.samples) +
              " samples) trace distance to exact: " + fmt12(td) + "\n";
    return j;
}

inline Json run_tables(const RunConfig& cfg, VerificationReport&, std::string& summary) {
    const auto gen = generator_table(cfg.table_size);
    const auto quo = quotient_table(cfg.table_size);
    summary = "generator table:\n" + gen.str() + "\nquotient table:\n" + quo.str();
    return Json{{"N", cfg.table_size}, {"generator_table", table_json(gen)}, {"quotient_table", table_json(quo)}};
}

}  // namespace detail

/// Executes one command. The JSON report goes to cfg.output, or to `out` when
/// no output path is set (in which case the text summary is suppressed).
/// Returns 0 when every check passed, 1 when a check failed, 2 on error.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Json report;
    report["command"] = command_name(cfg.command);
    int status = 0;
    std::string summary;
    try {
        cfg.validate();
        VerificationReport checks;
        Json body;
        if (cfg.command == Command::kTables) {
            body = detail::run_tables(cfg, checks, summary);
        } else {
            const NoiseChannel ch = parse_noise_spec(detail::read_file(cfg.input));
            switch (cfg.command) {
                case Command::kDecompose: body = detail::run_decompose(cfg, ch, checks, summary); break;
                case Command::kBuild: body = detail::run_build(cfg, ch, checks, summary); break;
                case Command::kVerify: body = detail::run_verify(cfg, ch, checks, summary); break;
                case Command::kSimulate: body = detail::run_simulate(cfg, ch, checks, summary); break;
                case Command::kTables: break;
            }
        }
        status = checks.all_passed() ? 0 : 1;
        report["status"] = status == 0 ? "ok" : "failed";
        report["result"] = std::move(body);
        report["checks"] = checks.json();
        if (!checks.checks.empty()) summary += "\n" + checks.table();
    } catch (const std::exception& e) {
        status = 2;
        report["status"] = "error";
        report["error"] = e.what();
        err << "error: " << e.what() << "\n";
    }

    const std::string text = report.dump(2) + "\n";
    if (cfg.output.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.output, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << cfg.output << "\n";
            return 2;
        }
        f << text;
        out << summary;
    }
    return status;
}

}  // namespace ptwirl::cli
