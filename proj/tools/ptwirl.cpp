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

#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ptwirl/cli.hpp"

int main(int argc, char** argv) {
    using ptwirl::cli::Command;
    CLI::App app{"ptwirl: minimal Pauli twirling sets for structured noise"};
    app.require_subcommand(1);

    ptwirl::cli::RunConfig cfg;
    std::string stabilisers;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("--input,-i", cfg.input, "noise spec file");
        if (needs_input) in->required()->check(CLI::ExistingFile);
        sub->add_option("--output,-o", cfg.output, "write the JSON report here (text summary goes to stdout)");
        sub->add_option("--threshold", cfg.threshold, "drop Pauli coefficients with magnitude at or below this");
        sub->add_option("--dense-limit", cfg.dense_limit, "largest qubit count handled with dense matrices");
    };

    auto* decompose = app.add_subcommand("decompose", "Pauli expansion of each Kraus operator");
    add_common(decompose, true);

    auto* build = app.add_subcommand("build", "construct the minimal twirling generators");
    add_common(build, true);
    build->add_option("--stabilisers", stabilisers, "comma-separated stabiliser generators to substitute");

    auto* verify = app.add_subcommand("verify", "build and check the twirling condition numerically");
    add_common(verify, true);
    verify->add_option("--seed", cfg.seed, "seed for the random test states");
    verify->add_option("--tol", cfg.tol, "numerical tolerance");
    verify->add_flag("--baseline", cfg.baseline, "compare against full Pauli twirling");
    verify->add_option("--stabilisers", stabilisers, "comma-separated stabiliser generators to substitute");

    auto* simulate = app.add_subcommand("simulate", "exact and sampled twirl on a random state");
    add_common(simulate, true);
    simulate->add_option("--seed", cfg.seed, "RNG seed");
    simulate->add_option("--samples", cfg.samples, "number of random twirl samples");
    simulate->add_option("--tol", cfg.tol, "numerical tolerance");

    auto* tables = app.add_subcommand("tables", "generator and quotient commutation tables");
    tables->add_option("--size,-N", cfg.table_size, "number of generators")->check(CLI::Range(0, 12));
    tables->add_option("--output,-o", cfg.output, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (decompose->parsed()) cfg.command = Command::kDecompose;
    if (build->parsed()) cfg.command = Command::kBuild;
    if (verify->parsed()) cfg.command = Command::kVerify;
    if (simulate->parsed()) cfg.command = Command::kSimulate;
    if (tables->parsed()) cfg.command = Command::kTables;

    std::stringstream ss(stabilisers);
    for (std::string item; std::getline(ss, item, ',');) {
        if (item.find_first_not_of(" \t") != std::string::npos) cfg.stabilisers.push_back(item);
    }
    return ptwirl::cli::run(cfg, std::cout, std::cerr);
}
