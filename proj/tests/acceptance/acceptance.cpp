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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Tolerances are fixed below.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"

using ptwirl::Complex;
using ptwirl::DensityMatrix;
using ptwirl::Matrix;
using ptwirl::NoiseChannel;
using ptwirl::PauliString;
using ptwirl::PauliSum;

namespace {

constexpr double kTolStateTwoQubit = 1e-10;
constexpr double kTolStateEightQubit = 1e-8;
constexpr double kTolChoi = 1e-10;
constexpr double kTolNested = 1e-12;
constexpr double kTolStabiliser = 1e-12;
constexpr double kTolGateNoise = 1e-10;
constexpr double kMaxTraceDistance = 0.05;

PauliString P(const std::string& s, std::size_t n = 0) { return PauliString::parse(s, n); }

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) detail = what;
        ok = ok && cond;
    }
};

int failures = 0;

template <typename F>
void criterion(int id, const char* name, F&& body) {
    Outcome o;
    try {
        body(o);
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail = std::string("exception: ") + e.what();
    }
    if (!o.ok) ++failures;
    std::printf("%s  %d  %s%s%s\n", o.ok ? "PASS" : "FAIL", id, name, o.detail.empty() ? "" : "  -- ", o.detail.c_str());
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

PauliSum two_qubit_noise() {
    PauliSum s(2);
    for (const char* p : {"IX", "IZ", "YX", "YY"}) s.add(P(p), 1.0);
    s.add(P("ZX"), 1.0 / std::sqrt(2.0));
    return ptwirl::normalised(s);
}

std::vector<PauliString> independent_subset(std::size_t n, std::size_t tries, std::mt19937_64& rng) {
    std::vector<PauliString> gens;
    for (std::size_t i = 0; i < tries; ++i) {
        auto cand = gens;
        cand.push_back(oracle::random_pauli(n, rng));
        if (ptwirl::is_independent(cand)) gens = cand;
    }
    return gens;
}

}  // namespace

int main() {
    criterion(1, "two-qubit worked example end to end", [](Outcome& o) {
        const auto ch = NoiseChannel::single(two_qubit_noise());
        const auto plan = ptwirl::build_twirl_plan(ch);
        o.require(plan.Wtilde.size() == 3, "|Wtilde| = " + std::to_string(plan.Wtilde.size()));
        o.require(plan.size_w() == 8, "|W| != 8");
        o.require(plan.table_consistent(), "solved generators do not reproduce the target table");
        // Target table in column order IX, IZ, YX, ZX.
        const std::vector<std::vector<int>> want = {{1, -1, 1, 1}, {1, 1, -1, 1}, {1, 1, 1, -1}};
        const std::vector<PauliString> cols = {P("IX"), P("IZ"), P("YX"), P("ZX")};
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                o.require(ptwirl::zeta(plan.Wtilde[i], cols[j]) == want[i][j], "commutator table entry differs");
            }
        }
        // Expected channel from the ratios (1, 1, 1, 1/2, 1).
        const std::vector<std::pair<const char*, double>> ratios = {
            {"IX", 1.0}, {"IZ", 1.0}, {"YX", 1.0}, {"ZX", 0.5}, {"YY", 1.0}};
        ptwirl::PauliChannel expected;
        expected.n = 2;
        for (const auto& [p, r] : ratios) expected.probs[P(p)] = r / 4.5;
        const Matrix m = ch.dense(0);
        const auto W = plan.W();
        std::mt19937_64 rng(101);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const auto rho = DensityMatrix::random(2, rng);
            worst = std::max(worst, oracle::max_abs(ptwirl::exact_twirl(W, m, rho) - expected.apply(rho)));
        }
        o.require(worst < kTolStateTwoQubit, "state residual " + fmt(worst));
    });

    criterion(2, "eight-qubit global field example end to end", [](Outcome& o) {
        PauliSum s(8);
        for (std::size_t k = 0; k < 8; ++k) s.add(PauliString::single(8, k, ptwirl::Pauli::Z), 1.0 / std::sqrt(8.0));
        const auto ch = NoiseChannel::single(s);
        const auto plan = ptwirl::build_twirl_plan(ch);
        o.require(plan.Wtilde.size() == 3, "|Wtilde| = " + std::to_string(plan.Wtilde.size()));
        o.require(ptwirl::full_pauli_baseline(8).size() == 16, "baseline size");
        o.require(plan.Wtilde.size() == static_cast<std::size_t>(std::log2(8.0)), "|Wtilde| != log2 n");
        const auto cond = ptwirl::verify_condition(plan.W(), plan.V);
        o.require(cond.ok && cond.pairs_checked == 28, "condition over 28 pairs");
        ptwirl::PauliChannel uniform;
        uniform.n = 8;
        for (std::size_t k = 0; k < 8; ++k) uniform.probs[PauliString::single(8, k, ptwirl::Pauli::Z)] = 0.125;
        const Matrix m = ch.dense(0);
        const auto W = plan.W();
        std::mt19937_64 rng(202);
        double worst = 0.0;
        for (int t = 0; t < 5; ++t) {
            const auto rho = DensityMatrix::random(8, rng);
            worst = std::max(worst, oracle::max_abs(ptwirl::exact_twirl(W, m, rho) - uniform.apply(rho)));
        }
        o.require(worst < kTolStateEightQubit, "state residual " + fmt(worst));
    });

    criterion(3, "property suite over 200 random noise operators", [](Outcome& o) {
        std::mt19937_64 rng(303);
        double worst_off = 0.0, worst_diag = 0.0;
        for (int t = 0; t < 200; ++t) {
            const std::size_t n = 1 + rng() % 3;
            const std::size_t max_terms = std::min<std::size_t>(10, std::size_t{1} << (2 * n));
            const std::size_t terms = 2 + rng() % (max_terms - 1);
            const auto s = oracle::random_sum(n, terms, rng);
            const auto ch = NoiseChannel::single(s);
            const auto plan = ptwirl::build_twirl_plan(ch);
            o.require(ptwirl::verify_condition(plan.W(), plan.V).ok, "verify_condition failed");
            const auto& d = plan.diagnostics;
            o.require(d.lower_bound <= d.size_wtilde && d.size_wtilde <= d.size_vtilde, "size bounds");
            const Matrix m = oracle::sum_matrix(s);
            const auto W = plan.W();
            const auto c = ptwirl::choi([&](const Matrix& r) { return ptwirl::exact_twirl(W, m, r); }, n);
            worst_off = std::max(worst_off, c.max_off_diagonal());
            for (const auto& g : c.basis) {
                const double p = std::norm(oracle::coefficient(g, m));
                worst_diag = std::max(worst_diag, std::abs(c.at(g, g) - Complex{p, 0.0}));
            }
        }
        o.require(worst_off < kTolChoi, "Choi off-diagonal " + fmt(worst_off));
        o.require(worst_diag < kTolChoi, "Choi diagonal " + fmt(worst_diag));
    });

    criterion(4, "zeta and star agree with dense matrices for all 256 two-qubit pairs", [](Outcome& o) {
        const ptwirl::Complex phases[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        int pairs = 0;
        for (const auto& a : ptwirl::all_paulis(2)) {
            for (const auto& b : ptwirl::all_paulis(2)) {
                ++pairs;
                const Matrix A = oracle::to_matrix(a), B = oracle::to_matrix(b);
                const bool commute = (A * B - B * A).cwiseAbs().maxCoeff() == 0.0;
                const bool anti = (A * B + B * A).cwiseAbs().maxCoeff() == 0.0;
                o.require(ptwirl::zeta(a, b) == (commute ? 1 : -1) && commute != anti, "zeta " + a.str() + " " + b.str());
                bool phase_ok = false;
                for (auto ph : phases) phase_ok = phase_ok || (A * B - ph * oracle::to_matrix(ptwirl::star(a, b))).cwiseAbs().maxCoeff() == 0.0;
                o.require(phase_ok, "star " + a.str() + " " + b.str());
            }
        }
        o.require(pairs == 256, "pair count");
    });

    criterion(5, "nested one-gate twirls equal the twirl over the span", [](Outcome& o) {
        std::mt19937_64 rng(505);
        double worst = 0.0;
        for (int t = 0; t < 50; ++t) {
            const std::size_t n = 1 + rng() % 2;
            const auto s = oracle::random_sum(n, 2 + rng() % 3, rng);
            const auto plan = ptwirl::build_twirl_plan(NoiseChannel::single(s));
            const Matrix m = oracle::sum_matrix(s);
            const auto rho = DensityMatrix::random(n, rng);
            std::vector<PauliString> gens = plan.Wtilde;
            if (t % 2 == 1) gens = independent_subset(n, 4, rng);
            const Matrix nested = ptwirl::nested_one_gate_twirl(gens, m, rho);
            worst = std::max(worst, oracle::max_abs(nested - ptwirl::exact_twirl(ptwirl::span(gens, n), m, rho)));
        }
        o.require(worst < kTolNested, "residual " + fmt(worst));
    });

    criterion(6, "stabiliser check equals one-gate twirl; substitution drops Z", [](Outcome& o) {
        Matrix m = Matrix::Zero(2, 2);
        for (const char* p : {"I", "X", "Y", "Z"}) m += 0.5 * oracle::to_matrix(P(p));
        const Matrix zero = DensityMatrix::basis_state(1, 0).matrix();
        const Matrix flipped = oracle::to_matrix(P("X")) * zero * oracle::to_matrix(P("X"));
        double worst = 0.0;
        for (const Matrix& rho : {zero, flipped}) {
            worst = std::max(worst, oracle::max_abs(ptwirl::stabiliser_check_channel(P("Z"), m, rho) -
                                                    ptwirl::one_gate_twirl(P("Z"), m, rho)));
        }
        o.require(worst < kTolStabiliser, "residual " + fmt(worst));
        const auto plan = ptwirl::build_twirl_plan(NoiseChannel::single(ptwirl::DenseOperator(m)));
        o.require(plan.Wtilde == std::vector<PauliString>{P("Z"), P("X")}, "Wtilde = " + ptwirl::join(plan.Wtilde));
        const std::vector<PauliString> stab = {P("Z")};
        const auto sub = ptwirl::substitute_stabilisers(plan, stab);
        o.require(sub.active == std::vector<PauliString>{P("X")}, "active = " + ptwirl::join(sub.active));
        o.require(sub.absorbed == stab, "absorbed = " + ptwirl::join(sub.absorbed));
    });

    criterion(7, "gate noise bracketed around CNOT matches the twirled channel", [](Outcome& o) {
        Matrix c = Matrix::Zero(4, 4);
        c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1.0;
        const double p = 0.1;
        const auto ch = NoiseChannel::single(two_qubit_noise());
        const auto plan = ptwirl::build_twirl_plan(ch);
        const Matrix m = ch.dense(0);
        std::mt19937_64 rng(707);
        double worst = 0.0;
        for (int t = 0; t < 10; ++t) {
            const auto rho = DensityMatrix::random(2, rng);
            const Matrix crc = c * rho.matrix() * c.adjoint();
            // (1-p) C rho C^dag + p sum_v p_v v C rho C^dag v, with p_v from the dense trace.
            Matrix want = (1 - p) * crc;
            for (const auto& v : ptwirl::all_paulis(2)) {
                const Matrix vm = oracle::to_matrix(v);
                want += p * std::norm(oracle::coefficient(v, m)) * vm * crc * vm;
            }
            worst = std::max(worst, oracle::max_abs(ptwirl::gate_noise_twirl(c, m, p, plan.Wtilde, rho) - want));
        }
        o.require(worst < kTolGateNoise, "residual " + fmt(worst));
    });

    criterion(8, "quotient and generator tables", [](Outcome& o) {
        for (std::size_t N = 0; N <= 4; ++N) {
            const auto g = ptwirl::generator_table(N);
            for (std::size_t i = 0; i < N; ++i) {
                for (std::size_t j = 0; j < N; ++j) o.require(g.at(i, j) == (i == j ? -1 : 1), "generator table N=" + std::to_string(N));
            }
            const auto q = ptwirl::quotient_table(N);
            const std::size_t size = std::size_t{1} << N;
            o.require(q.rows() == size && q.cols() == size, "quotient table shape");
            for (std::size_t c = 1; c < size; ++c) {
                long long s = 0;
                for (std::size_t r = 0; r < size; ++r) s += q.at(r, c);
                o.require(s == 0, "column sum N=" + std::to_string(N));
            }
            for (std::size_t j = 0; j < size; ++j) {
                for (std::size_t k = j + 1; k < size; ++k) {
                    long long s = 0;
                    for (std::size_t r = 0; r < size; ++r) s += q.at(r, j) * q.at(r, k);
                    o.require(s == 0, "composed column sum N=" + std::to_string(N));
                }
            }
        }
    });

    criterion(9, "random twirl converges to the exact twirl", [](Outcome& o) {
        const auto ch = NoiseChannel::single(two_qubit_noise());
        const auto W = ptwirl::build_twirl_plan(ch).W();
        const Matrix m = ch.dense(0);
        std::mt19937_64 rng(909);
        const auto rho = DensityMatrix::random(2, rng);
        const Matrix exact = ptwirl::exact_twirl(W, m, rho);
        double d_small = 0.0, d_large = 0.0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            d_small += ptwirl::trace_distance(ptwirl::random_twirl(W, m, rho, 100, seed), exact) / 5.0;
            d_large += ptwirl::trace_distance(ptwirl::random_twirl(W, m, rho, 10000, seed), exact) / 5.0;
        }
        o.require(d_large < kMaxTraceDistance, "10^4-sample distance " + fmt(d_large));
        o.require(d_small > d_large, "10^2-sample distance " + fmt(d_small) + " not above " + fmt(d_large));
    });

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILED", failures);
    return failures == 0 ? 0 : 1;
}
