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

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ptwirl/builder.hpp"
#include "ptwirl/sim.hpp"

namespace ptwirl {

using Json = nlohmann::ordered_json;

/// v rounded to 12 significant digits.
inline double sig12(double v) {
    if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline std::string fmt12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline Json paulis_json(std::span<const PauliString> ps) {
    Json a = Json::array();
    for (const auto& p : ps) a.push_back(p.str());
    return a;
}

inline Json pauli_sum_json(const PauliSum& s) {
    Json a = Json::array();
    for (const auto& [p, c] : s.terms()) {
        a.push_back(Json{{"pauli", p.str()}, {"re", sig12(c.real())}, {"im", sig12(c.imag())}});
    }
    return a;
}

inline Json table_json(const CommutatorTable& t) {
    Json rows = Json::array(), cols = Json::array(), entries = Json::array();
    for (const auto& l : t.row_labels()) rows.push_back(label_str(l));
    for (const auto& l : t.col_labels()) cols.push_back(label_str(l));
    for (std::size_t i = 0; i < t.rows(); ++i) entries.push_back(t.row(i));
    return Json{{"rows", rows}, {"cols", cols}, {"entries", entries}};
}

inline Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({sig12(m(r, c).real()), sig12(m(r, c).imag())}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json pauli_channel_json(const PauliChannel& ch) {
    Json a = Json::array();
    for (const auto& [g, p] : ch.probs) a.push_back(Json{{"pauli", g.str()}, {"p", sig12(p)}});
    return a;
}

inline Json condition_json(const ConditionReport& c) {
    Json v = Json::array();
    for (const auto& x : c.violations) v.push_back(Json{{"v", x.v.str()}, {"v_prime", x.v_prime.str()}, {"sum", x.sum}});
    return Json{{"satisfied", c.ok}, {"skipped", c.skipped}, {"pairs_checked", c.pairs_checked}, {"violations", v}};
}

inline Json plan_json(const TwirlPlan& plan) {
    Json mapping = Json::array();
    for (const auto& [v, h] : plan.mapping.entries()) {
        mapping.push_back(Json{{"pauli", v.str()}, {"element", h.str()}, {"mask", h.mask.str()}});
    }
    const auto& d = plan.diagnostics;
    Json j;
    j["n"] = plan.n;
    j["V"] = paulis_json(plan.V);
    j["Vtilde"] = paulis_json(plan.Vtilde());
    j["Vs"] = paulis_json(plan.Vs);
    j["N"] = plan.N;
    j["mapping"] = mapping;
    j["target_table"] = table_json(plan.target);
    j["Wtilde"] = paulis_json(plan.Wtilde);
    if (plan.N <= 10) j["W"] = paulis_json(plan.W());
    j["diagnostics"] = Json{{"size_V", d.size_v},
                            {"size_Vtilde", d.size_vtilde},
                            {"size_Vs", d.size_vs},
                            {"size_Wtilde", d.size_wtilde},
                            {"size_W", plan.size_w()},
                            {"lower_bound", d.lower_bound},
                            {"baseline_generators", d.baseline_generators},
                            {"union_basis_non_optimal", d.union_basis}};
    j["condition"] = condition_json(plan.condition);
    return j;
}

inline std::string plan_summary(const TwirlPlan& plan) {
    std::ostringstream os;
    const auto& d = plan.diagnostics;
    os << "qubits      : " << plan.n << "\n"
       << "V      (" << d.size_v << ") : " << join(plan.V) << "\n"
       << "Vtilde (" << d.size_vtilde << ") : " << join(plan.Vtilde()) << "\n"
       << "Vs     (" << d.size_vs << ") : " << join(plan.Vs) << "\n"
       << "N           : " << plan.N << "\n"
       << "mapping     :";
    for (const auto& [v, h] : plan.mapping.entries()) os << ' ' << v.str() << "->" << h.str();
    os << "\ntarget table:\n" << plan.target.str()
       << "Wtilde (" << d.size_wtilde << ") : " << join(plan.Wtilde) << "\n"
       << "|W|         : " << plan.size_w() << "  (full Pauli baseline: " << d.baseline_generators << " generators)\n"
       << "condition   : " << (plan.condition.skipped ? "skipped" : plan.condition.ok ? "satisfied" : "VIOLATED") << "\n";
    if (d.union_basis) os << "note        : V is the union basis of several Kraus branches; the set is not minimal\n";
    return os.str();
}

/// One line of a verification report.
struct Check {
    std::string name;
    double tolerance = 0.0;
    double residual = 0.0;
    bool passed = false;
};

struct VerificationReport {
    std::vector<Check> checks;

    void add(std::string name, double tolerance, double residual) {
        checks.push_back({std::move(name), tolerance, residual, residual <= tolerance});
    }
    void add_flag(std::string name, bool ok) { checks.push_back({std::move(name), 0.0, ok ? 0.0 : 1.0, ok}); }

    bool all_passed() const {
        for (const auto& c : checks) {
            if (!c.passed) return false;
        }
        return true;
    }

    Json json() const {
        Json a = Json::array();
        for (const auto& c : checks) {
            a.push_back(Json{{"name", c.name}, {"tolerance", sig12(c.tolerance)}, {"residual", sig12(c.residual)}, {"passed", c.passed}});
        }
        return a;
    }

    std::string table() const {
        std::size_t w = 5;
        for (const auto& c : checks) w = std::max(w, c.name.size());
        std::ostringstream os;
        os << std::string(w - 5, ' ') << "check  tolerance         residual  result\n";
        for (const auto& c : checks) {
            os << std::string(w - c.name.size(), ' ') << c.name << "  ";
            const std::string t = fmt12(c.tolerance), r = fmt12(c.residual);
            os << std::string(9 > t.size() ? 9 - t.size() : 0, ' ') << t << "  "
               << std::string(15 > r.size() ? 15 - r.size() : 0, ' ') << r << "  " << (c.passed ? "pass" : "FAIL") << "\n";
        }
        return os.str();
    }
};

}  // namespace ptwirl
