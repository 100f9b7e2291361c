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

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "ptwirl/channel.hpp"
#include "ptwirl/gf2.hpp"
#include "ptwirl/pauli.hpp"

namespace ptwirl {

/// Element prod_i g_i^{alpha_i} of an abstract group generated by N
/// independent elements; the group operation is XOR of the exponent masks.
struct GroupElement {
    BitVector mask;
    char symbol = 'h';

    static GroupElement identity(std::size_t width, char symbol = 'h') { return {BitVector(width), symbol}; }
    static GroupElement generator(std::size_t width, std::size_t i, char symbol = 'h') {
        GroupElement g{BitVector(width), symbol};
        g.mask.set(i);
        return g;
    }

    std::size_t width() const noexcept { return mask.size(); }
    bool is_identity() const noexcept { return mask.none(); }

    /// "I", "h2", "h1*h3", with 1-based generator indices.
    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (!mask.get(i)) continue;
            if (!s.empty()) s += '*';
            s += symbol;
            s += std::to_string(i + 1);
        }
        return s.empty() ? "I" : s;
    }

    friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
        if (a.symbol != b.symbol) throw std::invalid_argument("GroupElement: composing elements of different groups");
        return {a.mask ^ b.mask, a.symbol};
    }
    friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

using TableLabel = std::variant<PauliString, GroupElement>;

inline std::string label_str(const TableLabel& l) {
    return std::visit([](const auto& v) { return v.str(); }, l);
}

/// A +-1 matrix of commutator values with labelled rows and columns.
class CommutatorTable {
public:
    CommutatorTable() = default;
    CommutatorTable(std::vector<TableLabel> rows, std::vector<TableLabel> cols, std::vector<int> entries)
        : rows_(std::move(rows)), cols_(std::move(cols)), entries_(std::move(entries)) {
        if (entries_.size() != rows_.size() * cols_.size()) throw std::invalid_argument("CommutatorTable: shape mismatch");
        for (int e : entries_) {
            if (e != 1 && e != -1) throw std::invalid_argument("CommutatorTable: entries must be +1 or -1");
        }
    }

    /// zeta(a_i, b_j) over two lists of Paulis.
    static CommutatorTable of_paulis(std::span<const PauliString> rows, std::span<const PauliString> cols) {
        std::vector<int> entries;
        entries.reserve(rows.size() * cols.size());
        for (const auto& a : rows) {
            for (const auto& b : cols) entries.push_back(zeta(a, b));
        }
        return {std::vector<TableLabel>(rows.begin(), rows.end()), std::vector<TableLabel>(cols.begin(), cols.end()),
                std::move(entries)};
    }

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_.size(); }
    int at(std::size_t i, std::size_t j) const { return entries_.at(i * cols_.size() + j); }
    const std::vector<TableLabel>& row_labels() const noexcept { return rows_; }
    const std::vector<TableLabel>& col_labels() const noexcept { return cols_; }

    std::vector<int> row(std::size_t i) const {
        return {entries_.begin() + static_cast<std::ptrdiff_t>(i * cols()),
                entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols())};
    }

    /// Checks zeta(a, b) zeta(a', b) = zeta(a*a', b) and the column analogue
    /// for every pair whose composed label is also present.
    bool satisfies_composition_laws() const {
        auto check = [&](const std::vector<TableLabel>& labels, bool along_rows) {
            for (std::size_t a = 0; a < labels.size(); ++a) {
                for (std::size_t b = a + 1; b < labels.size(); ++b) {
                    auto c = compose_label(labels[a], labels[b]);
                    if (!c) continue;
                    auto it = std::find(labels.begin(), labels.end(), *c);
                    if (it == labels.end()) continue;
                    const auto k = static_cast<std::size_t>(it - labels.begin());
                    const std::size_t other = along_rows ? cols() : rows();
                    for (std::size_t t = 0; t < other; ++t) {
                        const int lhs = along_rows ? at(a, t) * at(b, t) : at(t, a) * at(t, b);
                        const int rhs = along_rows ? at(k, t) : at(t, k);
                        if (lhs != rhs) return false;
                    }
                }
            }
            return true;
        };
        return check(rows_, true) && check(cols_, false);
    }

    std::string str() const {
        std::vector<std::string> rl, cl;
        std::size_t w0 = 0, wc = 2;
        for (const auto& l : rows_) w0 = std::max(w0, (rl.emplace_back(label_str(l))).size());
        for (const auto& l : cols_) wc = std::max(wc, (cl.emplace_back(label_str(l))).size());
        auto pad = [](const std::string& s, std::size_t w) { return std::string(w - std::min(w, s.size()), ' ') + s; };
        std::string out = std::string(w0, ' ') + " |";
        for (const auto& c : cl) out += " " + pad(c, wc);
        out += "\n" + std::string(w0 + 2 + cl.size() * (wc + 1), '-') + "\n";
        for (std::size_t i = 0; i < rows(); ++i) {
            out += pad(rl[i], w0) + " |";
            for (std::size_t j = 0; j < cols(); ++j) out += " " + pad(at(i, j) > 0 ? "1" : "-1", wc);
            out += "\n";
        }
        return out;
    }

    friend bool operator==(const CommutatorTable&, const CommutatorTable&) = default;

private:
    static std::optional<TableLabel> compose_label(const TableLabel& a, const TableLabel& b) {
        if (a.index() != b.index()) return std::nullopt;
        if (const auto* pa = std::get_if<PauliString>(&a)) return TableLabel(star(*pa, std::get<PauliString>(b)));
        const auto& ga = std::get<GroupElement>(a);
        const auto& gb = std::get<GroupElement>(b);
        if (ga.symbol != gb.symbol || ga.width() != gb.width()) return std::nullopt;
        return TableLabel(ga * gb);
    }

    std::vector<TableLabel> rows_;
    std::vector<TableLabel> cols_;
    std::vector<int> entries_;
};

/// Injective assignment of each element of V to an element of H.
class VtoHMapping {
public:
    VtoHMapping() = default;
    explicit VtoHMapping(std::size_t width) : width_(width) {}

    std::size_t width() const noexcept { return width_; }
    const std::vector<std::pair<PauliString, GroupElement>>& entries() const noexcept { return entries_; }

    void assign(const PauliString& v, GroupElement h) {
        if (h.width() != width_) throw std::logic_error("VtoHMapping: mask width mismatch");
        if (index_.contains(v)) throw std::logic_error("VtoHMapping: " + v.str() + " mapped twice");
        index_.emplace(v, entries_.size());
        entries_.emplace_back(v, std::move(h));
    }

    bool contains(const PauliString& v) const { return index_.contains(v); }
    const GroupElement& image(const PauliString& v) const {
        auto it = index_.find(v);
        if (it == index_.end()) throw std::out_of_range("VtoHMapping: " + v.str() + " is not mapped");
        return entries_[it->second].second;
    }

    bool injective() const {
        std::set<std::vector<std::uint64_t>> seen;
        for (const auto& [v, h] : entries_) {
            if (!seen.insert(h.mask.words()).second) return false;
        }
        return true;
    }

private:
    std::size_t width_ = 0;
    std::vector<std::pair<PauliString, GroupElement>> entries_;
    std::unordered_map<PauliString, std::size_t> index_;
};

/// Subset of the generating set used by the composition relations of V - Vtilde,
/// in canonical order.
inline std::vector<PauliString> find_vs(std::span<const PauliString> V, const GeneratingSetResult& gs) {
    if (gs.coords.size() != V.size()) throw std::invalid_argument("find_vs: generating set was not computed from V");
    const std::size_t k = gs.basis.size();
    BitVector used(k);
    std::vector<bool> in_basis(V.size(), false);
    for (auto src : gs.basis_source) in_basis[src] = true;
    for (std::size_t i = 0; i < V.size(); ++i) {
        if (!in_basis[i]) used |= gs.coords[i];
    }
    std::vector<PauliString> out;
    for (std::size_t j = 0; j < k; ++j) {
        if (used.get(j)) out.push_back(gs.basis[j]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::size_t ceil_log2(std::size_t x) {
    std::size_t r = 0;
    while (r < 64 && (std::uint64_t{1} << r) < x) ++r;
    return r;
}

/// Smallest N with 2^N >= |V| and N >= |Vs|.
inline std::size_t choose_N(std::size_t size_v, std::size_t size_vs) {
    if (size_v == 0) throw std::invalid_argument("choose_N: empty Pauli basis");
    return std::max(ceil_log2(size_v), size_vs);
}

/// Step-4 mapping of V into H = <h1..hN>:
///  (a) Vs gets h1, h2, ... in canonical order;
///  (b) V - Vtilde follows the composition relations;
///  (c) Vtilde - Vs takes the unused elements of H in weight order (I first).
inline VtoHMapping build_mapping(std::span<const PauliString> V, const GeneratingSetResult& gs,
                                 std::span<const PauliString> Vs, std::size_t N) {
    if (N < Vs.size() || (N < 64 && (std::uint64_t{1} << N) < V.size())) {
        throw std::logic_error("build_mapping: N = " + std::to_string(N) + " too small for |V| = " +
                               std::to_string(V.size()) + ", |Vs| = " + std::to_string(Vs.size()));
    }
    VtoHMapping mapping(N);
    std::set<std::vector<std::uint64_t>> used;
    auto take = [&](const PauliString& v, GroupElement h) {
        used.insert(h.mask.words());
        mapping.assign(v, std::move(h));
    };

    std::map<PauliString, std::size_t> vs_slot;
    for (std::size_t i = 0; i < Vs.size(); ++i) {
        vs_slot.emplace(Vs[i], i);
        take(Vs[i], GroupElement::generator(N, i));
    }

    std::vector<bool> in_basis(V.size(), false);
    for (auto src : gs.basis_source) in_basis[src] = true;

    for (std::size_t i = 0; i < V.size(); ++i) {
        if (in_basis[i]) continue;
        GroupElement h = GroupElement::identity(N);
        for (std::size_t j = 0; j < gs.basis.size(); ++j) {
            if (!gs.coords[i].get(j)) continue;
            auto it = vs_slot.find(gs.basis[j]);
            if (it == vs_slot.end()) throw std::logic_error("build_mapping: relation uses " + gs.basis[j].str() + " outside Vs");
            h.mask.flip(it->second);
        }
        take(V[i], std::move(h));
    }

    WeightOrderedMasks candidates(N);
    for (std::size_t i = 0; i < V.size(); ++i) {
        if (!in_basis[i] || vs_slot.contains(V[i])) continue;
        while (used.contains(candidates.current().words())) {
            if (!candidates.advance()) throw std::logic_error("build_mapping: ran out of group elements");
        }
        take(V[i], GroupElement{candidates.current(), 'h'});
    }

    if (!mapping.injective()) throw std::logic_error("build_mapping: mapping is not injective");
    return mapping;
}

/// Generator table zeta(q_i, h_j) = 1 - 2 delta_ij.
inline CommutatorTable generator_table(std::size_t N) {
    std::vector<TableLabel> rows, cols;
    std::vector<int> entries;
    for (std::size_t i = 0; i < N; ++i) {
        rows.emplace_back(GroupElement::generator(N, i, 'q'));
        cols.emplace_back(GroupElement::generator(N, i, 'h'));
    }
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) entries.push_back(i == j ? -1 : 1);
    }
    return {std::move(rows), std::move(cols), std::move(entries)};
}

/// Entry for abstract row q and column h: (-1)^(q . h).
inline int abstract_zeta(const GroupElement& q, const GroupElement& h) { return q.mask.dot(h.mask) ? -1 : 1; }

/// Columns of the generator table composed to the images of `columns`:
/// entry (i, v) = (-1)^(bit i of image(v)).
inline CommutatorTable target_table(const VtoHMapping& mapping, std::size_t N, std::span<const PauliString> columns) {
    if (mapping.width() != N) throw std::invalid_argument("target_table: mapping width differs from N");
    std::vector<TableLabel> rows, cols;
    std::vector<int> entries;
    for (std::size_t i = 0; i < N; ++i) rows.emplace_back(GroupElement::generator(N, i, 'q'));
    for (const auto& v : columns) cols.emplace_back(mapping.image(v));
    for (std::size_t i = 0; i < N; ++i) {
        for (const auto& v : columns) entries.push_back(mapping.image(v).mask.get(i) ? -1 : 1);
    }
    return {std::move(rows), std::move(cols), std::move(entries)};
}

/// All 2^N x 2^N values (-1)^(q . h). Rows follow the binary count with q1 as
/// the most significant digit; columns are in weight order (I, h1, ..., h1*h2, ...).
inline CommutatorTable quotient_table(std::size_t N) {
    if (N > 12) throw std::invalid_argument("quotient_table: N too large");
    const std::size_t size = std::size_t{1} << N;
    std::vector<TableLabel> rows, cols;
    for (std::size_t r = 0; r < size; ++r) {
        GroupElement q = GroupElement::identity(N, 'q');
        for (std::size_t i = 0; i < N; ++i) {
            if ((r >> (N - 1 - i)) & 1u) q.mask.set(i);
        }
        rows.emplace_back(std::move(q));
    }
    for (auto& m : masks_by_weight(N)) cols.emplace_back(GroupElement{std::move(m), 'h'});
    std::vector<int> entries;
    entries.reserve(size * size);
    for (const auto& r : rows) {
        for (const auto& c : cols) entries.push_back(abstract_zeta(std::get<GroupElement>(r), std::get<GroupElement>(c)));
    }
    return {std::move(rows), std::move(cols), std::move(entries)};
}

/// One row of the step-6 system: zeta(w, v) must equal sign.
struct Constraint {
    PauliString v;
    int sign = 1;
};

/// Solutions whose free space is at most this many dimensions are searched
/// exhaustively for the minimum-weight representative.
inline constexpr std::size_t kMaxEnumeratedFreeDims = 16;

/// Finds w with zeta(w, v_j) = sign_j for all constraints. The system is linear
/// over GF(2) in the 2n symplectic bits of w. Among the solutions the lowest
/// weight Pauli is returned (ties in canonical order) when the solution space
/// is small enough to enumerate, else the particular solution with every free
/// variable zero.
inline PauliString solve_generator(std::span<const Constraint> constraints, std::size_t n) {
    const std::size_t vars = 2 * n;
    struct Row {
        BitVector a;
        bool b;
    };
    std::vector<Row> rows;
    rows.reserve(constraints.size());
    for (const auto& c : constraints) {
        if (c.v.n() != n) throw std::invalid_argument("solve_generator: constraint " + c.v.str() + " has wrong qubit count");
        if (c.sign != 1 && c.sign != -1) throw std::invalid_argument("solve_generator: target must be +1 or -1");
        // zeta(w, v) = (-1)^(w.x . v.z + w.z . v.x)
        BitVector a(vars);
        for (std::size_t k = 0; k < n; ++k) {
            if (c.v.z().get(k)) a.set(k);
            if (c.v.x().get(k)) a.set(n + k);
        }
        rows.push_back({std::move(a), c.sign == -1});
    }

    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < vars && rank < rows.size(); ++col) {
        std::size_t sel = rank;
        while (sel < rows.size() && !rows[sel].a.get(col)) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[rank], rows[sel]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && rows[r].a.get(col)) {
                rows[r].a ^= rows[rank].a;
                rows[r].b = rows[r].b != rows[rank].b;
            }
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (std::size_t r = rank; r < rows.size(); ++r) {
        throw std::invalid_argument(rows[r].b ? "solve_generator: contradictory constraints"
                                              : "solve_generator: dependent constraints");
    }

    BitVector particular(vars);
    for (std::size_t r = 0; r < rank; ++r) particular.set(pivot_col[r], rows[r].b);

    std::vector<bool> is_pivot(vars, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    std::vector<BitVector> kernel;
    for (std::size_t f = 0; f < vars; ++f) {
        if (is_pivot[f]) continue;
        BitVector k(vars);
        k.set(f);
        for (std::size_t r = 0; r < rank; ++r) {
            if (rows[r].a.get(f)) k.set(pivot_col[r]);
        }
        kernel.push_back(std::move(k));
    }

    PauliString best = PauliString::from_symplectic(particular);
    if (kernel.size() > kMaxEnumeratedFreeDims) return best;
    std::size_t best_weight = best.weight();
    BitVector current = particular;
    const std::uint64_t count = std::uint64_t{1} << kernel.size();
    for (std::uint64_t step = 1; step < count; ++step) {
        // Gray code: flip the kernel vector at the lowest set bit of step.
        current ^= kernel[static_cast<std::size_t>(std::countr_zero(step))];
        PauliString cand = PauliString::from_symplectic(current);
        const std::size_t w = cand.weight();
        if (w < best_weight || (w == best_weight && cand < best)) {
            best = std::move(cand);
            best_weight = w;
        }
    }
    return best;
}

inline PauliString solve_generator(const std::vector<Constraint>& constraints, std::size_t n) {
    return solve_generator(std::span<const Constraint>(constraints), n);
}

/// A pair v != v' for which sum_w zeta(w, v*v') is nonzero.
struct Violation {
    PauliString v;
    PauliString v_prime;
    long long sum = 0;
};

struct ConditionReport {
    bool ok = true;
    /// Set when the exhaustive check was over budget and not run.
    bool skipped = false;
    std::size_t pairs_checked = 0;
    std::vector<Violation> violations;
};

/// Checks sum_{w in W} zeta(w, v*v') == 0 for every unordered pair of distinct
/// elements of V.
inline ConditionReport verify_condition(std::span<const PauliString> W, std::span<const PauliString> V) {
    ConditionReport report;
    std::unordered_map<PauliString, long long> sums;
    for (std::size_t i = 0; i < V.size(); ++i) {
        for (std::size_t j = i + 1; j < V.size(); ++j) {
            if (V[i] == V[j]) continue;
            ++report.pairs_checked;
            const PauliString u = star(V[i], V[j]);
            auto it = sums.find(u);
            if (it == sums.end()) {
                long long s = 0;
                for (const auto& w : W) s += zeta(w, u);
                it = sums.emplace(u, s).first;
            }
            if (it->second != 0) {
                report.ok = false;
                report.violations.push_back({V[i], V[j], it->second});
            }
        }
    }
    return report;
}

inline ConditionReport verify_condition(const std::vector<PauliString>& W, const std::vector<PauliString>& V) {
    return verify_condition(std::span<const PauliString>(W), std::span<const PauliString>(V));
}

/// The 2n generators X_k, Z_k of the full Pauli set.
inline std::vector<PauliString> full_pauli_baseline(std::size_t n) {
    std::vector<PauliString> out;
    out.reserve(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(PauliString::single(n, k, Pauli::X));
        out.push_back(PauliString::single(n, k, Pauli::Z));
    }
    return out;
}

struct PlanDiagnostics {
    std::size_t size_v = 0;
    std::size_t size_vtilde = 0;
    std::size_t size_vs = 0;
    std::size_t size_wtilde = 0;
    std::size_t baseline_generators = 0;
    std::size_t lower_bound = 0;  // ceil(log2 |V|)
    bool union_basis = false;     // V merged from several Kraus branches
};

struct TwirlPlan {
    std::size_t n = 0;
    std::vector<PauliString> V;
    GeneratingSetResult generating;
    std::vector<PauliString> Vs;
    std::size_t N = 0;
    VtoHMapping mapping;
    CommutatorTable target;
    std::vector<PauliString> Wtilde;
    PlanDiagnostics diagnostics;
    ConditionReport condition;

    const std::vector<PauliString>& Vtilde() const noexcept { return generating.basis; }

    /// |W| = 2^|Wtilde|; saturates at 2^63.
    std::uint64_t size_w() const noexcept { return Wtilde.size() >= 63 ? (std::uint64_t{1} << 63) : (std::uint64_t{1} << Wtilde.size()); }

    std::vector<PauliString> W() const { return span(Wtilde, n); }

    /// The solved generators reproduce the target table entry for entry.
    bool table_consistent() const {
        if (target.rows() != Wtilde.size() || target.cols() != Vtilde().size()) return false;
        for (std::size_t i = 0; i < Wtilde.size(); ++i) {
            for (std::size_t j = 0; j < Vtilde().size(); ++j) {
                if (zeta(Wtilde[i], Vtilde()[j]) != target.at(i, j)) return false;
            }
        }
        return true;
    }
};

struct BuildOptions {
    double threshold = 0.0;
    std::size_t dense_limit = kDefaultDenseLimit;
    /// Skip the final exhaustive check when 2^N * pairs exceeds this.
    std::uint64_t verify_budget = std::uint64_t{1} << 32;
};

/// Runs the construction from an explicit Pauli basis.
inline TwirlPlan build_twirl_plan(std::vector<PauliString> V, const BuildOptions& options = {}) {
    if (V.empty()) throw std::invalid_argument("build_twirl_plan: the noise has an empty Pauli basis");
    std::sort(V.begin(), V.end());
    V.erase(std::unique(V.begin(), V.end()), V.end());

    TwirlPlan plan;
    plan.n = V.front().n();
    plan.V = std::move(V);
    plan.generating = generating_set(plan.V);
    plan.Vs = find_vs(plan.V, plan.generating);
    plan.N = choose_N(plan.V.size(), plan.Vs.size());
    plan.mapping = build_mapping(plan.V, plan.generating, plan.Vs, plan.N);
    plan.target = target_table(plan.mapping, plan.N, plan.Vtilde());

    plan.Wtilde.reserve(plan.N);
    for (std::size_t i = 0; i < plan.N; ++i) {
        std::vector<Constraint> cs;
        cs.reserve(plan.Vtilde().size());
        for (std::size_t j = 0; j < plan.Vtilde().size(); ++j) cs.push_back({plan.Vtilde()[j], plan.target.at(i, j)});
        plan.Wtilde.push_back(solve_generator(cs, plan.n));
    }

    auto& d = plan.diagnostics;
    d.size_v = plan.V.size();
    d.size_vtilde = plan.Vtilde().size();
    d.size_vs = plan.Vs.size();
    d.size_wtilde = plan.Wtilde.size();
    d.baseline_generators = 2 * plan.n;
    d.lower_bound = ceil_log2(plan.V.size());

    if (!plan.table_consistent()) throw std::logic_error("build_twirl_plan: solved generators do not match the target table");
    if (!(d.lower_bound <= d.size_wtilde && d.size_wtilde <= d.size_vtilde)) {
        throw std::logic_error("build_twirl_plan: size bounds violated");
    }
    const auto pairs = static_cast<std::uint64_t>(plan.V.size()) * (plan.V.size() - 1) / 2;
    if (plan.N <= 30 && (std::uint64_t{1} << plan.N) * std::max<std::uint64_t>(pairs, 1) <= options.verify_budget) {
        plan.condition = verify_condition(plan.W(), plan.V);
        if (!plan.condition.ok) throw std::logic_error("build_twirl_plan: constructed set fails the twirling condition");
    } else {
        plan.condition.skipped = true;
    }
    return plan;
}

inline TwirlPlan build_twirl_plan(const NoiseChannel& channel, const BuildOptions& options = {}) {
    if (channel.empty()) throw std::invalid_argument("build_twirl_plan: channel has no Kraus branches");
    TwirlPlan plan = build_twirl_plan(pauli_basis(channel, options.threshold, options.dense_limit), options);
    plan.diagnostics.union_basis = channel.size() > 1;
    return plan;
}

struct SubstitutionResult {
    std::vector<PauliString> active;
    std::vector<PauliString> absorbed;
    /// Generators that are products of the stabilisers without matching one
    /// exactly. Reported only; they stay in `active`.
    std::vector<PauliString> in_stabiliser_group;
};

/// Drops every twirling generator that equals a measured stabiliser.
inline SubstitutionResult substitute_stabilisers(std::span<const PauliString> wtilde,
                                                 std::span<const PauliString> stabilisers) {
    for (std::size_t i = 0; i < stabilisers.size(); ++i) {
        for (std::size_t j = i + 1; j < stabilisers.size(); ++j) {
            if (zeta(stabilisers[i], stabilisers[j]) != 1) {
                throw std::invalid_argument("substitute_stabilisers: " + stabilisers[i].str() + " and " +
                                            stabilisers[j].str() + " do not commute");
            }
        }
    }
    const std::size_t rank = generating_set(stabilisers).basis.size();
    SubstitutionResult out;
    for (const auto& w : wtilde) {
        if (std::find(stabilisers.begin(), stabilisers.end(), w) != stabilisers.end()) {
            out.absorbed.push_back(w);
            continue;
        }
        out.active.push_back(w);
        if (w.is_identity() || stabilisers.empty()) continue;
        std::vector<PauliString> extended(stabilisers.begin(), stabilisers.end());
        extended.push_back(w);
        if (generating_set(extended).basis.size() == rank) out.in_stabiliser_group.push_back(w);
    }
    return out;
}

inline SubstitutionResult substitute_stabilisers(const TwirlPlan& plan, std::span<const PauliString> stabilisers) {
    return substitute_stabilisers(plan.Wtilde, stabilisers);
}

}  // namespace ptwirl
