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
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ptwirl/dense.hpp"
#include "ptwirl/pauli.hpp"

namespace ptwirl {

/// Coefficients below this fraction of the largest one are treated as zero.
inline constexpr double kRelativeZero = 1e-12;

/// Complex-weighted sum of Paulis, kept in canonical order.
class PauliSum {
public:
    using Terms = std::map<PauliString, Complex>;

    PauliSum() = default;
    explicit PauliSum(std::size_t n) : n_(n) {}

    static PauliSum single(const PauliString& p, Complex c = 1.0) {
        PauliSum s(p.n());
        s.add(p, c);
        return s;
    }

    std::size_t n() const noexcept { return n_; }
    const Terms& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    /// Accumulates c onto p; exact zeros are removed.
    void add(const PauliString& p, Complex c) {
        if (p.n() != n_) {
            throw std::invalid_argument("PauliSum: term " + p.str() + " has " + std::to_string(p.n()) +
                                        " qubits, sum has " + std::to_string(n_));
        }
        auto [it, inserted] = terms_.try_emplace(p, c);
        if (!inserted) it->second += c;
        if (it->second == Complex{0.0, 0.0}) terms_.erase(it);
    }

    Complex coefficient(const PauliString& p) const {
        auto it = terms_.find(p);
        return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
    }

    double max_magnitude() const {
        double m = 0.0;
        for (const auto& [p, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    /// Sum of |c|^2, i.e. ||M||_F^2 / 2^n for the operator this represents.
    double norm2() const {
        double s = 0.0;
        for (const auto& [p, c] : terms_) s += std::norm(c);
        return s;
    }

    /// The threshold actually applied for a requested absolute one.
    double effective_threshold(double threshold) const { return std::max(threshold, kRelativeZero * max_magnitude()); }

    /// Drops every coefficient with magnitude <= max(threshold, relative zero).
    PauliSum pruned(double threshold = 0.0) const {
        const double cut = effective_threshold(threshold);
        PauliSum out(n_);
        for (const auto& [p, c] : terms_) {
            if (std::abs(c) > cut) out.terms_.emplace(p, c);
        }
        return out;
    }

    PauliSum& operator+=(const PauliSum& other) {
        for (const auto& [p, c] : other.terms_) add(p, c);
        return *this;
    }
    friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }

    PauliSum& operator*=(Complex s) {
        if (s == Complex{0.0, 0.0}) {
            terms_.clear();
        } else {
            for (auto& [p, c] : terms_) c *= s;
        }
        return *this;
    }
    friend PauliSum operator*(Complex s, PauliSum a) { return a *= s; }

    friend bool operator==(const PauliSum&, const PauliSum&) = default;

private:
    std::size_t n_ = 0;
    Terms terms_;
};

/// A dense 2^n x 2^n operator.
class DenseOperator {
public:
    DenseOperator() = default;
    explicit DenseOperator(Matrix m) : m_(std::move(m)) { n_ = qubits_of(m_); }

    std::size_t n() const noexcept { return n_; }
    const Matrix& matrix() const noexcept { return m_; }

    friend bool operator==(const DenseOperator& a, const DenseOperator& b) { return a.n_ == b.n_ && a.m_ == b.m_; }

private:
    std::size_t n_ = 0;
    Matrix m_;
};

/// Pauli-basis decomposition, coefficient of g = Tr(g M) / 2^n.
inline PauliSum decompose(const DenseOperator& op, double threshold = 0.0,
                          std::size_t dense_limit = kDefaultDenseLimit) {
    if (threshold < 0.0) throw std::invalid_argument("decompose: negative threshold");
    const std::size_t n = op.n();
    check_dense_limit(n, dense_limit, "decompose");
    const double scale = 1.0 / static_cast<double>(std::uint64_t{1} << n);
    PauliSum raw(n);
    for (const auto& g : all_paulis(n)) {
        const Complex c = trace_with(g, op.matrix()) * scale;
        if (c != Complex{0.0, 0.0}) raw.add(g, c);
    }
    return raw.pruned(threshold);
}

inline PauliSum decompose(const Matrix& m, double threshold = 0.0, std::size_t dense_limit = kDefaultDenseLimit) {
    return decompose(DenseOperator(m), threshold, dense_limit);
}

/// Sum of c_g * g as a dense matrix.
inline DenseOperator reconstruct(const PauliSum& s, std::size_t dense_limit = kDefaultDenseLimit) {
    check_dense_limit(s.n(), dense_limit, "reconstruct");
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << s.n());
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& [p, c] : s.terms()) m += c * to_matrix(p, dense_limit);
    return DenseOperator(std::move(m));
}

/// A set of Kraus branches, optionally carrying per-branch weights so that the
/// channel is sum_b weight_b [M_b].
class NoiseChannel {
public:
    using Branch = std::variant<PauliSum, DenseOperator>;

    NoiseChannel() = default;
    explicit NoiseChannel(std::size_t n) : n_(n) {}

    static NoiseChannel single(Branch b) {
        NoiseChannel ch(branch_n(b));
        ch.add(std::move(b));
        return ch;
    }

    std::size_t n() const noexcept { return n_; }
    const std::vector<Branch>& branches() const noexcept { return branches_; }
    std::size_t size() const noexcept { return branches_.size(); }
    bool empty() const noexcept { return branches_.empty(); }
    bool has_weights() const noexcept { return weights_.has_value(); }

    void add(Branch b, std::optional<double> weight = std::nullopt) {
        if (branch_n(b) != n_) {
            throw std::invalid_argument("NoiseChannel: branch has " + std::to_string(branch_n(b)) +
                                        " qubits, channel has " + std::to_string(n_));
        }
        if (weight) {
            if (*weight < 0.0) throw std::invalid_argument("NoiseChannel: negative branch weight");
            if (!weights_) weights_.emplace(branches_.size(), 1.0);
        }
        branches_.push_back(std::move(b));
        if (weights_) weights_->push_back(weight.value_or(1.0));
    }

    double weight(std::size_t i) const { return weights_ ? (*weights_)[i] : 1.0; }

    /// Branch i in Pauli form; dense branches are decomposed.
    PauliSum pauli_sum(std::size_t i, double threshold = 0.0, std::size_t dense_limit = kDefaultDenseLimit) const {
        if (const auto* s = std::get_if<PauliSum>(&branches_[i])) return s->pruned(threshold);
        return decompose(std::get<DenseOperator>(branches_[i]), threshold, dense_limit);
    }

    Matrix dense(std::size_t i, std::size_t dense_limit = kDefaultDenseLimit) const {
        if (const auto* d = std::get_if<DenseOperator>(&branches_[i])) return d->matrix();
        return reconstruct(std::get<PauliSum>(branches_[i]), dense_limit).matrix();
    }

    /// max |sum_b w_b M_b^dag M_b - I| entrywise.
    double completeness_error(std::size_t dense_limit = kDefaultDenseLimit) const {
        check_dense_limit(n_, dense_limit, "completeness check");
        const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n_);
        Matrix acc = Matrix::Zero(dim, dim);
        for (std::size_t i = 0; i < branches_.size(); ++i) {
            const Matrix m = dense(i, dense_limit);
            acc += weight(i) * m.adjoint() * m;
        }
        return (acc - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
    }

    void check_completeness(double tol = 1e-10, std::size_t dense_limit = kDefaultDenseLimit) const {
        const double err = completeness_error(dense_limit);
        if (!(err <= tol)) {
            throw std::invalid_argument("Kraus completeness violated: max deviation " + std::to_string(err));
        }
    }

    friend bool operator==(const NoiseChannel&, const NoiseChannel&) = default;

private:
    static std::size_t branch_n(const Branch& b) {
        return std::visit([](const auto& v) { return v.n(); }, b);
    }

    std::size_t n_ = 0;
    std::vector<Branch> branches_;
    std::optional<std::vector<double>> weights_;
};

/// Union over branches of {g : |coefficient of g| above the zero threshold},
/// in canonical order.
inline std::vector<PauliString> pauli_basis(const NoiseChannel& channel, double threshold = 0.0,
                                            std::size_t dense_limit = kDefaultDenseLimit) {
    std::set<PauliString> acc;
    for (std::size_t i = 0; i < channel.size(); ++i) {
        const PauliSum s = channel.pauli_sum(i, threshold, dense_limit);
        for (const auto& [p, c] : s.terms()) acc.insert(p);
    }
    return {acc.begin(), acc.end()};
}

}  // namespace ptwirl
