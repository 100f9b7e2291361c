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

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ptwirl/channel.hpp"
#include "ptwirl/dense.hpp"
#include "ptwirl/pauli.hpp"

namespace ptwirl {

/// State-level simulation is capped here; Choi-level checks at kChoiLimit.
inline constexpr std::size_t kStateLimit = 8;
inline constexpr std::size_t kChoiLimit = 4;

/// Default tolerance on Choi off-diagonals for calling a channel Pauli.
inline constexpr double kPauliChannelTol = 1e-10;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
public:
    static constexpr double kHermitianTol = 1e-12;
    static constexpr double kTraceTol = 1e-12;
    static constexpr double kEigenFloor = -1e-10;

    explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
        n_ = qubits_of(m_);
        const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
        if (herm > kHermitianTol) throw std::invalid_argument("density matrix is not Hermitian (" + std::to_string(herm) + ")");
        const Complex tr = m_.trace();
        if (std::abs(tr - Complex{1.0, 0.0}) > kTraceTol) {
            throw std::invalid_argument("density matrix trace is " + std::to_string(tr.real()) + ", not 1");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < kEigenFloor) throw std::invalid_argument("density matrix is not positive semidefinite");
    }

    /// |index><index|.
    static DensityMatrix basis_state(std::size_t n, std::uint64_t index) {
        const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
        Matrix m = Matrix::Zero(dim, dim);
        m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
        return DensityMatrix(std::move(m));
    }

    /// G G^dag / Tr(G G^dag) with G complex Gaussian (full rank mixed state).
    template <typename Rng>
    static DensityMatrix random(std::size_t n, Rng& rng) {
        const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
        std::normal_distribution<double> normal(0.0, 1.0);
        Matrix g(dim, dim);
        for (Eigen::Index c = 0; c < dim; ++c) {
            for (Eigen::Index r = 0; r < dim; ++r) g(r, c) = Complex{normal(rng), normal(rng)};
        }
        Matrix m = g * g.adjoint();
        m = 0.5 * (m + m.adjoint()).eval();
        m /= m.trace().real();
        return DensityMatrix(std::move(m));
    }

    std::size_t n() const noexcept { return n_; }
    const Matrix& matrix() const noexcept { return m_; }
    operator const Matrix&() const noexcept { return m_; }

private:
    std::size_t n_ = 0;
    Matrix m_;
};

/// sum_g p_g [g].
struct PauliChannel {
    std::size_t n = 0;
    std::map<PauliString, double> probs;

    double total() const {
        double t = 0.0;
        for (const auto& [g, p] : probs) t += p;
        return t;
    }

    double prob(const PauliString& g) const {
        auto it = probs.find(g);
        return it == probs.end() ? 0.0 : it->second;
    }

    Matrix apply(const Matrix& rho) const {
        Matrix out = Matrix::Zero(rho.rows(), rho.cols());
        for (const auto& [g, p] : probs) out += p * conjugate(g, rho);
        return out;
    }
};

/// Process matrix chi_{g g'} of a map rho -> sum chi_{g g'} g rho g', indexed by
/// the canonical Pauli order.
struct ChoiMatrix {
    std::size_t n = 0;
    std::vector<PauliString> basis;
    Matrix entries;

    double max_off_diagonal() const {
        double m = 0.0;
        for (Eigen::Index r = 0; r < entries.rows(); ++r) {
            for (Eigen::Index c = 0; c < entries.cols(); ++c) {
                if (r != c) m = std::max(m, std::abs(entries(r, c)));
            }
        }
        return m;
    }

    Complex at(const PauliString& a, const PauliString& b) const { return entries(index_of(a), index_of(b)); }

    Eigen::Index index_of(const PauliString& g) const {
        auto it = std::lower_bound(basis.begin(), basis.end(), g);
        if (it == basis.end() || *it != g) throw std::out_of_range("ChoiMatrix: " + g.str() + " not in basis");
        return static_cast<Eigen::Index>(it - basis.begin());
    }
};

using ChannelMap = std::function<Matrix(const Matrix&)>;

/// M rho M^dagger, not renormalised.
inline Matrix apply_kraus(const Matrix& m, const Matrix& rho) {
    if (m.rows() != rho.rows() || m.cols() != rho.cols()) throw std::invalid_argument("apply_kraus: dimension mismatch");
    return sandwich(m, rho);
}

namespace detail {
inline void check_twirl_args(std::span<const PauliString> W, const Matrix& m, const Matrix& rho) {
    if (W.empty()) throw std::invalid_argument("twirl: empty twirling set");
    const std::size_t n = qubits_of(m);
    if (qubits_of(rho) != n || rho.rows() != m.rows()) throw std::invalid_argument("twirl: state and operator dimensions differ");
    for (const auto& w : W) {
        if (w.n() != n) throw std::invalid_argument("twirl: gate " + w.str() + " has wrong qubit count");
    }
}
}  // namespace detail

/// (1/|W|) sum_w (wMw) rho (wMw)^dagger.
inline Matrix exact_twirl(std::span<const PauliString> W, const Matrix& m, const Matrix& rho) {
    detail::check_twirl_args(W, m, rho);
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& w : W) out += sandwich(conjugate(w, m), rho);
    return out / static_cast<double>(W.size());
}

inline Matrix exact_twirl(const std::vector<PauliString>& W, const Matrix& m, const Matrix& rho) {
    return exact_twirl(std::span<const PauliString>(W), m, rho);
}

/// Uniform draw in [0, bound) by rejection sampling on the raw 64-bit stream.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

/// Average over `samples` gates drawn uniformly from W with mt19937_64(seed).
inline Matrix random_twirl(std::span<const PauliString> W, const Matrix& m, const Matrix& rho, std::size_t samples,
                           std::uint64_t seed) {
    detail::check_twirl_args(W, m, rho);
    if (samples == 0) throw std::invalid_argument("random_twirl: samples must be positive");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> counts(W.size(), 0);
    for (std::size_t s = 0; s < samples; ++s) ++counts[uniform_index(rng, W.size())];
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (std::size_t i = 0; i < W.size(); ++i) {
        if (counts[i] != 0) out += static_cast<double>(counts[i]) * sandwich(conjugate(W[i], m), rho);
    }
    return out / static_cast<double>(samples);
}

inline Matrix random_twirl(const std::vector<PauliString>& W, const Matrix& m, const Matrix& rho, std::size_t samples,
                           std::uint64_t seed) {
    return random_twirl(std::span<const PauliString>(W), m, rho, samples, seed);
}

enum class Normalisation {
    kRaw,        // p_v = w_b |Tr(vM)|^2 / 4^n exactly
    kPerBranch,  // each branch rescaled so its probabilities sum to w_b
};

/// Pauli channel a fully twirled noise channel reduces to.
inline PauliChannel predicted_channel(const NoiseChannel& channel, Normalisation norm = Normalisation::kPerBranch,
                                      double threshold = 0.0, std::size_t dense_limit = kDefaultDenseLimit) {
    PauliChannel out;
    out.n = channel.n();
    for (std::size_t i = 0; i < channel.size(); ++i) {
        const PauliSum s = channel.pauli_sum(i, threshold, dense_limit);
        double scale = channel.weight(i);
        if (norm == Normalisation::kPerBranch) {
            const double total = s.norm2();
            if (total == 0.0) continue;
            scale /= total;
        }
        for (const auto& [g, c] : s.terms()) out.probs[g] += scale * std::norm(c);
    }
    return out;
}

/// Process matrix of an arbitrary linear map on n-qubit operators, from the
/// Choi state (E (x) id)(|Omega><Omega|) rotated into the Pauli basis.
inline ChoiMatrix choi(const ChannelMap& map, std::size_t n, std::size_t limit = kChoiLimit) {
    check_dense_limit(n, limit, "choi");
    const auto d = static_cast<Eigen::Index>(std::uint64_t{1} << n);
    const Eigen::Index d2 = d * d;
    Matrix J = Matrix::Zero(d2, d2);
    Matrix unit = Matrix::Zero(d, d);
    for (Eigen::Index l = 0; l < d; ++l) {
        for (Eigen::Index lp = 0; lp < d; ++lp) {
            unit(l, lp) = 1.0;
            const Matrix img = map(unit);
            unit(l, lp) = 0.0;
            for (Eigen::Index k = 0; k < d; ++k) {
                for (Eigen::Index kp = 0; kp < d; ++kp) J(k * d + l, kp * d + lp) = img(k, kp);
            }
        }
    }
    ChoiMatrix out;
    out.n = n;
    out.basis = all_paulis(n);
    Matrix V(d2, static_cast<Eigen::Index>(out.basis.size()));
    for (std::size_t a = 0; a < out.basis.size(); ++a) {
        const Matrix p = to_matrix(out.basis[a]);
        for (Eigen::Index k = 0; k < d; ++k) {
            for (Eigen::Index l = 0; l < d; ++l) V(k * d + l, static_cast<Eigen::Index>(a)) = p(k, l);
        }
    }
    out.entries = V.adjoint() * J * V / static_cast<double>(d2);
    return out;
}

/// Pauli channel iff every off-diagonal process-matrix entry is within tol.
inline bool is_pauli_channel(const ChoiMatrix& c, double tol = kPauliChannelTol) { return c.max_off_diagonal() <= tol; }

/// Parts of M commuting (first) and anticommuting (second) with w.
inline std::pair<Matrix, Matrix> split_by_commutation(const PauliString& w, const Matrix& m) {
    const Matrix wmw = conjugate(w, m);
    return {0.5 * (m + wmw), 0.5 * (m - wmw)};
}

/// Twirl over {I, w}: (1/2)(M rho M^dag + (wMw) rho (wMw)^dag), which equals
/// M+ rho M+^dag + M- rho M-^dag.
inline Matrix one_gate_twirl(const PauliString& w, const Matrix& m, const Matrix& rho) {
    const PauliString gates[2] = {PauliString(w.n()), w};
    return exact_twirl(std::span<const PauliString>(gates), m, rho);
}

/// Nested one-gate twirls T_{I,w1} . T_{I,w2} . ... applied to [M], evaluated
/// as channel compositions rho -> (1/2)(E(rho) + w E(w rho w) w).
inline Matrix nested_one_gate_twirl(std::span<const PauliString> wtilde, const Matrix& m, const Matrix& rho) {
    ChannelMap e = [m](const Matrix& r) { return sandwich(m, r); };
    for (const auto& w : wtilde) {
        e = [inner = std::move(e), w](const Matrix& r) -> Matrix {
            return 0.5 * (inner(r) + conjugate(w, inner(conjugate(w, r))));
        };
    }
    return e(rho);
}

/// Measure stabiliser s on M rho M^dag and discard the outcome:
/// sum_{+-} P+- M rho M^dag P+-, P+- = (1 +- s)/2. Requires rho in one
/// eigenspace of s (a code state, possibly hit by a Pauli error).
inline Matrix stabiliser_check_channel(const PauliString& s, const Matrix& m, const Matrix& rho, double tol = 1e-10) {
    const std::size_t n = qubits_of(rho);
    if (s.n() != n || qubits_of(m) != n) throw std::invalid_argument("stabiliser_check_channel: dimension mismatch");
    const auto dim = rho.rows();
    const Matrix S = to_matrix(s);
    const Matrix id = Matrix::Identity(dim, dim);
    const Matrix plus = 0.5 * (id + S);
    const Matrix minus = 0.5 * (id - S);
    const double in_plus = (plus * rho * plus - rho).cwiseAbs().maxCoeff();
    const double in_minus = (minus * rho * minus - rho).cwiseAbs().maxCoeff();
    if (in_plus > tol && in_minus > tol) {
        throw std::invalid_argument("stabiliser_check_channel: state is not in an eigenspace of " + s.str());
    }
    const Matrix sigma = sandwich(m, rho);
    return plus * sigma * plus + minus * sigma * minus;
}

/// Gate C followed by noise M with probability p, bracketed by w after the
/// noise and C^dag w C before the gate, averaged over w in <wtilde>.
inline Matrix gate_noise_twirl(const Matrix& c, const Matrix& m, double p, std::span<const PauliString> wtilde,
                               const Matrix& rho, double unitary_tol = 1e-10) {
    const std::size_t n = qubits_of(c);
    if (qubits_of(m) != n || qubits_of(rho) != n) throw std::invalid_argument("gate_noise_twirl: dimension mismatch");
    const auto dim = c.rows();
    if ((c.adjoint() * c - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > unitary_tol) {
        throw std::invalid_argument("gate_noise_twirl: gate is not unitary");
    }
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gate_noise_twirl: probability outside [0, 1]");
    const auto W = span(wtilde, n);
    Matrix out = Matrix::Zero(dim, dim);
    for (const auto& w : W) {
        const Matrix wm = to_matrix(w);
        const Matrix pre = c.adjoint() * wm * c;
        const Matrix clean = wm * c * pre;
        const Matrix noisy = wm * m * c * pre;
        out += (1.0 - p) * sandwich(clean, rho) + p * sandwich(noisy, rho);
    }
    return out / static_cast<double>(W.size());
}

/// (1/2) || A - B ||_1 for Hermitian A, B.
inline double trace_distance(const Matrix& a, const Matrix& b) {
    const Matrix diff = 0.5 * ((a - b) + (a - b).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Rescales so that sum |c|^2 = 1.
inline PauliSum normalised(const PauliSum& s) {
    const double t = s.norm2();
    if (t == 0.0) throw std::invalid_argument("normalised: zero operator");
    return Complex{1.0 / std::sqrt(t), 0.0} * s;
}

}  // namespace ptwirl
