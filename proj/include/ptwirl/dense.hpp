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

#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "ptwirl/pauli.hpp"

namespace ptwirl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr std::size_t kDefaultDenseLimit = 10;

inline void check_dense_limit(std::size_t n, std::size_t limit, const char* what) {
    if (n > limit) {
        throw std::invalid_argument(std::string(what) + ": " + std::to_string(n) + " qubits exceeds dense limit " +
                                    std::to_string(limit));
    }
}

/// Qubit count of a 2^n x 2^n matrix; throws otherwise.
inline std::size_t qubits_of(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("operator is not square");
    const auto dim = static_cast<std::uint64_t>(m.rows());
    if (dim == 0 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument("operator dimension " + std::to_string(dim) + " is not a power of two");
    }
    return static_cast<std::size_t>(std::countr_zero(dim));
}

namespace detail {

/// Basis-state masks of a Pauli. Qubit k maps to bit (n-1-k) of the state index.
struct PauliAction {
    std::uint64_t flip = 0;   // X part
    std::uint64_t phase = 0;  // Z part
    Complex y_phase{1.0, 0.0};
};

inline PauliAction pauli_action(const PauliString& p) {
    const std::size_t n = p.n();
    if (n > 62) throw std::invalid_argument("dense Pauli action needs n <= 62");
    PauliAction a;
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - k);
        if (p.x().get(k)) a.flip |= bit;
        if (p.z().get(k)) a.phase |= bit;
    }
    static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    a.y_phase = kIPow[p.y_count() % 4];
    return a;
}

/// <c XOR flip| P |c> for the Pauli described by `a`.
inline Complex column_phase(const PauliAction& a, std::uint64_t c) {
    return (std::popcount(a.phase & c) & 1) ? -a.y_phase : a.y_phase;
}

}  // namespace detail

/// Dense matrix of a Pauli with Y = [[0, -i], [i, 0]]; the first qubit is the
/// leftmost Kronecker factor.
inline Matrix to_matrix(const PauliString& p, std::size_t dense_limit = kDefaultDenseLimit) {
    check_dense_limit(p.n(), dense_limit, "to_matrix");
    const auto a = detail::pauli_action(p);
    const std::uint64_t dim = std::uint64_t{1} << p.n();
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::uint64_t c = 0; c < dim; ++c) {
        m(static_cast<Eigen::Index>(c ^ a.flip), static_cast<Eigen::Index>(c)) = detail::column_phase(a, c);
    }
    return m;
}

/// Tr(p * m) without forming p.
inline Complex trace_with(const PauliString& p, const Matrix& m) {
    const auto a = detail::pauli_action(p);
    Complex acc{0.0, 0.0};
    for (Eigen::Index b = 0; b < m.rows(); ++b) {
        const auto ub = static_cast<std::uint64_t>(b);
        acc += detail::column_phase(a, ub) * m(b, static_cast<Eigen::Index>(ub ^ a.flip));
    }
    return acc;
}

/// p * m * p for a Pauli p (which is Hermitian and unitary).
inline Matrix conjugate(const PauliString& p, const Matrix& m) {
    if (qubits_of(m) != p.n()) throw std::invalid_argument("conjugate: dimension mismatch");
    const auto a = detail::pauli_action(p);
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const auto uc = static_cast<std::uint64_t>(c);
        const Complex pc = detail::column_phase(a, uc);
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const auto ur = static_cast<std::uint64_t>(r);
            // (pMp)_{rc} = conj(phi(r)) phi(c) M_{r^f, c^f}, phi being the column phase.
            const Complex pr = std::conj(detail::column_phase(a, ur));
            out(r, c) = pr * pc * m(static_cast<Eigen::Index>(ur ^ a.flip), static_cast<Eigen::Index>(uc ^ a.flip));
        }
    }
    return out;
}

/// K rho K^dagger.
inline Matrix sandwich(const Matrix& k, const Matrix& rho) {
    if (k.cols() != rho.rows() || rho.rows() != rho.cols()) throw std::invalid_argument("sandwich: dimension mismatch");
    return k * rho * k.adjoint();
}

}  // namespace ptwirl
