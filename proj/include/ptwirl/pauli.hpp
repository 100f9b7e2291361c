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
#include <cctype>
#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptwirl/gf2.hpp"

namespace ptwirl {

inline constexpr std::size_t kMaxQubits = 1024;

/// Single-qubit symbol codes; the code is x + 2z.
enum class Pauli : unsigned char { I = 0, X = 1, Z = 2, Y = 3 };

inline char pauli_char(Pauli p) {
    switch (p) {
        case Pauli::I: return 'I';
        case Pauli::X: return 'X';
        case Pauli::Z: return 'Z';
        case Pauli::Y: return 'Y';
    }
    return '?';
}

/// A phase-free n-qubit Pauli operator in symplectic form.
///
/// Qubit k carries I/X/Z/Y for (x_k, z_k) = (0,0)/(1,0)/(0,1)/(1,1). Qubit 0 is
/// the leftmost character of the dense literal and the most significant
/// tensor factor of the matrix form.
class PauliString {
public:
    PauliString() = default;

    /// Identity on n qubits.
    explicit PauliString(std::size_t n) : x_(n), z_(n) { check_n(n); }

    PauliString(BitVector x, BitVector z) : x_(std::move(x)), z_(std::move(z)) {
        if (x_.size() != z_.size()) throw std::invalid_argument("PauliString: x/z length mismatch");
        check_n(x_.size());
    }

    /// Dense literal such as "IZXY".
    static PauliString from_dense(std::string_view text) {
        PauliString p(text.size());
        for (std::size_t k = 0; k < text.size(); ++k) p.set(k, parse_symbol(text[k], text));
        return p;
    }

    /// Sparse literal such as "X2 X5 X6 X8" with 1-based qubit indices.
    static PauliString from_sparse(std::string_view text, std::size_t n) {
        PauliString p(n);
        std::vector<bool> seen(n, false);
        std::size_t i = 0;
        while (i < text.size()) {
            if (std::isspace(static_cast<unsigned char>(text[i]))) {
                ++i;
                continue;
            }
            const Pauli sym = parse_symbol(text[i], text);
            ++i;
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (start == i) throw std::invalid_argument("missing qubit index in Pauli literal '" + std::string(text) + "'");
            const std::size_t index = std::stoul(std::string(text.substr(start, i - start)));
            if (index == 0 || index > n) {
                throw std::invalid_argument("qubit index " + std::to_string(index) + " out of range 1.." +
                                            std::to_string(n) + " in '" + std::string(text) + "'");
            }
            if (seen[index - 1]) {
                throw std::invalid_argument("qubit " + std::to_string(index) + " repeated in '" + std::string(text) + "'");
            }
            seen[index - 1] = true;
            p.set(index - 1, sym);
        }
        return p;
    }

    /// Largest 1-based index mentioned in a sparse literal (0 for none).
    static std::size_t sparse_extent(std::string_view text) {
        std::size_t best = 0;
        std::size_t i = 0;
        while (i < text.size()) {
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
                ++i;
                continue;
            }
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            best = std::max(best, static_cast<std::size_t>(std::stoul(std::string(text.substr(start, i - start)))));
        }
        return best;
    }

    static bool looks_sparse(std::string_view text) {
        return std::any_of(text.begin(), text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    }

    /// Either literal form; sparse literals need `n`.
    static PauliString parse(std::string_view text, std::size_t n = 0) {
        if (looks_sparse(text)) {
            if (n == 0) n = sparse_extent(text);
            return from_sparse(text, n);
        }
        auto p = from_dense(text);
        if (n != 0 && p.n() != n) {
            throw std::invalid_argument("Pauli literal '" + std::string(text) + "' has " + std::to_string(p.n()) +
                                        " qubits, expected " + std::to_string(n));
        }
        return p;
    }

    /// X or Z on a single qubit (0-based) of an n-qubit register.
    static PauliString single(std::size_t n, std::size_t qubit, Pauli sym) {
        PauliString p(n);
        p.set(qubit, sym);
        return p;
    }

    std::size_t n() const noexcept { return x_.size(); }
    const BitVector& x() const noexcept { return x_; }
    const BitVector& z() const noexcept { return z_; }

    Pauli at(std::size_t k) const {
        return static_cast<Pauli>(static_cast<unsigned>(x_.get(k)) | (static_cast<unsigned>(z_.get(k)) << 1));
    }
    void set(std::size_t k, Pauli sym) {
        const auto code = static_cast<unsigned>(sym);
        x_.set(k, code & 1u);
        z_.set(k, (code >> 1) & 1u);
    }

    bool is_identity() const noexcept { return x_.none() && z_.none(); }
    std::size_t weight() const { return (x_ | z_).popcount(); }
    std::size_t y_count() const { return (x_ & z_).popcount(); }

    /// Concatenated (x, z) vector of 2n bits.
    BitVector symplectic() const {
        const std::size_t n = this->n();
        BitVector v(2 * n);
        for (std::size_t k = 0; k < n; ++k) {
            if (x_.get(k)) v.set(k);
            if (z_.get(k)) v.set(n + k);
        }
        return v;
    }
    static PauliString from_symplectic(const BitVector& v) {
        const std::size_t n = v.size() / 2;
        PauliString p(n);
        for (std::size_t k = 0; k < n; ++k) {
            p.x_.set(k, v.get(k));
            p.z_.set(k, v.get(n + k));
        }
        return p;
    }

    std::string str() const {
        std::string s(n(), 'I');
        for (std::size_t k = 0; k < n(); ++k) s[k] = pauli_char(at(k));
        return s;
    }

    /// "X2 X5 X6 X8" form; identity renders as "I".
    std::string sparse_str() const {
        std::string s;
        for (std::size_t k = 0; k < n(); ++k) {
            if (at(k) == Pauli::I) continue;
            if (!s.empty()) s += ' ';
            s += pauli_char(at(k));
            s += std::to_string(k + 1);
        }
        return s.empty() ? "I" : s;
    }

    friend bool operator==(const PauliString&, const PauliString&) = default;

    /// Canonical order: qubit count, then weight, then support (a Pauli acting
    /// on a lower-indexed qubit first comes first), then symbols with I<X<Z<Y.
    friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
        if (auto c = a.n() <=> b.n(); c != 0) return c;
        if (auto c = a.weight() <=> b.weight(); c != 0) return c;
        const BitVector sa = a.x_ | a.z_;
        const BitVector sb = b.x_ | b.z_;
        if (auto q = (sa ^ sb).lowest_set()) {
            return sa.get(*q) ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        if (auto q = ((a.x_ ^ b.x_) | (a.z_ ^ b.z_)).lowest_set()) {
            return a.at(*q) <=> b.at(*q);
        }
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const PauliString& p) { return os << p.str(); }

private:
    static void check_n(std::size_t n) {
        if (n > kMaxQubits) {
            throw std::invalid_argument("qubit count " + std::to_string(n) + " exceeds limit " + std::to_string(kMaxQubits));
        }
    }

    static Pauli parse_symbol(char c, std::string_view context) {
        switch (c) {
            case 'I': case 'i': case '_': return Pauli::I;
            case 'X': case 'x': return Pauli::X;
            case 'Z': case 'z': return Pauli::Z;
            case 'Y': case 'y': return Pauli::Y;
            default:
                throw std::invalid_argument("bad Pauli symbol '" + std::string(1, c) + "' in '" + std::string(context) + "'");
        }
    }

    BitVector x_;
    BitVector z_;
};

inline void check_same_n(const PauliString& a, const PauliString& b) {
    if (a.n() != b.n()) {
        throw std::invalid_argument("qubit count mismatch: " + a.str() + " (" + std::to_string(a.n()) + ") vs " + b.str() +
                                    " (" + std::to_string(b.n()) + ")");
    }
}

/// Pauli product with every phase discarded.
inline PauliString star(const PauliString& a, const PauliString& b) {
    check_same_n(a, b);
    return PauliString(a.x() ^ b.x(), a.z() ^ b.z());
}

/// Commutator function: +1 if a and b commute, -1 if they anticommute.
inline int zeta(const PauliString& a, const PauliString& b) {
    check_same_n(a, b);
    return (a.x().dot(b.z()) != a.z().dot(b.x())) ? -1 : 1;
}

/// Independent subset of a list of Paulis plus the coordinates of every input
/// over that subset.
struct GeneratingSetResult {
    std::vector<PauliString> basis;
    /// coords[i] has basis.size() bits; set bits select the basis elements whose
    /// product is the i-th input.
    std::vector<BitVector> coords;
    /// Position in the input list of each basis element.
    std::vector<std::size_t> basis_source;
};

/// Gaussian elimination over the concatenated (x, z) vectors. Elements are
/// scanned in input order and the first independent one wins; pivots are the
/// lowest set bit of each reduced row.
inline GeneratingSetResult generating_set(std::span<const PauliString> elements) {
    GeneratingSetResult out;
    if (elements.empty()) return out;
    const std::size_t n = elements.front().n();
    const std::size_t cap = 2 * n;

    struct Row {
        BitVector vec;
        BitVector comb;  // over basis indices; sized to cap
        std::size_t pivot;
    };
    std::vector<Row> rows;
    std::vector<BitVector> raw_coords;
    raw_coords.reserve(elements.size());

    for (std::size_t i = 0; i < elements.size(); ++i) {
        const auto& e = elements[i];
        check_same_n(elements.front(), e);
        BitVector vec = e.symplectic();
        BitVector comb(cap);
        for (const auto& r : rows) {
            if (vec.get(r.pivot)) {
                vec ^= r.vec;
                comb ^= r.comb;
            }
        }
        if (vec.any()) {
            const std::size_t k = out.basis.size();
            out.basis.push_back(e);
            out.basis_source.push_back(i);
            comb.flip(k);
            const std::size_t pivot = *vec.lowest_set();
            rows.push_back(Row{std::move(vec), std::move(comb), pivot});
            BitVector self(cap);
            self.set(k);
            raw_coords.push_back(std::move(self));
        } else {
            raw_coords.push_back(std::move(comb));
        }
    }

    const std::size_t k = out.basis.size();
    out.coords.reserve(raw_coords.size());
    for (const auto& rc : raw_coords) {
        BitVector c(k);
        for (std::size_t j = 0; j < k; ++j) {
            if (rc.get(j)) c.set(j);
        }
        out.coords.push_back(std::move(c));
    }
    return out;
}

inline GeneratingSetResult generating_set(const std::vector<PauliString>& elements) {
    return generating_set(std::span<const PauliString>(elements));
}

/// Product of the basis elements selected by `coords`.
inline PauliString compose(std::span<const PauliString> basis, const BitVector& coords, std::size_t n) {
    PauliString acc(n);
    for (std::size_t j = 0; j < basis.size(); ++j) {
        if (coords.get(j)) acc = star(acc, basis[j]);
    }
    return acc;
}

inline bool is_independent(std::span<const PauliString> elements) {
    return generating_set(elements).basis.size() == elements.size();
}

/// All 2^k products of k independent generators, identity first, listed in
/// weight order of the exponent mask (I, g1, g2, ..., g1*g2, ...).
inline std::vector<PauliString> span(std::span<const PauliString> generators, std::size_t n) {
    if (!generators.empty() && !is_independent(generators)) {
        throw std::invalid_argument("span: generators are not independent");
    }
    if (generators.size() > 30) throw std::invalid_argument("span: too many generators to enumerate");
    std::vector<PauliString> out;
    for (const auto& mask : masks_by_weight(generators.size())) out.push_back(compose(generators, mask, n));
    return out;
}

inline std::vector<PauliString> span(const std::vector<PauliString>& generators, std::size_t n) {
    return span(std::span<const PauliString>(generators), n);
}

/// Every n-qubit Pauli in canonical order; n must be small.
inline std::vector<PauliString> all_paulis(std::size_t n) {
    if (n > 10) throw std::invalid_argument("all_paulis: n too large");
    std::vector<PauliString> out;
    out.reserve(std::size_t{1} << (2 * n));
    for (std::size_t code = 0; code < (std::size_t{1} << (2 * n)); ++code) {
        PauliString p(n);
        for (std::size_t k = 0; k < n; ++k) p.set(k, static_cast<Pauli>((code >> (2 * k)) & 3u));
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::string join(std::span<const PauliString> ps, std::string_view sep = ", ") {
    std::string s;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i) s += sep;
        s += ps[i].str();
    }
    return s;
}

}  // namespace ptwirl

template <>
struct std::hash<ptwirl::PauliString> {
    std::size_t operator()(const ptwirl::PauliString& p) const noexcept {
        std::size_t h = p.n();
        for (auto w : p.x().words()) h = h * 1000003u ^ std::hash<std::uint64_t>{}(w);
        for (auto w : p.z().words()) h = h * 1000003u ^ std::hash<std::uint64_t>{}(w + 0x9e3779b97f4a7c15ull);
        return h;
    }
};
