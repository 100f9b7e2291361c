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

// Noise-spec text format.
//
//   # comment                 anything after '#' is ignored
//   qubits N                  optional; fixes the qubit count
//   kraus [WEIGHT]            starts a new Kraus branch, optionally weighted
//   RE IM LITERAL             one Pauli term, e.g. "0.70710678 0.0 ZX" or "1 0 X2 X5"
//   dense N                   starts a dense branch: 4^N "RE IM" pairs follow,
//                             row-major, split across lines freely
//   <blank line>              ends the current branch
//
// LITERAL is either dense ("IZXY", one symbol per qubit) or sparse
// ("X2 X5 X6 X8", 1-based qubit indices). Terms with the same literal in one
// branch are summed. The qubit count comes from `qubits`, a dense literal or a
// dense block; failing those, from the largest sparse index.

#pragma once

#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptwirl/channel.hpp"

namespace ptwirl {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

inline std::optional<double> to_double(std::string_view tok) {
    double v = 0.0;
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
    return v;
}

inline std::size_t to_count(std::string_view tok, std::size_t line, const char* what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw ParseError(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
    return v;
}

struct RawTerm {
    double re = 0.0;
    double im = 0.0;
    std::string literal;
    std::size_t line = 0;
};

struct RawBlock {
    bool dense = false;
    std::optional<double> weight;
    std::size_t line = 0;
    std::size_t dense_n = 0;
    std::vector<double> values;
    std::vector<RawTerm> terms;
};

}  // namespace detail

inline NoiseChannel parse_noise_spec(std::string_view text) {
    using detail::RawBlock;
    std::vector<RawBlock> blocks;
    std::optional<RawBlock> current;
    std::optional<double> pending_weight;
    std::size_t pending_line = 0;
    bool pending_header = false;

    std::optional<std::size_t> n;
    std::size_t n_line = 0;
    auto fix_n = [&](std::size_t value, std::size_t line, const std::string& what) {
        if (!n) {
            n = value;
            n_line = line;
        } else if (*n != value) {
            throw ParseError(line, what + " has " + std::to_string(value) + " qubits but line " + std::to_string(n_line) +
                                       " set " + std::to_string(*n));
        }
    };

    auto close = [&](std::size_t line) {
        if (current) {
            if (current->dense) {
                const std::size_t want = std::size_t{2} << (2 * current->dense_n);
                if (current->values.size() != want) {
                    throw ParseError(line, "dense block from line " + std::to_string(current->line) + " has " +
                                               std::to_string(current->values.size()) + " numbers, expected " +
                                               std::to_string(want));
                }
            }
            blocks.push_back(std::move(*current));
            current.reset();
        } else if (pending_header) {
            throw ParseError(pending_line, "empty Kraus block");
        }
        pending_header = false;
        pending_weight.reset();
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto toks = detail::split_ws(line);

        if (toks.empty()) {
            if (!current || !current->dense || current->values.size() == (std::size_t{2} << (2 * current->dense_n))) {
                close(line_no);
            } else {
                throw ParseError(line_no, "blank line inside dense block started at line " + std::to_string(current->line));
            }
            if (end == text.size()) break;
            continue;
        }

        if (current && current->dense && current->values.size() < (std::size_t{2} << (2 * current->dense_n))) {
            for (auto tok : toks) {
                auto v = detail::to_double(tok);
                if (!v) throw ParseError(line_no, "bad number '" + std::string(tok) + "' in dense block");
                current->values.push_back(*v);
            }
            if (current->values.size() > (std::size_t{2} << (2 * current->dense_n))) {
                throw ParseError(line_no, "too many numbers in dense block started at line " + std::to_string(current->line));
            }
            if (end == text.size()) break;
            continue;
        }

        if (toks[0] == "qubits") {
            if (toks.size() != 2) throw ParseError(line_no, "expected 'qubits N'");
            fix_n(detail::to_count(toks[1], line_no, "qubit count"), line_no, "'qubits'");
        } else if (toks[0] == "kraus") {
            close(line_no);
            if (toks.size() > 2) throw ParseError(line_no, "expected 'kraus [WEIGHT]'");
            if (toks.size() == 2) {
                auto w = detail::to_double(toks[1]);
                if (!w || *w < 0.0) throw ParseError(line_no, "bad Kraus weight '" + std::string(toks[1]) + "'");
                pending_weight = *w;
            }
            pending_header = true;
            pending_line = line_no;
        } else if (toks[0] == "dense") {
            if (toks.size() != 2) throw ParseError(line_no, "expected 'dense N'");
            auto w = pending_weight;
            if (current) close(line_no);
            RawBlock b;
            b.dense = true;
            b.weight = w;
            b.line = line_no;
            b.dense_n = detail::to_count(toks[1], line_no, "qubit count");
            if (b.dense_n > kDefaultDenseLimit) throw ParseError(line_no, "dense block exceeds the dense limit");
            fix_n(b.dense_n, line_no, "dense block");
            current = std::move(b);
            pending_header = false;
        } else {
            if (toks.size() < 3) throw ParseError(line_no, "expected 'RE IM PAULI'");
            auto re = detail::to_double(toks[0]);
            auto im = detail::to_double(toks[1]);
            if (!re || !im) throw ParseError(line_no, "bad coefficient '" + std::string(toks[0]) + " " + std::string(toks[1]) + "'");
            std::string literal;
            for (std::size_t i = 2; i < toks.size(); ++i) {
                if (i > 2) literal += ' ';
                literal += toks[i];
            }
            if (current && current->dense) close(line_no);
            if (!current) {
                RawBlock b;
                b.weight = pending_weight;
                b.line = line_no;
                current = std::move(b);
                pending_header = false;
            }
            if (!PauliString::looks_sparse(literal)) {
                if (toks.size() != 3) throw ParseError(line_no, "dense Pauli literal must be a single token");
                fix_n(literal.size(), line_no, "literal '" + literal + "'");
            }
            current->terms.push_back({*re, *im, std::move(literal), line_no});
        }
        if (end == text.size()) break;
    }
    close(line_no);

    if (blocks.empty()) throw ParseError(line_no, "noise spec contains no Kraus operators");

    // Sparse literals only bound n from below.
    std::size_t sparse_n = 0;
    std::size_t sparse_line = 0;
    for (const auto& b : blocks) {
        for (const auto& t : b.terms) {
            if (!PauliString::looks_sparse(t.literal)) continue;
            const std::size_t ext = PauliString::sparse_extent(t.literal);
            if (n && ext > *n) {
                throw ParseError(t.line, "literal '" + t.literal + "' addresses qubit " + std::to_string(ext) + " but line " +
                                             std::to_string(n_line) + " set " + std::to_string(*n) + " qubits");
            }
            if (ext > sparse_n) {
                sparse_n = ext;
                sparse_line = t.line;
            }
        }
    }
    if (!n) {
        if (sparse_n == 0) throw ParseError(sparse_line, "cannot determine the qubit count");
        n = sparse_n;
    }

    bool any_weight = false;
    for (const auto& b : blocks) any_weight = any_weight || b.weight.has_value();

    NoiseChannel channel(*n);
    for (const auto& b : blocks) {
        std::optional<double> w;
        if (any_weight) w.emplace(b.weight.value_or(1.0));
        if (b.dense) {
            const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << b.dense_n);
            Matrix m(dim, dim);
            for (Eigen::Index r = 0; r < dim; ++r) {
                for (Eigen::Index c = 0; c < dim; ++c) {
                    const auto k = static_cast<std::size_t>(2 * (r * dim + c));
                    m(r, c) = Complex{b.values[k], b.values[k + 1]};
                }
            }
            channel.add(DenseOperator(std::move(m)), w);
            continue;
        }
        PauliSum s(*n);
        for (const auto& t : b.terms) {
            try {
                s.add(PauliString::parse(t.literal, *n), Complex{t.re, t.im});
            } catch (const std::invalid_argument& e) {
                throw ParseError(t.line, e.what());
            }
        }
        channel.add(std::move(s), w);
    }
    return channel;
}

namespace detail {
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace detail

/// Text that parse_noise_spec reads back to an equal channel.
inline std::string render_noise_spec(const NoiseChannel& channel) {
    std::ostringstream os;
    os << "qubits " << channel.n() << "\n";
    for (std::size_t i = 0; i < channel.size(); ++i) {
        os << "\nkraus";
        if (channel.has_weights()) os << ' ' << detail::fmt17(channel.weight(i));
        os << '\n';
        if (const auto* s = std::get_if<PauliSum>(&channel.branches()[i])) {
            for (const auto& [p, c] : s->terms()) {
                os << detail::fmt17(c.real()) << ' ' << detail::fmt17(c.imag()) << ' ' << p.str() << '\n';
            }
        } else {
            const auto& m = std::get<DenseOperator>(channel.branches()[i]).matrix();
            os << "dense " << channel.n() << '\n';
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                for (Eigen::Index c = 0; c < m.cols(); ++c) {
                    if (c) os << ' ';
                    os << detail::fmt17(m(r, c).real()) << ' ' << detail::fmt17(m(r, c).imag());
                }
                os << '\n';
            }
        }
    }
    return os.str();
}

}  // namespace ptwirl
