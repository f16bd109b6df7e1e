// Copyright 2026 The vqelab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Pauli strings in symplectic form and weighted sums of them.
 *
 * Conventions used throughout the library:
 *  - qubit k is bit k of a computational-basis index (qubit 0 is the least
 *    significant bit);
 *  - in text form, character k of a Pauli string acts on qubit k, so the
 *    leftmost character is qubit 0;
 *  - a string is stored as two bit masks (x, z) with P = i^{|x&z|} X^x Z^z,
 *    i.e. Y sits where both bits are set.
 */
#pragma once

#include "error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace vqelab {

using cplx = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 64;
inline constexpr double kDropTolerance = 1e-12;
inline constexpr std::size_t kDefaultDenseCap = 14;

class PauliString {
  public:
    PauliString() = default;
    PauliString(std::size_t num_qubits, std::uint64_t x, std::uint64_t z)
        : n_(num_qubits), x_(x), z_(z) {
        if (n_ > kMaxQubits) {
            throw DimensionError("Pauli strings support at most 64 qubits");
        }
        const std::uint64_t mask = full_mask(n_);
        if ((x_ & ~mask) || (z_ & ~mask)) {
            throw DimensionError("Pauli bits set beyond the qubit count");
        }
    }

    static PauliString identity(std::size_t num_qubits) {
        return {num_qubits, 0, 0};
    }

    /// Single-qubit factor `op` in {'I','X','Y','Z'} on `qubit`.
    static PauliString single(std::size_t num_qubits, std::size_t qubit,
                              char op) {
        if (qubit >= num_qubits) {
            throw DimensionError("qubit index out of range");
        }
        const std::uint64_t bit = std::uint64_t{1} << qubit;
        switch (op) {
        case 'I':
            return {num_qubits, 0, 0};
        case 'X':
            return {num_qubits, bit, 0};
        case 'Y':
            return {num_qubits, bit, bit};
        case 'Z':
            return {num_qubits, 0, bit};
        default:
            throw ValidationError(std::string("unknown Pauli factor '") + op +
                                  "'");
        }
    }

    static PauliString parse(std::string_view text) {
        if (text.size() > kMaxQubits) {
            throw DimensionError("Pauli strings support at most 64 qubits");
        }
        std::uint64_t x = 0;
        std::uint64_t z = 0;
        for (std::size_t k = 0; k < text.size(); ++k) {
            const std::uint64_t bit = std::uint64_t{1} << k;
            switch (text[k]) {
            case 'I':
                break;
            case 'X':
                x |= bit;
                break;
            case 'Y':
                x |= bit;
                z |= bit;
                break;
            case 'Z':
                z |= bit;
                break;
            default:
                throw ValidationError("invalid Pauli string '" +
                                      std::string(text) + "'");
            }
        }
        return {text.size(), x, z};
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return n_; }
    [[nodiscard]] std::uint64_t x_bits() const noexcept { return x_; }
    [[nodiscard]] std::uint64_t z_bits() const noexcept { return z_; }

    [[nodiscard]] char at(std::size_t qubit) const noexcept {
        const bool xb = (x_ >> qubit) & 1U;
        const bool zb = (z_ >> qubit) & 1U;
        return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }

    [[nodiscard]] std::string str() const {
        std::string s(n_, 'I');
        for (std::size_t k = 0; k < n_; ++k) {
            s[k] = at(k);
        }
        return s;
    }

    [[nodiscard]] std::size_t weight() const noexcept {
        return static_cast<std::size_t>(std::popcount(x_ | z_));
    }
    [[nodiscard]] std::size_t y_count() const noexcept {
        return static_cast<std::size_t>(std::popcount(x_ & z_));
    }
    [[nodiscard]] bool is_identity() const noexcept { return (x_ | z_) == 0; }
    [[nodiscard]] bool is_diagonal() const noexcept { return x_ == 0; }

    [[nodiscard]] bool commutes_with(const PauliString &other) const noexcept {
        return (std::popcount((x_ & other.z_) ^ (z_ & other.x_)) & 1) == 0;
    }

    friend bool operator==(const PauliString &, const PauliString &) = default;

    /// Lexicographic order of the text form (I < X < Y < Z, qubit 0 first).
    friend std::strong_ordering operator<=>(const PauliString &a,
                                            const PauliString &b) noexcept {
        if (a.n_ != b.n_) {
            return a.n_ <=> b.n_;
        }
        const std::uint64_t diff = (a.x_ ^ b.x_) | (a.z_ ^ b.z_);
        if (diff == 0) {
            return std::strong_ordering::equal;
        }
        const int q = std::countr_zero(diff);
        return a.code(q) <=> b.code(q);
    }

    static constexpr std::uint64_t full_mask(std::size_t n) noexcept {
        return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    }

  private:
    [[nodiscard]] int code(int q) const noexcept {
        const int xb = static_cast<int>((x_ >> q) & 1U);
        const int zb = static_cast<int>((z_ >> q) & 1U);
        return xb ? 1 + zb : 3 * zb;
    }

    std::size_t n_ = 0;
    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
};

struct PauliTerm {
    cplx coefficient{1.0, 0.0};
    PauliString string;
};

namespace detail {
inline cplx i_power(int k) {
    switch (((k % 4) + 4) % 4) {
    case 0:
        return {1, 0};
    case 1:
        return {0, 1};
    case 2:
        return {-1, 0};
    default:
        return {0, -1};
    }
}
} // namespace detail

/// Product of two strings: returns (phase, string) with phase in {±1, ±i}.
inline std::pair<cplx, PauliString> multiply_strings(const PauliString &a,
                                                     const PauliString &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw DimensionError("Pauli string length mismatch: " +
                             std::to_string(a.num_qubits()) + " vs " +
                             std::to_string(b.num_qubits()));
    }
    const std::uint64_t x = a.x_bits() ^ b.x_bits();
    const std::uint64_t z = a.z_bits() ^ b.z_bits();
    // i^{|x1 z1|} X^x1 Z^z1 i^{|x2 z2|} X^x2 Z^z2
    //   = i^{|x1 z1| + |x2 z2| + 2|z1 x2|} X^x Z^z = phase * i^{|x z|} X^x Z^z
    const int e = std::popcount(a.x_bits() & a.z_bits()) +
                  std::popcount(b.x_bits() & b.z_bits()) +
                  2 * std::popcount(a.z_bits() & b.x_bits()) -
                  std::popcount(x & z);
    return {detail::i_power(e), PauliString(a.num_qubits(), x, z)};
}

inline PauliTerm mul_pauli(const PauliTerm &a, const PauliTerm &b) {
    auto [phase, s] = multiply_strings(a.string, b.string);
    return {a.coefficient * b.coefficient * phase, s};
}

/**
 * Accumulates coefficient * P|in> into out. Both spans have length 2^n.
 */
inline void apply_pauli_add(const PauliString &p, cplx coefficient,
                            std::span<const cplx> in, std::span<cplx> out) {
    const std::uint64_t x = p.x_bits();
    const std::uint64_t z = p.z_bits();
    const cplx base = coefficient * detail::i_power(static_cast<int>(p.y_count()));
    const std::size_t dim = in.size();
    for (std::size_t b = 0; b < dim; ++b) {
        const double sign = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
        out[b ^ x] += base * sign * in[b];
    }
}

/**
 * Weighted sum of Pauli strings on a fixed number of qubits.
 *
 * Terms are kept in a map keyed by string so like terms are always
 * combined; simplify() drops negligible coefficients. Instances are values:
 * every algebraic operation returns a new operator.
 */
class QubitOperator {
  public:
    using TermMap = std::map<PauliString, cplx>;

    QubitOperator() = default;
    explicit QubitOperator(std::size_t num_qubits) : n_(num_qubits) {
        if (n_ > kMaxQubits) {
            throw DimensionError("operators support at most 64 qubits");
        }
    }
    QubitOperator(std::size_t num_qubits, std::span<const PauliTerm> terms)
        : QubitOperator(num_qubits) {
        for (const auto &t : terms) {
            add_term(t.coefficient, t.string);
        }
    }
    QubitOperator(std::size_t num_qubits, std::initializer_list<PauliTerm> terms)
        : QubitOperator(num_qubits, std::span<const PauliTerm>(terms.begin(), terms.size())) {}
    QubitOperator(std::size_t num_qubits,
                  std::initializer_list<std::pair<cplx, std::string_view>> terms)
        : QubitOperator(num_qubits) {
        for (const auto &[c, s] : terms) {
            add_term(c, PauliString::parse(s));
        }
    }

    static QubitOperator identity(std::size_t num_qubits, cplx c = 1.0) {
        QubitOperator op(num_qubits);
        op.add_term(c, PauliString::identity(num_qubits));
        return op;
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return n_; }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
    [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }
    [[nodiscard]] const TermMap &terms() const noexcept { return terms_; }

    [[nodiscard]] cplx coefficient(const PauliString &s) const {
        auto it = terms_.find(s);
        return it == terms_.end() ? cplx{} : it->second;
    }

    void add_term(cplx c, const PauliString &s) {
        if (s.num_qubits() != n_) {
            throw DimensionError("term has " + std::to_string(s.num_qubits()) +
                                 " qubits, operator has " + std::to_string(n_));
        }
        terms_[s] += c;
    }
    void add_term(const PauliTerm &t) { add_term(t.coefficient, t.string); }

    /// Combined and pruned copy; the size of the result is n_p.
    [[nodiscard]] QubitOperator simplify(double tol = kDropTolerance) const {
        QubitOperator out(n_);
        for (const auto &[s, c] : terms_) {
            if (std::abs(c) > tol) {
                out.terms_.emplace_hint(out.terms_.end(), s, c);
            }
        }
        return out;
    }

    [[nodiscard]] bool is_hermitian(double tol = kDropTolerance) const {
        return std::all_of(terms_.begin(), terms_.end(), [tol](const auto &kv) {
            return std::abs(kv.second.imag()) <= tol;
        });
    }

    /// Identity-string coefficient.
    [[nodiscard]] cplx constant() const {
        return coefficient(PauliString::identity(n_));
    }

    [[nodiscard]] QubitOperator adjoint() const {
        QubitOperator out(n_);
        for (const auto &[s, c] : terms_) {
            out.terms_.emplace_hint(out.terms_.end(), s, std::conj(c));
        }
        return out;
    }

    QubitOperator &operator+=(const QubitOperator &o) {
        check_same(o);
        for (const auto &[s, c] : o.terms_) {
            terms_[s] += c;
        }
        return *this;
    }
    QubitOperator &operator-=(const QubitOperator &o) {
        check_same(o);
        for (const auto &[s, c] : o.terms_) {
            terms_[s] -= c;
        }
        return *this;
    }
    QubitOperator &operator*=(cplx a) {
        for (auto &kv : terms_) {
            kv.second *= a;
        }
        return *this;
    }

    friend QubitOperator operator+(QubitOperator a, const QubitOperator &b) {
        return a += b;
    }
    friend QubitOperator operator-(QubitOperator a, const QubitOperator &b) {
        return a -= b;
    }
    friend QubitOperator operator*(QubitOperator a, cplx s) { return a *= s; }
    friend QubitOperator operator*(cplx s, QubitOperator a) { return a *= s; }

    friend QubitOperator operator*(const QubitOperator &a,
                                   const QubitOperator &b) {
        a.check_same(b);
        QubitOperator out(a.n_);
        for (const auto &[sa, ca] : a.terms_) {
            for (const auto &[sb, cb] : b.terms_) {
                auto [phase, s] = multiply_strings(sa, sb);
                out.terms_[s] += ca * cb * phase;
            }
        }
        return out;
    }

    /// Applies the operator to a 2^n amplitude vector, accumulating into out.
    void apply_add(std::span<const cplx> in, std::span<cplx> out) const {
        const std::size_t dim = std::size_t{1} << n_;
        if (in.size() != dim || out.size() != dim) {
            throw DimensionError("state length does not match operator");
        }
        for (const auto &[s, c] : terms_) {
            apply_pauli_add(s, c, in, out);
        }
    }

  private:
    void check_same(const QubitOperator &o) const {
        if (o.n_ != n_) {
            throw DimensionError("operator qubit counts differ: " +
                                 std::to_string(n_) + " vs " +
                                 std::to_string(o.n_));
        }
    }

    std::size_t n_ = 0;
    TermMap terms_;
};

inline QubitOperator simplify(const QubitOperator &op,
                              double tol = kDropTolerance) {
    if (tol < 0) {
        throw ValidationError("simplify tolerance must be non-negative");
    }
    return op.simplify(tol);
}

/// ab - ba. Only anticommuting string pairs contribute (twice each).
inline QubitOperator commutator(const QubitOperator &a, const QubitOperator &b,
                                double tol = kDropTolerance) {
    if (a.num_qubits() != b.num_qubits()) {
        throw DimensionError("commutator of operators on different qubit counts");
    }
    QubitOperator out(a.num_qubits());
    for (const auto &[sa, ca] : a.terms()) {
        for (const auto &[sb, cb] : b.terms()) {
            if (sa.commutes_with(sb)) {
                continue;
            }
            auto [phase, s] = multiply_strings(sa, sb);
            out.add_term(2.0 * ca * cb * phase, s);
        }
    }
    return out.simplify(tol);
}

/// Largest coefficient magnitude; zero for the empty operator.
inline double max_abs_coefficient(const QubitOperator &op) {
    double m = 0;
    for (const auto &kv : op.terms()) {
        m = std::max(m, std::abs(kv.second));
    }
    return m;
}

inline Eigen::MatrixXcd to_matrix(const QubitOperator &op,
                                  std::size_t cap = kDefaultDenseCap) {
    const std::size_t n = op.num_qubits();
    if (n > cap) {
        throw ResourceError("dense realization of " + std::to_string(n) +
                            " qubits exceeds the cap of " + std::to_string(cap));
    }
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (const auto &[s, c] : op.terms()) {
        const std::uint64_t x = s.x_bits();
        const std::uint64_t z = s.z_bits();
        const cplx base = c * detail::i_power(static_cast<int>(s.y_count()));
        for (std::size_t b = 0; b < dim; ++b) {
            const double sign = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
            m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) +=
                base * sign;
        }
    }
    return m;
}

/**
 * Hilbert-Schmidt expansion of a Hermitian matrix: c_P = Tr[P m] / 2^n.
 * Coefficients of magnitude <= tol are dropped.
 */
inline QubitOperator from_matrix(const Eigen::MatrixXcd &m,
                                 std::size_t num_qubits,
                                 double tol = kDropTolerance,
                                 double hermitian_tol = 1e-10) {
    if (num_qubits > kMaxQubits / 2) {
        throw ResourceError("from_matrix qubit count too large");
    }
    const std::size_t dim = std::size_t{1} << num_qubits;
    if (static_cast<std::size_t>(m.rows()) != dim ||
        static_cast<std::size_t>(m.cols()) != dim) {
        throw DimensionError("matrix is not 2^n x 2^n for n = " +
                             std::to_string(num_qubits));
    }
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > hermitian_tol) {
        throw ValidationError("from_matrix requires a Hermitian matrix");
    }
    QubitOperator op(num_qubits);
    const double norm = 1.0 / static_cast<double>(dim);
    for (std::uint64_t x = 0; x < dim; ++x) {
        for (std::uint64_t z = 0; z < dim; ++z) {
            const PauliString s(num_qubits, x, z);
            // Tr[P m] = sum_b <b|P m|b> = sum_b phase(b ^ x) m(b ^ x, b)
            const cplx base = detail::i_power(static_cast<int>(s.y_count()));
            cplx tr = 0;
            for (std::size_t b = 0; b < dim; ++b) {
                const std::size_t src = b ^ x;
                const double sign = (std::popcount(src & z) & 1) ? -1.0 : 1.0;
                tr += sign * m(static_cast<Eigen::Index>(src),
                               static_cast<Eigen::Index>(b));
            }
            const cplx c = base * tr * norm;
            if (std::abs(c) > tol) {
                // Hermitian input has real coefficients
                op.add_term(cplx{c.real(), 0.0}, s);
            }
        }
    }
    return op;
}

namespace detail {
inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), ptr};
}

inline double parse_double(std::string_view s, std::size_t line) {
    double v = 0;
    const char *first = s.data();
    const char *last = s.data() + s.size();
    if (!s.empty() && s.front() == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("invalid number '" + std::string(s) + "'", line);
    }
    return v;
}
} // namespace detail

/// Real coefficients as a single number, complex ones as "(re,im)".
inline std::string format_coefficient(cplx c) {
    if (c.imag() == 0.0) {
        return detail::format_double(c.real());
    }
    return "(" + detail::format_double(c.real()) + "," +
           detail::format_double(c.imag()) + ")";
}

inline cplx parse_coefficient(std::string_view s, std::size_t line = 0) {
    if (!s.empty() && s.front() == '(') {
        if (s.back() != ')') {
            throw ParseError("unterminated complex coefficient", line);
        }
        const auto inner = s.substr(1, s.size() - 2);
        const auto comma = inner.find(',');
        if (comma == std::string_view::npos) {
            throw ParseError("complex coefficient needs 're,im'", line);
        }
        return {detail::parse_double(inner.substr(0, comma), line),
                detail::parse_double(inner.substr(comma + 1), line)};
    }
    return {detail::parse_double(s, line), 0.0};
}

/**
 * One "coefficient<TAB>pauli" line per term in map order. A leading
 * "# qubits N" line records the width so empty operators round-trip.
 */
inline std::string to_text(const QubitOperator &op) {
    std::string out = "# qubits " + std::to_string(op.num_qubits()) + "\n";
    for (const auto &[s, c] : op.terms()) {
        out += format_coefficient(c);
        out += '\t';
        out += s.str();
        out += '\n';
    }
    return out;
}

inline QubitOperator parse_qubit_operator(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::optional<std::size_t> width;
    std::vector<PauliTerm> terms;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            std::istringstream hs(line.substr(1));
            std::string key;
            std::size_t n = 0;
            if (hs >> key >> n && key == "qubits") {
                width = n;
            }
            continue;
        }
        std::istringstream ls(line);
        std::string coef;
        std::string pauli;
        if (!(ls >> coef)) {
            throw ParseError("expected 'coefficient pauli'", lineno);
        }
        if (!(ls >> pauli) && width.value_or(1) != 0) {
            throw ParseError("expected 'coefficient pauli'", lineno);
        }
        PauliString s;
        try {
            s = PauliString::parse(pauli);
        } catch (const ValidationError &e) {
            throw ParseError(e.what(), lineno);
        }
        if (width && *width != s.num_qubits()) {
            throw ParseError("Pauli string length differs from header", lineno);
        }
        if (!terms.empty() && terms.front().string.num_qubits() != s.num_qubits()) {
            throw ParseError("inconsistent Pauli string lengths", lineno);
        }
        terms.push_back({parse_coefficient(coef, lineno), s});
    }
    const std::size_t n =
        width ? *width : (terms.empty() ? 0 : terms.front().string.num_qubits());
    return QubitOperator(n, terms);
}

} // namespace vqelab
