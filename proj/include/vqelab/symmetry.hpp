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
 * Qubit-count reductions that exploit Pauli symmetries: the parity-mapping
 * two-qubit reduction and Z2 tapering.
 *
 * Tapering uses diagonal (Z-type) generators only. For each generator tau
 * with pivot qubit p the Clifford U = (X_p + tau)/sqrt(2) maps tau to X_p;
 * after conjugation every term acts on p as I or X_p, which is replaced by
 * the sector eigenvalue and the qubit is dropped.
 */
#pragma once

#include "error.hpp"
#include "pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <span>
#include <vector>

namespace vqelab {

struct SymmetrySector {
    int parity_alpha = 1; ///< eigenvalue of (-1)^{N_alpha}
    int parity_beta = 1;  ///< eigenvalue of (-1)^{N_beta}
    std::vector<int> z2_eigenvalues;

    static SymmetrySector from_electrons(int n_alpha, int n_beta) {
        return {n_alpha % 2 ? -1 : 1, n_beta % 2 ? -1 : 1, {}};
    }

    void validate() const {
        auto ok = [](int v) { return v == 1 || v == -1; };
        if (!ok(parity_alpha) || !ok(parity_beta) ||
            !std::all_of(z2_eigenvalues.begin(), z2_eigenvalues.end(), ok)) {
            throw ValidationError("symmetry eigenvalues must be +1 or -1");
        }
    }
};

/// Drops the listed qubits (ascending, distinct) from a bit mask.
inline std::uint64_t remove_bits(std::uint64_t v, std::span<const std::size_t> qubits) {
    std::uint64_t out = 0;
    std::size_t dst = 0;
    std::size_t next = 0;
    for (std::size_t k = 0; k < 64; ++k) {
        if (next < qubits.size() && qubits[next] == k) {
            ++next;
            continue;
        }
        if ((v >> k) & 1U) {
            out |= std::uint64_t{1} << dst;
        }
        ++dst;
    }
    return out;
}

/// Inverse of remove_bits: spreads v over the non-removed positions and
/// writes `values` at the removed ones.
inline std::uint64_t insert_bits(std::uint64_t v, std::span<const std::size_t> qubits,
                                 std::span<const int> values) {
    std::uint64_t out = 0;
    std::size_t src = 0;
    std::size_t next = 0;
    for (std::size_t k = 0; k < 64; ++k) {
        if (next < qubits.size() && qubits[next] == k) {
            if (values[next]) {
                out |= std::uint64_t{1} << k;
            }
            ++next;
            continue;
        }
        if ((v >> src) & 1U) {
            out |= std::uint64_t{1} << k;
        }
        ++src;
    }
    return out;
}

inline PauliString remove_qubits(const PauliString &s,
                                 std::span<const std::size_t> qubits) {
    return {s.num_qubits() - qubits.size(), remove_bits(s.x_bits(), qubits),
            remove_bits(s.z_bits(), qubits)};
}

/// Qubits dropped by the two-qubit reduction of a 2M-qubit parity operator.
inline std::vector<std::size_t> two_qubit_reduction_qubits(std::size_t n_qubits) {
    if (n_qubits < 2 || n_qubits % 2) {
        throw DimensionError("two-qubit reduction needs an even qubit count >= 2");
    }
    return {n_qubits / 2 - 1, n_qubits - 1};
}

/**
 * Fixes Z_{M-1} = (-1)^{N_alpha} and Z_{2M-1} = (-1)^{N_alpha + N_beta} of a
 * parity-encoded operator and removes both qubits.
 */
inline QubitOperator two_qubit_reduction(const QubitOperator &q,
                                         const SymmetrySector &sector) {
    sector.validate();
    const auto removed = two_qubit_reduction_qubits(q.num_qubits());
    const int eig[2] = {sector.parity_alpha, sector.parity_alpha * sector.parity_beta};
    QubitOperator out(q.num_qubits() - 2);
    for (const auto &[s, c] : q.terms()) {
        cplx coef = c;
        for (int k = 0; k < 2; ++k) {
            const std::uint64_t bit = std::uint64_t{1} << removed[k];
            if (s.x_bits() & bit) {
                throw SymmetryError("term " + s.str() +
                                    " does not conserve spin parities");
            }
            if (s.z_bits() & bit) {
                coef *= eig[k];
            }
        }
        out.add_term(coef, remove_qubits(s, removed));
    }
    return out.simplify();
}

struct Z2Symmetry {
    PauliString generator; ///< Z-type, commutes with every term
    std::size_t qubit = 0; ///< pivot qubit removed by tapering
};

namespace detail {
/// Reduced row echelon form over GF(2); pivots are the highest set bit of
/// each row and are cleared from every other row.
inline std::vector<std::uint64_t> rref_gf2(std::vector<std::uint64_t> rows) {
    std::vector<std::uint64_t> out;
    for (;;) {
        std::erase(rows, 0);
        if (rows.empty()) {
            break;
        }
        auto it = std::max_element(rows.begin(), rows.end(), [](auto a, auto b) {
            return std::bit_width(a) < std::bit_width(b);
        });
        const std::uint64_t pivot_row = *it;
        const std::uint64_t pivot = std::uint64_t{1} << (std::bit_width(pivot_row) - 1);
        rows.erase(it);
        for (auto &r : rows) {
            if (r & pivot) {
                r ^= pivot_row;
            }
        }
        for (auto &r : out) {
            if (r & pivot) {
                r ^= pivot_row;
            }
        }
        out.push_back(pivot_row);
    }
    // back-substitute so no pivot column appears in a later row either
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::uint64_t pivot = std::uint64_t{1} << (std::bit_width(out[i]) - 1);
        for (std::size_t j = 0; j < out.size(); ++j) {
            if (j != i && (out[j] & pivot)) {
                out[j] ^= out[i];
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}
} // namespace detail

/**
 * Independent Z-type Pauli symmetries shared by all operators in `ops`.
 *
 * A diagonal string Z^g commutes with a term X^x Z^z iff |x & g| is even, so
 * the symmetry group is the GF(2) kernel of the stacked x-masks. The kernel
 * basis is brought to reduced echelon form; each generator's pivot qubit is
 * absent from every other generator.
 */
inline std::vector<Z2Symmetry> find_z2_symmetries(std::span<const QubitOperator> ops) {
    if (ops.empty()) {
        return {};
    }
    const std::size_t n = ops.front().num_qubits();
    std::vector<std::uint64_t> rows;
    for (const auto &op : ops) {
        if (op.num_qubits() != n) {
            throw DimensionError("symmetry search over operators of different widths");
        }
        for (const auto &kv : op.terms()) {
            rows.push_back(kv.first.x_bits());
        }
    }
    const auto echelon = detail::rref_gf2(std::move(rows));
    std::uint64_t pivots = 0;
    for (auto r : echelon) {
        pivots |= std::uint64_t{1} << (std::bit_width(r) - 1);
    }
    // kernel: one vector per free column f, g = e_f + sum of pivots whose row has f
    std::vector<std::uint64_t> kernel;
    for (std::size_t f = 0; f < n; ++f) {
        const std::uint64_t fbit = std::uint64_t{1} << f;
        if (pivots & fbit) {
            continue;
        }
        std::uint64_t g = fbit;
        for (auto r : echelon) {
            if (r & fbit) {
                g |= std::uint64_t{1} << (std::bit_width(r) - 1);
            }
        }
        kernel.push_back(g);
    }
    std::vector<Z2Symmetry> out;
    for (auto g : detail::rref_gf2(std::move(kernel))) {
        out.push_back({PauliString(n, 0, g),
                       static_cast<std::size_t>(std::bit_width(g) - 1)});
    }
    return out;
}

inline std::vector<Z2Symmetry> find_z2_symmetries(const QubitOperator &q) {
    return find_z2_symmetries(std::span<const QubitOperator>(&q, 1));
}

/// Eigenvalue of each generator on a computational-basis state.
inline std::vector<int> z2_eigenvalues_on(std::span<const Z2Symmetry> gens,
                                          std::uint64_t bitstring) {
    std::vector<int> out;
    for (const auto &g : gens) {
        out.push_back(std::popcount(bitstring & g.generator.z_bits()) & 1 ? -1 : 1);
    }
    return out;
}

inline std::vector<std::size_t> tapered_qubits(std::span<const Z2Symmetry> gens) {
    std::vector<std::size_t> q;
    for (const auto &g : gens) {
        q.push_back(g.qubit);
    }
    std::sort(q.begin(), q.end());
    return q;
}

/**
 * Restricts q to the joint eigenspace of the generators with the given
 * eigenvalues and removes one qubit per generator.
 */
inline QubitOperator taper(const QubitOperator &q, std::span<const Z2Symmetry> gens,
                           std::span<const int> eigenvalues) {
    if (gens.size() != eigenvalues.size()) {
        throw ValidationError("one eigenvalue per tapering generator required");
    }
    for (int e : eigenvalues) {
        if (e != 1 && e != -1) {
            throw ValidationError("tapering eigenvalues must be +1 or -1");
        }
    }
    const std::size_t n = q.num_qubits();
    for (const auto &g : gens) {
        if (g.generator.num_qubits() != n || !g.generator.is_diagonal() ||
            !((g.generator.z_bits() >> g.qubit) & 1U)) {
            throw ValidationError("malformed tapering generator");
        }
        for (const auto &gg : gens) {
            if (&gg != &g && ((gg.generator.z_bits() >> g.qubit) & 1U)) {
                throw ValidationError("tapering pivots are not independent");
            }
        }
    }
    QubitOperator current = q;
    for (const auto &g : gens) {
        const PauliString xp = PauliString::single(n, g.qubit, 'X');
        QubitOperator next(n);
        for (const auto &[s, c] : current.terms()) {
            if (!s.commutes_with(g.generator)) {
                throw SymmetryError("term " + s.str() + " breaks symmetry " +
                                    g.generator.str());
            }
            if (s.commutes_with(xp)) {
                next.add_term(c, s);
            } else {
                // U P U = -P X_p tau when P anticommutes with X_p
                auto [ph1, s1] = multiply_strings(s, xp);
                auto [ph2, s2] = multiply_strings(s1, g.generator);
                next.add_term(-c * ph1 * ph2, s2);
            }
        }
        current = std::move(next);
    }
    const auto removed = tapered_qubits(gens);
    QubitOperator out(n - gens.size());
    for (const auto &[s, c] : current.terms()) {
        cplx coef = c;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            const std::uint64_t bit = std::uint64_t{1} << gens[i].qubit;
            if (s.z_bits() & bit) {
                throw SymmetryError("tapered term " + s.str() +
                                    " is not diagonal on a pivot qubit");
            }
            if (s.x_bits() & bit) {
                coef *= eigenvalues[i];
            }
        }
        out.add_term(coef, remove_qubits(s, removed));
    }
    return out.simplify();
}

/**
 * Maps a state of the tapered problem back to the full qubit register:
 * pivots are set to the X eigenstate with the sector eigenvalue, then the
 * tapering Cliffords are undone.
 */
inline std::vector<cplx> untaper_state(std::span<const cplx> tapered,
                                       std::size_t n_full,
                                       std::span<const Z2Symmetry> gens,
                                       std::span<const int> eigenvalues) {
    const auto removed = tapered_qubits(gens);
    const std::size_t dim = std::size_t{1} << n_full;
    if (tapered.size() != (std::size_t{1} << (n_full - gens.size()))) {
        throw DimensionError("tapered state has the wrong length");
    }
    // eigenvalue per removed position (removed is sorted)
    std::vector<int> eig_sorted(removed.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        auto pos = std::find(removed.begin(), removed.end(), gens[i].qubit) - removed.begin();
        eig_sorted[static_cast<std::size_t>(pos)] = eigenvalues[i];
    }
    std::vector<cplx> full(dim);
    const std::size_t k = removed.size();
    const double amp = std::pow(0.5, 0.5 * static_cast<double>(k));
    std::vector<int> bits(k);
    for (std::size_t t = 0; t < tapered.size(); ++t) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
            double sign = 1.0;
            for (std::size_t i = 0; i < k; ++i) {
                bits[i] = static_cast<int>((mask >> i) & 1U);
                if (bits[i] && eig_sorted[i] < 0) {
                    sign = -sign;
                }
            }
            full[insert_bits(t, removed, bits)] += amp * sign * tapered[t];
        }
    }
    for (auto it = gens.rbegin(); it != gens.rend(); ++it) {
        std::vector<cplx> next(dim);
        const double r = 1.0 / std::sqrt(2.0);
        apply_pauli_add(PauliString::single(n_full, it->qubit, 'X'), r, full, next);
        apply_pauli_add(it->generator, r, full, next);
        full = std::move(next);
    }
    return full;
}

/**
 * Adjoint of untaper_state: applies the tapering Cliffords and projects the
 * pivots onto the sector's X eigenstates. Exact inverse on sector states.
 */
inline std::vector<cplx> taper_state(std::span<const cplx> full_state, std::size_t n_full,
                                     std::span<const Z2Symmetry> gens,
                                     std::span<const int> eigenvalues) {
    const std::size_t dim = std::size_t{1} << n_full;
    if (full_state.size() != dim) {
        throw DimensionError("state has the wrong length");
    }
    std::vector<cplx> full(full_state.begin(), full_state.end());
    const double r = 1.0 / std::sqrt(2.0);
    for (const auto &g : gens) {
        std::vector<cplx> next(dim);
        apply_pauli_add(PauliString::single(n_full, g.qubit, 'X'), r, full, next);
        apply_pauli_add(g.generator, r, full, next);
        full = std::move(next);
    }
    const auto removed = tapered_qubits(gens);
    std::vector<int> eig_sorted(removed.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        auto pos = std::find(removed.begin(), removed.end(), gens[i].qubit) - removed.begin();
        eig_sorted[static_cast<std::size_t>(pos)] = eigenvalues[i];
    }
    const std::size_t k = removed.size();
    const double amp = std::pow(0.5, 0.5 * static_cast<double>(k));
    std::vector<cplx> out(std::size_t{1} << (n_full - k));
    std::vector<int> bits(k);
    for (std::size_t t = 0; t < out.size(); ++t) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
            double sign = 1.0;
            for (std::size_t i = 0; i < k; ++i) {
                bits[i] = static_cast<int>((mask >> i) & 1U);
                if (bits[i] && eig_sorted[i] < 0) {
                    sign = -sign;
                }
            }
            out[t] += amp * sign * full[insert_bits(t, removed, bits)];
        }
    }
    return out;
}

} // namespace vqelab
