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
 * The fermion-to-qubit chain used by a calculation: mapping, optional
 * two-qubit reduction (parity only) and optional Z2 tapering. The same
 * chain transforms the Hamiltonian, the auxiliary operators and the
 * cluster generators, so all of them act on one register.
 */
#pragma once

#include "fermion.hpp"
#include "symmetry.hpp"

#include <string>
#include <vector>

namespace vqelab {

struct EncodingOptions {
    Mapping mapping = Mapping::Parity;
    bool two_qubit_reduction = true;
    bool taper = true;
};

class Encoding {
  public:
    Encoding() = default;

    /**
     * Fixes the chain for a problem with `m` orbitals and the given
     * electron counts. Tapering generators are searched over every
     * operator in `symmetric_ops` (typically H, N, S_z, S^2) after the
     * reduction, and their eigenvalues are read off the Hartree-Fock state.
     */
    Encoding(std::size_t m, int n_alpha, int n_beta, EncodingOptions opts,
             const std::vector<FermionOperator> &symmetric_ops = {})
        : opts_(opts), m_(m), n_alpha_(n_alpha), n_beta_(n_beta),
          sector_(SymmetrySector::from_electrons(n_alpha, n_beta)) {
        if (opts.two_qubit_reduction && opts.mapping != Mapping::Parity) {
            throw ValidationError("two-qubit reduction requires the parity mapping");
        }
        if (m == 0) {
            throw ValidationError("at least one orbital is required");
        }
        if (opts.taper) {
            std::vector<QubitOperator> reduced;
            for (const auto &f : symmetric_ops) {
                reduced.push_back(reduce(map_to_qubits(f, opts.mapping)));
            }
            if (!reduced.empty()) {
                gens_ = find_z2_symmetries(reduced);
            }
            eigs_ = z2_eigenvalues_on(gens_, reduced_reference());
            sector_.z2_eigenvalues = eigs_;
        }
    }

    [[nodiscard]] const EncodingOptions &options() const noexcept { return opts_; }
    [[nodiscard]] std::size_t n_modes() const noexcept { return 2 * m_; }
    /// Width after the two-qubit reduction, before tapering.
    [[nodiscard]] std::size_t n_reduced() const noexcept {
        return 2 * m_ - (opts_.two_qubit_reduction ? 2 : 0);
    }
    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_reduced() - gens_.size(); }
    [[nodiscard]] const std::vector<Z2Symmetry> &generators() const noexcept { return gens_; }
    [[nodiscard]] const std::vector<int> &eigenvalues() const noexcept { return eigs_; }
    [[nodiscard]] const SymmetrySector &sector() const noexcept { return sector_; }

    [[nodiscard]] QubitOperator reduce(const QubitOperator &q) const {
        return opts_.two_qubit_reduction ? two_qubit_reduction(q, sector_) : q;
    }

    /// Image of a fermion operator on the final register.
    [[nodiscard]] QubitOperator apply(const FermionOperator &f) const {
        return apply_untapered_part(f, true);
    }

    /// Image on the register before tapering.
    [[nodiscard]] QubitOperator apply_untapered(const FermionOperator &f) const {
        return apply_untapered_part(f, false);
    }

    [[nodiscard]] QubitOperator taper_operator(const QubitOperator &q) const {
        return gens_.empty() ? q : taper(q, gens_, eigs_);
    }

    [[nodiscard]] std::uint64_t encoded_occupation(std::uint64_t occ) const {
        return encode_occupation(occ, 2 * m_, opts_.mapping);
    }

    [[nodiscard]] std::uint64_t reduced_reference() const {
        return reduce_bits(encoded_occupation(hartree_fock_occupation(m_, n_alpha_, n_beta_)));
    }

    /// Hartree-Fock bitstring on the final register.
    [[nodiscard]] std::uint64_t reference() const {
        return gens_.empty() ? reduced_reference()
                             : remove_bits(reduced_reference(), tapered_qubits(gens_));
    }

    [[nodiscard]] std::uint64_t reduce_bits(std::uint64_t encoded) const {
        if (!opts_.two_qubit_reduction) {
            return encoded;
        }
        return remove_bits(encoded, two_qubit_reduction_qubits(2 * m_));
    }

    /// Final-register state mapped back to the register before tapering.
    [[nodiscard]] std::vector<cplx> untaper(std::span<const cplx> state) const {
        if (gens_.empty()) {
            return {state.begin(), state.end()};
        }
        return untaper_state(state, n_reduced(), gens_, eigs_);
    }

    [[nodiscard]] std::string describe() const {
        std::string s = to_string(opts_.mapping);
        if (opts_.two_qubit_reduction) {
            s += "+two_qubit_reduction";
        }
        if (opts_.taper) {
            s += "+taper(" + std::to_string(gens_.size()) + ")";
        }
        return s;
    }

    /// State on the register before tapering mapped onto the final register.
    [[nodiscard]] std::vector<cplx> tapered_state(std::span<const cplx> state) const {
        if (gens_.empty()) {
            return {state.begin(), state.end()};
        }
        return taper_state(state, n_reduced(), gens_, eigs_);
    }

    /**
     * Final-register state of sum_k amps[k] |occs[k]>, where each occupation
     * bitmask uses the mode order of the fermion operators and lies in the
     * encoded electron-number sector.
     */
    [[nodiscard]] std::vector<cplx> from_occupations(std::span<const std::uint64_t> occs,
                                                     std::span<const double> amps) const {
        if (occs.size() != amps.size()) {
            throw DimensionError("one amplitude per occupation required");
        }
        if (n_reduced() > 30) {
            throw ResourceError("register too large for a dense state");
        }
        std::vector<cplx> v(std::size_t{1} << n_reduced());
        for (std::size_t k = 0; k < occs.size(); ++k) {
            v[reduce_bits(encoded_occupation(occs[k]))] += amps[k];
        }
        return tapered_state(v);
    }

  private:
    [[nodiscard]] QubitOperator apply_untapered_part(const FermionOperator &f,
                                                     bool tapered) const {
        if (f.n_modes() != 2 * m_) {
            throw DimensionError("fermion operator has the wrong number of modes");
        }
        QubitOperator q = reduce(map_to_qubits(f, opts_.mapping));
        return tapered ? taper_operator(q) : q;
    }

    EncodingOptions opts_;
    std::size_t m_ = 0;
    int n_alpha_ = 0;
    int n_beta_ = 0;
    SymmetrySector sector_;
    std::vector<Z2Symmetry> gens_;
    std::vector<int> eigs_;
};

} // namespace vqelab
