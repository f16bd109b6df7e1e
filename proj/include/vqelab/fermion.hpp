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
 * Second-quantized operators: molecular integrals, the electronic
 * Hamiltonian, particle-number and spin operators, and their Jordan-Wigner
 * and parity encodings.
 *
 * Spin-orbital modes are laid out in spin blocks: mode(p, alpha) = p and
 * mode(p, beta) = p + M for M spatial orbitals. Under the parity encoding
 * this puts the alpha-parity on qubit M-1 and the total parity on qubit
 * 2M-1, which is what the two-qubit reduction relies on.
 */
#pragma once

#include "error.hpp"
#include "pauli.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace vqelab {

enum class Spin : int { Alpha = 0, Beta = 1 };

/**
 * Active-space integrals in chemists' notation.
 *
 * Irrep labels are 0-based ids of an Abelian point group whose product is
 * bitwise XOR (the D2h-subgroup convention; FCIDUMP ORBSYM is 1-based).
 */
struct IntegralSet {
    double e0 = 0.0;
    std::size_t n_orbitals = 0;
    Eigen::MatrixXd h;
    std::vector<double> eri; // (pr|qs) at ((p*M + r)*M + q)*M + s
    int n_alpha = 0;
    int n_beta = 0;
    int n_frozen = 0;
    std::vector<int> orbital_irreps;
    int target_irrep = 0;

    static IntegralSet zeros(std::size_t m, int n_alpha, int n_beta) {
        IntegralSet ints;
        ints.n_orbitals = m;
        ints.h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                       static_cast<Eigen::Index>(m));
        ints.eri.assign(m * m * m * m, 0.0);
        ints.n_alpha = n_alpha;
        ints.n_beta = n_beta;
        ints.orbital_irreps.assign(m, 0);
        return ints;
    }

    [[nodiscard]] std::size_t eri_index(std::size_t p, std::size_t r,
                                        std::size_t q, std::size_t s) const {
        const std::size_t m = n_orbitals;
        return ((p * m + r) * m + q) * m + s;
    }
    [[nodiscard]] double g(std::size_t p, std::size_t r, std::size_t q,
                           std::size_t s) const {
        return eri[eri_index(p, r, q, s)];
    }
    [[nodiscard]] double one(std::size_t p, std::size_t q) const {
        return h(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
    }

    /// Writes v into all eight permutationally equivalent slots of (pr|qs).
    void set_eri(std::size_t p, std::size_t r, std::size_t q, std::size_t s,
                 double v) {
        for (auto [a, b, c, d] :
             {std::tuple{p, r, q, s}, std::tuple{r, p, q, s},
              std::tuple{p, r, s, q}, std::tuple{r, p, s, q},
              std::tuple{q, s, p, r}, std::tuple{s, q, p, r},
              std::tuple{q, s, r, p}, std::tuple{s, q, r, p}}) {
            eri[eri_index(a, b, c, d)] = v;
        }
    }

    void validate(double tol = 1e-10) const {
        const auto m = static_cast<Eigen::Index>(n_orbitals);
        if (h.rows() != m || h.cols() != m) {
            throw DimensionError("one-body integrals are not M x M");
        }
        if (eri.size() != n_orbitals * n_orbitals * n_orbitals * n_orbitals) {
            throw DimensionError("two-body integrals are not M^4");
        }
        if (orbital_irreps.size() != n_orbitals) {
            throw DimensionError("one irrep label per orbital required");
        }
        if (n_alpha < 0 || n_beta < 0 ||
            static_cast<std::size_t>(n_alpha) > n_orbitals ||
            static_cast<std::size_t>(n_beta) > n_orbitals) {
            throw ValidationError("electron counts do not fit the orbitals");
        }
        if ((h - h.transpose()).cwiseAbs().maxCoeff() > tol) {
            throw ValidationError("one-body integrals are not symmetric");
        }
        const std::size_t n = n_orbitals;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t q = 0; q < n; ++q) {
                    for (std::size_t s = 0; s < n; ++s) {
                        const double v = g(p, r, q, s);
                        if (std::abs(v - g(r, p, q, s)) > tol ||
                            std::abs(v - g(p, r, s, q)) > tol ||
                            std::abs(v - g(q, s, p, r)) > tol) {
                            throw ValidationError(
                                "two-body integrals lack 8-fold symmetry");
                        }
                    }
                }
            }
        }
    }

    [[nodiscard]] std::size_t mode(std::size_t p, Spin s) const {
        return p + (s == Spin::Beta ? n_orbitals : 0);
    }
};

struct LadderOp {
    std::uint32_t mode = 0;
    bool creation = false;
    friend auto operator<=>(const LadderOp &, const LadderOp &) = default;
};

using LadderSequence = std::vector<LadderOp>;

inline LadderOp cre(std::size_t mode) {
    return {static_cast<std::uint32_t>(mode), true};
}
inline LadderOp des(std::size_t mode) {
    return {static_cast<std::uint32_t>(mode), false};
}

/**
 * Linear combination of products of ladder operators on `n_modes` modes.
 * normal_order() rewrites every product with creators left of annihilators,
 * each group sorted by descending mode, and merges like terms.
 */
class FermionOperator {
  public:
    using TermMap = std::map<LadderSequence, cplx>;

    FermionOperator() = default;
    explicit FermionOperator(std::size_t n_modes) : n_modes_(n_modes) {}

    static FermionOperator constant(std::size_t n_modes, cplx c) {
        FermionOperator f(n_modes);
        f.add_term(c, {});
        return f;
    }

    [[nodiscard]] std::size_t n_modes() const noexcept { return n_modes_; }
    [[nodiscard]] const TermMap &terms() const noexcept { return terms_; }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

    void add_term(cplx c, LadderSequence ops) {
        for (const auto &op : ops) {
            if (op.mode >= n_modes_) {
                throw DimensionError("ladder operator mode out of range");
            }
        }
        terms_[std::move(ops)] += c;
    }

    FermionOperator &operator+=(const FermionOperator &o) {
        check_same(o);
        for (const auto &[ops, c] : o.terms_) {
            terms_[ops] += c;
        }
        return *this;
    }
    FermionOperator &operator*=(cplx a) {
        for (auto &kv : terms_) {
            kv.second *= a;
        }
        return *this;
    }
    friend FermionOperator operator+(FermionOperator a, const FermionOperator &b) {
        return a += b;
    }
    friend FermionOperator operator*(FermionOperator a, cplx s) { return a *= s; }

    /// Concatenated product (not normal ordered).
    friend FermionOperator operator*(const FermionOperator &a,
                                     const FermionOperator &b) {
        a.check_same(b);
        FermionOperator out(a.n_modes_);
        for (const auto &[oa, ca] : a.terms_) {
            for (const auto &[ob, cb] : b.terms_) {
                LadderSequence ops = oa;
                ops.insert(ops.end(), ob.begin(), ob.end());
                out.terms_[ops] += ca * cb;
            }
        }
        return out;
    }

    [[nodiscard]] FermionOperator adjoint() const {
        FermionOperator out(n_modes_);
        for (const auto &[ops, c] : terms_) {
            LadderSequence rev(ops.rbegin(), ops.rend());
            for (auto &op : rev) {
                op.creation = !op.creation;
            }
            out.terms_[rev] += std::conj(c);
        }
        return out;
    }

    [[nodiscard]] FermionOperator normal_order(double tol = 1e-14) const {
        FermionOperator out(n_modes_);
        for (const auto &[ops, c] : terms_) {
            normal_order_into(ops, c, out.terms_);
        }
        std::erase_if(out.terms_,
                      [tol](const auto &kv) { return std::abs(kv.second) <= tol; });
        return out;
    }

  private:
    void check_same(const FermionOperator &o) const {
        if (o.n_modes_ != n_modes_) {
            throw DimensionError("fermion operators on different mode counts");
        }
    }

    static bool before(const LadderOp &a, const LadderOp &b) {
        // canonical position: creators first, then higher modes first
        if (a.creation != b.creation) {
            return a.creation;
        }
        return a.mode > b.mode;
    }

    // Bubble sort with anticommutation; a_p a+_p contractions spawn the
    // lower-order term.
    static void normal_order_into(LadderSequence ops, cplx c, TermMap &out) {
        if (c == cplx{}) {
            return;
        }
        for (std::size_t i = 1; i < ops.size(); ++i) {
            for (std::size_t j = i; j > 0; --j) {
                LadderOp &left = ops[j - 1];
                LadderOp &right = ops[j];
                if (left.mode == right.mode && left.creation == right.creation) {
                    return; // a+_p a+_p = a_p a_p = 0
                }
                if (!before(right, left)) {
                    break;
                }
                if (left.mode == right.mode && !left.creation && right.creation) {
                    LadderSequence contracted;
                    contracted.reserve(ops.size() - 2);
                    contracted.insert(contracted.end(), ops.begin(),
                                      ops.begin() + static_cast<long>(j) - 1);
                    contracted.insert(contracted.end(),
                                      ops.begin() + static_cast<long>(j) + 1,
                                      ops.end());
                    normal_order_into(contracted, c, out);
                }
                std::swap(left, right);
                c = -c;
            }
        }
        out[ops] += c;
    }

    std::size_t n_modes_ = 0;
    TermMap terms_;
};

/**
 * E_0 + sum h_pq a+_{p s} a_{q s} + 1/2 sum (pr|qs) a+_{p s} a+_{q t} a_{s t} a_{r s}.
 */
inline FermionOperator build_molecular_hamiltonian(const IntegralSet &ints,
                                                   double tol = 1e-14) {
    ints.validate();
    const std::size_t m = ints.n_orbitals;
    FermionOperator f(2 * m);
    if (ints.e0 != 0.0) {
        f.add_term(ints.e0, {});
    }
    for (auto s : {Spin::Alpha, Spin::Beta}) {
        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = 0; q < m; ++q) {
                const double v = ints.one(p, q);
                if (std::abs(v) > tol) {
                    f.add_term(v, {cre(ints.mode(p, s)), des(ints.mode(q, s))});
                }
            }
        }
    }
    for (auto s : {Spin::Alpha, Spin::Beta}) {
        for (auto t : {Spin::Alpha, Spin::Beta}) {
            for (std::size_t p = 0; p < m; ++p) {
                for (std::size_t r = 0; r < m; ++r) {
                    for (std::size_t q = 0; q < m; ++q) {
                        for (std::size_t u = 0; u < m; ++u) {
                            const double v = ints.g(p, r, q, u);
                            if (std::abs(v) <= tol) {
                                continue;
                            }
                            const auto ps = ints.mode(p, s);
                            const auto qt = ints.mode(q, t);
                            if (ps == qt) {
                                continue;
                            }
                            f.add_term(0.5 * v, {cre(ps), cre(qt),
                                                 des(ints.mode(u, t)),
                                                 des(ints.mode(r, s))});
                        }
                    }
                }
            }
        }
    }
    return f.normal_order();
}

struct AuxiliaryOperators {
    FermionOperator number;
    FermionOperator spin_z;
    FermionOperator spin_squared;
};

/**
 * N = N_f + sum n_{p s}, S_z = 1/2 sum (n_{p alpha} - n_{p beta}),
 * S^2 = S_- S_+ + S_z (S_z + 1).
 */
inline AuxiliaryOperators build_auxiliary_operators(std::size_t m, int n_frozen) {
    if (m == 0) {
        throw ValidationError("at least one orbital is required");
    }
    const std::size_t modes = 2 * m;
    FermionOperator number = FermionOperator::constant(modes, n_frozen);
    FermionOperator sz(modes);
    FermionOperator lower(modes);
    FermionOperator raise(modes);
    for (std::size_t p = 0; p < m; ++p) {
        const std::size_t a = p;
        const std::size_t b = p + m;
        number.add_term(1.0, {cre(a), des(a)});
        number.add_term(1.0, {cre(b), des(b)});
        sz.add_term(0.5, {cre(a), des(a)});
        sz.add_term(-0.5, {cre(b), des(b)});
        lower.add_term(1.0, {cre(b), des(a)});
        raise.add_term(1.0, {cre(a), des(b)});
    }
    FermionOperator s2 = lower * raise + sz * sz + sz;
    return {number.normal_order(), sz.normal_order(), s2.normal_order()};
}

enum class Mapping { JordanWigner, Parity };

inline Mapping parse_mapping(const std::string &name) {
    if (name == "jordan_wigner" || name == "jw") {
        return Mapping::JordanWigner;
    }
    if (name == "parity") {
        return Mapping::Parity;
    }
    throw ValidationError("unsupported mapping '" + name + "'");
}

inline std::string to_string(Mapping m) {
    return m == Mapping::JordanWigner ? "jordan_wigner" : "parity";
}

/// Qubit image of a single ladder operator on n modes.
inline QubitOperator map_ladder(LadderOp op, std::size_t n, Mapping mapping) {
    const std::size_t j = op.mode;
    const std::uint64_t bit = std::uint64_t{1} << j;
    const double sign = op.creation ? -1.0 : 1.0;
    QubitOperator out(n);
    if (mapping == Mapping::JordanWigner) {
        // (X_j -/+ i Y_j)/2 Z_{<j}
        const std::uint64_t below = bit - 1;
        out.add_term(0.5, PauliString(n, bit, below));
        out.add_term(cplx{0, 0.5 * sign}, PauliString(n, bit, below | bit));
    } else {
        // (X_j Z_{j-1} -/+ i Y_j)/2 X_{>j}
        const std::uint64_t above = PauliString::full_mask(n) & ~((bit << 1) - 1);
        const std::uint64_t prev = j > 0 ? (bit >> 1) : 0;
        out.add_term(0.5, PauliString(n, bit | above, prev));
        out.add_term(cplx{0, 0.5 * sign}, PauliString(n, bit | above, bit));
    }
    return out;
}

inline QubitOperator map_to_qubits(const FermionOperator &f, Mapping mapping,
                                   double tol = kDropTolerance) {
    const std::size_t n = f.n_modes();
    std::vector<QubitOperator> cre_images;
    std::vector<QubitOperator> des_images;
    for (std::size_t j = 0; j < n; ++j) {
        cre_images.push_back(map_ladder(cre(j), n, mapping));
        des_images.push_back(map_ladder(des(j), n, mapping));
    }
    QubitOperator out(n);
    for (const auto &[ops, c] : f.terms()) {
        QubitOperator prod = QubitOperator::identity(n, c);
        for (const auto &op : ops) {
            prod = prod * (op.creation ? cre_images[op.mode] : des_images[op.mode]);
        }
        out += prod;
    }
    return out.simplify(tol);
}

inline QubitOperator map_to_qubits(const FermionOperator &f,
                                   const std::string &mapping) {
    return map_to_qubits(f, parse_mapping(mapping));
}

/**
 * Dense matrix of f in the occupation-number basis (bit j = occupation of
 * mode j) built by acting with ladder operators directly. Serves as the
 * encoding-independent reference for the qubit mappings.
 */
inline Eigen::MatrixXcd to_fock_matrix(const FermionOperator &f,
                                       std::size_t cap = kDefaultDenseCap) {
    const std::size_t n = f.n_modes();
    if (n > cap) {
        throw ResourceError("Fock space too large for a dense matrix");
    }
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (std::size_t col = 0; col < dim; ++col) {
        for (const auto &[ops, c] : f.terms()) {
            std::uint64_t state = col;
            double sign = 1.0;
            bool alive = true;
            for (auto it = ops.rbegin(); it != ops.rend() && alive; ++it) {
                const std::uint64_t bit = std::uint64_t{1} << it->mode;
                const bool occupied = state & bit;
                if (occupied == it->creation) {
                    alive = false;
                    break;
                }
                if (std::popcount(state & (bit - 1)) & 1) {
                    sign = -sign;
                }
                state ^= bit;
            }
            if (alive) {
                m(static_cast<Eigen::Index>(state), static_cast<Eigen::Index>(col)) +=
                    sign * c;
            }
        }
    }
    return m;
}

/// Occupation bitstring -> parity-encoded bitstring (prefix XOR).
inline std::uint64_t occupation_to_parity(std::uint64_t occ, std::size_t n) {
    std::uint64_t out = 0;
    bool acc = false;
    for (std::size_t k = 0; k < n; ++k) {
        acc ^= static_cast<bool>((occ >> k) & 1U);
        if (acc) {
            out |= std::uint64_t{1} << k;
        }
    }
    return out;
}

/// Hartree-Fock occupation: lowest n_alpha alpha and n_beta beta orbitals.
inline std::uint64_t hartree_fock_occupation(std::size_t m, int n_alpha,
                                             int n_beta) {
    const std::uint64_t a = (std::uint64_t{1} << n_alpha) - 1;
    const std::uint64_t b = (std::uint64_t{1} << n_beta) - 1;
    return a | (b << m);
}

inline std::uint64_t encode_occupation(std::uint64_t occ, std::size_t n,
                                       Mapping mapping) {
    return mapping == Mapping::JordanWigner ? occ : occupation_to_parity(occ, n);
}

} // namespace vqelab
