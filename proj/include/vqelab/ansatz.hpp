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
 * Circuit families: hardware-efficient R_y (linear and full connectivity),
 * the identity-at-zero cascade, and Trotterized unitary coupled cluster
 * with singles and doubles. Also parameter warm starts, gate/depth
 * accounting and a line-based circuit text format.
 *
 * Parameter layout. R_y: slot l*n_q + q for layer l = 0..n_l (layer 0 is
 * the initial rotation layer). Cascade: slots 0..n_q-1 for the initial
 * layer, then 2*n_q per repetition. q-UCCSD: one slot per amplitude and
 * Trotter step, k*n_amp + mu, unless layers are tied.
 */
#pragma once

#include "encoding.hpp"
#include "error.hpp"
#include "fermion.hpp"
#include "pauli.hpp"
#include "statevector.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace vqelab {

enum class AnsatzFamily { RyLinear, RyFull, Cascade, QUCCSD };
enum class QuccsdFlavor { Restricted, Unrestricted };
enum class ProductFormula { Trotter1, Suzuki2 };
enum class ExcitationOrder { SinglesThenDoubles, DoublesThenSingles };

inline AnsatzFamily parse_family(const std::string &s) {
    if (s == "ry_linear") {
        return AnsatzFamily::RyLinear;
    }
    if (s == "ry_full") {
        return AnsatzFamily::RyFull;
    }
    if (s == "cascade") {
        return AnsatzFamily::Cascade;
    }
    if (s == "quccsd" || s == "q-uccsd") {
        return AnsatzFamily::QUCCSD;
    }
    throw ValidationError("unknown ansatz '" + s + "'");
}

inline std::string to_string(AnsatzFamily f) {
    switch (f) {
    case AnsatzFamily::RyLinear:
        return "ry_linear";
    case AnsatzFamily::RyFull:
        return "ry_full";
    case AnsatzFamily::Cascade:
        return "cascade";
    default:
        return "quccsd";
    }
}

inline QuccsdFlavor parse_flavor(const std::string &s) {
    if (s == "restricted") {
        return QuccsdFlavor::Restricted;
    }
    if (s == "unrestricted") {
        return QuccsdFlavor::Unrestricted;
    }
    throw ValidationError("unknown q-UCCSD flavor '" + s + "'");
}

inline ProductFormula parse_product_formula(const std::string &s) {
    if (s == "trotter" || s == "trotter1") {
        return ProductFormula::Trotter1;
    }
    if (s == "suzuki" || s == "suzuki2") {
        return ProductFormula::Suzuki2;
    }
    throw ValidationError("unknown product formula '" + s + "'");
}

inline ExcitationOrder parse_order(const std::string &s) {
    if (s == "singles_doubles") {
        return ExcitationOrder::SinglesThenDoubles;
    }
    if (s == "doubles_singles") {
        return ExcitationOrder::DoublesThenSingles;
    }
    throw ValidationError("unknown excitation order '" + s + "'");
}

inline std::string to_string(QuccsdFlavor f) {
    return f == QuccsdFlavor::Restricted ? "restricted" : "unrestricted";
}
inline std::string to_string(ProductFormula f) {
    return f == ProductFormula::Trotter1 ? "trotter" : "suzuki";
}
inline std::string to_string(ExcitationOrder o) {
    return o == ExcitationOrder::SinglesThenDoubles ? "singles_doubles" : "doubles_singles";
}

struct AnsatzSpec {
    AnsatzFamily family = AnsatzFamily::RyLinear;
    int n_l = 1;
    QuccsdFlavor flavor = QuccsdFlavor::Restricted;
    ProductFormula formula = ProductFormula::Trotter1;
    ExcitationOrder ordering = ExcitationOrder::SinglesThenDoubles;
    /// Share one amplitude per excitation across Trotter steps (angle t/n_l each).
    bool tie_layers = false;

    void validate() const {
        if (family == AnsatzFamily::QUCCSD ? n_l < 1 : n_l < 0) {
            throw ValidationError("invalid layer count " + std::to_string(n_l) + " for " +
                                  to_string(family));
        }
    }

    [[nodiscard]] std::string describe() const {
        std::string s = to_string(family) + " n_l=" + std::to_string(n_l);
        if (family == AnsatzFamily::QUCCSD) {
            s += " " + to_string(flavor) + " " + to_string(formula) + " " + to_string(ordering);
            if (tie_layers) {
                s += " tied";
            }
        }
        return s;
    }
};

enum class Connectivity { Linear, Full };

/// Entangling pairs (control, target); full connectivity uses i < j in
/// lexicographic order.
inline std::vector<std::pair<std::size_t, std::size_t>> connectivity_pairs(std::size_t n_q,
                                                                           Connectivity c) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_q; ++i) {
        if (c == Connectivity::Linear) {
            if (i + 1 < n_q) {
                out.emplace_back(i, i + 1);
            }
            continue;
        }
        for (std::size_t j = i + 1; j < n_q; ++j) {
            out.emplace_back(i, j);
        }
    }
    return out;
}

namespace detail {
inline void rotation_layer(Circuit &c, std::size_t n_q, std::size_t first_slot) {
    for (std::size_t q = 0; q < n_q; ++q) {
        c.ry(q, first_slot + q);
    }
}

inline void check_width(std::size_t n_q, int n_l) {
    if (n_q < 2) {
        throw ValidationError("hardware-efficient circuits need at least 2 qubits");
    }
    if (n_l < 0) {
        throw ValidationError("layer count must be non-negative");
    }
}
} // namespace detail

/// R(theta_0) followed by n_l repetitions of [entanglers; R(theta_l)].
inline Circuit build_ry(std::size_t n_q, int n_l, Connectivity conn) {
    detail::check_width(n_q, n_l);
    const auto layers = static_cast<std::size_t>(n_l);
    Circuit c(n_q, n_q * (layers + 1));
    detail::rotation_layer(c, n_q, 0);
    const auto pairs = connectivity_pairs(n_q, conn);
    for (std::size_t l = 1; l <= layers; ++l) {
        for (auto [i, j] : pairs) {
            c.cnot(i, j);
        }
        detail::rotation_layer(c, n_q, l * n_q);
    }
    return c;
}

/// R(theta_0) followed by n_l repetitions of [C; R; C^dagger; R], where C
/// applies CNOT(0,1) first and CNOT(n-2,n-1) last.
inline Circuit build_cascade(std::size_t n_q, int n_l) {
    detail::check_width(n_q, n_l);
    const auto layers = static_cast<std::size_t>(n_l);
    Circuit c(n_q, n_q * (2 * layers + 1));
    detail::rotation_layer(c, n_q, 0);
    for (std::size_t k = 0; k < layers; ++k) {
        const std::size_t base = n_q + 2 * n_q * k;
        for (std::size_t i = 0; i + 1 < n_q; ++i) {
            c.cnot(i, i + 1);
        }
        detail::rotation_layer(c, n_q, base);
        for (std::size_t i = n_q - 1; i-- > 0;) {
            c.cnot(i, i + 1);
        }
        detail::rotation_layer(c, n_q, base + n_q);
    }
    return c;
}

enum class SpinBlock { Alpha = 0, AlphaBeta = 1, Beta = 2, Restricted = 3 };

/// One independent cluster amplitude and its anti-Hermitian generator T - T^dagger.
struct Excitation {
    bool is_double = false;
    std::size_t i = 0, j = 0, a = 0, b = 0; ///< spatial orbitals; j, b unused for singles
    SpinBlock spin = SpinBlock::Restricted;
    FermionOperator generator;

    [[nodiscard]] auto key() const { return std::tuple{i, j, a, b, static_cast<int>(spin)}; }

    [[nodiscard]] std::string label() const {
        static constexpr const char *kSpin[] = {"aa", "ab", "bb", "r"};
        std::string s = is_double ? "D(" : "S(";
        s += std::to_string(i);
        if (is_double) {
            s += "," + std::to_string(j);
        }
        s += "->" + std::to_string(a);
        if (is_double) {
            s += "," + std::to_string(b);
        }
        return s + ";" + kSpin[static_cast<int>(spin)] + ")";
    }
};

struct ExcitationList {
    std::vector<Excitation> singles;
    std::vector<Excitation> doubles;

    [[nodiscard]] std::size_t size() const noexcept { return singles.size() + doubles.size(); }

    [[nodiscard]] std::vector<const Excitation *> ordered(ExcitationOrder order) const {
        std::vector<const Excitation *> out;
        auto add = [&out](const std::vector<Excitation> &v) {
            for (const auto &e : v) {
                out.push_back(&e);
            }
        };
        if (order == ExcitationOrder::SinglesThenDoubles) {
            add(singles);
            add(doubles);
        } else {
            add(doubles);
            add(singles);
        }
        return out;
    }
};

namespace detail {
inline FermionOperator anti_hermitian(const FermionOperator &t) {
    FermionOperator g = t + t.adjoint() * cplx(-1.0);
    return g.normal_order();
}

inline bool symmetry_allowed(const IntegralSet &ints, std::initializer_list<std::size_t> orbs) {
    int x = 0;
    for (auto p : orbs) {
        x ^= ints.orbital_irreps[p];
    }
    return x == 0;
}

/**
 * Closed-shell doubles: with t~ given, t-bar^{ab}_{ij} = -t~^{ba}_{ij} and
 * t^^{ab}_{ij} = t~ + t-bar fill the six non-vanishing spin blocks of
 * 1/4 sum t^{AB}_{IJ} a+_A a+_B a_J a_I.
 */
template <typename F>
FermionOperator restricted_doubles_operator(const IntegralSet &ints, F tilde) {
    const std::size_t m = ints.n_orbitals;
    const auto occ = static_cast<std::size_t>(ints.n_alpha);
    FermionOperator t2(2 * m);
    auto al = [&](std::size_t p) { return ints.mode(p, Spin::Alpha); };
    auto be = [&](std::size_t p) { return ints.mode(p, Spin::Beta); };
    for (std::size_t a = occ; a < m; ++a) {
        for (std::size_t b = occ; b < m; ++b) {
            for (std::size_t i = 0; i < occ; ++i) {
                for (std::size_t j = 0; j < occ; ++j) {
                    const double tt = tilde(a, b, i, j);
                    const double tb = -tilde(b, a, i, j);
                    const double th = tt + tb;
                    if (th != 0.0 && a != b && i != j) {
                        t2.add_term(0.25 * th, {cre(al(a)), cre(al(b)), des(al(j)), des(al(i))});
                        t2.add_term(0.25 * th, {cre(be(a)), cre(be(b)), des(be(j)), des(be(i))});
                    }
                    if (tt != 0.0) {
                        t2.add_term(0.25 * tt, {cre(al(a)), cre(be(b)), des(be(j)), des(al(i))});
                        t2.add_term(0.25 * tt, {cre(be(a)), cre(al(b)), des(al(j)), des(be(i))});
                    }
                    if (tb != 0.0) {
                        t2.add_term(0.25 * tb, {cre(be(a)), cre(al(b)), des(be(j)), des(al(i))});
                        t2.add_term(0.25 * tb, {cre(al(a)), cre(be(b)), des(al(j)), des(be(i))});
                    }
                }
            }
        }
    }
    return t2;
}
} // namespace detail

/**
 * Symmetry-allowed excitations out of the Hartree-Fock determinant, sorted
 * by (i, a, spin) for singles and (i, j, a, b, spin) for doubles.
 *
 * Restricted: one single per (i, a) acting on both spins and one double per
 * independent t~^{ab}_{ij}, i.e. per unordered pair of compound indices
 * (ai) <= (bj). Unrestricted: spin-conserving singles per spin; doubles
 * i<j, a<b within each spin and all (i, j, a, b) across spins.
 */
inline ExcitationList build_excitations(const IntegralSet &ints, QuccsdFlavor flavor) {
    const std::size_t m = ints.n_orbitals;
    const std::size_t modes = 2 * m;
    const auto na = static_cast<std::size_t>(ints.n_alpha);
    const auto nb = static_cast<std::size_t>(ints.n_beta);
    if (ints.orbital_irreps.size() != m) {
        throw DimensionError("one irrep label per orbital required");
    }
    ExcitationList out;
    if (flavor == QuccsdFlavor::Restricted) {
        if (na != nb) {
            throw ValidationError("restricted q-UCCSD needs a closed-shell reference");
        }
        for (std::size_t i = 0; i < na; ++i) {
            for (std::size_t a = na; a < m; ++a) {
                if (!detail::symmetry_allowed(ints, {i, a})) {
                    continue;
                }
                FermionOperator t(modes);
                t.add_term(1.0, {cre(ints.mode(a, Spin::Alpha)), des(ints.mode(i, Spin::Alpha))});
                t.add_term(1.0, {cre(ints.mode(a, Spin::Beta)), des(ints.mode(i, Spin::Beta))});
                out.singles.push_back({false, i, 0, a, 0, SpinBlock::Restricted,
                                       detail::anti_hermitian(t)});
            }
        }
        for (std::size_t a = na; a < m; ++a) {
            for (std::size_t i = 0; i < na; ++i) {
                for (std::size_t b = na; b < m; ++b) {
                    for (std::size_t j = 0; j < na; ++j) {
                        if (std::pair{a, i} > std::pair{b, j} ||
                            !detail::symmetry_allowed(ints, {i, j, a, b})) {
                            continue;
                        }
                        auto tilde = [&](std::size_t p, std::size_t q, std::size_t r,
                                         std::size_t s) {
                            const bool hit = (p == a && q == b && r == i && s == j) ||
                                             (p == b && q == a && r == j && s == i);
                            return hit ? 1.0 : 0.0;
                        };
                        out.doubles.push_back(
                            {true, i, j, a, b, SpinBlock::Restricted,
                             detail::anti_hermitian(detail::restricted_doubles_operator(ints, tilde))});
                    }
                }
            }
        }
    } else {
        const std::size_t occ[2] = {na, nb};
        const Spin spins[2] = {Spin::Alpha, Spin::Beta};
        for (int s = 0; s < 2; ++s) {
            for (std::size_t i = 0; i < occ[s]; ++i) {
                for (std::size_t a = occ[s]; a < m; ++a) {
                    if (!detail::symmetry_allowed(ints, {i, a})) {
                        continue;
                    }
                    FermionOperator t(modes);
                    t.add_term(1.0, {cre(ints.mode(a, spins[s])), des(ints.mode(i, spins[s]))});
                    out.singles.push_back({false, i, 0, a, 0,
                                           s == 0 ? SpinBlock::Alpha : SpinBlock::Beta,
                                           detail::anti_hermitian(t)});
                }
            }
        }
        auto add_double = [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b,
                              Spin si, Spin sj, SpinBlock block) {
            if (!detail::symmetry_allowed(ints, {i, j, a, b})) {
                return;
            }
            FermionOperator t(modes);
            t.add_term(1.0, {cre(ints.mode(a, si)), cre(ints.mode(b, sj)), des(ints.mode(j, sj)),
                             des(ints.mode(i, si))});
            out.doubles.push_back({true, i, j, a, b, block, detail::anti_hermitian(t)});
        };
        for (int s = 0; s < 2; ++s) {
            for (std::size_t i = 0; i < occ[s]; ++i) {
                for (std::size_t j = i + 1; j < occ[s]; ++j) {
                    for (std::size_t a = occ[s]; a < m; ++a) {
                        for (std::size_t b = a + 1; b < m; ++b) {
                            add_double(i, j, a, b, spins[s], spins[s],
                                       s == 0 ? SpinBlock::Alpha : SpinBlock::Beta);
                        }
                    }
                }
            }
        }
        for (std::size_t i = 0; i < na; ++i) {
            for (std::size_t j = 0; j < nb; ++j) {
                for (std::size_t a = na; a < m; ++a) {
                    for (std::size_t b = nb; b < m; ++b) {
                        add_double(i, j, a, b, Spin::Alpha, Spin::Beta, SpinBlock::AlphaBeta);
                    }
                }
            }
        }
    }
    auto by_key = [](const Excitation &x, const Excitation &y) { return x.key() < y.key(); };
    std::stable_sort(out.singles.begin(), out.singles.end(), by_key);
    std::stable_sort(out.doubles.begin(), out.doubles.end(), by_key);
    return out;
}

/// Sum of t_mu (T_mu - T_mu^dagger) over the excitations, in list order.
inline FermionOperator cluster_generator(const std::vector<const Excitation *> &exc,
                                         std::span<const double> t, std::size_t n_modes) {
    if (t.size() != exc.size()) {
        throw DimensionError("one amplitude per excitation required");
    }
    FermionOperator g(n_modes);
    for (std::size_t k = 0; k < exc.size(); ++k) {
        g += exc[k]->generator * cplx(t[k]);
    }
    return g;
}

namespace detail {
/// Pauli rotations realizing exp(theta * G) for G = sum_i (i b_i) P_i.
inline std::vector<std::pair<double, PauliString>> evolution_terms(const QubitOperator &g) {
    std::vector<std::pair<double, PauliString>> out;
    for (const auto &[s, c] : g.terms()) {
        if (std::abs(c.real()) > 1e-10) {
            throw ValidationError("cluster generator is not anti-Hermitian");
        }
        if (s.is_identity()) {
            continue;
        }
        out.emplace_back(-2.0 * c.imag(), s);
    }
    return out;
}
} // namespace detail

/**
 * Trotterized q-UCCSD on the register of `enc`: n_l steps, each the product
 * over excitations (in spec.ordering, first factor applied first) of the
 * exponentials of the generator's Pauli terms in lexicographic order.
 * Suzuki2 replaces each step by a forward half-step and a reversed one.
 */
inline Circuit build_quccsd(const IntegralSet &ints, const AnsatzSpec &spec, const Encoding &enc) {
    spec.validate();
    if (spec.family != AnsatzFamily::QUCCSD) {
        throw ValidationError("build_quccsd requires the q-UCCSD family");
    }
    const auto exc = build_excitations(ints, spec.flavor);
    const auto order = exc.ordered(spec.ordering);
    std::vector<std::vector<std::pair<double, PauliString>>> terms;
    for (const auto *e : order) {
        terms.push_back(detail::evolution_terms(enc.apply(e->generator)));
    }
    const std::size_t n_amp = order.size();
    const auto n_l = static_cast<std::size_t>(spec.n_l);
    const std::size_t n_params = spec.tie_layers ? n_amp : n_amp * n_l;
    Circuit c(enc.n_qubits(), n_params);
    const double step_scale = spec.tie_layers ? 1.0 / static_cast<double>(n_l) : 1.0;
    for (std::size_t k = 0; k < n_l; ++k) {
        auto slot = [&](std::size_t mu) { return spec.tie_layers ? mu : k * n_amp + mu; };
        if (spec.formula == ProductFormula::Trotter1) {
            for (std::size_t mu = 0; mu < n_amp; ++mu) {
                for (const auto &[w, p] : terms[mu]) {
                    c.evolution(w * step_scale, p, slot(mu));
                }
            }
            continue;
        }
        const double half = 0.5 * step_scale;
        for (std::size_t mu = 0; mu < n_amp; ++mu) {
            for (const auto &[w, p] : terms[mu]) {
                c.evolution(w * half, p, slot(mu));
            }
        }
        for (std::size_t mu = n_amp; mu-- > 0;) {
            for (auto it = terms[mu].rbegin(); it != terms[mu].rend(); ++it) {
                c.evolution(it->first * half, it->second, slot(mu));
            }
        }
    }
    return c;
}

/// Per-step amplitudes t/n_l reproducing the tied Trotter formula.
inline std::vector<double> trotter_parameters(std::span<const double> t, int n_l) {
    if (n_l < 1) {
        throw ValidationError("at least one Trotter step required");
    }
    std::vector<double> out;
    for (int k = 0; k < n_l; ++k) {
        for (double x : t) {
            out.push_back(x / n_l);
        }
    }
    return out;
}

/// Number of parameters added by one more layer.
inline std::size_t params_per_layer(AnsatzFamily family, std::size_t n_q, std::size_t n_amp = 0) {
    switch (family) {
    case AnsatzFamily::RyLinear:
    case AnsatzFamily::RyFull:
        return n_q;
    case AnsatzFamily::Cascade:
        return 2 * n_q;
    case AnsatzFamily::QUCCSD:
        return n_amp;
    }
    throw ValidationError("unknown ansatz family");
}

/**
 * theta_{n_l+1} = (theta_{n_l}, 0). New cascade and q-UCCSD layers are the
 * identity at zero, so the energy is unchanged; a new R_y layer still
 * applies its CNOTs, so R_y energies generally change.
 */
inline std::vector<double> warm_start_extend(std::span<const double> theta, AnsatzFamily family,
                                             std::size_t n_q, std::size_t n_amp = 0) {
    std::vector<double> out(theta.begin(), theta.end());
    out.resize(out.size() + params_per_layer(family, n_q, n_amp), 0.0);
    return out;
}

struct CostReport {
    std::size_t n_q = 0;
    int n_l = 0;
    std::size_t depth = 0;            ///< ASAP depth, all-to-all connectivity
    std::size_t depth_with_prep = 0;  ///< ASAP depth including RX(pi) reference preparation
    std::size_t sequential_depth = 0; ///< two-qubit gates never overlap; includes preparation
    std::size_t n_theta = 0;
    std::size_t n_g1 = 0;
    std::size_t n_g2 = 0;
    std::size_t n_p = 0;
};

namespace detail {
struct PrimitiveGate {
    std::uint64_t qubits = 0;
    bool two_qubit = false;
};

/// Elementary gates: Pauli evolutions become basis changes, a CNOT ladder
/// onto the last support qubit, one RZ, and the mirrored ladder.
inline std::vector<PrimitiveGate> decompose(const Gate &g) {
    auto bit = [](std::size_t q) { return std::uint64_t{1} << q; };
    switch (g.kind) {
    case GateKind::RY:
    case GateKind::RX:
        return {{bit(g.target), false}};
    case GateKind::CNOT:
        return {{bit(g.control) | bit(g.target), true}};
    case GateKind::PauliEvolution:
        break;
    }
    std::vector<std::size_t> support;
    for (std::size_t q = 0; q < g.pauli.num_qubits(); ++q) {
        if (g.pauli.at(q) != 'I') {
            support.push_back(q);
        }
    }
    if (support.empty()) {
        return {};
    }
    std::vector<PrimitiveGate> out;
    auto basis = [&]() {
        for (auto q : support) {
            if (g.pauli.at(q) != 'Z') {
                out.push_back({bit(q), false});
            }
        }
    };
    basis();
    for (std::size_t k = 0; k + 1 < support.size(); ++k) {
        out.push_back({bit(support[k]) | bit(support[k + 1]), true});
    }
    out.push_back({bit(support.back()), false});
    for (std::size_t k = support.size() - 1; k-- > 0;) {
        out.push_back({bit(support[k]) | bit(support[k + 1]), true});
    }
    basis();
    return out;
}

inline std::size_t asap_depth(const std::vector<PrimitiveGate> &gates, std::size_t n_q) {
    std::vector<std::size_t> t(n_q, 0);
    std::size_t depth = 0;
    for (const auto &g : gates) {
        std::size_t start = 0;
        for (std::uint64_t m = g.qubits; m; m &= m - 1) {
            start = std::max(start, t[static_cast<std::size_t>(std::countr_zero(m))]);
        }
        for (std::uint64_t m = g.qubits; m; m &= m - 1) {
            t[static_cast<std::size_t>(std::countr_zero(m))] = start + 1;
        }
        depth = std::max(depth, start + 1);
    }
    return depth;
}

/// Moments where single-qubit gates on distinct qubits share a step and
/// every two-qubit gate takes a step of its own.
inline std::size_t sequential_depth(const std::vector<PrimitiveGate> &gates) {
    std::size_t depth = 0;
    std::uint64_t open = 0;
    bool in_single = false;
    for (const auto &g : gates) {
        if (g.two_qubit) {
            ++depth;
            in_single = false;
            continue;
        }
        if (!in_single || (open & g.qubits)) {
            ++depth;
            open = 0;
            in_single = true;
        }
        open |= g.qubits;
    }
    return depth;
}
} // namespace detail

/**
 * Gate counts and depths of `c` after decomposing Pauli evolutions;
 * `reference` is the bitstring prepared by RX(pi) on its set qubits.
 */
inline CostReport circuit_cost(const Circuit &c, const QubitOperator &h, int n_l = 0,
                               std::uint64_t reference = 0) {
    CostReport r;
    r.n_q = c.n_qubits();
    r.n_l = n_l;
    r.n_theta = c.n_params();
    r.n_p = h.simplify().size();
    std::vector<detail::PrimitiveGate> prims;
    for (const auto &g : c.gates()) {
        for (const auto &p : detail::decompose(g)) {
            prims.push_back(p);
            (p.two_qubit ? r.n_g2 : r.n_g1) += 1;
        }
    }
    r.depth = detail::asap_depth(prims, c.n_qubits());
    std::vector<detail::PrimitiveGate> with_prep;
    for (std::uint64_t m = reference; m; m &= m - 1) {
        with_prep.push_back({m & (~m + 1), false});
    }
    with_prep.insert(with_prep.end(), prims.begin(), prims.end());
    r.depth_with_prep = detail::asap_depth(with_prep, c.n_qubits());
    r.sequential_depth = detail::sequential_depth(with_prep);
    return r;
}

/**
 * Line format: "qubits N", "params P", then one gate per line:
 * "RY q slot" or "RY q =angle" (likewise RX), "CNOT c t", and
 * "EVO weight pauli slot" or "EVO weight pauli =angle".
 */
inline std::string to_text(const Circuit &c) {
    std::ostringstream out;
    out << "qubits " << c.n_qubits() << "\nparams " << c.n_params() << "\n";
    auto arg = [](const Gate &g) {
        return g.slot ? std::to_string(*g.slot) : "=" + detail::format_double(*g.fixed_angle);
    };
    for (const auto &g : c.gates()) {
        switch (g.kind) {
        case GateKind::RY:
            out << "RY " << g.target << " " << arg(g) << "\n";
            break;
        case GateKind::RX:
            out << "RX " << g.target << " " << arg(g) << "\n";
            break;
        case GateKind::CNOT:
            out << "CNOT " << g.control << " " << g.target << "\n";
            break;
        case GateKind::PauliEvolution:
            out << "EVO " << detail::format_double(g.weight) << " " << g.pauli.str() << " "
                << arg(g) << "\n";
            break;
        }
    }
    return out.str();
}

inline Circuit parse_circuit(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::optional<std::size_t> n_q;
    std::optional<std::size_t> n_p;
    Circuit c;
    auto header_done = [&]() {
        if (!n_q || !n_p) {
            throw ParseError("circuit text needs 'qubits' and 'params' headers", lineno);
        }
        c = Circuit(*n_q, *n_p);
    };
    auto index = [&](const std::string &s) {
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw ParseError("invalid index '" + s + "'", lineno);
        }
        return v;
    };
    bool started = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string op;
        if (!(ls >> op) || op.front() == '#') {
            continue;
        }
        std::vector<std::string> args;
        for (std::string a; ls >> a;) {
            args.push_back(a);
        }
        try {
            if (op == "qubits" || op == "params") {
                if (started || args.size() != 1) {
                    throw ParseError("misplaced header '" + op + "'", lineno);
                }
                (op == "qubits" ? n_q : n_p) = index(args[0]);
                continue;
            }
            if (!started) {
                header_done();
                started = true;
            }
            Gate g;
            auto angle_arg = [&](const std::string &s) {
                if (!s.empty() && s.front() == '=') {
                    g.fixed_angle = detail::parse_double(std::string_view(s).substr(1), lineno);
                } else {
                    g.slot = index(s);
                }
            };
            if (op == "RY" || op == "RX") {
                if (args.size() != 2) {
                    throw ParseError(op + " expects 'qubit slot'", lineno);
                }
                g.kind = op == "RY" ? GateKind::RY : GateKind::RX;
                g.target = index(args[0]);
                angle_arg(args[1]);
            } else if (op == "CNOT") {
                if (args.size() != 2) {
                    throw ParseError("CNOT expects 'control target'", lineno);
                }
                g.kind = GateKind::CNOT;
                g.control = index(args[0]);
                g.target = index(args[1]);
                if (g.control == g.target) {
                    throw ParseError("CNOT control and target coincide", lineno);
                }
            } else if (op == "EVO") {
                if (args.size() != 3) {
                    throw ParseError("EVO expects 'weight pauli slot'", lineno);
                }
                g.kind = GateKind::PauliEvolution;
                g.weight = detail::parse_double(args[0], lineno);
                g.pauli = PauliString::parse(args[1]);
                angle_arg(args[2]);
            } else {
                throw ParseError("unknown gate '" + op + "'", lineno);
            }
            c.push(std::move(g));
        } catch (const ParseError &) {
            throw;
        } catch (const ValidationError &e) {
            throw ParseError(e.what(), lineno);
        }
    }
    if (!started) {
        header_done();
    }
    return c;
}

} // namespace vqelab
