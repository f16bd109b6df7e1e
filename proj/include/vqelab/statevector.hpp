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
 * Noiseless statevector simulation of parametrized circuits with
 * adjoint-mode gradients.
 *
 * Rotations follow R_sigma(theta) = exp(-i theta sigma / 2). A Pauli
 * evolution gate with weight w applies exp(-i theta w P / 2), so a
 * generator sum_k w_k P_k is realized gate by gate with a shared slot.
 */
#pragma once

#include "error.hpp"
#include "pauli.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vqelab {

enum class GateKind { RY, RX, CNOT, PauliEvolution };

struct Gate {
    GateKind kind = GateKind::RY;
    std::size_t target = 0;
    std::size_t control = 0; ///< CNOT only
    std::optional<std::size_t> slot;
    std::optional<double> fixed_angle;
    double weight = 1.0; ///< multiplies the angle; Pauli evolution coefficient
    PauliString pauli;   ///< Pauli evolution only

    [[nodiscard]] bool parametrized() const noexcept { return slot.has_value(); }

    [[nodiscard]] double angle(std::span<const double> theta) const {
        if (slot) {
            return weight * theta[*slot];
        }
        return weight * fixed_angle.value_or(0.0);
    }

    /// Qubits the gate touches, as a bit mask.
    [[nodiscard]] std::uint64_t support() const {
        switch (kind) {
        case GateKind::CNOT:
            return (std::uint64_t{1} << control) | (std::uint64_t{1} << target);
        case GateKind::PauliEvolution:
            return pauli.x_bits() | pauli.z_bits();
        default:
            return std::uint64_t{1} << target;
        }
    }
};

class Circuit {
  public:
    Circuit() = default;
    Circuit(std::size_t n_qubits, std::size_t n_params)
        : n_qubits_(n_qubits), n_params_(n_params) {
        if (n_qubits > 30) {
            throw ResourceError("statevector circuits are limited to 30 qubits");
        }
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t n_params() const noexcept { return n_params_; }
    [[nodiscard]] const std::vector<Gate> &gates() const noexcept { return gates_; }
    [[nodiscard]] std::size_t size() const noexcept { return gates_.size(); }

    void set_n_params(std::size_t n) {
        for (const auto &g : gates_) {
            if (g.slot && *g.slot >= n) {
                throw ValidationError("cannot shrink below a used parameter slot");
            }
        }
        n_params_ = n;
    }

    Circuit &ry(std::size_t q, std::size_t slot) {
        return push({GateKind::RY, q, 0, slot, std::nullopt, 1.0, {}});
    }
    Circuit &ry_fixed(std::size_t q, double angle) {
        return push({GateKind::RY, q, 0, std::nullopt, angle, 1.0, {}});
    }
    Circuit &rx(std::size_t q, std::size_t slot) {
        return push({GateKind::RX, q, 0, slot, std::nullopt, 1.0, {}});
    }
    Circuit &rx_fixed(std::size_t q, double angle) {
        return push({GateKind::RX, q, 0, std::nullopt, angle, 1.0, {}});
    }
    Circuit &cnot(std::size_t control, std::size_t target) {
        if (control == target) {
            throw ValidationError("CNOT control and target coincide");
        }
        return push({GateKind::CNOT, target, control, std::nullopt, std::nullopt, 1.0, {}});
    }
    /// exp(-i theta[slot] * weight * P / 2)
    Circuit &evolution(double weight, const PauliString &p, std::size_t slot) {
        return push({GateKind::PauliEvolution, 0, 0, slot, std::nullopt, weight, p});
    }
    Circuit &evolution_fixed(double weight, const PauliString &p, double angle) {
        return push({GateKind::PauliEvolution, 0, 0, std::nullopt, angle, weight, p});
    }

    Circuit &append(const Circuit &other) {
        if (other.n_qubits_ != n_qubits_) {
            throw DimensionError("appending a circuit of different width");
        }
        for (const auto &g : other.gates_) {
            push(g);
        }
        return *this;
    }

    Circuit &push(Gate g) {
        if (g.slot && g.fixed_angle) {
            throw ValidationError("a gate has either a slot or a fixed angle");
        }
        if (g.slot && *g.slot >= n_params_) {
            throw ValidationError("parameter slot " + std::to_string(*g.slot) +
                                  " out of range (n_theta = " +
                                  std::to_string(n_params_) + ")");
        }
        if (g.kind == GateKind::PauliEvolution) {
            if (g.pauli.num_qubits() != n_qubits_) {
                throw DimensionError("Pauli evolution string has the wrong width");
            }
        } else if (g.target >= n_qubits_ ||
                   (g.kind == GateKind::CNOT && g.control >= n_qubits_)) {
            throw DimensionError("gate qubit index out of range");
        }
        gates_.push_back(std::move(g));
        return *this;
    }

  private:
    std::size_t n_qubits_ = 0;
    std::size_t n_params_ = 0;
    std::vector<Gate> gates_;
};

class StateVector {
  public:
    StateVector() = default;
    explicit StateVector(std::size_t n_qubits)
        : n_(n_qubits), amps_(std::size_t{1} << n_qubits) {
        if (n_qubits > 30) {
            throw ResourceError("statevectors are limited to 30 qubits");
        }
        amps_[0] = 1.0;
    }
    StateVector(std::size_t n_qubits, std::vector<cplx> amplitudes)
        : n_(n_qubits), amps_(std::move(amplitudes)) {
        if (amps_.size() != (std::size_t{1} << n_qubits)) {
            throw DimensionError("amplitude count is not 2^n");
        }
    }

    /// |x> with qubit k set to bit k of `bits`.
    static StateVector basis(std::size_t n_qubits, std::uint64_t bits) {
        StateVector s(n_qubits);
        if (bits >= s.amps_.size()) {
            throw DimensionError("bitstring does not fit the register");
        }
        s.amps_[0] = 0.0;
        s.amps_[bits] = 1.0;
        return s;
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] std::span<cplx> amplitudes() noexcept { return amps_; }
    cplx &operator[](std::size_t i) { return amps_[i]; }
    const cplx &operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm() const {
        double s = 0;
        for (const auto &a : amps_) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }

    [[nodiscard]] cplx inner(const StateVector &o) const {
        if (o.dim() != dim()) {
            throw DimensionError("inner product of states of different size");
        }
        cplx s = 0;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            s += std::conj(amps_[i]) * o.amps_[i];
        }
        return s;
    }

    void apply_ry(std::size_t q, double angle) {
        const double c = std::cos(0.5 * angle);
        const double s = std::sin(0.5 * angle);
        for_pairs(q, [c, s](cplx &a0, cplx &a1) {
            const cplx t0 = a0;
            a0 = c * t0 - s * a1;
            a1 = s * t0 + c * a1;
        });
    }

    void apply_rx(std::size_t q, double angle) {
        const double c = std::cos(0.5 * angle);
        const cplx ms{0.0, -std::sin(0.5 * angle)};
        for_pairs(q, [c, ms](cplx &a0, cplx &a1) {
            const cplx t0 = a0;
            a0 = c * t0 + ms * a1;
            a1 = ms * t0 + c * a1;
        });
    }

    void apply_cnot(std::size_t control, std::size_t target) {
        const std::size_t cbit = std::size_t{1} << control;
        const std::size_t tbit = std::size_t{1} << target;
        for (std::size_t b = 0; b < amps_.size(); ++b) {
            if ((b & cbit) && !(b & tbit)) {
                std::swap(amps_[b], amps_[b | tbit]);
            }
        }
    }

    /// exp(-i angle P / 2) = cos(angle/2) - i sin(angle/2) P, exact for P^2 = I.
    void apply_pauli_rotation(const PauliString &p, double angle) {
        const double c = std::cos(0.5 * angle);
        const cplx mis{0.0, -std::sin(0.5 * angle)};
        const std::uint64_t x = p.x_bits();
        const std::uint64_t z = p.z_bits();
        const cplx iy = detail::i_power(static_cast<int>(p.y_count()));
        auto phase = [&](std::uint64_t b) {
            return (std::popcount(b & z) & 1) ? -iy : iy;
        };
        if (x == 0) {
            for (std::size_t b = 0; b < amps_.size(); ++b) {
                amps_[b] *= c + mis * phase(b);
            }
            return;
        }
        for (std::size_t b = 0; b < amps_.size(); ++b) {
            const std::size_t f = b ^ x;
            if (f < b) {
                continue;
            }
            const cplx ab = amps_[b];
            const cplx af = amps_[f];
            amps_[b] = c * ab + mis * phase(f) * af;
            amps_[f] = c * af + mis * phase(b) * ab;
        }
    }

    void apply_gate(const Gate &g, double angle) {
        switch (g.kind) {
        case GateKind::RY:
            apply_ry(g.target, angle);
            break;
        case GateKind::RX:
            apply_rx(g.target, angle);
            break;
        case GateKind::CNOT:
            apply_cnot(g.control, g.target);
            break;
        case GateKind::PauliEvolution:
            apply_pauli_rotation(g.pauli, angle);
            break;
        }
    }

    void apply_gate_adjoint(const Gate &g, double angle) {
        apply_gate(g, g.kind == GateKind::CNOT ? angle : -angle);
    }

    /// Accumulates w * G|this> into out, where G is the gate's generator
    /// (Y, X, or P): the derivative of the gate is -(i/2) w G U.
    void apply_generator_add(const Gate &g, cplx w, std::vector<cplx> &out) const {
        switch (g.kind) {
        case GateKind::RY:
            apply_pauli_add(PauliString::single(n_, g.target, 'Y'), w, amps_, out);
            break;
        case GateKind::RX:
            apply_pauli_add(PauliString::single(n_, g.target, 'X'), w, amps_, out);
            break;
        case GateKind::PauliEvolution:
            apply_pauli_add(g.pauli, w, amps_, out);
            break;
        case GateKind::CNOT:
            throw ValidationError("CNOT has no parameter");
        }
    }

  private:
    template <typename F> void for_pairs(std::size_t q, F &&f) {
        if (q >= n_) {
            throw DimensionError("qubit index out of range");
        }
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t b = 0; b < amps_.size(); ++b) {
            if (!(b & bit)) {
                f(amps_[b], amps_[b | bit]);
            }
        }
    }

    std::size_t n_ = 0;
    std::vector<cplx> amps_;
};

inline StateVector init_reference(std::size_t n_qubits, std::uint64_t bits) {
    return StateVector::basis(n_qubits, bits);
}

/// Bitstring given as text, character k = qubit k.
inline StateVector init_reference(std::size_t n_qubits, std::string_view bits) {
    if (bits.size() != n_qubits) {
        throw DimensionError("bitstring length " + std::to_string(bits.size()) +
                             " does not match " + std::to_string(n_qubits) +
                             " qubits");
    }
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k] == '1') {
            v |= std::uint64_t{1} << k;
        } else if (bits[k] != '0') {
            throw ValidationError("bitstring characters must be 0 or 1");
        }
    }
    return StateVector::basis(n_qubits, v);
}

namespace detail {
inline void check_params(const Circuit &c, std::span<const double> theta) {
    if (theta.size() != c.n_params()) {
        throw DimensionError("expected " + std::to_string(c.n_params()) +
                             " parameters, got " + std::to_string(theta.size()));
    }
}
} // namespace detail

inline StateVector apply_circuit(StateVector s, const Circuit &c,
                                 std::span<const double> theta) {
    detail::check_params(c, theta);
    if (s.n_qubits() != c.n_qubits()) {
        throw DimensionError("circuit and state widths differ");
    }
    for (const auto &g : c.gates()) {
        s.apply_gate(g, g.angle(theta));
    }
    return s;
}

inline void check_hermitian(const QubitOperator &op, double tol = 1e-12) {
    if (!op.is_hermitian(tol)) {
        throw ValidationError("observable is not Hermitian");
    }
}

/// <s|op|s> for a Hermitian operator.
inline double expectation(const StateVector &s, const QubitOperator &op) {
    check_hermitian(op);
    if (op.num_qubits() != s.n_qubits()) {
        throw DimensionError("operator and state widths differ");
    }
    const auto amps = s.amplitudes();
    cplx total = 0;
    for (const auto &[p, c] : op.terms()) {
        const std::uint64_t x = p.x_bits();
        const std::uint64_t z = p.z_bits();
        cplx acc = 0;
        for (std::size_t b = 0; b < amps.size(); ++b) {
            const double sign = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
            acc += std::conj(amps[b ^ x]) * sign * amps[b];
        }
        total += c * detail::i_power(static_cast<int>(p.y_count())) * acc;
    }
    return total.real();
}

struct EnergyGradient {
    double energy = 0.0;
    std::vector<double> gradient;
};

/**
 * Energy and dE/dtheta by a reverse sweep: with |phi> the state after gate k
 * and <lambda| = <psi|H U_N ... U_{k+1}, the contribution of gate k is
 * 2 Re <lambda| -(i/2) w G |phi>. Gates sharing a slot add up.
 */
inline EnergyGradient energy_and_gradient(const Circuit &c,
                                          std::span<const double> theta,
                                          const QubitOperator &op,
                                          const StateVector &reference) {
    check_hermitian(op);
    StateVector phi = apply_circuit(reference, c, theta);
    if (op.num_qubits() != phi.n_qubits()) {
        throw DimensionError("operator and state widths differ");
    }
    std::vector<cplx> hphi(phi.dim());
    op.apply_add(phi.amplitudes(), hphi);
    EnergyGradient out;
    {
        cplx e = 0;
        for (std::size_t i = 0; i < hphi.size(); ++i) {
            e += std::conj(phi[i]) * hphi[i];
        }
        out.energy = e.real();
    }
    out.gradient.assign(c.n_params(), 0.0);
    StateVector lambda(phi.n_qubits(), std::move(hphi));
    std::vector<cplx> mu(phi.dim());
    const auto &gates = c.gates();
    for (std::size_t k = gates.size(); k-- > 0;) {
        const Gate &g = gates[k];
        const double angle = g.angle(theta);
        if (g.parametrized()) {
            std::fill(mu.begin(), mu.end(), cplx{});
            phi.apply_generator_add(g, cplx{0.0, -0.5 * g.weight}, mu);
            cplx ip = 0;
            const auto l = lambda.amplitudes();
            for (std::size_t i = 0; i < mu.size(); ++i) {
                ip += std::conj(l[i]) * mu[i];
            }
            out.gradient[*g.slot] += 2.0 * ip.real();
        }
        phi.apply_gate_adjoint(g, angle);
        lambda.apply_gate_adjoint(g, angle);
    }
    return out;
}

inline std::vector<double> gradient(const Circuit &c, std::span<const double> theta,
                                    const QubitOperator &op,
                                    const StateVector &reference) {
    return energy_and_gradient(c, theta, op, reference).gradient;
}

/// Little-endian interleaved (re, im) doubles; debugging aid only.
inline void write_state_dump(const StateVector &s, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    for (const auto &a : s.amplitudes()) {
        for (double v : {a.real(), a.imag()}) {
            auto bits = std::bit_cast<std::uint64_t>(v);
            if constexpr (std::endian::native == std::endian::big) {
                bits = __builtin_bswap64(bits);
            }
            char buf[8];
            std::memcpy(buf, &bits, 8);
            out.write(buf, 8);
        }
    }
}

inline StateVector read_state_dump(const std::string &path, std::size_t n_qubits) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::vector<cplx> amps(std::size_t{1} << n_qubits);
    for (auto &a : amps) {
        double v[2];
        for (double &d : v) {
            char buf[8];
            if (!in.read(buf, 8)) {
                throw IoError("truncated state dump " + path);
            }
            std::uint64_t bits = 0;
            std::memcpy(&bits, buf, 8);
            if constexpr (std::endian::native == std::endian::big) {
                bits = __builtin_bswap64(bits);
            }
            d = std::bit_cast<double>(bits);
        }
        a = {v[0], v[1]};
    }
    return {n_qubits, std::move(amps)};
}

} // namespace vqelab
