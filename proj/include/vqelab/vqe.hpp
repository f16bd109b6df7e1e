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
 * Variational driver: qubit problems built through one encoding chain,
 * symmetry metrics against full CI, multi-start minimization, layer and
 * geometry warm starts, and a potential-curve cusp detector.
 */
#pragma once

#include "ansatz.hpp"
#include "encoding.hpp"
#include "error.hpp"
#include "fci.hpp"
#include "fermion.hpp"
#include "first_quant.hpp"
#include "optimize.hpp"
#include "statevector.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <thread>
#include <vector>

namespace vqelab {

/// Where N, S_z and S^2 are measured: on the final register, or on the
/// register before tapering after mapping the state back.
enum class AuxPath { Tapered, Untapered };

inline std::string to_string(AuxPath p) {
    return p == AuxPath::Tapered ? "tapered" : "untapered";
}

inline AuxPath parse_aux_path(const std::string &s) {
    if (s == "tapered") {
        return AuxPath::Tapered;
    }
    if (s == "untapered") {
        return AuxPath::Untapered;
    }
    throw ValidationError("unknown auxiliary-operator path '" + s + "'");
}

struct Observables {
    double energy = 0.0;
    double number = 0.0;
    double spin_z = 0.0;
    double spin_squared = 0.0;
};

/// Second-quantized problem on the final qubit register.
struct QubitProblem {
    IntegralSet ints;
    Encoding encoding;
    QubitOperator hamiltonian;
    std::optional<QubitOperator> number, spin_z, spin_squared; ///< empty if not taperable
    QubitOperator number_full, spin_z_full, spin_squared_full; ///< before tapering
    std::uint64_t reference = 0;
    FciReference fci;

    [[nodiscard]] std::size_t n_qubits() const noexcept { return encoding.n_qubits(); }
    [[nodiscard]] StateVector reference_state() const {
        return StateVector::basis(n_qubits(), reference);
    }
    [[nodiscard]] Observables exact() const {
        const auto &g = fci.ground;
        return {g.energy, g.number, g.spin_z, g.spin_squared};
    }
};

/**
 * Maps H and the auxiliary operators through `opts`. With
 * `search_with_auxiliary` the tapering generators must commute with H, N,
 * S_z and S^2; otherwise only with H, and auxiliary operators that break a
 * generator are measured on the untapered register.
 */
inline QubitProblem build_qubit_problem(const IntegralSet &ints, EncodingOptions opts,
                                        bool search_with_auxiliary = true) {
    ints.validate();
    QubitProblem p;
    p.ints = ints;
    const auto h = build_molecular_hamiltonian(ints);
    const auto aux = build_auxiliary_operators(ints.n_orbitals, ints.n_frozen);
    std::vector<FermionOperator> sym{h};
    if (search_with_auxiliary) {
        sym.insert(sym.end(), {aux.number, aux.spin_z, aux.spin_squared});
    }
    p.encoding = Encoding(ints.n_orbitals, ints.n_alpha, ints.n_beta, opts, sym);
    p.hamiltonian = p.encoding.apply(h);
    p.number_full = p.encoding.apply_untapered(aux.number);
    p.spin_z_full = p.encoding.apply_untapered(aux.spin_z);
    p.spin_squared_full = p.encoding.apply_untapered(aux.spin_squared);
    auto try_taper = [&](const QubitOperator &q) -> std::optional<QubitOperator> {
        try {
            return p.encoding.taper_operator(q);
        } catch (const SymmetryError &) {
            return std::nullopt;
        }
    };
    p.number = try_taper(p.number_full);
    p.spin_z = try_taper(p.spin_z_full);
    p.spin_squared = try_taper(p.spin_squared_full);
    p.reference = p.encoding.reference();
    p.fci = fci(ints);
    return p;
}

struct MetricReport {
    Observables value;
    Observables exact;
    Observables delta; ///< value - exact
    AuxPath path = AuxPath::Tapered;
};

/// Energy and symmetry deviations of `state` (on the final register).
inline MetricReport evaluate_metrics(const StateVector &state, const QubitProblem &p,
                                     AuxPath path = AuxPath::Tapered) {
    if (state.n_qubits() != p.n_qubits()) {
        throw DimensionError("state does not live on the problem register");
    }
    MetricReport r;
    r.exact = p.exact();
    r.value.energy = expectation(state, p.hamiltonian);
    const bool taperable = p.number && p.spin_z && p.spin_squared;
    r.path = taperable ? path : AuxPath::Untapered;
    if (r.path == AuxPath::Tapered) {
        r.value.number = expectation(state, *p.number);
        r.value.spin_z = expectation(state, *p.spin_z);
        r.value.spin_squared = expectation(state, *p.spin_squared);
    } else {
        const StateVector full(p.encoding.n_reduced(), p.encoding.untaper(state.amplitudes()));
        r.value.number = expectation(full, p.number_full);
        r.value.spin_z = expectation(full, p.spin_z_full);
        r.value.spin_squared = expectation(full, p.spin_squared_full);
    }
    r.delta = {r.value.energy - r.exact.energy, r.value.number - r.exact.number,
               r.value.spin_z - r.exact.spin_z, r.value.spin_squared - r.exact.spin_squared};
    return r;
}

/// Full-CI ground vector on the final register.
inline StateVector fci_state(const QubitProblem &p) {
    const auto occ = occupations(p.fci.dets, p.ints.n_orbitals);
    const auto &v = p.fci.ground.vector;
    return {p.n_qubits(), p.encoding.from_occupations(occ, {v.data(), static_cast<std::size_t>(v.size())})};
}

/// Circuit of `spec` with n_l layers for problem `p`.
inline Circuit build_circuit(const AnsatzSpec &spec, int n_l, const QubitProblem &p) {
    switch (spec.family) {
    case AnsatzFamily::RyLinear:
        return build_ry(p.n_qubits(), n_l, Connectivity::Linear);
    case AnsatzFamily::RyFull:
        return build_ry(p.n_qubits(), n_l, Connectivity::Full);
    case AnsatzFamily::Cascade:
        return build_cascade(p.n_qubits(), n_l);
    case AnsatzFamily::QUCCSD: {
        AnsatzSpec s = spec;
        s.n_l = n_l;
        return build_quccsd(p.ints, s, p.encoding);
    }
    }
    throw ValidationError("unknown ansatz family");
}

// ---------------------------------------------------------------------------
// Multi-start minimization

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of restart `restart` in stream `stream` (e.g. the geometry index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t restart) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ restart);
}

/// n values uniform in [-scale, scale], bit-identical across platforms.
inline std::vector<double> uniform_parameters(std::size_t n, std::uint64_t seed, double scale) {
    std::mt19937_64 rng(seed);
    std::vector<double> out(n);
    for (auto &x : out) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        x = scale * (2.0 * u - 1.0);
    }
    return out;
}

struct VqeOptions {
    OptimizerOptions optimizer;
    int restarts = 1;
    std::uint64_t seed = 0;
    double init_scale = 0.1;
    AuxPath aux_path = AuxPath::Tapered;
    double tie_tol = 1e-10;
};

struct VqeResult {
    std::vector<double> theta;
    double energy = 0.0;
    MetricReport metrics;
    std::vector<TracePoint> trace;
    int restarts_used = 0;
    int best_restart = 0;
    int evaluations = 0;
    bool converged = false;
    double physical_norm = 1.0; ///< first quantization with padding only
};

/// Runs `n` tasks on up to `threads` workers; task i writes only its own slot.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &fn) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

/**
 * Best of `restarts` local minimizations of `objective`. Restart 0 starts
 * from `warm` (zeros if absent); the others from uniform draws. Ranking is
 * by the returned key (value, then tie-breaker) with ties within tie_tol.
 */
struct RestartOutcome {
    OptimizeResult run;
    double tie_key = 0.0;
};

inline std::pair<std::size_t, std::vector<RestartOutcome>>
multi_start(const Objective &objective, std::size_t n_params, const VqeOptions &opt,
            std::uint64_t stream, const std::optional<std::vector<double>> &warm,
            const std::function<double(const std::vector<double> &)> &tie_key, int threads = 1) {
    if (opt.restarts < 1) {
        throw ValidationError("at least one restart required");
    }
    if (warm && warm->size() != n_params) {
        throw DimensionError("warm-start parameters have the wrong length");
    }
    std::vector<RestartOutcome> out(static_cast<std::size_t>(opt.restarts));
    parallel_for(out.size(), threads, [&](std::size_t k) {
        std::vector<double> x0 =
            k == 0 ? warm.value_or(std::vector<double>(n_params, 0.0))
                   : uniform_parameters(n_params, derive_seed(opt.seed, stream, k), opt.init_scale);
        out[k].run = minimize(objective, std::move(x0), opt.optimizer);
        out[k].tie_key = tie_key(out[k].run.x);
    });
    std::size_t best = 0;
    for (std::size_t k = 1; k < out.size(); ++k) {
        const double dv = out[k].run.value - out[best].run.value;
        if (dv < -opt.tie_tol || (std::abs(dv) <= opt.tie_tol && out[k].tie_key < out[best].tie_key)) {
            best = k;
        }
    }
    return {best, std::move(out)};
}

/// Energy minimization of `c` on problem `p`.
inline VqeResult run_vqe(const Circuit &c, const QubitProblem &p, const VqeOptions &opt,
                         std::uint64_t stream = 0,
                         const std::optional<std::vector<double>> &warm = std::nullopt,
                         int threads = 1) {
    if (c.n_qubits() != p.n_qubits()) {
        throw DimensionError("circuit and problem widths differ");
    }
    const StateVector ref = p.reference_state();
    Objective f = [&](std::span<const double> x, std::span<double> g) {
        if (g.empty()) {
            return expectation(apply_circuit(ref, c, x), p.hamiltonian);
        }
        auto eg = energy_and_gradient(c, x, p.hamiltonian, ref);
        std::copy(eg.gradient.begin(), eg.gradient.end(), g.begin());
        return eg.energy;
    };
    auto s2 = [&](const std::vector<double> &x) {
        return evaluate_metrics(apply_circuit(ref, c, x), p, opt.aux_path).value.spin_squared;
    };
    auto [best, runs] = multi_start(f, c.n_params(), opt, stream, warm, s2, threads);
    const auto &b = runs[best].run;
    VqeResult r;
    r.theta = b.x;
    r.energy = b.value;
    r.trace = b.trace;
    r.converged = b.converged;
    r.restarts_used = static_cast<int>(runs.size());
    r.best_restart = static_cast<int>(best);
    for (const auto &o : runs) {
        r.evaluations += o.run.evaluations;
    }
    r.metrics = evaluate_metrics(apply_circuit(ref, c, r.theta), p, opt.aux_path);
    return r;
}

// ---------------------------------------------------------------------------
// First quantization

/// First-quantized problem: either the trimmed H~ or the padded J with Pi.
struct FirstQuantProblem {
    IntegralSet ints;
    FciReference fci;
    CsfBasis basis;
    Eigen::MatrixXd projected;   ///< H~
    bool padded = true;
    std::optional<PaddedProblem> padding;
    std::optional<TrimResult> trimming;
    QubitOperator hamiltonian;   ///< J when padded, trimmed H~ otherwise
    std::size_t n_q = 0;

    /// Exact energy of the qubit problem's physical space.
    [[nodiscard]] double target_energy() const {
        return padded ? padding->ground_energy : trimming->energy;
    }
    /// Register basis state of the lowest-energy CSF.
    [[nodiscard]] std::uint64_t reference() const {
        if (padded) {
            return 0;
        }
        const auto &kept = trimming->kept;
        return static_cast<std::uint64_t>(std::find(kept.begin(), kept.end(), Eigen::Index{0}) -
                                          kept.begin()) %
               kept.size();
    }
};

enum class FirstQuantScheme { Trim, Pad };

inline FirstQuantScheme parse_scheme(const std::string &s) {
    if (s == "trim") {
        return FirstQuantScheme::Trim;
    }
    if (s == "pad") {
        return FirstQuantScheme::Pad;
    }
    throw ValidationError("unknown first-quantization scheme '" + s + "'");
}

inline FirstQuantProblem build_first_quant_problem(const IntegralSet &ints, FirstQuantScheme scheme,
                                                   double lambda = kDefaultPadding) {
    ints.validate();
    FirstQuantProblem p;
    p.ints = ints;
    p.fci = fci(ints);
    p.basis = build_csf_basis(p.fci.matrices);
    p.projected = project_hamiltonian(p.fci.matrices, p.basis);
    p.padded = scheme == FirstQuantScheme::Pad;
    if (p.padded) {
        p.padding = pad(p.projected, lambda);
        p.hamiltonian = p.padding->j;
        p.n_q = p.padding->n_q;
    } else {
        p.trimming = trim(p.projected);
        p.n_q = p.trimming->n_q;
        p.hamiltonian = from_matrix(p.trimming->matrix.cast<cplx>(), p.n_q);
    }
    return p;
}

/**
 * Minimizes the VAP or PAV objective (padding) or the trimmed energy. The
 * reported energy is the projected one; metrics compare it with the
 * singlet ground energy of the untrimmed H~, whose N, S_z and S^2 are
 * exact by construction.
 */
inline VqeResult run_first_quant(const Circuit &c, const FirstQuantProblem &p, Projection mode,
                                 const VqeOptions &opt, std::uint64_t stream = 0,
                                 const std::optional<std::vector<double>> &warm = std::nullopt,
                                 int threads = 1) {
    if (c.n_qubits() != p.n_q) {
        throw DimensionError("circuit and problem widths differ");
    }
    const StateVector ref = StateVector::basis(p.n_q, p.reference());
    Objective f;
    if (!p.padded || mode == Projection::PAV) {
        f = [&](std::span<const double> x, std::span<double> g) {
            if (g.empty()) {
                return expectation(apply_circuit(ref, c, x), p.hamiltonian);
            }
            auto eg = energy_and_gradient(c, x, p.hamiltonian, ref);
            std::copy(eg.gradient.begin(), eg.gradient.end(), g.begin());
            return eg.energy;
        };
    } else {
        // d(<A>/<Pi>) = (d<A> - E d<Pi>) / <Pi>
        f = [&](std::span<const double> x, std::span<double> g) {
            const StateVector s = apply_circuit(ref, c, x);
            const ProjectedValue v = projected_objective(s, *p.padding, Projection::VAP);
            if (!g.empty()) {
                QubitOperator shifted = p.padding->pjp + p.padding->pi * cplx(-v.energy);
                auto eg = energy_and_gradient(c, x, shifted.simplify(), ref);
                for (std::size_t i = 0; i < g.size(); ++i) {
                    g[i] = eg.gradient[i] / v.physical_norm;
                }
            }
            return v.energy;
        };
    }
    auto no_tie = [](const std::vector<double> &) { return 0.0; };
    auto [best, runs] = multi_start(f, c.n_params(), opt, stream, warm, no_tie, threads);
    const auto &b = runs[best].run;
    VqeResult r;
    r.theta = b.x;
    r.trace = b.trace;
    r.converged = b.converged;
    r.restarts_used = static_cast<int>(runs.size());
    r.best_restart = static_cast<int>(best);
    for (const auto &o : runs) {
        r.evaluations += o.run.evaluations;
    }
    const StateVector s = apply_circuit(ref, c, r.theta);
    if (p.padded) {
        const auto v = projected_objective(s, *p.padding, Projection::VAP);
        r.energy = v.energy;
        r.physical_norm = v.physical_norm;
    } else {
        r.energy = expectation(s, p.hamiltonian);
    }
    const auto &g = p.fci.ground;
    const double singlet = lowest_eigenvalue(p.projected);
    r.metrics.exact = {singlet, g.number, 0.0, 0.0};
    r.metrics.value = {r.energy, g.number, 0.0, 0.0};
    r.metrics.delta = {r.energy - singlet, 0.0, 0.0, 0.0};
    return r;
}

// ---------------------------------------------------------------------------
// Cusp detection

/**
 * Flags interior points whose one-sided slopes jump. With
 * J_i = |s_right - s_left| and kappa_i = J_i / ((R_{i+1} - R_{i-1}) / 2),
 * point i is flagged when kappa_i > threshold * max(kappa of its interior
 * neighbours) and J_i > floor.
 */
inline std::vector<double> detect_cusps(const std::vector<double> &r, const std::vector<double> &e,
                                        double threshold = 5.0, double floor = 1e-3) {
    if (r.size() != e.size()) {
        throw DimensionError("one energy per geometry required");
    }
    if (r.size() < 5) {
        throw ValidationError("cusp detection needs at least 5 points");
    }
    for (std::size_t i = 1; i < r.size(); ++i) {
        if (!(r[i] > r[i - 1])) {
            throw ValidationError("geometries must be strictly increasing");
        }
    }
    const std::size_t n = r.size();
    std::vector<double> jump(n, 0.0);
    std::vector<double> kappa(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double sl = (e[i] - e[i - 1]) / (r[i] - r[i - 1]);
        const double sr = (e[i + 1] - e[i]) / (r[i + 1] - r[i]);
        jump[i] = std::abs(sr - sl);
        kappa[i] = jump[i] / (0.5 * (r[i + 1] - r[i - 1]));
    }
    std::vector<double> flagged;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double scale = 0.0;
        if (i > 1) {
            scale = std::max(scale, kappa[i - 1]);
        }
        if (i + 2 < n) {
            scale = std::max(scale, kappa[i + 1]);
        }
        if (jump[i] > floor && kappa[i] > threshold * scale) {
            flagged.push_back(r[i]);
        }
    }
    return flagged;
}

} // namespace vqelab
