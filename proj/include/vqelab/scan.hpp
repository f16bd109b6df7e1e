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
 * Potential-curve scans over the geometries and layer counts of a
 * ScanConfig, in either quantization. Independent chains run in parallel;
 * a chain is one (geometry, layer) task, or the geometries of one layer
 * count (prev_geometry), or the layer counts of one geometry (prev_layer).
 */
#pragma once

#include "ansatz.hpp"
#include "config.hpp"
#include "fcidump.hpp"
#include "vqe.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace vqelab {

/// Active-space integrals of geometry `r`.
inline IntegralSet load_integrals(const ScanConfig &cfg, double r) {
    const auto path = cfg.fcidump_path(r);
    if (!std::filesystem::exists(path)) {
        throw IoError("integral file not found: " + path.string());
    }
    IntegralSet full = parse_fcidump(path.string());
    if (cfg.frozen.empty() && cfg.active.empty()) {
        return full;
    }
    std::vector<int> active = cfg.active;
    if (active.empty()) {
        for (int p = 0; p < static_cast<int>(full.n_orbitals); ++p) {
            if (std::find(cfg.frozen.begin(), cfg.frozen.end(), p) == cfg.frozen.end()) {
                active.push_back(p);
            }
        }
    }
    return select_active_space(full, cfg.frozen, active);
}

struct ScanPoint {
    double r = 0.0;
    std::size_t geometry_index = 0;
    int n_l = 0;
    VqeResult result;
    CostReport cost;
    std::string encoding;   ///< register description
    double wall_seconds = 0.0;
};

struct ScanCurve {
    std::vector<ScanPoint> points;          ///< geometry-major, then layer order of the config
    std::map<int, std::vector<double>> cusps; ///< per layer count; empty below 5 geometries

    [[nodiscard]] const ScanPoint &at(std::size_t geometry, int n_l) const {
        for (const auto &p : points) {
            if (p.geometry_index == geometry && p.n_l == n_l) {
                return p;
            }
        }
        throw ValidationError("no scan point for that geometry and layer count");
    }
};

/// R_y or cascade circuit on n_q qubits.
inline Circuit build_hardware_efficient(AnsatzFamily family, std::size_t n_q, int n_l) {
    switch (family) {
    case AnsatzFamily::RyLinear:
        return build_ry(n_q, n_l, Connectivity::Linear);
    case AnsatzFamily::RyFull:
        return build_ry(n_q, n_l, Connectivity::Full);
    case AnsatzFamily::Cascade:
        return build_cascade(n_q, n_l);
    case AnsatzFamily::QUCCSD:
        break;
    }
    throw ValidationError("q-UCCSD has no first-quantization form");
}

namespace detail {
/// Runs every (geometry, layer) task in the chain order set by warm_start.
/// `run(g, l, warm)` returns a finished point with an empty r/n_l.
template <class Run, class Extend>
std::vector<ScanPoint> run_chains(const ScanConfig &cfg, int threads, Run run, Extend extend) {
    const std::size_t ng = cfg.geometries.size();
    const std::size_t nl = cfg.layers.size();
    std::vector<ScanPoint> pts(ng * nl);
    auto task = [&](std::size_t g, std::size_t l, const std::optional<std::vector<double>> &warm) {
        const auto t0 = std::chrono::steady_clock::now();
        ScanPoint p = run(g, cfg.layers[l], warm);
        p.r = cfg.geometries[g];
        p.geometry_index = g;
        p.n_l = cfg.layers[l];
        p.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        pts[g * nl + l] = std::move(p);
    };
    switch (cfg.warm_start) {
    case WarmStart::None:
        parallel_for(ng * nl, threads, [&](std::size_t i) { task(i / nl, i % nl, std::nullopt); });
        break;
    case WarmStart::PrevGeometry:
        parallel_for(nl, threads, [&](std::size_t l) {
            std::optional<std::vector<double>> warm;
            for (std::size_t g = 0; g < ng; ++g) {
                task(g, l, warm);
                warm = pts[g * nl + l].result.theta;
            }
        });
        break;
    case WarmStart::PrevLayer: {
        std::vector<std::size_t> order(nl);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return cfg.layers[a] < cfg.layers[b]; });
        parallel_for(ng, threads, [&](std::size_t g) {
            std::optional<std::vector<double>> warm;
            int prev = -1;
            for (std::size_t l : order) {
                if (warm) {
                    for (int k = prev; k < cfg.layers[l]; ++k) {
                        warm = extend(g, *warm);
                    }
                }
                task(g, l, warm);
                warm = pts[g * nl + l].result.theta;
                prev = cfg.layers[l];
            }
        });
        break;
    }
    }
    return pts;
}

inline std::map<int, std::vector<double>> curve_cusps(const ScanConfig &cfg,
                                                      const std::vector<ScanPoint> &pts) {
    std::map<int, std::vector<double>> out;
    if (cfg.geometries.size() < 5) {
        return out;
    }
    const std::size_t nl = cfg.layers.size();
    for (std::size_t l = 0; l < nl; ++l) {
        std::vector<double> e;
        for (std::size_t g = 0; g < cfg.geometries.size(); ++g) {
            e.push_back(pts[g * nl + l].result.energy);
        }
        out[cfg.layers[l]] = detect_cusps(cfg.geometries, e, cfg.cusp_threshold);
    }
    return out;
}

/// Warm-start vectors whose length does not match the circuit are dropped.
inline std::optional<std::vector<double>> fitting(const std::optional<std::vector<double>> &warm,
                                                  std::size_t n) {
    return warm && warm->size() == n ? warm : std::nullopt;
}
} // namespace detail

/// Second-quantization problems for every geometry of `cfg`.
inline std::vector<QubitProblem> build_problems(const ScanConfig &cfg, int threads = 1) {
    std::vector<QubitProblem> out(cfg.geometries.size());
    parallel_for(out.size(), threads, [&](std::size_t g) {
        out[g] = build_qubit_problem(load_integrals(cfg, cfg.geometries[g]), cfg.encoding, cfg.aux_search);
    });
    return out;
}

inline VqeOptions vqe_options(const ScanConfig &cfg) {
    VqeOptions o;
    o.optimizer = cfg.optimizer;
    o.restarts = cfg.restarts;
    o.seed = cfg.seed;
    o.aux_path = cfg.aux_path;
    return o;
}

/// Second-quantization scan; best-of-restarts point per (geometry, layer).
inline ScanCurve scan_curve(const ScanConfig &cfg, int threads = 1) {
    cfg.validate();
    const auto problems = build_problems(cfg, threads);
    const VqeOptions opt = vqe_options(cfg);
    auto run = [&](std::size_t g, int n_l, const std::optional<std::vector<double>> &warm) {
        const auto &p = problems[g];
        const Circuit c = build_circuit(cfg.ansatz, n_l, p);
        ScanPoint pt;
        pt.result = run_vqe(c, p, opt, g, detail::fitting(warm, c.n_params()));
        pt.cost = circuit_cost(c, p.hamiltonian, n_l, p.reference);
        pt.encoding = p.encoding.describe();
        return pt;
    };
    auto extend = [&](std::size_t g, const std::vector<double> &theta) {
        const auto &p = problems[g];
        if (cfg.ansatz.family == AnsatzFamily::QUCCSD) {
            if (cfg.ansatz.tie_layers) {
                return theta;
            }
            const auto n_amp = build_excitations(p.ints, cfg.ansatz.flavor).size();
            return warm_start_extend(theta, cfg.ansatz.family, p.n_qubits(), n_amp);
        }
        return warm_start_extend(theta, cfg.ansatz.family, p.n_qubits());
    };
    ScanCurve curve;
    curve.points = detail::run_chains(cfg, threads, run, extend);
    curve.cusps = detail::curve_cusps(cfg, curve.points);
    return curve;
}

/// First-quantization scan with cfg.scheme and cfg.projection.
inline ScanCurve scan_first_quant(const ScanConfig &cfg, int threads = 1) {
    cfg.validate();
    std::vector<FirstQuantProblem> problems(cfg.geometries.size());
    parallel_for(problems.size(), threads, [&](std::size_t g) {
        problems[g] = build_first_quant_problem(load_integrals(cfg, cfg.geometries[g]), cfg.scheme, cfg.lambda);
    });
    const VqeOptions opt = vqe_options(cfg);
    auto run = [&](std::size_t g, int n_l, const std::optional<std::vector<double>> &warm) {
        const auto &p = problems[g];
        const Circuit c = build_hardware_efficient(cfg.ansatz.family, p.n_q, n_l);
        ScanPoint pt;
        pt.result = run_first_quant(c, p, cfg.projection, opt, g, detail::fitting(warm, c.n_params()));
        pt.cost = circuit_cost(c, p.hamiltonian, n_l, p.reference());
        pt.encoding = p.padded ? "first_quantization+pad" : "first_quantization+trim";
        return pt;
    };
    auto extend = [&](std::size_t g, const std::vector<double> &theta) {
        return warm_start_extend(theta, cfg.ansatz.family, problems[g].n_q);
    };
    ScanCurve curve;
    curve.points = detail::run_chains(cfg, threads, run, extend);
    curve.cusps = detail::curve_cusps(cfg, curve.points);
    return curve;
}

/// Reference data of one geometry.
struct ReferencePoint {
    double r = 0.0;
    double e_hf = 0.0;
    Observables fci;
    std::size_t n_determinants = 0;
    Eigen::Index degeneracy = 1;
    std::size_t n_orbitals = 0;
    int n_alpha = 0;
    int n_beta = 0;
};

inline ReferencePoint reference_point(const IntegralSet &ints, double r) {
    ReferencePoint out;
    out.r = r;
    const FciReference ref = fci(ints);
    out.fci = {ref.ground.energy, ref.ground.number, ref.ground.spin_z, ref.ground.spin_squared};
    out.n_determinants = ref.dets.size();
    out.degeneracy = ref.ground.degeneracy;
    out.n_orbitals = ints.n_orbitals;
    out.n_alpha = ints.n_alpha;
    out.n_beta = ints.n_beta;
    const auto hf = hartree_fock_occupation(ints.n_orbitals, ints.n_alpha, ints.n_beta);
    for (std::size_t i = 0; i < ref.dets.size(); ++i) {
        if (ref.dets[i].occupation(ints.n_orbitals) == hf) {
            out.e_hf = ref.matrices.h.coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
        }
    }
    return out;
}

inline std::vector<ReferencePoint> reference_curve(const ScanConfig &cfg, int threads = 1) {
    cfg.validate();
    std::vector<ReferencePoint> out(cfg.geometries.size());
    parallel_for(out.size(), threads, [&](std::size_t g) {
        out[g] = reference_point(load_integrals(cfg, cfg.geometries[g]), cfg.geometries[g]);
    });
    return out;
}

} // namespace vqelab
