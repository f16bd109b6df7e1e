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

// Command-line entry point: scan, fci, firstq, cost, export.
// Exit status 0 on success, 1 on usage or validation errors, 2 on runtime failures.

#include <vqelab/config.hpp>
#include <vqelab/repository.hpp>
#include <vqelab/scan.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace vqelab;

struct Overrides {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::string ansatz;
    std::string layers;
    std::optional<int> restarts;
};

void add_common(CLI::App *cmd, Overrides &o, bool needs_out) {
    cmd->add_option("--config", o.config, "scan configuration file")->required()->check(CLI::ExistingFile);
    auto *out = cmd->add_option("--out", o.out, "repository root for the results");
    if (needs_out) {
        out->required();
    }
    cmd->add_option("--seed", o.seed, "override the configured seed");
    cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--ansatz", o.ansatz, "override the ansatz (ry_linear, ry_full, cascade, quccsd)");
    cmd->add_option("--layers", o.layers, "override the layer counts, e.g. 3 or 1-4");
    cmd->add_option("--restarts", o.restarts, "override the restart count");
}

ScanConfig load(const Overrides &o) {
    ScanConfig c = load_scan_config(o.config);
    if (o.seed) {
        c.seed = *o.seed;
    }
    if (!o.ansatz.empty()) {
        c.ansatz.family = parse_family(o.ansatz);
    }
    if (!o.layers.empty()) {
        c.layers = detail::config_layers(o.layers, 0);
    }
    if (o.restarts) {
        c.restarts = *o.restarts;
    }
    c.validate();
    return c;
}

void print_curve(const ScanCurve &curve) {
    std::printf("%8s %4s %18s %18s %12s %12s %12s %12s\n", "R", "n_l", "E", "E_exact", "dE", "dN",
                "dSz", "dS2");
    for (const auto &p : curve.points) {
        const auto &m = p.result.metrics;
        std::printf("%8.3f %4d %18.10f %18.10f %12.3e %12.3e %12.3e %12.3e\n", p.r, p.n_l,
                    p.result.energy, m.exact.energy, m.delta.energy, m.delta.number, m.delta.spin_z,
                    m.delta.spin_squared);
    }
    for (const auto &[n_l, flags] : curve.cusps) {
        std::printf("cusps n_l=%d:", n_l);
        if (flags.empty()) {
            std::printf(" none");
        }
        for (double r : flags) {
            std::printf(" %.3f", r);
        }
        std::printf("\n");
    }
}

void write_results(const std::vector<ResultRecord> &recs, const std::string &out) {
    if (out.empty()) {
        return;
    }
    const auto written = write_repository(recs, out);
    std::printf("wrote %zu files under %s\n", written.size(), out.c_str());
}

int cmd_scan(const Overrides &o, bool first_quant, const std::string &scheme, const std::string &projection,
             std::optional<double> lambda) {
    ScanConfig cfg = load(o);
    if (!scheme.empty()) {
        cfg.scheme = parse_scheme(scheme);
    }
    if (!projection.empty()) {
        cfg.projection = parse_projection(projection);
    }
    if (lambda) {
        cfg.lambda = *lambda;
    }
    const ScanCurve curve = first_quant ? scan_first_quant(cfg, o.threads) : scan_curve(cfg, o.threads);
    print_curve(curve);
    write_results(scan_records(cfg, curve, first_quant), o.out);
    if (!o.out.empty()) {
        write_timings(cfg, curve, first_quant, o.out);
    }
    return 0;
}

int cmd_fci(const Overrides &o) {
    const ScanConfig cfg = load(o);
    const auto refs = reference_curve(cfg, o.threads);
    std::printf("%8s %18s %18s %10s %10s %10s %6s\n", "R", "E_hf", "E_fci", "N", "Sz", "S2", "dets");
    for (const auto &r : refs) {
        std::printf("%8.3f %18.10f %18.10f %10.6f %10.6f %10.6f %6zu\n", r.r, r.e_hf, r.fci.energy,
                    r.fci.number, r.fci.spin_z, r.fci.spin_squared, r.n_determinants);
    }
    write_results(reference_records(cfg, refs), o.out);
    return 0;
}

int cmd_cost(const Overrides &o, bool first_quant) {
    const ScanConfig cfg = load(o);
    const double r = cfg.geometries.front();
    std::printf("%-10s %-10s %4s %4s %6s %6s %8s %6s %6s %6s\n", "molecule", "ansatz", "n_q", "n_l", "depth",
                "d_seq", "n_theta", "n_g1", "n_g2", "n_p");
    std::vector<CostReport> rows;
    if (first_quant) {
        const auto p = build_first_quant_problem(load_integrals(cfg, r), cfg.scheme, cfg.lambda);
        for (int n_l : cfg.layers) {
            rows.push_back(circuit_cost(build_hardware_efficient(cfg.ansatz.family, p.n_q, n_l), p.hamiltonian,
                                        n_l, p.reference()));
        }
    } else {
        const auto p = build_qubit_problem(load_integrals(cfg, r), cfg.encoding, cfg.aux_search);
        for (int n_l : cfg.layers) {
            rows.push_back(circuit_cost(build_circuit(cfg.ansatz, n_l, p), p.hamiltonian, n_l, p.reference));
        }
    }
    for (const auto &c : rows) {
        std::printf("%-10s %-10s %4zu %4d %6zu %6zu %8zu %6zu %6zu %6zu\n", cfg.molecule.c_str(),
                    to_string(cfg.ansatz.family).c_str(), c.n_q, c.n_l, c.depth_with_prep, c.sequential_depth,
                    c.n_theta, c.n_g1, c.n_g2, c.n_p);
    }
    return 0;
}

int cmd_export(const std::string &in, const std::string &out) {
    const auto recs = read_repository(in);
    write_results(recs, out);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"vqelab: variational eigensolver laboratory"};
    app.require_subcommand(1);

    Overrides scan_o, fci_o, firstq_o, cost_o;
    auto *scan = app.add_subcommand("scan", "potential-curve scan in second quantization");
    add_common(scan, scan_o, false);

    auto *fci_cmd = app.add_subcommand("fci", "Hartree-Fock and full-CI reference curve");
    add_common(fci_cmd, fci_o, false);

    std::string scheme, projection;
    std::optional<double> lambda;
    auto *firstq = app.add_subcommand("firstq", "potential-curve scan in first quantization");
    add_common(firstq, firstq_o, false);
    firstq->add_option("--scheme", scheme, "trim or pad")->check(CLI::IsMember({"trim", "pad"}));
    firstq->add_option("--projection", projection, "vap or pav")->check(CLI::IsMember({"vap", "pav"}));
    firstq->add_option("--lambda", lambda, "padding energy");

    bool cost_first = false;
    auto *cost = app.add_subcommand("cost", "circuit cost table at the first geometry");
    add_common(cost, cost_o, false);
    cost->add_flag("--first-quant", cost_first, "cost of the first-quantization circuits");

    std::string export_in, export_out;
    auto *exp = app.add_subcommand("export", "re-write an existing repository");
    exp->add_option("--in", export_in, "source repository root")->required();
    exp->add_option("--out", export_out, "destination root")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*scan) {
            return cmd_scan(scan_o, false, "", "", std::nullopt);
        }
        if (*fci_cmd) {
            return cmd_fci(fci_o);
        }
        if (*firstq) {
            return cmd_scan(firstq_o, true, scheme, projection, lambda);
        }
        if (*cost) {
            return cmd_cost(cost_o, cost_first);
        }
        if (*exp) {
            return cmd_export(export_in, export_out);
        }
    } catch (const ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
