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
 * Result repository. Records live at
 * root/<category>/<molecule>/<label>_R<R>.json (schema "vqelab.result/1");
 * each curve also gets <label>.csv for plotting and <label>.timings.csv
 * with wall times, which are kept out of the records so that re-running
 * a scan rewrites identical bytes.
 */
#pragma once

#include "config.hpp"
#include "error.hpp"
#include "scan.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace vqelab {

inline constexpr std::string_view kResultSchema = "vqelab.result/1";

enum class Category {
    HardwareEfficient,
    QUCCSD,
    Trim,
    ProjectionAfterVariation,
    VariationAfterProjection,
    ScfFci
};

inline constexpr std::array<std::string_view, 6> kCategoryNames = {
    "hardware_efficient",         "qUCCSD",
    "trim",                       "projection_after_variation",
    "variation_after_projection", "scf_fci"};

inline std::string to_string(Category c) {
    return std::string(kCategoryNames[static_cast<std::size_t>(c)]);
}

inline Category parse_category(std::string_view s) {
    for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
        if (kCategoryNames[i] == s) {
            return static_cast<Category>(i);
        }
    }
    throw ValidationError("unknown repository category '" + std::string(s) + "'");
}

struct ResultRecord {
    Category category = Category::HardwareEfficient;
    std::string molecule;
    std::string label;
    double r = 0.0;
    nlohmann::json payload;

    /// Location below the repository root.
    [[nodiscard]] std::filesystem::path relative_path() const {
        return std::filesystem::path(to_string(category)) / molecule /
               (label + "_R" + format_geometry(r) + ".json");
    }

    friend bool operator==(const ResultRecord &a, const ResultRecord &b) {
        return a.category == b.category && a.molecule == b.molecule && a.label == b.label &&
               a.r == b.r && a.payload == b.payload;
    }
};

// ---------------------------------------------------------------------------
// Record construction

inline nlohmann::json to_json(const Observables &o) {
    return {{"E", o.energy}, {"N", o.number}, {"Sz", o.spin_z}, {"S2", o.spin_squared}};
}

inline nlohmann::json to_json(const CostReport &c) {
    return {{"n_q", c.n_q},
            {"n_l", c.n_l},
            {"depth", c.depth},
            {"depth_with_prep", c.depth_with_prep},
            {"sequential_depth", c.sequential_depth},
            {"n_theta", c.n_theta},
            {"n_g1", c.n_g1},
            {"n_g2", c.n_g2},
            {"n_p", c.n_p}};
}

inline nlohmann::json ansatz_json(const AnsatzSpec &a, int n_l) {
    nlohmann::json j = {{"family", to_string(a.family)}, {"n_l", n_l}};
    if (a.family == AnsatzFamily::QUCCSD) {
        j["flavor"] = to_string(a.flavor);
        j["formula"] = to_string(a.formula);
        j["ordering"] = to_string(a.ordering);
        j["tie_layers"] = a.tie_layers;
    }
    return j;
}

/// Category of a scan in the given quantization.
inline Category scan_category(const ScanConfig &cfg, bool first_quantization) {
    if (!first_quantization) {
        return cfg.ansatz.family == AnsatzFamily::QUCCSD ? Category::QUCCSD
                                                         : Category::HardwareEfficient;
    }
    if (cfg.scheme == FirstQuantScheme::Trim) {
        return Category::Trim;
    }
    return cfg.projection == Projection::VAP ? Category::VariationAfterProjection
                                             : Category::ProjectionAfterVariation;
}

/// File-name label of one curve, e.g. "ry_linear_nl3" or "quccsd_restricted_suzuki_doubles_singles_nl2".
inline std::string scan_label(const ScanConfig &cfg, int n_l, bool first_quantization) {
    std::string s = to_string(cfg.ansatz.family);
    if (cfg.ansatz.family == AnsatzFamily::QUCCSD) {
        s += "_" + to_string(cfg.ansatz.flavor) + "_" + to_string(cfg.ansatz.formula) + "_" +
             to_string(cfg.ansatz.ordering);
        if (cfg.ansatz.tie_layers) {
            s += "_tied";
        }
    }
    s += "_nl" + std::to_string(n_l);
    const EncodingOptions def;
    const auto &e = cfg.encoding;
    if (!first_quantization && (e.mapping != def.mapping || e.two_qubit_reduction != def.two_qubit_reduction ||
                                e.taper != def.taper)) {
        s += "_" + to_string(e.mapping);
        if (e.two_qubit_reduction) {
            s += "_reduced";
        }
        if (e.taper) {
            s += "_tapered";
        }
    }
    return s;
}

inline std::vector<ResultRecord> scan_records(const ScanConfig &cfg, const ScanCurve &curve,
                                              bool first_quantization) {
    std::vector<ResultRecord> out;
    const Category cat = scan_category(cfg, first_quantization);
    for (const auto &p : curve.points) {
        const auto &res = p.result;
        nlohmann::json j;
        j["schema"] = kResultSchema;
        j["category"] = to_string(cat);
        j["molecule"] = cfg.molecule;
        j["R"] = p.r;
        j["encoding"] = {{"register", p.encoding}, {"n_q", p.cost.n_q}};
        if (first_quantization) {
            j["encoding"]["scheme"] = cfg.scheme == FirstQuantScheme::Trim ? "trim" : "pad";
            if (cfg.scheme == FirstQuantScheme::Pad) {
                j["encoding"]["projection"] = cfg.projection == Projection::VAP ? "vap" : "pav";
                j["encoding"]["lambda"] = cfg.lambda;
                j["physical_norm"] = res.physical_norm;
            }
        } else {
            j["encoding"]["mapping"] = to_string(cfg.encoding.mapping);
            j["encoding"]["two_qubit_reduction"] = cfg.encoding.two_qubit_reduction;
            j["encoding"]["taper"] = cfg.encoding.taper;
            j["encoding"]["taper_search"] = cfg.aux_search ? "all" : "hamiltonian";
            j["aux_path"] = to_string(res.metrics.path);
        }
        j["ansatz"] = ansatz_json(cfg.ansatz, p.n_l);
        j["n_l"] = p.n_l;
        j["seed"] = cfg.seed;
        j["restarts"] = cfg.restarts;
        j["restarts_used"] = res.restarts_used;
        j["best_restart"] = res.best_restart;
        j["warm_start"] = to_string(cfg.warm_start);
        j["optimizer"] = {{"method", to_string(cfg.optimizer.method)},
                          {"budget", cfg.optimizer.budget},
                          {"grad_tol", cfg.optimizer.grad_tol}};
        j["E_vqe"] = res.energy;
        j["E_fci"] = res.metrics.exact.energy;
        j["vqe"] = to_json(res.metrics.value);
        j["fci"] = to_json(res.metrics.exact);
        j["deltas"] = to_json(res.metrics.delta);
        j["theta"] = res.theta;
        nlohmann::json trace = nlohmann::json::array();
        for (const auto &t : res.trace) {
            trace.push_back({t.value, t.grad_norm});
        }
        j["trace"] = std::move(trace);
        j["converged"] = res.converged;
        j["evaluations"] = res.evaluations;
        j["cost_report"] = to_json(p.cost);
        const auto cusps = curve.cusps.find(p.n_l);
        j["curve_cusps"] = cusps == curve.cusps.end() ? std::vector<double>{} : cusps->second;
        out.push_back({cat, cfg.molecule, scan_label(cfg, p.n_l, first_quantization), p.r, std::move(j)});
    }
    return out;
}

inline std::vector<ResultRecord> reference_records(const ScanConfig &cfg,
                                                   const std::vector<ReferencePoint> &refs) {
    std::vector<ResultRecord> out;
    for (const auto &p : refs) {
        nlohmann::json j;
        j["schema"] = kResultSchema;
        j["category"] = to_string(Category::ScfFci);
        j["molecule"] = cfg.molecule;
        j["R"] = p.r;
        j["E_hf"] = p.e_hf;
        j["E_fci"] = p.fci.energy;
        j["fci"] = to_json(p.fci);
        j["n_determinants"] = p.n_determinants;
        j["degeneracy"] = p.degeneracy;
        j["active_space"] = {{"n_orbitals", p.n_orbitals}, {"n_alpha", p.n_alpha}, {"n_beta", p.n_beta}};
        out.push_back({Category::ScfFci, cfg.molecule, "fci", p.r, std::move(j)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Writing and reading

namespace detail {
inline void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

inline std::string csv_number(const nlohmann::json &j) {
    return j.is_number() ? detail::format_double(j.get<double>()) : std::string{};
}

inline std::string curve_csv(const std::vector<const ResultRecord *> &recs) {
    const bool reference = recs.front()->category == Category::ScfFci;
    std::ostringstream out;
    if (reference) {
        out << "R,E_hf,E_fci,N,Sz,S2\n";
    } else {
        out << "R,E_vqe,E_fci,dE,dN,dSz,dS2\n";
    }
    for (const auto *r : recs) {
        const auto &j = r->payload;
        out << detail::format_double(r->r);
        if (reference) {
            out << "," << csv_number(j.value("E_hf", nlohmann::json{})) << ","
                << csv_number(j.value("E_fci", nlohmann::json{})) << "," << csv_number(j["fci"]["N"]) << ","
                << csv_number(j["fci"]["Sz"]) << "," << csv_number(j["fci"]["S2"]);
        } else {
            out << "," << csv_number(j.value("E_vqe", nlohmann::json{})) << ","
                << csv_number(j.value("E_fci", nlohmann::json{}));
            for (const auto *k : {"E", "N", "Sz", "S2"}) {
                out << "," << csv_number(j["deltas"][k]);
            }
        }
        out << "\n";
    }
    return out.str();
}
} // namespace detail

/// Creates the six category folders; existing files with other names are left alone.
inline void create_repository(const std::filesystem::path &root) {
    std::error_code ec;
    for (auto name : kCategoryNames) {
        std::filesystem::create_directories(root / name, ec);
        if (ec) {
            throw IoError("cannot create " + (root / name).string() + ": " + ec.message());
        }
    }
}

/**
 * Writes every record and one CSV per curve; returns the written paths in
 * sorted order. Identical inputs produce identical files.
 */
inline std::vector<std::filesystem::path> write_repository(const std::vector<ResultRecord> &records,
                                                           const std::filesystem::path &root) {
    create_repository(root);
    std::map<std::filesystem::path, const ResultRecord *> by_path;
    std::map<std::filesystem::path, std::vector<const ResultRecord *>> curves;
    for (const auto &r : records) {
        if (r.molecule.empty() || r.label.empty()) {
            throw ValidationError("record needs a molecule and a label");
        }
        if (!by_path.emplace(r.relative_path(), &r).second) {
            throw ValidationError("two records map to " + r.relative_path().string());
        }
        curves[std::filesystem::path(to_string(r.category)) / r.molecule / (r.label + ".csv")].push_back(&r);
    }
    std::vector<std::filesystem::path> written;
    for (const auto &[rel, rec] : by_path) {
        const auto path = root / rel;
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
        }
        detail::write_text(path, rec->payload.dump(2) + "\n");
        written.push_back(path);
    }
    for (auto &[rel, recs] : curves) {
        std::stable_sort(recs.begin(), recs.end(),
                         [](const ResultRecord *a, const ResultRecord *b) { return a->r < b->r; });
        detail::write_text(root / rel, detail::curve_csv(recs));
        written.push_back(root / rel);
    }
    std::sort(written.begin(), written.end());
    return written;
}

/// Wall times next to the curve CSVs; not part of the records.
inline void write_timings(const ScanConfig &cfg, const ScanCurve &curve, bool first_quantization,
                          const std::filesystem::path &root) {
    const Category cat = scan_category(cfg, first_quantization);
    std::map<std::string, std::ostringstream> files;
    for (const auto &p : curve.points) {
        auto &out = files[scan_label(cfg, p.n_l, first_quantization)];
        if (out.tellp() == 0) {
            out << "R,wall_seconds\n";
        }
        out << detail::format_double(p.r) << "," << detail::format_double(p.wall_seconds) << "\n";
    }
    for (auto &[label, out] : files) {
        const auto dir = root / to_string(cat) / cfg.molecule;
        std::filesystem::create_directories(dir);
        detail::write_text(dir / (label + ".timings.csv"), out.str());
    }
}

inline ResultRecord read_record(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw IoError("malformed record " + path.string() + ": " + e.what());
    }
    if (j.value("schema", "") != kResultSchema) {
        throw ValidationError("unsupported record schema in " + path.string());
    }
    ResultRecord r;
    r.category = parse_category(j.at("category").get<std::string>());
    r.molecule = j.at("molecule").get<std::string>();
    r.r = j.at("R").get<double>();
    const std::string stem = path.stem().string();
    const auto cut = stem.rfind("_R");
    if (cut == std::string::npos) {
        throw ValidationError("record file name lacks a geometry: " + path.string());
    }
    r.label = stem.substr(0, cut);
    r.payload = std::move(j);
    return r;
}

/// All records below `root`, ordered by path.
inline std::vector<ResultRecord> read_repository(const std::filesystem::path &root) {
    if (!std::filesystem::is_directory(root)) {
        throw IoError("repository root not found: " + root.string());
    }
    std::vector<std::filesystem::path> files;
    for (auto name : kCategoryNames) {
        const auto dir = root / name;
        if (!std::filesystem::is_directory(dir)) {
            continue;
        }
        for (const auto &e : std::filesystem::recursive_directory_iterator(dir)) {
            if (e.is_regular_file() && e.path().extension() == ".json") {
                files.push_back(e.path());
            }
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<ResultRecord> out;
    for (const auto &f : files) {
        out.push_back(read_record(f));
    }
    return out;
}

} // namespace vqelab
