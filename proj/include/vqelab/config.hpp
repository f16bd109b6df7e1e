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
 * Scan configuration files. One `key = value` pair per line, `#` starts a
 * comment, list values are whitespace separated. The integral source is a
 * path pattern in which `{R}` expands to the bond length with two
 * decimals; relative patterns resolve against the config file's directory.
 *
 *     molecule   = LiH
 *     fcidump    = LiH_R{R}.FCIDUMP
 *     geometries = 0.90 1.20 1.60
 *     frozen     = 0
 *     active     = 1 2 5
 *     ansatz     = ry_linear
 *     layers     = 1-3
 *     restarts   = 20
 */
#pragma once

#include "ansatz.hpp"
#include "encoding.hpp"
#include "error.hpp"
#include "fermion.hpp"
#include "first_quant.hpp"
#include "optimize.hpp"
#include "vqe.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace vqelab {

enum class WarmStart { None, PrevGeometry, PrevLayer };

inline WarmStart parse_warm_start(const std::string &s) {
    if (s == "none") {
        return WarmStart::None;
    }
    if (s == "prev_geometry") {
        return WarmStart::PrevGeometry;
    }
    if (s == "prev_layer") {
        return WarmStart::PrevLayer;
    }
    throw ValidationError("unknown warm start '" + s + "'");
}

inline std::string to_string(WarmStart w) {
    switch (w) {
    case WarmStart::None:
        return "none";
    case WarmStart::PrevGeometry:
        return "prev_geometry";
    case WarmStart::PrevLayer:
        return "prev_layer";
    }
    return "none";
}

/// Bond length as used in file names and record paths.
inline std::string format_geometry(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", r);
    return buf;
}

struct ScanConfig {
    std::string molecule;
    std::string fcidump;                 ///< pattern containing {R}
    std::filesystem::path base_dir;      ///< for relative patterns
    std::vector<double> geometries;
    std::vector<int> frozen;
    std::vector<int> active;             ///< empty: every non-frozen orbital
    EncodingOptions encoding;
    bool aux_search = true;              ///< tapering generators must commute with N, S_z, S^2
    AnsatzSpec ansatz;
    std::vector<int> layers{1};
    int restarts = 1;
    std::uint64_t seed = 0;
    WarmStart warm_start = WarmStart::None;
    OptimizerOptions optimizer;
    AuxPath aux_path = AuxPath::Tapered;
    FirstQuantScheme scheme = FirstQuantScheme::Pad;
    Projection projection = Projection::VAP;
    double lambda = kDefaultPadding;
    double cusp_threshold = 5.0;

    /// Integral file for geometry `r`.
    [[nodiscard]] std::filesystem::path fcidump_path(double r) const {
        std::string p = fcidump;
        const auto at = p.find("{R}");
        if (at != std::string::npos) {
            p.replace(at, 3, format_geometry(r));
        }
        std::filesystem::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    }

    void validate() const {
        if (molecule.empty()) {
            throw ValidationError("config: molecule is required");
        }
        if (fcidump.empty()) {
            throw ValidationError("config: fcidump is required");
        }
        if (geometries.empty()) {
            throw ValidationError("config: at least one geometry is required");
        }
        for (std::size_t i = 1; i < geometries.size(); ++i) {
            if (!(geometries[i] > geometries[i - 1])) {
                throw ValidationError("config: geometries must be strictly increasing");
            }
        }
        if (layers.empty()) {
            throw ValidationError("config: at least one layer count is required");
        }
        for (int l : layers) {
            AnsatzSpec s = ansatz;
            s.n_l = l;
            s.validate();
        }
        if (restarts < 1) {
            throw ValidationError("config: restarts must be positive");
        }
        if (optimizer.budget < 1) {
            throw ValidationError("config: budget must be positive");
        }
        if (encoding.two_qubit_reduction && encoding.mapping != Mapping::Parity) {
            throw ValidationError("config: two-qubit reduction requires the parity mapping");
        }
    }
};

namespace detail {
inline std::string trim_ws(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> words(const std::string &s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) {
        out.push_back(w);
    }
    return out;
}

inline double config_double(const std::string &s, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) {
            return v;
        }
    } catch (const std::exception &) {
    }
    throw ParseError("expected a number, got '" + s + "'", line);
}

inline long long config_int(const std::string &s, std::size_t line) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used == s.size()) {
            return v;
        }
    } catch (const std::exception &) {
    }
    throw ParseError("expected an integer, got '" + s + "'", line);
}

inline bool config_bool(const std::string &s, std::size_t line) {
    if (s == "true" || s == "yes" || s == "1") {
        return true;
    }
    if (s == "false" || s == "no" || s == "0") {
        return false;
    }
    throw ParseError("expected true or false, got '" + s + "'", line);
}

/// "3", "1-4" or "1 2 4".
inline std::vector<int> config_layers(const std::string &s, std::size_t line) {
    std::vector<int> out;
    for (const auto &w : words(s)) {
        const auto dash = w.find('-');
        if (dash != std::string::npos && dash > 0) {
            const auto lo = config_int(w.substr(0, dash), line);
            const auto hi = config_int(w.substr(dash + 1), line);
            if (hi < lo) {
                throw ParseError("empty layer range '" + w + "'", line);
            }
            for (auto l = lo; l <= hi; ++l) {
                out.push_back(static_cast<int>(l));
            }
        } else {
            out.push_back(static_cast<int>(config_int(w, line)));
        }
    }
    return out;
}

/// Rethrows enum-parser failures with the offending line.
template <class F> auto config_enum(F parse, const std::string &s, std::size_t line) {
    try {
        return parse(s);
    } catch (const ParseError &) {
        throw;
    } catch (const ValidationError &e) {
        throw ParseError(e.what(), line);
    }
}
} // namespace detail

/// Parses configuration text; unknown or repeated keys are errors.
inline ScanConfig parse_scan_config(const std::string &text, const std::filesystem::path &base_dir = {}) {
    ScanConfig c;
    c.base_dir = base_dir;
    std::istringstream in(text);
    std::map<std::string, std::size_t> seen;
    std::size_t line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) {
            raw.resize(hash);
        }
        const std::string line = detail::trim_ws(raw);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected 'key = value'", line_no);
        }
        const std::string key = detail::trim_ws(line.substr(0, eq));
        const std::string value = detail::trim_ws(line.substr(eq + 1));
        if (!seen.emplace(key, line_no).second) {
            throw ParseError("duplicate key '" + key + "'", line_no);
        }
        const auto n = line_no;
        auto ints = [&] {
            std::vector<int> out;
            for (const auto &w : detail::words(value)) {
                out.push_back(static_cast<int>(detail::config_int(w, n)));
            }
            return out;
        };
        if (key == "molecule") {
            c.molecule = value;
        } else if (key == "fcidump") {
            c.fcidump = value;
        } else if (key == "geometries") {
            for (const auto &w : detail::words(value)) {
                c.geometries.push_back(detail::config_double(w, n));
            }
        } else if (key == "frozen") {
            c.frozen = ints();
        } else if (key == "active") {
            c.active = ints();
        } else if (key == "mapping") {
            c.encoding.mapping = detail::config_enum(parse_mapping, value, n);
        } else if (key == "reduction") {
            c.encoding.two_qubit_reduction = detail::config_bool(value, n);
        } else if (key == "taper") {
            c.encoding.taper = detail::config_bool(value, n);
        } else if (key == "taper_search") {
            if (value != "all" && value != "hamiltonian") {
                throw ParseError("taper_search must be 'all' or 'hamiltonian'", n);
            }
            c.aux_search = value == "all";
        } else if (key == "ansatz") {
            c.ansatz.family = detail::config_enum(parse_family, value, n);
        } else if (key == "flavor") {
            c.ansatz.flavor = detail::config_enum(parse_flavor, value, n);
        } else if (key == "formula") {
            c.ansatz.formula = detail::config_enum(parse_product_formula, value, n);
        } else if (key == "ordering") {
            c.ansatz.ordering = detail::config_enum(parse_order, value, n);
        } else if (key == "tie_layers") {
            c.ansatz.tie_layers = detail::config_bool(value, n);
        } else if (key == "layers") {
            c.layers = detail::config_layers(value, n);
        } else if (key == "restarts") {
            c.restarts = static_cast<int>(detail::config_int(value, n));
        } else if (key == "seed") {
            const auto s = detail::config_int(value, n);
            if (s < 0) {
                throw ParseError("seed must be non-negative", n);
            }
            c.seed = static_cast<std::uint64_t>(s);
        } else if (key == "warm_start") {
            c.warm_start = detail::config_enum(parse_warm_start, value, n);
        } else if (key == "optimizer") {
            c.optimizer.method = detail::config_enum(parse_optimizer, value, n);
        } else if (key == "budget") {
            c.optimizer.budget = static_cast<int>(detail::config_int(value, n));
        } else if (key == "grad_tol") {
            c.optimizer.grad_tol = detail::config_double(value, n);
        } else if (key == "aux_path") {
            c.aux_path = detail::config_enum(parse_aux_path, value, n);
        } else if (key == "scheme") {
            c.scheme = detail::config_enum(parse_scheme, value, n);
        } else if (key == "projection") {
            c.projection = detail::config_enum(parse_projection, value, n);
        } else if (key == "lambda") {
            c.lambda = detail::config_double(value, n);
        } else if (key == "cusp_threshold") {
            c.cusp_threshold = detail::config_double(value, n);
        } else {
            throw ParseError("unknown key '" + key + "'", n);
        }
    }
    c.validate();
    return c;
}

inline ScanConfig load_scan_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scan_config(buf.str(), path.parent_path());
}

} // namespace vqelab
