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
 * FCIDUMP reading and writing, and active-space selection with frozen-core
 * folding into E_0 and h.
 *
 * Body lines are "value i j k l" with 1-based indices: all four nonzero is
 * (ij|kl), k = l = 0 is h_ij, all zero is the constant, and i > 0 with
 * j = k = l = 0 (orbital energies) is ignored.
 */
#pragma once

#include "error.hpp"
#include "fermion.hpp"
#include "pauli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace vqelab {

namespace detail {
inline std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

inline int parse_int(const std::string &s, std::size_t line) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("invalid integer '" + s + "'", line);
    }
    return v;
}

/// Namelist "&FCI KEY=v1,v2, ... &END" (or "/") into key -> values.
inline std::map<std::string, std::vector<std::string>>
parse_namelist(const std::string &text, std::size_t line) {
    std::string t;
    for (char c : text) {
        if (c == '=') {
            t += " = ";
        } else {
            t += c == ',' ? ' ' : c;
        }
    }
    std::istringstream in(t);
    std::map<std::string, std::vector<std::string>> out;
    std::vector<std::string> tokens;
    for (std::string tok; in >> tok;) {
        tokens.push_back(tok);
    }
    std::string key;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string tok = upper(tokens[i]);
        if (tok == "&FCI" || tok == "&END" || tok == "/" || tok == "$END" || tok == "$FCI") {
            continue;
        }
        if (i + 1 < tokens.size() && tokens[i + 1] == "=") {
            key = tok;
            out[key];
            ++i;
            continue;
        }
        if (key.empty()) {
            throw ParseError("value '" + tokens[i] + "' before any key in FCIDUMP header", line);
        }
        out[key].push_back(tokens[i]);
    }
    return out;
}
} // namespace detail

/// Parses FCIDUMP text. ORBSYM labels (1-based) become 0-based XOR irreps.
inline IntegralSet parse_fcidump_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::string header;
    bool closed = false;
    bool opened = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string u = detail::upper(line);
        if (!opened) {
            if (u.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            if (u.find("&FCI") == std::string::npos && u.find("$FCI") == std::string::npos) {
                throw ParseError("FCIDUMP must start with an &FCI namelist", lineno);
            }
            opened = true;
        }
        header += line + "\n";
        const auto trimmed = u.substr(0, u.find_last_not_of(" \t\r") + 1);
        if (u.find("&END") != std::string::npos || u.find("$END") != std::string::npos ||
            (!trimmed.empty() && trimmed.back() == '/')) {
            closed = true;
            break;
        }
    }
    if (!closed) {
        throw ParseError("unterminated FCIDUMP namelist", lineno);
    }
    const auto nl = detail::parse_namelist(header, lineno);
    auto scalar = [&](const std::string &key, std::optional<int> fallback) {
        auto it = nl.find(key);
        if (it == nl.end() || it->second.empty()) {
            if (!fallback) {
                throw ParseError("FCIDUMP header lacks " + key, lineno);
            }
            return *fallback;
        }
        if (it->second.size() != 1) {
            throw ParseError("FCIDUMP key " + key + " expects one value", lineno);
        }
        return detail::parse_int(it->second.front(), lineno);
    };
    const int norb = scalar("NORB", std::nullopt);
    const int nelec = scalar("NELEC", std::nullopt);
    const int ms2 = scalar("MS2", 0);
    if (norb <= 0) {
        throw ParseError("NORB must be positive", lineno);
    }
    if (nelec < 0 || (nelec + ms2) % 2 != 0 || std::abs(ms2) > nelec) {
        throw ParseError("inconsistent NELEC/MS2", lineno);
    }
    const auto m = static_cast<std::size_t>(norb);
    IntegralSet ints = IntegralSet::zeros(m, (nelec + ms2) / 2, (nelec - ms2) / 2);
    if (static_cast<std::size_t>(ints.n_alpha) > m || static_cast<std::size_t>(ints.n_beta) > m) {
        throw ParseError("more electrons than spin orbitals", lineno);
    }
    ints.n_frozen = scalar("NFROZEN", 0);
    ints.target_irrep = scalar("ISYM", 1) - 1;
    if (auto it = nl.find("ORBSYM"); it != nl.end()) {
        if (it->second.size() != m) {
            throw ParseError("ORBSYM needs one label per orbital", lineno);
        }
        for (std::size_t p = 0; p < m; ++p) {
            const int s = detail::parse_int(it->second[p], lineno);
            if (s < 1 || s > 8) {
                throw ParseError("ORBSYM label out of range 1..8", lineno);
            }
            ints.orbital_irreps[p] = s - 1;
        }
    }
    if (ints.target_irrep < 0 || ints.target_irrep > 7) {
        throw ParseError("ISYM out of range 1..8", lineno);
    }
    while (std::getline(in, line)) {
        ++lineno;
        std::string clean = line;
        std::replace(clean.begin(), clean.end(), 'D', 'E');
        std::replace(clean.begin(), clean.end(), 'd', 'e');
        std::istringstream ls(clean);
        std::string value;
        if (!(ls >> value)) {
            continue;
        }
        int idx[4];
        for (int &x : idx) {
            std::string tok;
            if (!(ls >> tok)) {
                throw ParseError("integral line needs a value and four indices", lineno);
            }
            x = detail::parse_int(tok, lineno);
            if (x < 0 || x > norb) {
                throw ParseError("orbital index out of range", lineno);
            }
        }
        if (std::string extra; ls >> extra) {
            throw ParseError("trailing text on integral line", lineno);
        }
        const double v = detail::parse_double(value, lineno);
        const auto i = static_cast<std::size_t>(idx[0]);
        const auto j = static_cast<std::size_t>(idx[1]);
        const auto k = static_cast<std::size_t>(idx[2]);
        const auto l = static_cast<std::size_t>(idx[3]);
        if (i && j && k && l) {
            ints.set_eri(i - 1, j - 1, k - 1, l - 1, v);
        } else if (i && j && !k && !l) {
            ints.h(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1)) = v;
            ints.h(static_cast<Eigen::Index>(j - 1), static_cast<Eigen::Index>(i - 1)) = v;
        } else if (!i && !j && !k && !l) {
            ints.e0 = v;
        } else if (i && !j && !k && !l) {
            continue;
        } else {
            throw ParseError("unsupported index pattern", lineno);
        }
    }
    return ints;
}

inline IntegralSet parse_fcidump(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw IoError("cannot open FCIDUMP '" + path + "'");
    }
    std::stringstream ss;
    ss << f.rdbuf();
    try {
        return parse_fcidump_text(ss.str());
    } catch (const ParseError &e) {
        throw ParseError(path + ": " + e.what(), 0);
    }
}

/// Writes unique nonzero integrals in shortest round-trip form.
inline std::string write_fcidump_text(const IntegralSet &ints) {
    ints.validate();
    const std::size_t m = ints.n_orbitals;
    std::ostringstream out;
    out << " &FCI NORB=" << m << ",NELEC=" << ints.n_alpha + ints.n_beta
        << ",MS2=" << ints.n_alpha - ints.n_beta << ",\n  ORBSYM=";
    for (std::size_t p = 0; p < m; ++p) {
        out << ints.orbital_irreps[p] + 1 << ",";
    }
    out << "\n  ISYM=" << ints.target_irrep + 1 << ",";
    if (ints.n_frozen) {
        out << "\n  NFROZEN=" << ints.n_frozen << ",";
    }
    out << "\n &END\n";
    auto line = [&out](double v, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        out << detail::format_double(v) << " " << i << " " << j << " " << k << " " << l << "\n";
    };
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t r = 0; r <= p; ++r) {
            for (std::size_t q = 0; q < m; ++q) {
                for (std::size_t s = 0; s <= q; ++s) {
                    if (p * m + r < q * m + s) {
                        continue;
                    }
                    const double v = ints.g(p, r, q, s);
                    if (v != 0.0) {
                        line(v, p + 1, r + 1, q + 1, s + 1);
                    }
                }
            }
        }
    }
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = 0; q <= p; ++q) {
            if (ints.one(p, q) != 0.0) {
                line(ints.one(p, q), p + 1, q + 1, 0, 0);
            }
        }
    }
    line(ints.e0, 0, 0, 0, 0);
    return out.str();
}

inline void write_fcidump(const IntegralSet &ints, const std::string &path) {
    std::ofstream f(path);
    if (!f) {
        throw IoError("cannot write FCIDUMP '" + path + "'");
    }
    f << write_fcidump_text(ints);
    if (!f) {
        throw IoError("write failed for '" + path + "'");
    }
}

/**
 * Restricts `full` to the `active` orbitals after freezing the doubly
 * occupied `frozen` ones. Orbitals in neither list are discarded virtuals.
 */
inline IntegralSet select_active_space(const IntegralSet &full, const std::vector<int> &frozen,
                                       const std::vector<int> &active) {
    const auto m_full = static_cast<int>(full.n_orbitals);
    std::vector<int> seen(full.n_orbitals, 0);
    for (const auto *list : {&frozen, &active}) {
        for (int p : *list) {
            if (p < 0 || p >= m_full) {
                throw ValidationError("orbital " + std::to_string(p) + " out of range");
            }
            if (seen[static_cast<std::size_t>(p)]++) {
                throw ValidationError("orbital " + std::to_string(p) + " listed twice");
            }
        }
    }
    if (active.empty()) {
        throw ValidationError("active space is empty");
    }
    const auto nf = static_cast<int>(frozen.size());
    IntegralSet out = IntegralSet::zeros(active.size(), full.n_alpha - nf, full.n_beta - nf);
    if (out.n_alpha < 0 || out.n_beta < 0 || out.n_alpha > static_cast<int>(active.size()) ||
        out.n_beta > static_cast<int>(active.size())) {
        throw ValidationError("electron count does not fit the active space");
    }
    out.n_frozen = full.n_frozen + 2 * nf;
    out.target_irrep = full.target_irrep;
    auto u = [](int p) { return static_cast<std::size_t>(p); };
    double core = full.e0;
    for (int c : frozen) {
        core += 2.0 * full.one(u(c), u(c));
        for (int d : frozen) {
            core += 2.0 * full.g(u(c), u(c), u(d), u(d)) - full.g(u(c), u(d), u(d), u(c));
        }
    }
    out.e0 = core;
    for (std::size_t a = 0; a < active.size(); ++a) {
        out.orbital_irreps[a] = full.orbital_irreps[u(active[a])];
        for (std::size_t b = 0; b < active.size(); ++b) {
            const auto p = u(active[a]);
            const auto q = u(active[b]);
            double v = full.one(p, q);
            for (int c : frozen) {
                v += 2.0 * full.g(p, q, u(c), u(c)) - full.g(p, u(c), u(c), q);
            }
            out.h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
            for (std::size_t c = 0; c < active.size(); ++c) {
                for (std::size_t d = 0; d < active.size(); ++d) {
                    out.eri[out.eri_index(a, b, c, d)] = full.g(p, q, u(active[c]), u(active[d]));
                }
            }
        }
    }
    return out;
}

} // namespace vqelab
