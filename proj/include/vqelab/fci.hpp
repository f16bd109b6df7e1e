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
 * Determinant-basis full CI: enumeration within a symmetry sector,
 * Slater-Condon matrices of H and S^2, and the ground state.
 *
 * A determinant is the spin-orbital bitmask alpha | beta << M, i.e. the
 * same mode order as FermionOperator, so phases agree with the
 * Jordan-Wigner Fock basis.
 */
#pragma once

#include "error.hpp"
#include "fermion.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace vqelab {

struct Determinant {
    std::uint64_t alpha = 0;
    std::uint64_t beta = 0;

    [[nodiscard]] std::uint64_t occupation(std::size_t m) const noexcept {
        return alpha | (beta << m);
    }
    friend auto operator<=>(const Determinant &, const Determinant &) = default;
};

struct SectorSpec {
    int n_alpha = 0;
    int n_beta = 0;
    int irrep = 0;

    static SectorSpec of(const IntegralSet &ints) {
        return {ints.n_alpha, ints.n_beta, ints.target_irrep};
    }
};

namespace detail {
/// All m-bit masks with k bits set, ascending.
inline std::vector<std::uint64_t> combinations(std::size_t m, int k) {
    std::vector<std::uint64_t> out;
    if (k < 0 || static_cast<std::size_t>(k) > m) {
        return out;
    }
    if (k == 0) {
        return {0};
    }
    std::uint64_t v = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << m;
    while (v < limit) {
        out.push_back(v);
        const std::uint64_t t = v | (v - 1);
        v = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
    }
    return out;
}

inline int irrep_of(std::uint64_t mask, const std::vector<int> &irreps) {
    int x = 0;
    for (; mask; mask &= mask - 1) {
        x ^= irreps[static_cast<std::size_t>(std::countr_zero(mask))];
    }
    return x;
}

/// Applies one ladder operator to a bitmask; returns the sign or 0.
inline int apply_ladder(std::uint64_t &occ, std::size_t mode, bool creation) {
    const std::uint64_t bit = std::uint64_t{1} << mode;
    if (static_cast<bool>(occ & bit) == creation) {
        return 0;
    }
    const int sign = std::popcount(occ & (bit - 1)) & 1 ? -1 : 1;
    occ ^= bit;
    return sign;
}
} // namespace detail

/// Determinants of the sector, alpha string major, ascending bitmasks.
inline std::vector<Determinant> enumerate_determinants(const IntegralSet &ints,
                                                       const SectorSpec &sector) {
    const std::size_t m = ints.n_orbitals;
    if (ints.orbital_irreps.size() != m) {
        throw DimensionError("one irrep label per orbital required");
    }
    for (int x : ints.orbital_irreps) {
        if (x < 0 || x > 7) {
            throw ValidationError("irrep label " + std::to_string(x) + " outside 0..7");
        }
    }
    if (sector.irrep < 0 || sector.irrep > 7) {
        throw ValidationError("unknown target irrep " + std::to_string(sector.irrep));
    }
    if (sector.n_alpha < 0 || sector.n_beta < 0 || static_cast<std::size_t>(sector.n_alpha) > m ||
        static_cast<std::size_t>(sector.n_beta) > m) {
        throw ValidationError("sector electron counts do not fit the orbitals");
    }
    if (m > 31) {
        throw ResourceError("at most 31 orbitals supported");
    }
    const auto as = detail::combinations(m, sector.n_alpha);
    const auto bs = detail::combinations(m, sector.n_beta);
    std::vector<Determinant> out;
    for (auto a : as) {
        const int ia = detail::irrep_of(a, ints.orbital_irreps);
        for (auto b : bs) {
            if ((ia ^ detail::irrep_of(b, ints.orbital_irreps)) == sector.irrep) {
                out.push_back({a, b});
            }
        }
    }
    return out;
}

struct CiMatrices {
    Eigen::SparseMatrix<double> h;
    Eigen::SparseMatrix<double> s2;
};

namespace detail {
/// <PQ|RS> over spin orbitals from chemists' (pr|qs).
inline double spin_eri(const IntegralSet &ints, std::size_t P, std::size_t Q, std::size_t R,
                       std::size_t S) {
    const std::size_t m = ints.n_orbitals;
    if ((P >= m) != (R >= m) || (Q >= m) != (S >= m)) {
        return 0.0;
    }
    return ints.g(P % m, R % m, Q % m, S % m);
}

inline double spin_one(const IntegralSet &ints, std::size_t P, std::size_t Q) {
    const std::size_t m = ints.n_orbitals;
    return (P >= m) != (Q >= m) ? 0.0 : ints.one(P % m, Q % m);
}

inline std::vector<std::size_t> bits_of(std::uint64_t v) {
    std::vector<std::size_t> out;
    for (; v; v &= v - 1) {
        out.push_back(static_cast<std::size_t>(std::countr_zero(v)));
    }
    return out;
}

/// <I|H|J> for spin-orbital bitmasks differing by at most a double excitation.
inline double slater_condon(const IntegralSet &ints, std::uint64_t I, std::uint64_t J) {
    const std::uint64_t holes = J & ~I;
    const std::uint64_t parts = I & ~J;
    const int n_exc = std::popcount(holes);
    if (n_exc == 0) {
        const auto occ = bits_of(J);
        double e = ints.e0;
        for (auto p : occ) {
            e += spin_one(ints, p, p);
        }
        for (auto p : occ) {
            for (auto q : occ) {
                e += 0.5 * (spin_eri(ints, p, q, p, q) - spin_eri(ints, p, q, q, p));
            }
        }
        return e;
    }
    if (n_exc == 1) {
        const auto i = static_cast<std::size_t>(std::countr_zero(holes));
        const auto a = static_cast<std::size_t>(std::countr_zero(parts));
        std::uint64_t occ = J;
        int sign = apply_ladder(occ, i, false);
        sign *= apply_ladder(occ, a, true);
        double v = spin_one(ints, a, i);
        for (auto q : bits_of(J & I)) {
            v += spin_eri(ints, a, q, i, q) - spin_eri(ints, a, q, q, i);
        }
        return sign * v;
    }
    if (n_exc == 2) {
        const auto h = bits_of(holes);
        const auto p = bits_of(parts);
        std::uint64_t occ = J;
        int sign = apply_ladder(occ, h[0], false);
        sign *= apply_ladder(occ, h[1], false);
        sign *= apply_ladder(occ, p[1], true);
        sign *= apply_ladder(occ, p[0], true);
        return sign * (spin_eri(ints, p[0], p[1], h[0], h[1]) -
                       spin_eri(ints, p[0], p[1], h[1], h[0]));
    }
    return 0.0;
}
} // namespace detail

/// H and S^2 in the determinant basis (S^2 = S_- S_+ + S_z (S_z + 1)).
inline CiMatrices build_matrices(const std::vector<Determinant> &dets, const IntegralSet &ints) {
    if (dets.empty()) {
        throw ValidationError("empty determinant list");
    }
    const std::size_t m = ints.n_orbitals;
    const auto n = static_cast<Eigen::Index>(dets.size());
    std::unordered_map<std::uint64_t, Eigen::Index> index;
    std::vector<std::uint64_t> occ(dets.size());
    for (std::size_t k = 0; k < dets.size(); ++k) {
        occ[k] = dets[k].occupation(m);
        index.emplace(occ[k], static_cast<Eigen::Index>(k));
    }
    std::vector<Eigen::Triplet<double>> th;
    std::vector<Eigen::Triplet<double>> ts;
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            if (std::popcount(occ[ui] ^ occ[uj]) > 4) {
                continue;
            }
            const double v = detail::slater_condon(ints, occ[ui], occ[uj]);
            if (v != 0.0) {
                th.emplace_back(i, j, v);
            }
        }
        const int na = std::popcount(dets[uj].alpha);
        const int nb = std::popcount(dets[uj].beta);
        const double sz = 0.5 * (na - nb);
        // S_- S_+ = sum_pq a+_{q,b} a_{q,a} a+_{p,a} a_{p,b}
        std::unordered_map<Eigen::Index, double> col;
        col[j] += sz * (sz + 1.0);
        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = 0; q < m; ++q) {
                std::uint64_t o = occ[uj];
                int s = detail::apply_ladder(o, p + m, false);
                s *= s ? detail::apply_ladder(o, p, true) : 0;
                s *= s ? detail::apply_ladder(o, q, false) : 0;
                s *= s ? detail::apply_ladder(o, q + m, true) : 0;
                if (s == 0) {
                    continue;
                }
                auto it = index.find(o);
                if (it == index.end()) {
                    throw ValidationError("determinant list is not closed under S^2");
                }
                col[it->second] += s;
            }
        }
        for (auto [i, v] : col) {
            if (v != 0.0) {
                ts.emplace_back(i, j, v);
            }
        }
    }
    CiMatrices out;
    out.h.resize(n, n);
    out.h.setFromTriplets(th.begin(), th.end());
    out.s2.resize(n, n);
    out.s2.setFromTriplets(ts.begin(), ts.end());
    return out;
}

struct FciOptions {
    Eigen::Index dense_limit = 4096;
    double degeneracy_tol = 1e-9;
    double lanczos_tol = 1e-10;
    int lanczos_max_iter = 400;
    int lanczos_max_restarts = 50;
};

struct FciSolution {
    double energy = 0.0;
    double number = 0.0;
    double spin_z = 0.0;
    double spin_squared = 0.0;
    Eigen::VectorXd vector;
    Eigen::Index degeneracy = 1;
};

namespace detail {
/**
 * Lowest eigenpair of a symmetric sparse matrix orthogonal to `deflate`,
 * by restarted Lanczos with full reorthogonalization.
 */
inline std::pair<double, Eigen::VectorXd>
lanczos_lowest(const Eigen::SparseMatrix<double> &a, const std::vector<Eigen::VectorXd> &deflate,
               const FciOptions &opt) {
    const Eigen::Index n = a.rows();
    auto project = [&](Eigen::VectorXd &v) {
        for (const auto &d : deflate) {
            v -= d.dot(v) * d;
        }
    };
    Eigen::VectorXd start(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        start(i) = 1.0 + 0.1 * std::sin(static_cast<double>(i) + 1.0);
    }
    project(start);
    start.normalize();
    const double scale = std::max(1.0, a.coeffs().abs().maxCoeff());
    for (int restart = 0; restart < opt.lanczos_max_restarts; ++restart) {
        const Eigen::Index kmax =
            std::min<Eigen::Index>(n - static_cast<Eigen::Index>(deflate.size()), opt.lanczos_max_iter);
        Eigen::MatrixXd q(n, kmax);
        Eigen::VectorXd alpha(kmax);
        Eigen::VectorXd beta(kmax);
        q.col(0) = start;
        Eigen::Index k = 0;
        for (; k < kmax; ++k) {
            Eigen::VectorXd w = a * q.col(k);
            project(w);
            alpha(k) = q.col(k).dot(w);
            for (int pass = 0; pass < 2; ++pass) {
                w -= q.leftCols(k + 1) * (q.leftCols(k + 1).transpose() * w);
                project(w);
            }
            beta(k) = w.norm();
            if (k + 1 == kmax || beta(k) < 1e-13 * scale) {
                ++k;
                break;
            }
            q.col(k + 1) = w / beta(k);
        }
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
        for (Eigen::Index i = 0; i < k; ++i) {
            t(i, i) = alpha(i);
            if (i + 1 < k) {
                t(i, i + 1) = t(i + 1, i) = beta(i);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        Eigen::VectorXd x = q.leftCols(k) * es.eigenvectors().col(0);
        project(x);
        x.normalize();
        const double theta = x.dot(a * x);
        Eigen::VectorXd r = a * x - theta * x;
        project(r);
        if (r.norm() <= opt.lanczos_tol * scale) {
            return {theta, x};
        }
        start = x;
    }
    throw ConvergenceError("Lanczos did not converge");
}
} // namespace detail

/**
 * Lowest eigenpair of H. Within a degenerate ground space (energies within
 * degeneracy_tol) the vector with the lowest <S^2> is returned.
 */
inline FciSolution solve_ground(const CiMatrices &mats, const std::vector<Determinant> &dets,
                                int n_frozen = 0, const FciOptions &opt = {}) {
    const Eigen::Index n = mats.h.rows();
    if (n == 0 || mats.h.cols() != n || mats.s2.rows() != n ||
        static_cast<Eigen::Index>(dets.size()) != n) {
        throw DimensionError("CI matrices and determinant list disagree");
    }
    Eigen::MatrixXd ground;
    Eigen::VectorXd energies;
    if (n <= opt.dense_limit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(mats.h));
        if (es.info() != Eigen::Success) {
            throw ConvergenceError("dense eigensolver failed");
        }
        Eigen::Index k = 1;
        while (k < n && es.eigenvalues()(k) - es.eigenvalues()(0) <= opt.degeneracy_tol) {
            ++k;
        }
        ground = es.eigenvectors().leftCols(k);
        energies = es.eigenvalues().head(k);
    } else {
        std::vector<Eigen::VectorXd> found;
        std::vector<double> vals;
        while (static_cast<Eigen::Index>(found.size()) < n) {
            auto [e, v] = detail::lanczos_lowest(mats.h, found, opt);
            if (!vals.empty() && e - vals.front() > opt.degeneracy_tol) {
                break;
            }
            if (!vals.empty() && e < vals.front() - opt.degeneracy_tol) {
                throw ConvergenceError("Lanczos deflation lost the ground state");
            }
            vals.push_back(e);
            found.push_back(v);
        }
        ground.resize(n, static_cast<Eigen::Index>(found.size()));
        energies.resize(static_cast<Eigen::Index>(found.size()));
        for (std::size_t i = 0; i < found.size(); ++i) {
            ground.col(static_cast<Eigen::Index>(i)) = found[i];
            energies(static_cast<Eigen::Index>(i)) = vals[i];
        }
    }
    FciSolution sol;
    sol.degeneracy = ground.cols();
    if (ground.cols() == 1) {
        sol.vector = ground.col(0);
    } else {
        const Eigen::MatrixXd s2sub = ground.transpose() * (mats.s2 * ground);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s2sub + s2sub.transpose()));
        sol.vector = ground * es.eigenvectors().col(0);
        sol.vector.normalize();
    }
    sol.energy = sol.vector.dot(mats.h * sol.vector);
    sol.spin_squared = sol.vector.dot(mats.s2 * sol.vector);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = sol.vector(i) * sol.vector(i);
        const auto &d = dets[static_cast<std::size_t>(i)];
        const int na = std::popcount(d.alpha);
        const int nb = std::popcount(d.beta);
        sol.number += w * (na + nb + n_frozen);
        sol.spin_z += w * 0.5 * (na - nb);
    }
    return sol;
}

struct FciReference {
    std::vector<Determinant> dets;
    CiMatrices matrices;
    FciSolution ground;
};

/// Full CI in the sector of `ints` (or the given one).
inline FciReference fci(const IntegralSet &ints, std::optional<SectorSpec> sector = std::nullopt,
                        const FciOptions &opt = {}) {
    FciReference r;
    r.dets = enumerate_determinants(ints, sector.value_or(SectorSpec::of(ints)));
    if (r.dets.empty()) {
        throw ValidationError("sector contains no determinants");
    }
    r.matrices = build_matrices(r.dets, ints);
    r.ground = solve_ground(r.matrices, r.dets, ints.n_frozen, opt);
    return r;
}

/// Spin-orbital occupation bitmasks of the determinants.
inline std::vector<std::uint64_t> occupations(const std::vector<Determinant> &dets, std::size_t m) {
    std::vector<std::uint64_t> out;
    out.reserve(dets.size());
    for (const auto &d : dets) {
        out.push_back(d.occupation(m));
    }
    return out;
}

} // namespace vqelab
