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
 * First-quantization encoding: singlet CSFs from the determinant-basis S^2
 * matrix, the projected Hamiltonian, and its reduction to a qubit register
 * by trimming (drop the least important CSFs) or padding (unphysical
 * states at energy lambda plus a projector). Basis state |mu> of the
 * register is CSF mu.
 */
#pragma once

#include "error.hpp"
#include "fci.hpp"
#include "pauli.hpp"
#include "statevector.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

namespace vqelab {

struct CsfBasis {
    Eigen::MatrixXd coefficients;  ///< n_c x K, column mu is CSF mu over determinants
    Eigen::VectorXd spin_eigenvalues;
    [[nodiscard]] Eigen::Index size() const noexcept { return coefficients.cols(); }
};

/// Qubits needed for a K-dimensional space, ceil(log2 K).
inline std::size_t qubits_for(Eigen::Index k) {
    if (k < 1) {
        throw ValidationError("empty space");
    }
    return static_cast<std::size_t>(std::bit_width(static_cast<std::uint64_t>(k - 1)));
}

/**
 * Orthonormal basis of the S^2 = 0 eigenspace. The eigensolver's basis is
 * replaced by a QR with column pivoting of the spectral projector, then
 * sorted by <phi|H|phi> ascending with a lexicographic tiebreak, and each
 * column's largest-magnitude entry is made positive.
 */
inline CsfBasis build_csf_basis(const CiMatrices &mats, double tol = 1e-8) {
    const Eigen::MatrixXd s2(mats.s2);
    const Eigen::MatrixXd h(mats.h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s2);
    if (es.info() != Eigen::Success) {
        throw ConvergenceError("S^2 diagonalization failed");
    }
    std::vector<Eigen::Index> zero;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (std::abs(es.eigenvalues()(i)) <= tol) {
            zero.push_back(i);
        }
    }
    if (zero.empty()) {
        throw ValidationError("sector contains no singlet CSFs");
    }
    const auto k = static_cast<Eigen::Index>(zero.size());
    Eigen::MatrixXd v(s2.rows(), k);
    for (Eigen::Index c = 0; c < k; ++c) {
        v.col(c) = es.eigenvectors().col(zero[static_cast<std::size_t>(c)]);
    }
    const Eigen::MatrixXd proj = v * v.transpose();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(proj);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(s2.rows(), k);
    for (Eigen::Index c = 0; c < k; ++c) {
        Eigen::Index imax = 0;
        q.col(c).cwiseAbs().maxCoeff(&imax);
        if (q(imax, c) < 0) {
            q.col(c) *= -1.0;
        }
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Eigen::VectorXd energy(k);
    for (Eigen::Index c = 0; c < k; ++c) {
        energy(c) = q.col(c).dot(h * q.col(c));
    }
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (std::abs(energy(a) - energy(b)) > 1e-12) {
            return energy(a) < energy(b);
        }
        return std::lexicographical_compare(q.col(a).begin(), q.col(a).end(), q.col(b).begin(),
                                            q.col(b).end());
    });
    CsfBasis basis;
    basis.coefficients.resize(s2.rows(), k);
    basis.spin_eigenvalues.resize(k);
    for (Eigen::Index c = 0; c < k; ++c) {
        const auto &col = q.col(order[static_cast<std::size_t>(c)]);
        basis.coefficients.col(c) = col;
        basis.spin_eigenvalues(c) = col.dot(s2 * col);
    }
    return basis;
}

/// H~_{mu nu} = phi_mu^T H phi_nu.
inline Eigen::MatrixXd project_hamiltonian(const CiMatrices &mats, const CsfBasis &basis) {
    const Eigen::MatrixXd &c = basis.coefficients;
    if (c.rows() != mats.h.rows()) {
        throw DimensionError("CSF basis does not match the determinant space");
    }
    Eigen::MatrixXd ht = c.transpose() * (mats.h * c);
    return 0.5 * (ht + ht.transpose());
}

struct TrimResult {
    Eigen::MatrixXd matrix;
    std::vector<Eigen::Index> kept; ///< ascending CSF indices
    std::size_t n_q = 0;
    double energy = 0.0;           ///< ground energy of the trimmed matrix
    double untrimmed_energy = 0.0;
    double error = 0.0;            ///< energy - untrimmed_energy, never negative
};

inline double lowest_eigenvalue(const Eigen::MatrixXd &m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

/**
 * Keeps the 2^{n_q-1} CSFs with the largest ground-state weights, where
 * n_q = ceil(log2 K). A power-of-two K is returned unchanged.
 */
inline TrimResult trim(const Eigen::MatrixXd &ht) {
    const Eigen::Index k = ht.rows();
    const std::size_t n_q = qubits_for(k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ht);
    TrimResult r;
    r.untrimmed_energy = es.eigenvalues()(0);
    if (k == (Eigen::Index{1} << n_q)) {
        r.matrix = ht;
        r.kept.resize(static_cast<std::size_t>(k));
        std::iota(r.kept.begin(), r.kept.end(), Eigen::Index{0});
        r.n_q = n_q;
        r.energy = r.untrimmed_energy;
        return r;
    }
    const Eigen::Index keep = Eigen::Index{1} << (n_q - 1);
    const Eigen::VectorXd c0 = es.eigenvectors().col(0);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return std::abs(c0(a)) > std::abs(c0(b));
    });
    r.kept.assign(order.begin(), order.begin() + keep);
    std::sort(r.kept.begin(), r.kept.end());
    r.matrix.resize(keep, keep);
    for (Eigen::Index i = 0; i < keep; ++i) {
        for (Eigen::Index j = 0; j < keep; ++j) {
            r.matrix(i, j) = ht(r.kept[static_cast<std::size_t>(i)], r.kept[static_cast<std::size_t>(j)]);
        }
    }
    r.n_q = n_q - 1;
    r.energy = lowest_eigenvalue(r.matrix);
    r.error = r.energy - r.untrimmed_energy;
    return r;
}

inline constexpr double kDefaultPadding = 1e4;

struct PaddedProblem {
    QubitOperator j;
    QubitOperator pi;
    QubitOperator pjp; ///< Pi J Pi
    double lambda = kDefaultPadding;
    Eigen::Index k = 0;
    std::size_t n_q = 0;
    double ground_energy = 0.0; ///< lowest eigenvalue of H~
};

inline Eigen::MatrixXcd embed(const Eigen::MatrixXd &m, std::size_t n_q, double fill) {
    const Eigen::Index dim = Eigen::Index{1} << n_q;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    out.topLeftCorner(m.rows(), m.cols()) = m.cast<cplx>();
    for (Eigen::Index i = m.rows(); i < dim; ++i) {
        out(i, i) = fill;
    }
    return out;
}

/// J = H~ (+) lambda 1 and Pi = 1 (+) 0 on ceil(log2 K) qubits.
inline PaddedProblem pad(const Eigen::MatrixXd &ht, double lambda = kDefaultPadding) {
    if (ht.rows() != ht.cols() || ht.rows() == 0) {
        throw DimensionError("projected Hamiltonian must be square and non-empty");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ht, Eigen::EigenvaluesOnly);
    if (!(lambda > es.eigenvalues().maxCoeff() + 1.0)) {
        throw ValidationError("padding energy lies inside the physical spectrum");
    }
    PaddedProblem p;
    p.lambda = lambda;
    p.k = ht.rows();
    p.n_q = qubits_for(p.k);
    p.ground_energy = es.eigenvalues()(0);
    p.j = from_matrix(embed(ht, p.n_q, lambda), p.n_q, 0.0);
    p.pi = from_matrix(embed(Eigen::MatrixXd::Identity(p.k, p.k), p.n_q, 0.0), p.n_q);
    p.pjp = from_matrix(embed(ht, p.n_q, 0.0), p.n_q, 0.0);
    return p;
}

enum class Projection { VAP, PAV };

inline Projection parse_projection(const std::string &s) {
    if (s == "vap") {
        return Projection::VAP;
    }
    if (s == "pav") {
        return Projection::PAV;
    }
    throw ValidationError("unknown projection scheme '" + s + "'");
}

struct ProjectedValue {
    double objective = 0.0; ///< the optimized quantity
    double energy = 0.0;    ///< <Pi J Pi>/<Pi>
    double physical_norm = 0.0;
};

inline constexpr double kMinPhysicalNorm = 1e-12;

/**
 * VAP optimizes <Pi J Pi>/<Pi>; PAV optimizes <J>. The reported energy is
 * the projected Rayleigh quotient in both cases.
 */
inline ProjectedValue projected_objective(const StateVector &s, const PaddedProblem &p,
                                          Projection mode) {
    ProjectedValue v;
    v.physical_norm = expectation(s, p.pi);
    const double pjp = expectation(s, p.pjp);
    if (v.physical_norm < kMinPhysicalNorm) {
        throw DegenerateProjectionError("state has no physical component");
    }
    v.energy = pjp / v.physical_norm;
    // <J> = <Pi J Pi> + lambda (1 - <Pi>)
    v.objective = mode == Projection::VAP ? v.energy : pjp + p.lambda * (1.0 - v.physical_norm);
    return v;
}

/// Plain-text export: "K n_c" then the n_c x K matrix in column-major order.
inline void write_csf_basis(std::ostream &out, const CsfBasis &b) {
    out << b.coefficients.cols() << " " << b.coefficients.rows() << "\n";
    for (Eigen::Index c = 0; c < b.coefficients.cols(); ++c) {
        for (Eigen::Index r = 0; r < b.coefficients.rows(); ++r) {
            out << detail::format_double(b.coefficients(r, c)) << "\n";
        }
    }
}

} // namespace vqelab
