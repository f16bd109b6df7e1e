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
#pragma once

#include <vqelab/fcidump.hpp>
#include <vqelab/fermion.hpp>
#include <vqelab/pauli.hpp>

#include <Eigen/Dense>
#include <random>
#include <string>

namespace vqelab::testing {

using Mat = Eigen::MatrixXcd;

// Kronecker-product construction, independent of the symplectic kernels.
inline Mat single_qubit(char c) {
    Mat m(2, 2);
    switch (c) {
    case 'X':
        m << 0, 1, 1, 0;
        break;
    case 'Y':
        m << 0, cplx(0, -1), cplx(0, 1), 0;
        break;
    case 'Z':
        m << 1, 0, 0, -1;
        break;
    default:
        m << 1, 0, 0, 1;
    }
    return m;
}

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Qubit 0 is the least-significant bit, so it is the rightmost factor.
inline Mat dense_string(const std::string &s) {
    Mat m = Mat::Identity(1, 1);
    for (char c : s) {
        m = kron(single_qubit(c), m);
    }
    return m;
}

inline Mat dense_operator(const QubitOperator &op) {
    const auto dim = Eigen::Index{1} << op.num_qubits();
    Mat m = Mat::Zero(dim, dim);
    for (const auto &[s, c] : op.terms()) {
        m += c * dense_string(s.str());
    }
    return m;
}

inline std::string random_string(std::size_t n, std::mt19937_64 &rng) {
    static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    std::string s(n, 'I');
    for (auto &c : s) {
        c = kLetters[rng() % 4];
    }
    return s;
}

inline QubitOperator random_hermitian(std::size_t n, std::size_t terms,
                                      std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    QubitOperator op(n);
    for (std::size_t k = 0; k < terms; ++k) {
        op.add_term(u(rng), PauliString::parse(random_string(n, rng)));
    }
    return op.simplify();
}

inline Mat random_hermitian_matrix(Eigen::Index dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Mat a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            a(i, j) = cplx(g(rng), g(rng));
        }
    }
    return 0.5 * (a + a.adjoint());
}

inline Eigen::VectorXd eigenvalues(const Mat &m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

/// Random integrals with the full 8-fold symmetry of real orbitals.
inline IntegralSet random_integrals(std::size_t m, int na, int nb,
                                    std::mt19937_64 &rng, double scale = 0.3) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    IntegralSet ints = IntegralSet::zeros(m, na, nb);
    ints.e0 = u(rng);
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = 0; q <= p; ++q) {
            const double v = (p == q) ? -1.0 - static_cast<double>(m - p) * 0.3 + 0.2 * u(rng)
                                      : 0.2 * u(rng);
            ints.h(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = v;
            ints.h(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p)) = v;
        }
    }
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t r = 0; r <= p; ++r) {
            for (std::size_t q = 0; q < m; ++q) {
                for (std::size_t s = 0; s <= q; ++s) {
                    if (p * m + r < q * m + s) {
                        continue;
                    }
                    const bool diag = (p == r && q == s);
                    ints.set_eri(p, r, q, s, diag ? 0.5 + 0.1 * u(rng) : scale * 0.3 * u(rng));
                }
            }
        }
    }
    return ints;
}

/// Zeroes integrals forbidden by an XOR-product point group.
inline void impose_point_group(IntegralSet &ints, const std::vector<int> &irreps) {
    const std::size_t m = ints.n_orbitals;
    ints.orbital_irreps = irreps;
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = 0; q < m; ++q) {
            if (irreps[p] != irreps[q]) {
                ints.h(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = 0.0;
            }
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t s = 0; s < m; ++s) {
                    if ((irreps[p] ^ irreps[q] ^ irreps[r] ^ irreps[s]) != 0) {
                        ints.eri[ints.eri_index(p, r, q, s)] = 0.0;
                    }
                }
            }
        }
    }
}

/// Dense restriction onto computational basis states selected by `keep`.
template <typename Pred> std::vector<Eigen::Index> basis_where(std::size_t n, Pred keep) {
    std::vector<Eigen::Index> idx;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
        if (keep(b)) {
            idx.push_back(static_cast<Eigen::Index>(b));
        }
    }
    return idx;
}

/// Projector-free sector restriction: keeps basis states of 2m spin-orbital
/// modes (JW ordering) with the requested alpha and beta counts.
inline std::vector<Eigen::Index> sector_indices(std::size_t m, int na, int nb) {
    std::vector<Eigen::Index> idx;
    const std::uint64_t amask = (std::uint64_t{1} << m) - 1;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << (2 * m)); ++b) {
        if (std::popcount(b & amask) == na && std::popcount(b >> m) == nb) {
            idx.push_back(static_cast<Eigen::Index>(b));
        }
    }
    return idx;
}

inline Mat restrict_to(const Mat &m, const std::vector<Eigen::Index> &idx) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    Mat out(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            out(i, j) = m(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        }
    }
    return out;
}

inline std::string fixture(const std::string &rel) {
    return std::string(VQELAB_FIXTURES) + "/" + rel;
}

/// LiH active space (frozen 1s, three sigma orbitals) at bond length `r`.
inline IntegralSet lih(const std::string &r = "1.60") {
    return select_active_space(parse_fcidump(fixture("lih/LiH_R" + r + ".FCIDUMP")), {0}, {1, 2, 5});
}

/// H2O active space (frozen O 1s and 2s, five valence orbitals).
inline IntegralSet h2o(const std::string &r = "1.10") {
    return select_active_space(parse_fcidump(fixture("h2o/H2O_R" + r + ".FCIDUMP")), {0, 1},
                               {2, 3, 4, 5, 6});
}

/// Lowest eigenvalue of the Jordan-Wigner Hamiltonian restricted to the
/// (n_alpha, n_beta) sector, built from dense Pauli strings.
inline double dense_sector_ground(const IntegralSet &ints) {
    const Mat h = dense_operator(map_to_qubits(build_molecular_hamiltonian(ints), Mapping::JordanWigner));
    return eigenvalues(restrict_to(h, sector_indices(ints.n_orbitals, ints.n_alpha, ints.n_beta)))(0);
}

} // namespace vqelab::testing
