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
#include "support.hpp"

#include "catch.hpp"
#include <vqelab/fermion.hpp>

using namespace vqelab;
using namespace vqelab::testing;

namespace {

double max_diff(const Mat &a, const Mat &b) { return (a - b).cwiseAbs().maxCoeff(); }

/// State prepared by applying creators right-to-left to the vacuum.
Eigen::VectorXcd prepare(std::size_t modes, const FermionOperator &creators) {
    Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(Eigen::Index{1} << modes);
    vac(0) = 1.0;
    return to_fock_matrix(creators) * vac;
}

double expect(const FermionOperator &op, const Eigen::VectorXcd &v) {
    return (v.adjoint() * to_fock_matrix(op) * v)(0, 0).real() / v.squaredNorm();
}

FermionOperator word(std::size_t modes, LadderSequence ops, cplx c = 1.0) {
    FermionOperator f(modes);
    f.add_term(c, std::move(ops));
    return f;
}

/// Basis permutation of the parity encoding: occupation b sits at parity(b).
Mat parity_permuted(const Mat &fock, std::size_t n) {
    const auto dim = fock.rows();
    Mat out = Mat::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            out(static_cast<Eigen::Index>(occupation_to_parity(static_cast<std::uint64_t>(i), n)),
                static_cast<Eigen::Index>(occupation_to_parity(static_cast<std::uint64_t>(j), n))) =
                fock(i, j);
        }
    }
    return out;
}

} // namespace

TEST_CASE("Normal ordering and anticommutation", "[fermion]") {
    const std::size_t n = 3;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            auto anti = word(n, {des(p), cre(q)}) + word(n, {cre(q), des(p)});
            const Mat m = to_fock_matrix(anti);
            const Mat expect_m =
                (p == q ? 1.0 : 0.0) * Mat::Identity(m.rows(), m.cols());
            CHECK(max_diff(m, expect_m) < 1e-15);
            CHECK(max_diff(to_fock_matrix(anti.normal_order()), expect_m) < 1e-15);
            const auto cc = word(n, {cre(p), cre(q)}) + word(n, {cre(q), cre(p)});
            CHECK(cc.normal_order().size() == 0);
        }
    }
    const auto f = word(4, {des(0), cre(2), des(3), cre(0)}, cplx(0.5, 0.25));
    CHECK(max_diff(to_fock_matrix(f.normal_order()), to_fock_matrix(f)) < 1e-15);
    CHECK(max_diff(to_fock_matrix(f.adjoint()), to_fock_matrix(f).adjoint()) < 1e-15);
    const auto ordered = f.normal_order();
    for (const auto &[ops, c] : ordered.terms()) {
        bool seen_des = false;
        for (const auto &op : ops) {
            if (!op.creation) {
                seen_des = true;
            }
            CHECK_FALSE((op.creation && seen_des));
        }
    }
}

TEST_CASE("Molecular Hamiltonian for a single orbital", "[fermion]") {
    IntegralSet ints = IntegralSet::zeros(1, 1, 1);
    ints.h(0, 0) = -1.0;
    const auto h = build_molecular_hamiltonian(ints);
    const auto expected = word(2, {cre(0), des(0)}, -1.0) + word(2, {cre(1), des(1)}, -1.0);
    CHECK(max_diff(to_fock_matrix(h), to_fock_matrix(expected)) < 1e-15);
    CHECK(h.size() == 2);
}

TEST_CASE("Integral validation", "[fermion]") {
    std::mt19937_64 rng(1);
    auto ints = random_integrals(2, 1, 1, rng);
    CHECK_NOTHROW(ints.validate());
    auto bad_h = ints;
    bad_h.h(0, 1) += 1e-6;
    CHECK_THROWS_AS(build_molecular_hamiltonian(bad_h), ValidationError);
    auto bad_g = ints;
    bad_g.eri[bad_g.eri_index(0, 1, 1, 1)] += 1e-6;
    CHECK_THROWS_AS(build_molecular_hamiltonian(bad_g), ValidationError);
    auto bad_n = ints;
    bad_n.n_alpha = 3;
    CHECK_THROWS_AS(bad_n.validate(), ValidationError);
}

TEST_CASE("Auxiliary operators on simple determinants", "[fermion]") {
    SECTION("closed shell in one orbital") {
        const auto aux = build_auxiliary_operators(1, 4);
        const auto v = prepare(2, word(2, {cre(0), cre(1)}));
        CHECK(expect(aux.number, v) == Catch::Approx(6.0).margin(1e-14));
        CHECK(expect(aux.spin_z, v) == Catch::Approx(0.0).margin(1e-14));
        CHECK(expect(aux.spin_squared, v) == Catch::Approx(0.0).margin(1e-14));
    }
    SECTION("doublet") {
        const auto aux = build_auxiliary_operators(1, 0);
        const auto v = prepare(2, word(2, {cre(0)}));
        CHECK(expect(aux.spin_squared, v) == Catch::Approx(0.75).margin(1e-14));
        CHECK(expect(aux.spin_z, v) == Catch::Approx(0.5).margin(1e-14));
    }
    SECTION("two electrons in two orbitals") {
        const auto aux = build_auxiliary_operators(2, 0);
        // modes: 0 = 0a, 1 = 1a, 2 = 0b, 3 = 1b
        const auto ab = word(4, {cre(0), cre(3)});
        const auto ba = word(4, {cre(2), cre(1)});
        const auto triplet = prepare(4, ab + ba);
        const auto singlet = prepare(4, ab + ba * -1.0);
        CHECK(expect(aux.spin_squared, triplet) == Catch::Approx(2.0).margin(1e-14));
        CHECK(expect(aux.spin_squared, singlet) == Catch::Approx(0.0).margin(1e-14));
        CHECK(expect(aux.spin_z, triplet) == Catch::Approx(0.0).margin(1e-14));
        const auto high = prepare(4, word(4, {cre(0), cre(1)}));
        CHECK(expect(aux.spin_squared, high) == Catch::Approx(2.0).margin(1e-14));
        CHECK(expect(aux.spin_z, high) == Catch::Approx(1.0).margin(1e-14));
    }
    SECTION("S^2 spectrum is s(s+1)") {
        const auto aux = build_auxiliary_operators(3, 0);
        const auto ev = eigenvalues(to_fock_matrix(aux.spin_squared));
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            const double s = 0.5 * (std::sqrt(1.0 + 4.0 * ev(i)) - 1.0);
            CHECK(std::abs(2.0 * s - std::round(2.0 * s)) < 1e-10);
        }
    }
    SECTION("single determinants") {
        const std::size_t m = 3;
        const auto aux = build_auxiliary_operators(m, 2);
        const Mat sz = to_fock_matrix(aux.spin_z);
        const Mat s2 = to_fock_matrix(aux.spin_squared);
        const Mat num = to_fock_matrix(aux.number);
        for (Eigen::Index b = 0; b < 64; ++b) {
            const auto ub = static_cast<std::uint64_t>(b);
            const int na = std::popcount(ub & 7U);
            const int nb = std::popcount(ub >> 3);
            CHECK(sz(b, b).real() == Catch::Approx(0.5 * (na - nb)).margin(1e-14));
            CHECK(num(b, b).real() == Catch::Approx(2 + na + nb).margin(1e-14));
            if ((ub & 7U) == (ub >> 3)) {
                CHECK(std::abs(s2(b, b)) < 1e-14);
            }
        }
    }
    CHECK_THROWS_AS(build_auxiliary_operators(0, 0), ValidationError);
}

TEST_CASE("Jordan-Wigner images of simple operators", "[fermion]") {
    const auto n0 = map_to_qubits(word(1, {cre(0), des(0)}), Mapping::JordanWigner);
    CHECK(max_diff(dense_operator(n0), dense_operator(QubitOperator(1, {{0.5, "I"}, {-0.5, "Z"}}))) <
          1e-15);

    const auto hop = word(2, {cre(1), des(0)}) + word(2, {cre(0), des(1)});
    const auto q = map_to_qubits(hop, Mapping::JordanWigner);
    CHECK(q.size() == 2);
    CHECK(std::abs(q.coefficient(PauliString::parse("XX")) - 0.5) < 1e-15);
    CHECK(std::abs(q.coefficient(PauliString::parse("YY")) - 0.5) < 1e-15);

    CHECK(parse_mapping("jordan_wigner") == Mapping::JordanWigner);
    CHECK(parse_mapping("parity") == Mapping::Parity);
    CHECK_THROWS_AS(parse_mapping("bravyi_kitaev"), ValidationError);
}

TEST_CASE("Mappings reproduce the Fock-space matrix", "[fermion][property]") {
    std::mt19937_64 rng(7);
    for (std::size_t m = 1; m <= 3; ++m) {
        const auto ints = random_integrals(m, 1, 1, rng);
        const auto h = build_molecular_hamiltonian(ints);
        const Mat fock = to_fock_matrix(h);
        CHECK(max_diff(fock, fock.adjoint()) < 1e-13);

        const auto jw = map_to_qubits(h, Mapping::JordanWigner);
        CHECK(jw.is_hermitian());
        CHECK(max_diff(dense_operator(jw), fock) < 1e-12);

        const auto par = map_to_qubits(h, Mapping::Parity);
        CHECK(max_diff(dense_operator(par), parity_permuted(fock, 2 * m)) < 1e-12);

        const auto ev_f = eigenvalues(fock);
        const auto ev_p = eigenvalues(dense_operator(par));
        CHECK((ev_f - ev_p).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("Mapped Hamiltonians commute with the auxiliary operators", "[fermion][property]") {
    std::mt19937_64 rng(13);
    for (std::size_t m = 1; m <= 3; ++m) {
        const auto ints = random_integrals(m, 1, 1, rng);
        const auto h = build_molecular_hamiltonian(ints);
        const auto aux = build_auxiliary_operators(m, 2);
        for (auto mapping : {Mapping::JordanWigner, Mapping::Parity}) {
            const auto hq = map_to_qubits(h, mapping);
            for (const auto *x : {&aux.number, &aux.spin_z, &aux.spin_squared}) {
                const auto xq = map_to_qubits(*x, mapping);
                CHECK(max_abs_coefficient(commutator(hq, xq)) < 1e-10);
            }
        }
    }
}

TEST_CASE("Hartree-Fock occupations and encodings", "[fermion]") {
    CHECK(hartree_fock_occupation(3, 2, 1) == 0b001011U);
    CHECK(hartree_fock_occupation(2, 1, 1) == 0b0101U);
    CHECK(occupation_to_parity(0b0101U, 4) == 0b0011U);
    CHECK(encode_occupation(0b0101U, 4, Mapping::JordanWigner) == 0b0101U);
    CHECK(encode_occupation(0b0101U, 4, Mapping::Parity) == 0b0011U);
}
