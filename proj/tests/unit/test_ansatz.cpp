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
#include <unsupported/Eigen/MatrixFunctions>
#include <vqelab/ansatz.hpp>
#include <vqelab/encoding.hpp>

using namespace vqelab;
using namespace vqelab::testing;

namespace {

std::vector<double> random_angles(std::size_t n, std::mt19937_64 &rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> out(n);
    for (auto &x : out) {
        x = u(rng);
    }
    return out;
}

Encoding jordan_wigner(const IntegralSet &ints) {
    return Encoding(ints.n_orbitals, ints.n_alpha, ints.n_beta, {Mapping::JordanWigner, false, false});
}

Eigen::VectorXcd apply_dense_exp(const FermionOperator &g, std::uint64_t occ) {
    const Mat m = dense_operator(map_to_qubits(g, Mapping::JordanWigner)).exp();
    return m.col(static_cast<Eigen::Index>(occ));
}

Eigen::VectorXcd as_vector(const StateVector &s) {
    const auto a = s.amplitudes();
    return Eigen::Map<const Eigen::VectorXcd>(a.data(), static_cast<Eigen::Index>(a.size()));
}

std::size_t count(const Circuit &c, GateKind k) {
    return static_cast<std::size_t>(
        std::count_if(c.gates().begin(), c.gates().end(), [k](const Gate &g) { return g.kind == k; }));
}

} // namespace

TEST_CASE("Ansatz names parse and print", "[ansatz]") {
    for (auto f : {AnsatzFamily::RyLinear, AnsatzFamily::RyFull, AnsatzFamily::Cascade, AnsatzFamily::QUCCSD}) {
        CHECK(parse_family(to_string(f)) == f);
    }
    for (auto f : {ProductFormula::Trotter1, ProductFormula::Suzuki2}) {
        CHECK(parse_product_formula(to_string(f)) == f);
    }
    for (auto o : {ExcitationOrder::SinglesThenDoubles, ExcitationOrder::DoublesThenSingles}) {
        CHECK(parse_order(to_string(o)) == o);
    }
    CHECK(parse_flavor("unrestricted") == QuccsdFlavor::Unrestricted);
    CHECK_THROWS_AS(parse_family("ry"), ValidationError);
    AnsatzSpec s;
    s.family = AnsatzFamily::QUCCSD;
    s.n_l = 0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("Connectivity sets", "[ansatz]") {
    CHECK(connectivity_pairs(4, Connectivity::Linear) ==
          std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}, {2, 3}});
    const auto full = connectivity_pairs(4, Connectivity::Full);
    CHECK(full.size() == 6);
    for (const auto &[i, j] : full) {
        CHECK(i < j);
    }
    CHECK(connectivity_pairs(1, Connectivity::Full).empty());
}

TEST_CASE("R_y circuit layout", "[ansatz]") {
    const Circuit c = build_ry(4, 2, Connectivity::Linear);
    CHECK(c.n_params() == 12);
    CHECK(count(c, GateKind::RY) == 12);
    CHECK(count(c, GateKind::CNOT) == 6);
    // rotation layer l, qubit q uses slot l * n_q + q
    std::size_t k = 0;
    for (const auto &g : c.gates()) {
        if (g.kind == GateKind::RY) {
            CHECK(*g.slot == k);
            CHECK(g.target == k % 4);
            ++k;
        }
    }
    const Circuit f = build_ry(5, 3, Connectivity::Full);
    CHECK(f.n_params() == 20);
    CHECK(count(f, GateKind::CNOT) == 30);
    CHECK_THROWS_AS(build_ry(0, 1, Connectivity::Linear), ValidationError);
}

TEST_CASE("Cascade circuit is the identity at zero", "[ansatz][property]") {
    std::mt19937_64 rng(11);
    for (std::size_t n = 2; n <= 6; ++n) {
        for (int l = 0; l <= 3; ++l) {
            const Circuit c = build_cascade(n, l);
            CHECK(c.n_params() == n + 2 * n * static_cast<std::size_t>(l));
            const auto start = static_cast<std::uint64_t>(rng() % (std::uint64_t{1} << n));
            const StateVector ref = StateVector::basis(n, start);
            const StateVector out = apply_circuit(ref, c, std::vector<double>(c.n_params(), 0.0));
            CHECK(std::abs(out.inner(ref)) == Catch::Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("Warm-start extension preserves cascade states", "[ansatz]") {
    std::mt19937_64 rng(5);
    const Circuit c2 = build_cascade(4, 2);
    const Circuit c3 = build_cascade(4, 3);
    const auto theta = random_angles(c2.n_params(), rng);
    const auto ext = warm_start_extend(theta, AnsatzFamily::Cascade, 4);
    REQUIRE(ext.size() == c3.n_params());
    const StateVector ref = StateVector::basis(4, 0b0101);
    const StateVector a = apply_circuit(ref, c2, theta);
    const StateVector b = apply_circuit(ref, c3, ext);
    CHECK(std::abs(a.inner(b)) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("Excitation counts", "[ansatz][quccsd]") {
    const IntegralSet toy = [] {
        std::mt19937_64 rng(1);
        return random_integrals(2, 1, 1, rng);
    }();
    CHECK(build_excitations(toy, QuccsdFlavor::Restricted).singles.size() == 1);
    CHECK(build_excitations(toy, QuccsdFlavor::Restricted).doubles.size() == 1);
    CHECK(build_excitations(toy, QuccsdFlavor::Unrestricted).size() == 3);

    // LiH: one occupied, two virtual sigma orbitals
    const IntegralSet l = lih();
    const auto r = build_excitations(l, QuccsdFlavor::Restricted);
    CHECK(r.singles.size() == 2);
    CHECK(r.doubles.size() == 3);
    const auto u = build_excitations(l, QuccsdFlavor::Unrestricted);
    CHECK(u.singles.size() == 4);
    CHECK(u.doubles.size() == 4);
}

TEST_CASE("Excitations respect the point group", "[ansatz][quccsd]") {
    std::mt19937_64 rng(3);
    IntegralSet ints = random_integrals(4, 2, 2, rng);
    impose_point_group(ints, {0, 1, 0, 1});
    for (auto flavor : {QuccsdFlavor::Restricted, QuccsdFlavor::Unrestricted}) {
        const auto ex = build_excitations(ints, flavor);
        for (const auto &e : ex.singles) {
            CHECK(ints.orbital_irreps[e.i] == ints.orbital_irreps[e.a]);
        }
        for (const auto &e : ex.doubles) {
            CHECK((ints.orbital_irreps[e.i] ^ ints.orbital_irreps[e.j] ^ ints.orbital_irreps[e.a] ^
                   ints.orbital_irreps[e.b]) == 0);
        }
    }
}

TEST_CASE("Restricted generators commute with the spin operators", "[ansatz][quccsd][property]") {
    std::mt19937_64 rng(7);
    for (auto [m, n] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{3, 2}, std::pair{4, 2}}) {
        const IntegralSet ints = random_integrals(static_cast<std::size_t>(m), n, n, rng);
        const auto aux = build_auxiliary_operators(ints.n_orbitals, 0);
        const auto s2 = map_to_qubits(aux.spin_squared, Mapping::JordanWigner);
        const auto sz = map_to_qubits(aux.spin_z, Mapping::JordanWigner);
        const auto num = map_to_qubits(aux.number, Mapping::JordanWigner);
        const auto ex = build_excitations(ints, QuccsdFlavor::Restricted);
        for (const auto *e : ex.ordered(ExcitationOrder::SinglesThenDoubles)) {
            const auto g = map_to_qubits(e->generator, Mapping::JordanWigner);
            INFO(e->label());
            CHECK(max_abs_coefficient(commutator(g, s2)) <= 1e-12);
            CHECK(max_abs_coefficient(commutator(g, sz)) <= 1e-12);
            CHECK(max_abs_coefficient(commutator(g, num)) <= 1e-12);
        }
    }
}

TEST_CASE("Unrestricted generators conserve S_z but not S^2", "[ansatz][quccsd]") {
    std::mt19937_64 rng(8);
    const IntegralSet ints = random_integrals(2, 1, 1, rng);
    const auto aux = build_auxiliary_operators(2, 0);
    const auto s2 = map_to_qubits(aux.spin_squared, Mapping::JordanWigner);
    const auto sz = map_to_qubits(aux.spin_z, Mapping::JordanWigner);
    double worst = 0.0;
    const auto ex = build_excitations(ints, QuccsdFlavor::Unrestricted);
    for (const auto *e : ex.ordered(ExcitationOrder::SinglesThenDoubles)) {
        const auto g = map_to_qubits(e->generator, Mapping::JordanWigner);
        CHECK(max_abs_coefficient(commutator(g, sz)) <= 1e-12);
        worst = std::max(worst, max_abs_coefficient(commutator(g, s2)));
    }
    CHECK(worst > 0.1);
}

TEST_CASE("One Trotter step equals the product of exact exponentials", "[ansatz][quccsd]") {
    // unrestricted generators are single spin-orbital excitations, whose Pauli terms commute
    std::mt19937_64 rng(21);
    const IntegralSet ints = random_integrals(3, 1, 1, rng);
    const Encoding enc = jordan_wigner(ints);
    AnsatzSpec spec;
    spec.family = AnsatzFamily::QUCCSD;
    spec.flavor = QuccsdFlavor::Unrestricted;
    const Circuit c = build_quccsd(ints, spec, enc);
    const auto ex = build_excitations(ints, QuccsdFlavor::Unrestricted);
    const auto order = ex.ordered(spec.ordering);
    REQUIRE(c.n_params() == order.size());
    const auto t = random_angles(order.size(), rng, 0.5);
    const std::uint64_t hf = hartree_fock_occupation(3, 1, 1);
    Eigen::VectorXcd want = Eigen::VectorXcd::Zero(64);
    want(static_cast<Eigen::Index>(hf)) = 1.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const Mat u = dense_operator(map_to_qubits(order[k]->generator * cplx(t[k]), Mapping::JordanWigner)).exp();
        want = u * want;
    }
    const StateVector got = apply_circuit(StateVector::basis(6, hf), c, t);
    CHECK((as_vector(got) - want).norm() <= 1e-10);
}

TEST_CASE("Restricted exact exponential keeps a singlet", "[ansatz][quccsd][property]") {
    std::mt19937_64 rng(2);
    const IntegralSet ints = random_integrals(3, 2, 2, rng);
    const auto ex = build_excitations(ints, QuccsdFlavor::Restricted);
    const auto order = ex.ordered(ExcitationOrder::SinglesThenDoubles);
    const Mat s2 = dense_operator(map_to_qubits(build_auxiliary_operators(3, 0).spin_squared, Mapping::JordanWigner));
    for (int draw = 0; draw < 10; ++draw) {
        const auto t = random_angles(order.size(), rng);
        const Eigen::VectorXcd v = apply_dense_exp(cluster_generator(order, t, 6), hartree_fock_occupation(3, 2, 2));
        CHECK(std::abs(v.dot(s2 * v)) <= 1e-10);
    }
}

TEST_CASE("q-UCCSD parameter layouts", "[ansatz][quccsd]") {
    const IntegralSet ints = lih();
    const Encoding enc(3, 1, 1, {});
    AnsatzSpec spec;
    spec.family = AnsatzFamily::QUCCSD;
    spec.n_l = 2;
    const std::size_t n_amp = build_excitations(ints, spec.flavor).size();
    CHECK(build_quccsd(ints, spec, enc).n_params() == 2 * n_amp);
    spec.tie_layers = true;
    const Circuit tied = build_quccsd(ints, spec, enc);
    CHECK(tied.n_params() == n_amp);

    // tied amplitudes t reproduce the untied circuit at t / n_l per step
    std::mt19937_64 rng(4);
    const auto t = random_angles(n_amp, rng, 0.3);
    spec.tie_layers = false;
    const Circuit untied = build_quccsd(ints, spec, enc);
    const StateVector ref = StateVector::basis(enc.n_qubits(), enc.reference());
    const auto a = apply_circuit(ref, tied, t);
    const auto b = apply_circuit(ref, untied, trotter_parameters(t, 2));
    CHECK(std::abs(a.inner(b)) == Catch::Approx(1.0).margin(1e-12));

    spec.formula = ProductFormula::Suzuki2;
    const Circuit s = build_quccsd(ints, spec, enc);
    CHECK(s.size() == 2 * untied.size());
    const auto zero = apply_circuit(ref, s, std::vector<double>(s.n_params(), 0.0));
    CHECK(std::abs(zero.inner(ref)) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("Circuit text round-trips", "[ansatz][io]") {
    const IntegralSet ints = lih();
    const Encoding enc(3, 1, 1, {});
    AnsatzSpec spec;
    spec.family = AnsatzFamily::QUCCSD;
    for (const Circuit &c : {build_ry(4, 2, Connectivity::Full), build_cascade(3, 2), build_quccsd(ints, spec, enc)}) {
        const std::string text = to_text(c);
        const Circuit back = parse_circuit(text);
        CHECK(to_text(back) == text);
        std::mt19937_64 rng(9);
        const auto th = random_angles(c.n_params(), rng);
        const StateVector ref = StateVector::basis(c.n_qubits(), 1);
        CHECK(std::abs(apply_circuit(ref, c, th).inner(apply_circuit(ref, back, th))) ==
              Catch::Approx(1.0).margin(1e-14));
    }
    Circuit fixed(2, 0);
    fixed.ry_fixed(0, 0.25);
    fixed.cnot(0, 1);
    CHECK(to_text(parse_circuit(to_text(fixed))) == to_text(fixed));
    CHECK_THROWS_AS(parse_circuit("RY 0 0\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit("qubits 2\nparams 1\nRY 5 0\n"), ValidationError);
    CHECK_THROWS_AS(parse_circuit("qubits 2\nparams 1\nSWAP 0 1\n"), ParseError);
}

TEST_CASE("Cost reports", "[ansatz][cost]") {
    const QubitOperator h = QubitOperator::identity(4, 1.0);
    // LiH rows of the cost table on four qubits
    const auto lin = circuit_cost(build_ry(4, 3, Connectivity::Linear), h, 3);
    CHECK(lin.n_theta == 16);
    CHECK(lin.n_g1 == 16);
    CHECK(lin.n_g2 == 9);
    const auto cas = circuit_cost(build_cascade(4, 2), h, 2);
    CHECK(cas.n_theta == 20);
    CHECK(cas.n_g2 == 12);
    const auto full = circuit_cost(build_ry(4, 3, Connectivity::Full), h, 3);
    CHECK(full.n_theta == 16);
    CHECK(full.n_g2 == 18);
    // reference preparation adds one moment
    const auto prep = circuit_cost(build_ry(4, 1, Connectivity::Linear), h, 1, 0b0101);
    CHECK(prep.depth_with_prep == prep.depth + 1);
    CHECK(prep.n_g1 == 8);
    CHECK(lin.n_p == 1);
    // a 3-qubit Pauli evolution is 2 x 2 CNOTs, one RZ and up to 2 x 3 basis changes
    Circuit e(3, 1);
    e.evolution(1.0, PauliString::parse("XYZ"), 0);
    const auto ce = circuit_cost(e, QubitOperator::identity(3, 1.0), 1);
    CHECK(ce.n_g2 == 4);
    CHECK(ce.n_g1 == 5);
}
