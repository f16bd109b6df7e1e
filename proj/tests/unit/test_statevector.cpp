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
#include <vqelab/statevector.hpp>

#include <filesystem>
#include <numbers>

using namespace vqelab;
using namespace vqelab::testing;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Mat embed(const Mat &u, std::size_t q, std::size_t n) {
    std::string s(n, 'I');
    Mat out = Mat::Identity(1, 1);
    for (std::size_t k = 0; k < n; ++k) {
        out = kron(k == q ? u : Mat(Mat::Identity(2, 2)), out);
    }
    return out;
}

Mat gate_matrix(const Gate &g, double angle, std::size_t n) {
    const auto dim = Eigen::Index{1} << n;
    switch (g.kind) {
    case GateKind::RY:
        return (cplx(0, -0.5 * angle) * embed(single_qubit('Y'), g.target, n)).exp();
    case GateKind::RX:
        return (cplx(0, -0.5 * angle) * embed(single_qubit('X'), g.target, n)).exp();
    case GateKind::PauliEvolution:
        return (cplx(0, -0.5 * angle) * dense_string(g.pauli.str())).exp();
    case GateKind::CNOT: {
        Mat m = Mat::Zero(dim, dim);
        for (Eigen::Index b = 0; b < dim; ++b) {
            const auto ub = static_cast<std::uint64_t>(b);
            const auto to = ((ub >> g.control) & 1U) ? ub ^ (std::uint64_t{1} << g.target) : ub;
            m(static_cast<Eigen::Index>(to), b) = 1.0;
        }
        return m;
    }
    }
    return {};
}

Eigen::VectorXcd as_vector(const StateVector &s) {
    const auto a = s.amplitudes();
    return Eigen::Map<const Eigen::VectorXcd>(a.data(), static_cast<Eigen::Index>(a.size()));
}

StateVector random_state(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> a(std::size_t{1} << n);
    double norm = 0;
    for (auto &x : a) {
        x = {g(rng), g(rng)};
        norm += std::norm(x);
    }
    for (auto &x : a) {
        x /= std::sqrt(norm);
    }
    return {n, std::move(a)};
}

/// Random circuit over every gate kind; evolution gates reuse slots.
Circuit random_circuit(std::size_t n, std::size_t n_params, std::size_t n_gates,
                       std::mt19937_64 &rng) {
    Circuit c(n, n_params);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::size_t k = 0; k < n_gates; ++k) {
        const std::size_t q = rng() % n;
        const std::size_t slot = rng() % n_params;
        switch (rng() % 5) {
        case 0:
            c.ry(q, slot);
            break;
        case 1:
            c.rx(q, slot);
            break;
        case 2: {
            std::size_t t = rng() % n;
            if (t == q) {
                t = (t + 1) % n;
            }
            c.cnot(q, t);
            break;
        }
        case 3: {
            auto s = random_string(n, rng);
            s[q] = 'Y';
            c.evolution(u(rng), PauliString::parse(s), slot);
            break;
        }
        default:
            c.ry_fixed(q, u(rng));
        }
    }
    return c;
}

std::vector<double> random_params(std::size_t n, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::vector<double> t(n);
    for (auto &x : t) {
        x = u(rng);
    }
    return t;
}

} // namespace

TEST_CASE("Reference states", "[statevector]") {
    const auto s00 = init_reference(2, "00");
    CHECK(s00[0] == cplx(1));
    CHECK(s00[1] == cplx(0));
    const auto s10 = init_reference(2, "10");
    CHECK(s10[1] == cplx(1));
    CHECK(s10[0] == cplx(0));
    CHECK(init_reference(3, 0b110U)[6] == cplx(1));
    CHECK_THROWS_AS(init_reference(2, "101"), DimensionError);
    CHECK_THROWS_AS(init_reference(2, "1x"), ValidationError);
    CHECK_THROWS_AS(init_reference(2, 4U), DimensionError);
}

TEST_CASE("Single gates", "[statevector]") {
    auto s = init_reference(1, "0");
    s.apply_ry(0, kPi);
    CHECK(std::abs(s[1]) == Approx(1.0).margin(1e-15));
    CHECK(std::abs(s[0]) < 1e-15);

    auto x = init_reference(1, "0");
    x.apply_rx(0, kPi);
    CHECK(std::abs(x[1]) == Approx(1.0).margin(1e-15));

    auto c = init_reference(2, "10");
    c.apply_cnot(0, 1);
    CHECK(c[3] == cplx(1));

    Circuit bad(2, 1);
    CHECK_THROWS_AS(bad.ry(0, 1), ValidationError);
    CHECK_THROWS_AS(bad.ry(2, 0), DimensionError);
    CHECK_THROWS_AS(bad.cnot(1, 1), ValidationError);
    Gate both{GateKind::RY, 0, 0, 0, 0.5, 1.0, {}};
    CHECK_THROWS_AS(bad.push(both), ValidationError);
    CHECK_THROWS_AS(apply_circuit(init_reference(2, "00"), bad, std::vector<double>{}),
                    DimensionError);
}

TEST_CASE("Circuits match dense unitaries", "[statevector]") {
    std::mt19937_64 rng(101);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 5;
        const auto c = random_circuit(n, 6, 30, rng);
        const auto theta = random_params(6, rng);
        const auto in = random_state(n, rng);
        const auto out = apply_circuit(in, c, theta);
        Eigen::VectorXcd v = as_vector(in);
        for (const auto &g : c.gates()) {
            v = gate_matrix(g, g.angle(theta), n) * v;
        }
        CHECK((as_vector(out) - v).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(out.norm() == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("Pauli evolution is exact", "[statevector]") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 4;
        const auto p = PauliString::parse(random_string(n, rng));
        const double angle = std::uniform_real_distribution<double>(-3, 3)(rng);
        auto s = random_state(n, rng);
        const Eigen::VectorXcd expect =
            (cplx(0, -0.5 * angle) * dense_string(p.str())).exp() * as_vector(s);
        s.apply_pauli_rotation(p, angle);
        CHECK((as_vector(s) - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Norm is preserved over long sequences", "[statevector][property]") {
    std::mt19937_64 rng(8);
    const auto c = random_circuit(6, 10, 10000, rng);
    const auto out = apply_circuit(random_state(6, rng), c, random_params(10, rng));
    CHECK(std::abs(out.norm() - 1.0) < 1e-12);
}

TEST_CASE("Expectation values", "[statevector]") {
    const QubitOperator z(1, {{1.0, "Z"}});
    CHECK(expectation(init_reference(1, "0"), z) == Approx(1.0).margin(1e-15));
    auto plus = init_reference(1, "0");
    plus.apply_ry(0, kPi / 2);
    CHECK(expectation(plus, QubitOperator(1, {{1.0, "X"}})) == Approx(1.0).margin(1e-15));

    const QubitOperator nh(1, {{cplx(0, 1), "X"}});
    CHECK_THROWS_AS(expectation(plus, nh), ValidationError);
    CHECK_THROWS_AS(expectation(plus, QubitOperator(2)), DimensionError);

    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 10; ++rep) {
        const auto a = random_hermitian(4, 12, rng);
        const auto b = random_hermitian(4, 12, rng);
        const auto s = random_state(4, rng);
        const Eigen::VectorXcd v = as_vector(s);
        CHECK(expectation(s, a) ==
              Approx((v.adjoint() * dense_operator(a) * v)(0, 0).real()).margin(1e-12));
        QubitOperator lin = a;
        lin *= 0.7;
        QubitOperator bb = b;
        bb *= -1.3;
        lin += bb;
        CHECK(expectation(s, lin) ==
              Approx(0.7 * expectation(s, a) - 1.3 * expectation(s, b)).margin(1e-12));
    }
}

TEST_CASE("Adjoint gradient", "[statevector][gradient]") {
    SECTION("single rotation") {
        Circuit c(1, 1);
        c.ry(0, 0);
        const QubitOperator z(1, {{1.0, "Z"}});
        const auto ref = init_reference(1, "0");
        for (double t : {-2.0, -0.3, 0.0, 0.4, 1.1, 2.9}) {
            const std::vector<double> th{t};
            const auto eg = energy_and_gradient(c, th, z, ref);
            CHECK(eg.energy == Approx(std::cos(t)).margin(1e-14));
            CHECK(eg.gradient[0] == Approx(-std::sin(t)).margin(1e-14));
        }
        for (double t : {0.0, kPi}) {
            CHECK(std::abs(gradient(c, std::vector<double>{t}, z, ref)[0]) < 1e-10);
        }
    }
    SECTION("finite differences on random circuits") {
        std::mt19937_64 rng(77);
        for (int rep = 0; rep < 10; ++rep) {
            const std::size_t n = 2 + rep % 5;
            const std::size_t np = 3 + rep;
            const auto c = random_circuit(n, np, 40, rng);
            const auto h = random_hermitian(n, 15, rng);
            const auto ref = random_state(n, rng);
            auto theta = random_params(np, rng);
            const auto g = gradient(c, theta, h, ref);
            for (std::size_t i = 0; i < np; ++i) {
                const double h0 = theta[i];
                theta[i] = h0 + 1e-5;
                const double ep = expectation(apply_circuit(ref, c, theta), h);
                theta[i] = h0 - 1e-5;
                const double em = expectation(apply_circuit(ref, c, theta), h);
                theta[i] = h0;
                CHECK(std::abs(g[i] - (ep - em) / 2e-5) < 1e-6);
            }
        }
    }
    SECTION("parameter shift on single-parameter circuits") {
        std::mt19937_64 rng(78);
        for (int rep = 0; rep < 10; ++rep) {
            const std::size_t n = 3;
            Circuit c(n, 1);
            c.ry_fixed(0, 0.3).cnot(0, 1).rx_fixed(2, -0.8);
            if (rep % 2) {
                c.rx(rng() % n, 0);
            } else {
                c.ry(rng() % n, 0);
            }
            c.cnot(1, 2).ry_fixed(1, 1.3);
            const auto h = random_hermitian(n, 10, rng);
            const auto ref = init_reference(n, "000");
            const std::vector<double> theta{std::uniform_real_distribution<double>(-3, 3)(rng)};
            const double g = gradient(c, theta, h, ref)[0];
            const double ep = expectation(apply_circuit(ref, c, std::vector{theta[0] + kPi / 2}), h);
            const double em = expectation(apply_circuit(ref, c, std::vector{theta[0] - kPi / 2}), h);
            CHECK(std::abs(g - 0.5 * (ep - em)) < 1e-9);
        }
    }
}

TEST_CASE("Binary state dump round-trips", "[statevector][io]") {
    std::mt19937_64 rng(2);
    const auto s = random_state(3, rng);
    const auto path = std::filesystem::temp_directory_path() / "vqelab_state.bin";
    write_state_dump(s, path.string());
    CHECK(std::filesystem::file_size(path) == 8 * 16);
    const auto back = read_state_dump(path.string(), 3);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(back[i] == s[i]);
    }
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_state_dump(path.string(), 3), IoError);
}
