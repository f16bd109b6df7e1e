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
#include <vqelab/pauli.hpp>

using namespace vqelab;
using namespace vqelab::testing;
using Catch::Approx;

namespace {

std::vector<std::string> all_strings(std::size_t n) {
    std::vector<std::string> out{""};
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<std::string> next;
        for (const auto &s : out) {
            for (char c : {'I', 'X', 'Y', 'Z'}) {
                next.push_back(s + c);
            }
        }
        out = std::move(next);
    }
    return out;
}

PauliTerm term(cplx c, const std::string &s) { return {c, PauliString::parse(s)}; }

double max_diff(const Mat &a, const Mat &b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("PauliString parse and print", "[pauli]") {
    const auto p = PauliString::parse("XIZY");
    CHECK(p.num_qubits() == 4);
    CHECK(p.str() == "XIZY");
    CHECK(p.at(0) == 'X');
    CHECK(p.at(3) == 'Y');
    CHECK(p.weight() == 3);
    CHECK(p.y_count() == 1);
    CHECK_FALSE(p.is_diagonal());
    CHECK(PauliString::parse("ZIZ").is_diagonal());
    CHECK_THROWS_AS(PauliString::parse("XQ"), ValidationError);
    CHECK_THROWS_AS(PauliString::parse(std::string(65, 'I')), DimensionError);
    CHECK_THROWS_AS(PauliString::single(2, 2, 'X'), DimensionError);
}

TEST_CASE("mul_pauli basic products", "[pauli]") {
    const auto xy = mul_pauli(term(1, "X"), term(1, "Y"));
    CHECK(xy.string.str() == "Z");
    CHECK(std::abs(xy.coefficient - cplx(0, 1)) < 1e-15);

    for (const auto &s : all_strings(1)) {
        const cplx c(0.3, -1.7);
        const auto r = mul_pauli(term(1, "I"), term(c, s));
        CHECK(r.string.str() == s);
        CHECK(r.coefficient == c);
    }

    const auto r = mul_pauli(term(1, "XZ"), term(1, "YX"));
    const Mat expect = dense_string("XZ") * dense_string("YX");
    CHECK(max_diff(r.coefficient * dense_string(r.string.str()), expect) < 1e-15);

    CHECK_THROWS_AS(mul_pauli(term(1, "X"), term(1, "XX")), DimensionError);
}

TEST_CASE("Exhaustive multiplication table matches dense products", "[pauli]") {
    for (std::size_t n : {1U, 2U}) {
        const auto strings = all_strings(n);
        for (const auto &a : strings) {
            for (const auto &b : strings) {
                const auto r = mul_pauli(term(1, a), term(1, b));
                const Mat expect = dense_string(a) * dense_string(b);
                REQUIRE(max_diff(r.coefficient * dense_string(r.string.str()), expect) <
                        1e-15);
                const auto ab = PauliString::parse(a);
                const auto bb = PauliString::parse(b);
                const Mat comm = dense_string(a) * dense_string(b) -
                                 dense_string(b) * dense_string(a);
                CHECK(ab.commutes_with(bb) == (comm.cwiseAbs().maxCoeff() < 1e-15));
            }
        }
    }
}

TEST_CASE("Multiplication is associative with unit phases", "[pauli][property]") {
    for (std::size_t n : {1U, 2U, 3U}) {
        const auto strings = all_strings(n);
        std::mt19937_64 rng(11 + n);
        const std::size_t samples = n < 3 ? strings.size() : 24;
        for (std::size_t ia = 0; ia < samples; ++ia) {
            const auto &a = n < 3 ? strings[ia] : strings[rng() % strings.size()];
            for (const auto &b : strings) {
                const auto ab = mul_pauli(term(1, a), term(1, b));
                const cplx ph = ab.coefficient;
                const bool unit = std::abs(ph - 1.0) < 1e-15 || std::abs(ph + 1.0) < 1e-15 ||
                                  std::abs(ph - cplx(0, 1)) < 1e-15 ||
                                  std::abs(ph + cplx(0, 1)) < 1e-15;
                REQUIRE(unit);
                for (std::size_t ic = 0; ic < strings.size(); ic += (n < 3 ? 1 : 5)) {
                    const auto c = term(1, strings[ic]);
                    const auto left = mul_pauli(ab, c);
                    const auto right = mul_pauli(term(1, a), mul_pauli(term(1, b), c));
                    REQUIRE(left.string == right.string);
                    REQUIRE(std::abs(left.coefficient - right.coefficient) < 1e-15);
                }
            }
        }
    }
}

TEST_CASE("simplify", "[pauli]") {
    SECTION("cancellation") {
        QubitOperator op(1, {term(1, "Z"), term(-1, "Z")});
        CHECK(simplify(op, 0.0).empty());
    }
    SECTION("combination") {
        QubitOperator op(1, {term(0.5, "X"), term(0.5, "X")});
        const auto s = simplify(op, kDropTolerance);
        REQUIRE(s.size() == 1);
        CHECK(s.coefficient(PauliString::parse("X")) == cplx(1.0));
    }
    SECTION("tolerance drops small terms") {
        QubitOperator op(2, {term(1e-13, "XX"), term(1.0, "ZZ")});
        CHECK(simplify(op, 1e-12).size() == 1);
        CHECK(simplify(op, 0.0).size() == 2);
        CHECK_THROWS_AS(simplify(op, -1.0), ValidationError);
    }
    SECTION("random 6-qubit sums keep their matrix") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1, 1);
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<PauliTerm> terms;
            for (int k = 0; k < 60; ++k) {
                terms.push_back(term(cplx(u(rng), u(rng)), random_string(6, rng)));
            }
            // duplicates on purpose
            terms.push_back(terms[3]);
            terms.push_back(terms[7]);
            Mat raw = Mat::Zero(64, 64);
            for (const auto &t : terms) {
                raw += t.coefficient * dense_string(t.string.str());
            }
            QubitOperator op(6, terms);
            CHECK(max_diff(dense_operator(simplify(op, kDropTolerance)), raw) < 1e-14);
        }
    }
}

TEST_CASE("commutator", "[pauli]") {
    const QubitOperator z(1, {term(1, "Z")});
    CHECK(commutator(z, z).empty());

    const QubitOperator x(1, {term(1, "X")});
    const QubitOperator y(1, {term(1, "Y")});
    const auto xy = commutator(x, y);
    REQUIRE(xy.size() == 1);
    CHECK(std::abs(xy.coefficient(PauliString::parse("Z")) - cplx(0, 2)) < 1e-15);

    CHECK_THROWS_AS(commutator(x, QubitOperator(2)), DimensionError);

    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        const auto a = random_hermitian(4, 20, rng);
        const auto b = random_hermitian(4, 20, rng);
        CHECK(commutator(a, a).empty());
        const Mat da = dense_operator(a);
        const Mat db = dense_operator(b);
        CHECK(max_diff(dense_operator(commutator(a, b)), da * db - db * da) < 1e-12);
    }
}

TEST_CASE("to_matrix", "[pauli]") {
    const Mat z = to_matrix(QubitOperator(1, {term(1, "Z")}));
    CHECK(z(0, 0) == cplx(1));
    CHECK(z(1, 1) == cplx(-1));
    CHECK(z(0, 1) == cplx(0));

    const Mat xx = to_matrix(QubitOperator(2, {term(1, "XX")}));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(xx(i, j) == cplx(i + j == 3 ? 1.0 : 0.0));
        }
    }

    // qubit 0 is the least-significant bit: Z on qubit 0 flips sign on odd indices
    const Mat zi = to_matrix(QubitOperator(2, {term(1, "ZI")}));
    CHECK(zi(1, 1) == cplx(-1));
    CHECK(zi(2, 2) == cplx(1));

    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 10; ++rep) {
        const auto op = random_hermitian(5, 30, rng);
        CHECK(max_diff(to_matrix(op), dense_operator(op)) < 1e-14);
    }

    CHECK_THROWS_AS(to_matrix(QubitOperator(15)), ResourceError);
    CHECK_NOTHROW(to_matrix(QubitOperator(3), 3));
    CHECK_THROWS_AS(to_matrix(QubitOperator(4), 3), ResourceError);
}

TEST_CASE("from_matrix", "[pauli]") {
    const auto id = from_matrix(Mat::Identity(4, 4), 2);
    REQUIRE(id.size() == 1);
    CHECK(std::abs(id.coefficient(PauliString::parse("II")) - 1.0) < 1e-15);

    Mat z(2, 2);
    z << 1, 0, 0, -1;
    const auto zop = from_matrix(z, 1);
    REQUIRE(zop.size() == 1);
    CHECK(std::abs(zop.coefficient(PauliString::parse("Z")) - 1.0) < 1e-15);

    SECTION("round trip on random operators") {
        std::mt19937_64 rng(17);
        const auto op = random_hermitian(3, 25, rng);
        const auto back = from_matrix(to_matrix(op), 3);
        CHECK(back.size() == op.size());
        for (const auto &[s, c] : op.terms()) {
            CHECK(std::abs(back.coefficient(s) - c) < 1e-13);
        }
    }
    SECTION("generic dense matrices need all 4^k strings") {
        std::mt19937_64 rng(23);
        for (std::size_t k = 1; k <= 4; ++k) {
            const auto op = from_matrix(random_hermitian_matrix(Eigen::Index{1} << k, rng), k);
            CHECK(op.size() == (std::size_t{1} << (2 * k)));
        }
    }
    SECTION("errors") {
        CHECK_THROWS_AS(from_matrix(Mat::Identity(3, 3), 2), DimensionError);
        Mat nh = Mat::Zero(2, 2);
        nh(0, 1) = 1.0;
        CHECK_THROWS_AS(from_matrix(nh, 1), ValidationError);
    }
}

TEST_CASE("Operator arithmetic", "[pauli]") {
    std::mt19937_64 rng(31);
    const auto a = random_hermitian(3, 10, rng);
    const auto b = random_hermitian(3, 10, rng);
    const Mat da = dense_operator(a);
    const Mat db = dense_operator(b);
    CHECK(max_diff(dense_operator(a + b), da + db) < 1e-14);
    CHECK(max_diff(dense_operator(a - b), da - db) < 1e-14);
    CHECK(max_diff(dense_operator(a * b), da * db) < 1e-13);
    CHECK(a.is_hermitian());
    QubitOperator c = a;
    c *= cplx(0, 1);
    CHECK_FALSE(c.is_hermitian());
    CHECK(max_diff(dense_operator(c.adjoint()), dense_operator(c).adjoint()) < 1e-14);
}

TEST_CASE("Text serialization round-trips bit-exactly", "[pauli][io]") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1, 1);
    QubitOperator op(4);
    for (int k = 0; k < 30; ++k) {
        op.add_term(cplx(u(rng), k % 3 == 0 ? u(rng) : 0.0),
                    PauliString::parse(random_string(4, rng)));
    }
    op.add_term(-0.5, PauliString::parse("XIZY"));
    const auto text = to_text(op);
    const auto back = parse_qubit_operator(text);
    REQUIRE(back.size() == op.size());
    for (const auto &[s, c] : op.terms()) {
        CHECK(back.coefficient(s) == c);
    }
    CHECK(to_text(back) == text);

    CHECK(parse_qubit_operator("-0.5\tXIZY\n").coefficient(PauliString::parse("XIZY")) ==
          cplx(-0.5));
    CHECK(parse_qubit_operator("(1,-2) XY\n").coefficient(PauliString::parse("XY")) ==
          cplx(1, -2));

    const QubitOperator empty(3);
    CHECK(parse_qubit_operator(to_text(empty)).num_qubits() == 3);
    QubitOperator scalar(0);
    scalar.add_term(-1.25, PauliString::identity(0));
    CHECK(parse_qubit_operator(to_text(scalar)).constant() == cplx(-1.25));

    CHECK_THROWS_AS(parse_qubit_operator("abc XY\n"), ParseError);
    CHECK_THROWS_AS(parse_qubit_operator("1 XY\n1 XYZ\n"), ParseError);
    CHECK_THROWS_AS(parse_qubit_operator("1 XQ\n"), ParseError);
    try {
        parse_qubit_operator("1 XX\n\n2 X?\n");
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(e.line() == 3);
    }
}
