#include <doctest.h>

#include "gridqls/circuit/synthesis.hpp"
#include "gridqls/circuit/text_format.hpp"
#include "gridqls/circuit/transpile.hpp"
#include "gridqls/error.hpp"
#include "gridqls/hhl/hhl.hpp"
#include "test_util.hpp"

using namespace gridqls;
using namespace gridqls::circuit;

namespace {

double max_abs(const CMatrix &m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("append adds gates and checks bounds") {
    Circuit c(2);
    c.append(Gate::h(0));
    CHECK(c.size() == 1);
    CHECK_THROWS_AS(c.append(Gate::h(5)), std::out_of_range);
    CHECK(c.size() == 1);
}

TEST_CASE("CX twice is the identity") {
    Circuit c(2);
    c.append(Gate::cx(0, 1)).append(Gate::cx(0, 1));
    CHECK(c.size() == 2);
    CHECK(max_abs(circuit_unitary(c) - CMatrix::Identity(4, 4)) < 1e-14);
}

TEST_CASE("append leaves earlier gates untouched") {
    std::mt19937_64 rng(7);
    Circuit c = test::random_circuit(3, 20, rng);
    const Circuit before = c;
    c.append(Gate::h(1));
    Circuit other(2);
    other.append(Gate::cx(0, 1));
    c.append(other, {2, 0});
    REQUIRE(c.size() == before.size() + 2);
    for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(c[i] == before[i]);
    }
    CHECK(c[c.size() - 1].qubits() == std::vector<Qubit>{2, 0});
}

TEST_CASE("gate construction rejects bad shapes") {
    CHECK_THROWS_AS(Gate(GateKind::CX, {0}), std::invalid_argument);
    CHECK_THROWS_AS(Gate(GateKind::RX, {0}), std::invalid_argument);
    CHECK_THROWS_AS(Gate::cx(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(Gate::unitary({0}, CMatrix::Ones(2, 2)), std::invalid_argument);
    CHECK_THROWS_AS(Gate::unitary({0, 1}, CMatrix::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("standard gate matrices") {
    const double r = 1.0 / std::sqrt(2.0);
    CMatrix h(2, 2);
    h << r, r, r, -r;
    CHECK(max_abs(gate_matrix(Gate::h(0)) - h) < 1e-15);

    CHECK(distance_up_to_phase(gate_matrix(Gate::rz(0, 0.0)), CMatrix::Identity(2, 2)) < 1e-15);

    // control q0 is index bit 0: |q1 q0> = |01> <-> |11>, i.e. indices 1 and 3
    CMatrix cx = CMatrix::Zero(4, 4);
    cx(0, 0) = cx(2, 2) = 1.0;
    cx(1, 3) = cx(3, 1) = 1.0;
    CHECK(max_abs(gate_matrix(Gate::cx(0, 1)) - cx) < 1e-15);
}

TEST_CASE("every named gate is unitary and its adjoint inverts it") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 5; ++rep) {
        for (const auto &g : test::named_gates(0, 1, rng)) {
            CAPTURE(kind_name(g.kind()));
            const CMatrix u = gate_matrix(g);
            CHECK(unitarity_defect(u) < 1e-12);
            CHECK(max_abs(gate_matrix(adjoint(g)) * u - CMatrix::Identity(u.rows(), u.cols())) < 1e-12);
        }
    }
}

TEST_CASE("kind names round-trip") {
    for (int k = 0; k <= static_cast<int>(GateKind::Unitary); ++k) {
        const auto kind = static_cast<GateKind>(k);
        CHECK(kind_from_name(kind_name(kind)) == kind);
    }
    CHECK_FALSE(kind_from_name("toffoli").has_value());
}

TEST_CASE("circuit unitary") {
    CHECK(max_abs(circuit_unitary(Circuit(2)) - CMatrix::Identity(4, 4)) == 0.0);
    Circuit hh(1);
    hh.append(Gate::h(0)).append(Gate::h(0));
    CHECK(max_abs(circuit_unitary(hh) - CMatrix::Identity(2, 2)) < 1e-15);
    CHECK_THROWS_AS(circuit_unitary(Circuit(kMaxUnitaryWidth + 1)), std::invalid_argument);
}

TEST_CASE("inverse undoes a circuit") {
    std::mt19937_64 rng(11);
    Circuit c = test::random_circuit(3, 40, rng);
    Circuit both = c;
    both.append(c.inverse());
    CHECK(max_abs(circuit_unitary(both) - CMatrix::Identity(8, 8)) < 1e-12);
}

TEST_CASE("transpile keeps basis circuits unchanged") {
    Circuit c(2);
    c.append(Gate::h(0)).append(Gate::cx(0, 1)).append(Gate::rz(1, 0.3)).append(Gate::u3(0, 0.1, 0.2, 0.3));
    REQUIRE(is_basis_circuit(c));
    const Circuit t = transpile(c);
    CHECK(t.size() == c.size());
    CHECK(t == c);
}

TEST_CASE("transpile a dense CX") {
    Circuit c(2);
    c.append(Gate::unitary({0, 1}, gate_matrix(Gate::cx(0, 1))));
    const Circuit t = transpile(c);
    CHECK(is_basis_circuit(t));
    CHECK(distance_up_to_phase(circuit_unitary(t), gate_matrix(Gate::cx(0, 1))) < 1e-8);
}

TEST_CASE("transpile a random 4x4 unitary") {
    std::mt19937_64 rng(2024);
    const CMatrix u = test::random_unitary(4, rng);
    Circuit c(2);
    c.append(Gate::unitary({0, 1}, u));
    const Circuit t = transpile(c);
    CHECK(is_basis_circuit(t));
    CHECK(distance_up_to_phase(circuit_unitary(t), u) < 1e-8);
}

TEST_CASE("transpile preserves random circuits") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        std::mt19937_64 rng(seed);
        const std::size_t width = 1 + seed % 5;
        Circuit c = test::random_circuit(width, 30, rng);
        if (width >= 3) {
            c.append(Gate::unitary({0, 1, 2}, test::random_unitary(8, rng)));
        }
        const Circuit t = transpile(c);
        CAPTURE(seed);
        CHECK(is_basis_circuit(t));
        CHECK(distance_up_to_phase(circuit_unitary(t), circuit_unitary(c)) < 1e-8);
    }
}

TEST_CASE("transpile can keep wide dense gates") {
    std::mt19937_64 rng(5);
    Circuit c(3);
    c.append(Gate::unitary({0, 1, 2}, test::random_unitary(8, rng))).append(Gate::cz(0, 1));
    TranspileOptions o;
    o.keep_dense_wider_than = 2;
    const Circuit t = transpile(c, o);
    CHECK(t[0].is_dense());
    CHECK(t[0].arity() == 3);
    CHECK(distance_up_to_phase(circuit_unitary(t), circuit_unitary(c)) < 1e-8);
}

TEST_CASE("transpiled 2x2 HHL circuit matches the original") {
    CMatrix a(2, 2);
    a << 1.5, 0.5, 0.5, 1.5;
    CVector b(2);
    b << 1.0, 0.0;
    const auto ps = prep::prepare(a, b);
    hhl::HHLOptions o;
    o.decompose_inversion = true;
    const auto built = hhl::build_hhl_circuit(ps, o);
    const Circuit t = transpile(built.circuit);
    CHECK(is_basis_circuit(t));
    CHECK(distance_up_to_phase(circuit_unitary(t), circuit_unitary(built.circuit)) < 1e-8);
}

TEST_CASE("ZYZ decomposition reproduces the matrix") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
        const CMatrix u = test::random_unitary(2, rng);
        const auto d = zyz_decompose(u);
        const CMatrix back = std::exp(cplx(0, d.alpha)) * gate_matrix(Gate::rz(0, d.beta)) *
                             gate_matrix(Gate::ry(0, d.gamma)) * gate_matrix(Gate::rz(0, d.delta));
        CHECK(max_abs(back - u) < 1e-10);
        CHECK(distance_up_to_phase(gate_matrix(u3_from_matrix(0, u)), u) < 1e-10);
        const CMatrix v = unitary_sqrt(u);
        CHECK(max_abs(v * v - u) < 1e-10);
    }
}

TEST_CASE("multi-controlled gates are exact including phase") {
    std::mt19937_64 rng(13);
    for (std::size_t k = 1; k <= 3; ++k) {
        const CMatrix u = test::random_unitary(2, rng);
        Circuit c(k + 1);
        std::vector<Control> controls;
        for (std::size_t i = 0; i < k; ++i) {
            controls.push_back({i + 1, i % 2 == 0});
        }
        append_multi_controlled(c, controls, 0, u);
        // expected: u on qubit 0 when control pattern matches
        CMatrix expected = CMatrix::Identity(std::ptrdiff_t{2} << k, std::ptrdiff_t{2} << k);
        std::size_t pattern = 0;
        for (std::size_t i = 0; i < k; ++i) {
            pattern |= (i % 2 == 0 ? std::size_t{1} : 0) << (i + 1);
        }
        for (int r = 0; r < 2; ++r) {
            for (int col = 0; col < 2; ++col) {
                expected(static_cast<Eigen::Index>(pattern | r), static_cast<Eigen::Index>(pattern | col)) = u(r, col);
            }
        }
        CAPTURE(k);
        CHECK(max_abs(circuit_unitary(c) - expected) < 1e-10);
    }
}

TEST_CASE("uniformly controlled RY matches its dense matrix") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ang(-3, 3);
    for (std::size_t k = 0; k <= 3; ++k) {
        std::vector<double> angles(std::size_t{1} << k);
        for (auto &a : angles) {
            a = ang(rng);
        }
        std::vector<Qubit> controls;
        for (std::size_t i = 0; i < k; ++i) {
            controls.push_back(i + 1);
        }
        Circuit c(k + 1);
        append_uniformly_controlled_ry(c, controls, 0, angles);
        CHECK(c.size() == (k == 0 ? 1 : 2 * angles.size()));
        CHECK(max_abs(circuit_unitary(c) - uniformly_controlled_ry_matrix(angles)) < 1e-12);
    }
}

TEST_CASE("two-level decomposition is exact") {
    std::mt19937_64 rng(19);
    for (std::size_t k = 1; k <= 3; ++k) {
        const CMatrix u = test::random_unitary(std::size_t{1} << k, rng);
        std::vector<Qubit> qubits;
        for (std::size_t i = 0; i < k; ++i) {
            qubits.push_back(k - 1 - i);
        }
        Circuit c(k);
        append_two_level_decomposition(c, qubits, u);
        CHECK(max_abs(circuit_unitary(c) - embed(u, qubits, k)) < 1e-9);
    }
}

TEST_CASE("text format round-trips bit-exactly") {
    std::mt19937_64 rng(23);
    Circuit c = test::random_circuit(4, 60, rng);
    c.set_name("demo");
    c.append(Gate::unitary({3, 0, 2}, test::random_unitary(8, rng)));
    const Circuit back = parse_circuit_text(to_text(c));
    CHECK(back == c);
    CHECK(back.name() == "demo");
}

TEST_CASE("text format parse errors carry line numbers") {
    CHECK(parse_circuit_text("# comment\ncircuit 2\nh 0\ncx 0 1\n").size() == 2);
    try {
        parse_circuit_text("circuit 2\nH 0\nFOO 1\n");
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_circuit_text("circuit 2\nH 4\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit_text("H 0\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit_text("circuit 1\nRX 0\n"), ParseError);
}
