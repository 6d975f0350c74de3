#include <doctest.h>

#include "gridqls/circuit/transpile.hpp"
#include "gridqls/cli/report.hpp"
#include "gridqls/fusion/fusion.hpp"
#include "test_util.hpp"

using namespace gridqls;
using namespace gridqls::fusion;
using circuit::Circuit;
using circuit::Gate;

namespace {

double state_distance(const Circuit &a, const Circuit &b) {
    return circuit::distance_up_to_phase(svsim::run(a).to_eigen(), svsim::run(b).to_eigen());
}

std::size_t count(const FusionReport &r, Strategy s) { return r.fusions_by_strategy[static_cast<std::size_t>(s)]; }

} // namespace

TEST_CASE("H H fuses to the identity") {
    Circuit c(1);
    c.append(Gate::h(0)).append(Gate::h(0));
    const auto r = fuse(c);
    REQUIRE(r.circuit.size() == 1);
    CHECK(r.circuit[0].arity() == 1);
    CHECK((circuit::gate_matrix(r.circuit[0]) - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(r.report.gates_before == 2);
    CHECK(r.report.gates_after == 1);
    CHECK(count(r.report, Strategy::OneQubitPair) == 1);
    CHECK(r.report.total_fusions() == 1);
}

TEST_CASE("RZ CX RZ fuses to one two-qubit gate") {
    Circuit c(2);
    c.append(Gate::rz(0, 0.3)).append(Gate::cx(0, 1)).append(Gate::rz(1, -1.1));
    const auto r = fuse(c);
    REQUIRE(r.circuit.size() == 1);
    CHECK(r.circuit[0].arity() == 2);
    CHECK((circuit::circuit_unitary(r.circuit) - circuit::circuit_unitary(c)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(r.report.gates_before == 3);
    CHECK(r.report.gates_after == 1);
}

TEST_CASE("one-qubit pairs fire before two-qubit pairs") {
    // both strategies apply: H H on q0 and CX CX on (0,1)
    Circuit c(2);
    c.append(Gate::h(0)).append(Gate::h(0)).append(Gate::cx(0, 1)).append(Gate::cx(0, 1));
    const auto r = fuse(c);
    REQUIRE_FALSE(r.report.trace.empty());
    CHECK(r.report.trace.front() == Strategy::OneQubitPair);
    CHECK(count(r.report, Strategy::OneQubitPair) == 1);
    CHECK(r.circuit.size() == 1);
    CHECK(state_distance(r.circuit, c) < 1e-12);
}

TEST_CASE("two-qubit pairs with reversed qubit order") {
    std::mt19937_64 rng(1);
    Circuit c(2);
    c.append(Gate::unitary({0, 1}, test::random_unitary(4, rng)))
        .append(Gate::unitary({1, 0}, test::random_unitary(4, rng)));
    const auto r = fuse(c);
    CHECK(r.circuit.size() == 1);
    CHECK(count(r.report, Strategy::TwoQubitPair) == 1);
    CHECK((circuit::circuit_unitary(r.circuit) - circuit::circuit_unitary(c)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gates on more than two qubits are barriers") {
    std::mt19937_64 rng(2);
    Circuit c(3);
    c.append(Gate::h(0)).append(Gate::unitary({0, 1, 2}, test::random_unitary(8, rng))).append(Gate::h(0));
    const auto r = fuse(c);
    CHECK(r.report.barriers == 1);
    CHECK(r.circuit.size() == 3);
    CHECK(r.circuit[1].arity() == 3);
    CHECK(state_distance(r.circuit, c) < 1e-12);
}

TEST_CASE("fusion preserves random circuits") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        std::mt19937_64 rng(seed);
        const std::size_t width = 1 + seed % 6;
        const std::size_t gates = 10 + (seed * 37) % 190;
        const Circuit c = test::random_circuit(width, gates, rng);
        const auto r = fuse(c);
        CAPTURE(seed);
        const CVector a = svsim::run(c).to_eigen();
        const CVector b = svsim::run(r.circuit).to_eigen();
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(r.report.gates_after <= r.report.gates_before);
        CHECK(r.report.gates_before - r.report.gates_after == r.report.total_fusions());
        CHECK(r.report.trace.size() == r.report.total_fusions());
        CHECK(r.report.depth_after <= r.report.depth_before);
    }
}

TEST_CASE("fusion is idempotent") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(seed);
        const auto once = fuse(test::random_circuit(4, 100, rng));
        const auto twice = fuse(once.circuit);
        CHECK(twice.report.total_fusions() == 0);
        CHECK(twice.circuit.size() == once.circuit.size());
    }
}

TEST_CASE("adjacent one-qubit gates always shrink the circuit") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(seed);
        Circuit c = test::random_circuit(3, 20, rng);
        c.append(Gate::t(2)).append(Gate::s(2));
        CHECK(fuse(c).report.gates_after < c.size());
    }
}

TEST_CASE("fused circuits are tagged") {
    Circuit c(1);
    c.append(Gate::h(0));
    const auto tags = fuse(c).circuit.tags();
    CHECK(std::find(tags.begin(), tags.end(), "fused") != tags.end());
}

TEST_CASE("depth") {
    CHECK(depth(Circuit(2)) == 0);
    Circuit par(2);
    par.append(Gate::h(0)).append(Gate::h(1));
    CHECK(depth(par) == 1);
    Circuit chain(2);
    chain.append(Gate::h(0)).append(Gate::cx(0, 1)).append(Gate::h(1));
    CHECK(depth(chain) == 3);
}

TEST_CASE("transpiled 2x2 HHL circuit shrinks substantially") {
    const Circuit c = cli::transpiled_demo_circuit(2, 1);
    REQUIRE(circuit::is_basis_circuit(c));
    const auto r = fuse(c);
    CHECK(r.report.reduction() >= 0.6);
    CHECK((svsim::run(c).to_eigen() - svsim::run(r.circuit).to_eigen()).cwiseAbs().maxCoeff() < 1e-10);
}
