#include <doctest.h>

#include <sstream>

#include "gridqls/error.hpp"
#include "gridqls/svsim/state_vector.hpp"
#include "test_util.hpp"

using namespace gridqls;
using namespace gridqls::svsim;
using circuit::Circuit;
using circuit::Gate;

namespace {

double distance(const StateVector &s, const CVector &v) { return (s.to_eigen() - v).cwiseAbs().maxCoeff(); }

Circuit bell() {
    Circuit c(2, "bell");
    c.append(Gate::h(0)).append(Gate::cx(0, 1));
    return c;
}

} // namespace

TEST_CASE("initial state") {
    StateVector one(1);
    CHECK(one.size() == 2);
    CHECK(one[0] == cplx(1.0));
    CHECK(one[1] == cplx(0.0));
    StateVector three = init_state(3);
    CHECK(three.size() == 8);
    CHECK(three[0] == cplx(1.0));
    CHECK_THROWS_AS(StateVector(0), std::invalid_argument);
    CHECK_THROWS_AS(StateVector(5, 4), std::invalid_argument);
}

TEST_CASE("H on |0>") {
    StateVector s(1);
    apply_gate(s, Gate::h(0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s[0] - r) < 1e-15);
    CHECK(std::abs(s[1] - r) < 1e-15);
}

TEST_CASE("Bell state") {
    const auto s = run(bell());
    const double r = 1.0 / std::sqrt(2.0);
    CVector expected(4);
    expected << r, 0, 0, r;
    CHECK(distance(s, expected) < 1e-15);
    CHECK(distance(run(Circuit(2)), test::zero_state(2)) == 0.0);
}

TEST_CASE("run matches the dense circuit unitary") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(seed);
        const Circuit c = test::random_circuit(4, seed == 0 ? 5 : 40, rng);
        CHECK(distance(run(c), circuit::circuit_unitary(c) * test::zero_state(4)) < 1e-10);
    }
}

TEST_CASE("specialised kernels agree with the dense kernel and the embedded matrix") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        std::mt19937_64 rng(seed);
        const std::size_t n = 2 + seed % 5;
        std::uniform_int_distribution<Qubit> q(0, n - 1);
        const Qubit a = q(rng);
        Qubit b = q(rng);
        while (b == a) {
            b = q(rng);
        }
        const auto start = test::random_state(n, rng);
        for (const auto &g : test::named_gates(a, b, rng)) {
            CAPTURE(circuit::kind_name(g.kind()));
            StateVector fast = start;
            apply_gate(fast, g);
            StateVector dense = start;
            apply_matrix(dense, g.qubits(), circuit::gate_matrix(g));
            const CVector oracle = circuit::embed(circuit::gate_matrix(g), g.qubits(), n) * start.to_eigen();
            CHECK(distance(fast, dense.to_eigen()) < 1e-12);
            CHECK(distance(fast, oracle) < 1e-12);
            CHECK(std::abs(fast.norm_squared() - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("dense gates on arbitrary qubit orders") {
    std::mt19937_64 rng(31);
    const auto start = test::random_state(5, rng);
    for (const std::vector<Qubit> &qs : {std::vector<Qubit>{3}, {4, 1}, {0, 4, 2}, {2, 0, 3, 1}}) {
        const CMatrix u = test::random_unitary(std::size_t{1} << qs.size(), rng);
        StateVector s = start;
        apply_gate(s, Gate::unitary(qs, u));
        CHECK(distance(s, circuit::embed(u, qs, 5) * start.to_eigen()) < 1e-12);
    }
}

TEST_CASE("norm is preserved by long random circuits") {
    for (std::uint64_t seed = 100; seed < 105; ++seed) {
        std::mt19937_64 rng(seed);
        StateVector s = test::random_state(6, rng);
        run_on(s, test::random_circuit(6, 300, rng));
        CHECK(std::abs(s.norm_squared() - 1.0) < 1e-9);
    }
}

TEST_CASE("thread count does not change results") {
    std::mt19937_64 rng(41);
    const Circuit c = test::random_circuit(12, 80, rng);
    const int before = thread_count();
    set_thread_count(1);
    const auto one = run(c).to_eigen();
    set_thread_count(4);
    const auto four = run(c).to_eigen();
    set_thread_count(before);
    CHECK((one - four).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("probabilities over subsets") {
    const auto s = run(bell());
    const std::vector<Qubit> q0{0};
    auto p = probabilities(s, q0);
    CHECK(p.size() == 2);
    CHECK(p["0"] == doctest::Approx(0.5));
    CHECK(p["1"] == doctest::Approx(0.5));
    const std::vector<Qubit> both{0, 1};
    auto z = probabilities(StateVector(2), both);
    CHECK(z.size() == 1);
    CHECK(z["00"] == doctest::Approx(1.0));
}

TEST_CASE("marginals agree with grouped full distribution") {
    std::mt19937_64 rng(43);
    const auto s = test::random_state(5, rng);
    const std::vector<Qubit> subset{3, 0, 4};
    const auto marg = marginal_probabilities(s, subset);
    std::vector<double> grouped(8, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::size_t key = 0;
        for (std::size_t j = 0; j < subset.size(); ++j) {
            key |= ((i >> subset[j]) & 1U) << j;
        }
        grouped[key] += std::norm(s[i]);
    }
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(marg[k] == doctest::Approx(grouped[k]).epsilon(1e-12));
    }
}

TEST_CASE("bitstrings put the first listed qubit rightmost") {
    CHECK(to_bitstring(1, 3) == "001");
    CHECK(to_bitstring(6, 3) == "110");
}

TEST_CASE("postselection") {
    const auto [post, p] = postselect(run(bell()), 0, false);
    CHECK(p == doctest::Approx(0.5));
    CHECK(std::abs(post[0] - 1.0) < 1e-12);
    CHECK(std::abs(post.norm_squared() - 1.0) < 1e-12);

    StateVector one(1);
    apply_gate(one, Gate::x(0));
    CHECK_THROWS_AS(postselect(one, 0, false), PrecisionError);
}

TEST_CASE("sampling") {
    auto zero = sample(StateVector(1), 100, 1);
    CHECK(zero.counts.size() == 1);
    CHECK(zero.counts["0"] == 100);

    const auto s = run(bell());
    auto m = sample(s, 10000, 2024);
    CHECK(m.shots == 10000);
    CHECK(m.counts.count("01") == 0);
    CHECK(m.counts.count("10") == 0);
    const double sigma = std::sqrt(10000 * 0.25);
    CHECK(std::abs(static_cast<double>(m.counts["00"]) - 5000.0) < 5 * sigma);
    CHECK(std::abs(static_cast<double>(m.counts["11"]) - 5000.0) < 5 * sigma);

    CHECK(sample(s, 500, 77).counts == sample(s, 500, 77).counts);
}

TEST_CASE("binary state dump round-trips") {
    std::mt19937_64 rng(47);
    const auto s = test::random_state(4, rng);
    std::stringstream buf;
    write_binary(s, buf);
    const auto back = read_binary(buf);
    CHECK(back.to_eigen() == s.to_eigen());
}

TEST_CASE("two-qubit gates that keep one qubit take the block path correctly") {
    std::mt19937_64 rng(53);
    const auto start = test::random_state(4, rng);
    for (int keep = 0; keep < 2; ++keep) {
        for (bool real : {false, true}) {
            CMatrix a = test::random_unitary(2, rng), b = test::random_unitary(2, rng);
            if (real) {
                a = circuit::gate_matrix(Gate::ry(0, 0.7));
                b = circuit::gate_matrix(Gate::ry(0, -1.9)) * circuit::gate_matrix(Gate::x(0));
            }
            // |0><0| (x) a + |1><1| (x) b with the kept qubit as gate-local bit `keep`
            CMatrix m = CMatrix::Zero(4, 4);
            for (int v = 0; v < 2; ++v) {
                const CMatrix &blk = v ? b : a;
                for (int r = 0; r < 2; ++r) {
                    for (int c = 0; c < 2; ++c) {
                        const int ri = keep == 0 ? (v | r << 1) : (r | v << 1);
                        const int ci = keep == 0 ? (v | c << 1) : (c | v << 1);
                        m(ri, ci) = blk(r, c);
                    }
                }
            }
            for (const std::vector<Qubit> &qs : {std::vector<Qubit>{1, 3}, {3, 0}}) {
                StateVector s = start;
                apply_gate(s, Gate::unitary(qs, m));
                CHECK(distance(s, circuit::embed(m, qs, 4) * start.to_eigen()) < 1e-12);
            }
        }
    }
}
