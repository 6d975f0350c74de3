#pragma once

#include <cmath>
#include <random>
#include <string>

#include "gridqls/circuit/circuit.hpp"
#include "gridqls/svsim/state_vector.hpp"

namespace gridqls::test {

inline std::string data_path(const std::string &file) { return std::string(GRIDQLS_DATA_DIR) + "/" + file; }

inline CMatrix random_complex(std::size_t rows, std::size_t cols, std::mt19937_64 &rng) {
    std::normal_distribution<double> n;
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = {n(rng), n(rng)};
    }
    return m;
}

inline CMatrix random_unitary(std::size_t dim, std::mt19937_64 &rng) {
    Eigen::HouseholderQR<CMatrix> qr(random_complex(dim, dim, rng));
    return qr.householderQ();
}

inline CVector random_unit(std::size_t dim, std::mt19937_64 &rng) {
    CVector v = random_complex(dim, 1, rng);
    return v / v.norm();
}

inline svsim::StateVector random_state(std::size_t n, std::mt19937_64 &rng) {
    const CVector v = random_unit(std::size_t{1} << n, rng);
    return svsim::StateVector::from_amplitudes(std::vector<cplx>(v.data(), v.data() + v.size()));
}

/// Every named gate kind on the given qubits (a, b distinct), with angles.
inline std::vector<circuit::Gate> named_gates(Qubit a, Qubit b, std::mt19937_64 &rng) {
    using circuit::Gate;
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    return {Gate::h(a),         Gate::x(a),          Gate::y(a),         Gate::z(a),
            Gate::s(a),         Gate::sdg(a),        Gate::t(a),         Gate::tdg(a),
            Gate::rx(a, ang(rng)), Gate::ry(a, ang(rng)), Gate::rz(a, ang(rng)), Gate::phase(a, ang(rng)),
            Gate::u3(a, ang(rng), ang(rng), ang(rng)), Gate::cx(a, b), Gate::cx(b, a), Gate::cz(a, b),
            Gate::cphase(a, b, ang(rng)), Gate::swap(a, b)};
}

/// Random circuit of named and small dense gates.
inline circuit::Circuit random_circuit(std::size_t width, std::size_t gates, std::mt19937_64 &rng,
                                       bool with_dense = true) {
    circuit::Circuit c(width, "random");
    std::uniform_int_distribution<Qubit> q(0, width - 1);
    std::uniform_int_distribution<int> pick(0, 19);
    for (std::size_t i = 0; i < gates; ++i) {
        const Qubit a = q(rng);
        Qubit b = q(rng);
        while (width > 1 && b == a) {
            b = q(rng);
        }
        const int k = pick(rng);
        if (width > 1 && with_dense && k >= 18) {
            c.append(circuit::Gate::unitary({a, b}, random_unitary(4, rng)));
        } else {
            // the first 13 kinds act on one qubit
            const Qubit other = width > 1 ? b : (a + 1);
            auto all = named_gates(a, other, rng);
            c.append(all[static_cast<std::size_t>(k) % (width > 1 ? all.size() : 13)]);
        }
    }
    return c;
}

inline CVector zero_state(std::size_t n) {
    CVector v = CVector::Zero(std::ptrdiff_t{1} << n);
    v(0) = 1.0;
    return v;
}

} // namespace gridqls::test
