#include "gridqls/svsim/state_vector.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

#include "gridqls/error.hpp"

namespace gridqls::svsim {

StateVector::StateVector(std::size_t n_qubits, std::size_t max_qubits) : n_qubits_(n_qubits) {
    if (n_qubits == 0 || n_qubits > max_qubits) {
        throw std::invalid_argument("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                                    std::to_string(max_qubits) + "]");
    }
    amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amps) {
    if (amps.size() < 2 || !is_power_of_two(amps.size())) {
        throw std::invalid_argument("amplitude count must be a power of two >= 2");
    }
    StateVector s;
    s.n_qubits_ = log2_floor(amps.size());
    s.amps_ = std::move(amps);
    return s;
}

CVector StateVector::to_eigen() const {
    return Eigen::Map<const CVector>(amps_.data(), static_cast<Eigen::Index>(amps_.size()));
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

void run_on(StateVector &state, const Circuit &circuit) {
    if (circuit.width() > state.n_qubits()) {
        throw std::invalid_argument("circuit is wider than the state");
    }
    for (const auto &g : circuit.gates()) {
        apply_gate(state, g);
    }
}

StateVector run(const Circuit &circuit, std::size_t max_qubits) {
    StateVector state(circuit.width(), max_qubits);
    run_on(state, circuit);
    return state;
}

std::vector<double> marginal_probabilities(const StateVector &state, std::span<const Qubit> qubits) {
    if (qubits.empty()) {
        throw std::invalid_argument("qubit subset must be non-empty");
    }
    std::vector<Qubit> seen(qubits.begin(), qubits.end());
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end() || seen.back() >= state.n_qubits()) {
        throw std::invalid_argument("qubit subset has repeated or out-of-range indices");
    }
    std::vector<double> out(std::size_t{1} << qubits.size(), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        std::size_t v = 0;
        for (std::size_t i = 0; i < qubits.size(); ++i) {
            v |= ((idx >> qubits[i]) & 1U) << i;
        }
        out[v] += std::norm(amps[idx]);
    }
    return out;
}

std::string to_bitstring(std::uint64_t value, std::size_t width) {
    std::string s(width, '0');
    for (std::size_t i = 0; i < width; ++i) {
        if ((value >> i) & 1U) {
            s[width - 1 - i] = '1';
        }
    }
    return s;
}

std::map<std::string, double> probabilities(const StateVector &state, std::span<const Qubit> qubits) {
    const auto dense = marginal_probabilities(state, qubits);
    std::map<std::string, double> out;
    for (std::size_t v = 0; v < dense.size(); ++v) {
        if (dense[v] > 0.0) {
            out.emplace(to_bitstring(v, qubits.size()), dense[v]);
        }
    }
    return out;
}

std::pair<StateVector, double> postselect(const StateVector &state, Qubit qubit, bool outcome) {
    if (qubit >= state.n_qubits()) {
        throw std::out_of_range("postselect qubit out of range");
    }
    std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
    const std::size_t bit = std::size_t{1} << qubit;
    double prob = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (((i & bit) != 0) == outcome) {
            prob += std::norm(amps[i]);
        } else {
            amps[i] = 0.0;
        }
    }
    if (prob <= 1e-12) {
        throw PrecisionError("post-selection outcome has probability " + std::to_string(prob));
    }
    const double scale = 1.0 / std::sqrt(prob);
    for (auto &a : amps) {
        a *= scale;
    }
    return {StateVector::from_amplitudes(std::move(amps)), prob};
}

MeasurementResult sample(const StateVector &state, std::size_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw std::invalid_argument("shots must be >= 1");
    }
    const auto amps = state.amplitudes();
    std::vector<double> cdf(amps.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        acc += std::norm(amps[i]);
        cdf[i] = acc;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, acc);
    std::vector<std::size_t> hits(amps.size(), 0);
    for (std::size_t s = 0; s < shots; ++s) {
        const double u = uni(rng);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        // skip zero-probability entries sharing the same cdf value
        auto idx = static_cast<std::size_t>(it - cdf.begin());
        while (idx > 0 && std::norm(amps[idx]) == 0.0) {
            --idx;
        }
        ++hits[idx];
    }
    MeasurementResult r;
    r.shots = shots;
    r.seed = seed;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (hits[i]) {
            r.counts.emplace(to_bitstring(i, state.n_qubits()), hits[i]);
        }
    }
    return r;
}

namespace {

template <typename T> void put_le(std::ostream &out, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(buf, buf + sizeof(T));
    }
    out.write(reinterpret_cast<const char *>(buf), sizeof(T));
}

template <typename T> T get_le(std::istream &in) {
    unsigned char buf[sizeof(T)];
    if (!in.read(reinterpret_cast<char *>(buf), sizeof(T))) {
        throw ParseError("statevector dump truncated");
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(buf, buf + sizeof(T));
    }
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

} // namespace

void write_binary(const StateVector &state, std::ostream &out) {
    put_le<std::uint64_t>(out, state.size());
    for (const auto &a : state.amplitudes()) {
        put_le<double>(out, a.real());
        put_le<double>(out, a.imag());
    }
}

StateVector read_binary(std::istream &in) {
    const auto n = get_le<std::uint64_t>(in);
    if (n < 2 || !is_power_of_two(n) || n > (std::uint64_t{1} << kDefaultMaxQubits)) {
        throw ParseError("statevector dump has invalid amplitude count " + std::to_string(n));
    }
    std::vector<cplx> amps(n);
    for (auto &a : amps) {
        const double re = get_le<double>(in);
        const double im = get_le<double>(in);
        a = {re, im};
    }
    return StateVector::from_amplitudes(std::move(amps));
}

} // namespace gridqls::svsim
