#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace gridqls {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

using Qubit = std::size_t;

inline constexpr double kPi = 3.14159265358979323846;

/// True when n is a positive power of two.
constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// floor(log2(n)) for n >= 1.
constexpr std::size_t log2_floor(std::size_t n) {
    std::size_t r = 0;
    while (n >>= 1) {
        ++r;
    }
    return r;
}

/// Smallest power of two >= n (n >= 1).
constexpr std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

} // namespace gridqls
