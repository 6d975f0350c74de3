#include <algorithm>
#include <array>
#include <type_traits>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gridqls/svsim/state_vector.hpp"

namespace gridqls::svsim {

using circuit::GateKind;

namespace {

using index_t = std::int64_t;

// Below this many loop iterations threads are not worth waking.
constexpr index_t kParallelThreshold = index_t{1} << 14;

inline std::size_t insert_zero(std::size_t i, std::size_t bit) {
    const std::size_t low = i & ((std::size_t{1} << bit) - 1);
    return ((i >> bit) << (bit + 1)) | low;
}

inline std::size_t insert_zeros(std::size_t i, std::size_t lo, std::size_t hi) {
    return insert_zero(insert_zero(i, lo), hi);
}

template <typename F> void for_pairs(StateVector &s, Qubit q, F &&f) {
    cplx *a = s.amplitudes().data();
    const std::size_t bit = std::size_t{1} << q;
    const auto n = static_cast<index_t>(s.size() / 2);
    if (n >= kParallelThreshold) {
#pragma omp parallel for
        for (index_t i = 0; i < n; ++i) {
            const std::size_t i0 = insert_zero(static_cast<std::size_t>(i), q);
            f(a[i0], a[i0 | bit]);
        }
        return;
    }
    // serial: contiguous runs of 2^q pairs, which the compiler can vectorise
    for (std::size_t blk = 0; blk < s.size(); blk += 2 * bit) {
        cplx *lo = a + blk;
        cplx *hi = lo + bit;
        for (std::size_t j = 0; j < bit; ++j) {
            f(lo[j], hi[j]);
        }
    }
}

// Visit the four amplitudes of a two-qubit group as (q0q1 = 00, 10, 01, 11)
// where the first bit is qubit `q0`.
template <typename F> void for_quads(StateVector &s, Qubit q0, Qubit q1, F &&f) {
    cplx *a = s.amplitudes().data();
    const std::size_t b0 = std::size_t{1} << q0;
    const std::size_t b1 = std::size_t{1} << q1;
    const std::size_t lo = std::min(q0, q1), hi = std::max(q0, q1);
    const auto n = static_cast<index_t>(s.size() / 4);
    if (n >= kParallelThreshold) {
#pragma omp parallel for
        for (index_t i = 0; i < n; ++i) {
            const std::size_t base = insert_zeros(static_cast<std::size_t>(i), lo, hi);
            f(a[base], a[base | b0], a[base | b1], a[base | b0 | b1]);
        }
        return;
    }
    const std::size_t lbit = std::size_t{1} << lo, hbit = std::size_t{1} << hi;
    for (std::size_t outer = 0; outer < s.size(); outer += 2 * hbit) {
        for (std::size_t mid = outer; mid < outer + hbit; mid += 2 * lbit) {
            cplx *p = a + mid;
            for (std::size_t j = 0; j < lbit; ++j) {
                f(p[j], p[j + b0], p[j + b1], p[j + b0 + b1]);
            }
        }
    }
}

void apply_1q_matrix(StateVector &s, Qubit q, cplx m00, cplx m01, cplx m10, cplx m11) {
    for_pairs(s, q, [=](cplx &x, cplx &y) {
        const cplx a = x, b = y;
        x = m00 * a + m01 * b;
        y = m10 * a + m11 * b;
    });
}

void apply_diag_1(StateVector &s, Qubit q, cplx d) {
    cplx *a = s.amplitudes().data();
    const std::size_t bit = std::size_t{1} << q;
    const auto n = static_cast<index_t>(s.size() / 2);
#pragma omp parallel for if (n >= kParallelThreshold)
    for (index_t i = 0; i < n; ++i) {
        a[insert_zero(static_cast<std::size_t>(i), q) | bit] *= d;
    }
}

void check_qubits(const StateVector &s, const std::vector<Qubit> &qubits) {
    for (auto q : qubits) {
        if (q >= s.n_qubits()) {
            throw std::out_of_range("gate qubit " + std::to_string(q) + " out of range for " +
                                    std::to_string(s.n_qubits()) + "-qubit state");
        }
    }
}

struct SparseRows {
    std::vector<std::uint32_t> start;
    std::vector<std::uint32_t> col;
    std::vector<cplx> val;
};

SparseRows sparsify(const CMatrix &m) {
    SparseRows sr;
    sr.start.reserve(static_cast<std::size_t>(m.rows()) + 1);
    sr.start.push_back(0);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (m(r, c) != cplx{0.0, 0.0}) {
                sr.col.push_back(static_cast<std::uint32_t>(c));
                sr.val.push_back(m(r, c));
            }
        }
        sr.start.push_back(static_cast<std::uint32_t>(sr.col.size()));
    }
    return sr;
}

// Two-qubit matrices that leave one qubit's value alone, i.e. a controlled
// pair |0><0| (x) A + |1><1| (x) B, such as a CX with one-qubit gates fused
// onto its target: two 2x2 products per group instead of one 4x4, with real
// coefficients when the matrix is real. Returns false for other matrices.
template <typename T>
void apply_block_pair(StateVector &s, Qubit q0, Qubit q1, const CMatrix &m, bool keeps_q0) {
    // gate-local indices of the two blocks: (lo, hi) pairs differ in the other qubit
    const int step = keeps_q0 ? 2 : 1;
    const int first[2] = {0, keeps_q0 ? 1 : 2};
    T b[2][4];
    for (int v = 0; v < 2; ++v) {
        const int lo = first[v], hi = first[v] + step;
        const cplx e[4] = {m(lo, lo), m(lo, hi), m(hi, lo), m(hi, hi)};
        for (int k = 0; k < 4; ++k) {
            if constexpr (std::is_same_v<T, double>) {
                b[v][k] = e[k].real();
            } else {
                b[v][k] = e[k];
            }
        }
    }
    const T a00 = b[0][0], a01 = b[0][1], a10 = b[0][2], a11 = b[0][3];
    const T c00 = b[1][0], c01 = b[1][1], c10 = b[1][2], c11 = b[1][3];
    auto pair = [](cplx &x, cplx &y, T m00, T m01, T m10, T m11) {
        const cplx u = x, w = y;
        x = m00 * u + m01 * w;
        y = m10 * u + m11 * w;
    };
    if (keeps_q0) {
        for_quads(s, q0, q1, [=](cplx &x0, cplx &x1, cplx &x2, cplx &x3) {
            pair(x0, x2, a00, a01, a10, a11);
            pair(x1, x3, c00, c01, c10, c11);
        });
    } else {
        for_quads(s, q0, q1, [=](cplx &x0, cplx &x1, cplx &x2, cplx &x3) {
            pair(x0, x1, a00, a01, a10, a11);
            pair(x2, x3, c00, c01, c10, c11);
        });
    }
}

bool apply_2q_structured(StateVector &s, Qubit q0, Qubit q1, const CMatrix &m) {
    auto keeps = [&m](int bit) {
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                if (((r ^ c) & bit) && m(r, c) != cplx{0.0, 0.0}) {
                    return false;
                }
            }
        }
        return true;
    };
    const bool k0 = keeps(1);
    if (!k0 && !keeps(2)) {
        return false;
    }
    if (m.imag().isZero(0.0)) {
        apply_block_pair<double>(s, q0, q1, m, k0);
    } else {
        apply_block_pair<cplx>(s, q0, q1, m, k0);
    }
    return true;
}

} // namespace

void apply_matrix(StateVector &state, const std::vector<Qubit> &qubits, const CMatrix &matrix) {
    check_qubits(state, qubits);
    const std::size_t k = qubits.size();
    const std::size_t dim = std::size_t{1} << k;
    if (static_cast<std::size_t>(matrix.rows()) != dim || static_cast<std::size_t>(matrix.cols()) != dim) {
        throw std::invalid_argument("matrix size does not match qubit count");
    }
    std::vector<std::size_t> offsets(dim, 0);
    for (std::size_t l = 0; l < dim; ++l) {
        for (std::size_t i = 0; i < k; ++i) {
            if (l & (std::size_t{1} << i)) {
                offsets[l] |= std::size_t{1} << qubits[i];
            }
        }
    }
    std::vector<Qubit> sorted = qubits;
    std::sort(sorted.begin(), sorted.end());

    const std::size_t nnz = static_cast<std::size_t>((matrix.array() != cplx{0.0, 0.0}).count());
    const bool sparse = 2 * nnz <= dim * dim;
    const SparseRows sr = sparse ? sparsify(matrix) : SparseRows{};
    // row-major copy for the dense path
    std::vector<cplx> rows;
    if (!sparse) {
        rows.resize(dim * dim);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                rows[r * dim + c] = matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            }
        }
    }

    cplx *a = state.amplitudes().data();
    const auto groups = static_cast<index_t>(state.size() >> k);
#pragma omp parallel if (groups * static_cast<index_t>(dim) >= kParallelThreshold)
    {
        std::vector<cplx> in(dim), out(dim);
#pragma omp for
        for (index_t g = 0; g < groups; ++g) {
            std::size_t base = static_cast<std::size_t>(g);
            for (auto q : sorted) {
                base = insert_zero(base, q);
            }
            for (std::size_t l = 0; l < dim; ++l) {
                in[l] = a[base | offsets[l]];
            }
            if (sparse) {
                for (std::size_t r = 0; r < dim; ++r) {
                    cplx acc{0.0, 0.0};
                    for (auto p = sr.start[r]; p < sr.start[r + 1]; ++p) {
                        acc += sr.val[p] * in[sr.col[p]];
                    }
                    out[r] = acc;
                }
            } else {
                for (std::size_t r = 0; r < dim; ++r) {
                    const cplx *row = rows.data() + r * dim;
                    cplx acc{0.0, 0.0};
                    for (std::size_t c = 0; c < dim; ++c) {
                        acc += row[c] * in[c];
                    }
                    out[r] = acc;
                }
            }
            for (std::size_t l = 0; l < dim; ++l) {
                a[base | offsets[l]] = out[l];
            }
        }
    }
}

void apply_gate(StateVector &state, const Gate &gate) {
    check_qubits(state, gate.qubits());
    const auto &q = gate.qubits();
    const auto &p = gate.params();
    const cplx i{0.0, 1.0};
    switch (gate.kind()) {
    case GateKind::H: {
        const double r = 1.0 / std::sqrt(2.0);
        for_pairs(state, q[0], [r](cplx &x, cplx &y) {
            const cplx a = x, b = y;
            x = r * (a + b);
            y = r * (a - b);
        });
        return;
    }
    case GateKind::X:
        for_pairs(state, q[0], [](cplx &x, cplx &y) { std::swap(x, y); });
        return;
    case GateKind::Y:
        for_pairs(state, q[0], [](cplx &x, cplx &y) {
            const cplx a = x;
            x = cplx{y.imag(), -y.real()};  // -i * y
            y = cplx{-a.imag(), a.real()};  //  i * a
        });
        return;
    case GateKind::Z:
        apply_diag_1(state, q[0], -1.0);
        return;
    case GateKind::S:
        apply_diag_1(state, q[0], i);
        return;
    case GateKind::Sdg:
        apply_diag_1(state, q[0], -i);
        return;
    case GateKind::T:
        apply_diag_1(state, q[0], std::polar(1.0, kPi / 4));
        return;
    case GateKind::Tdg:
        apply_diag_1(state, q[0], std::polar(1.0, -kPi / 4));
        return;
    case GateKind::Phase:
        apply_diag_1(state, q[0], std::polar(1.0, p[0]));
        return;
    case GateKind::RZ: {
        const cplx d0 = std::polar(1.0, -p[0] / 2), d1 = std::polar(1.0, p[0] / 2);
        for_pairs(state, q[0], [=](cplx &x, cplx &y) {
            x *= d0;
            y *= d1;
        });
        return;
    }
    case GateKind::RY: {
        const double c = std::cos(p[0] / 2), s = std::sin(p[0] / 2);
        for_pairs(state, q[0], [=](cplx &x, cplx &y) {
            const cplx a = x, b = y;
            x = c * a - s * b;
            y = s * a + c * b;
        });
        return;
    }
    case GateKind::RX: {
        const double c = std::cos(p[0] / 2), s = std::sin(p[0] / 2);
        const cplx mis{0.0, -s};
        for_pairs(state, q[0], [=](cplx &x, cplx &y) {
            const cplx a = x, b = y;
            x = c * a + mis * b;
            y = mis * a + c * b;
        });
        return;
    }
    case GateKind::U3: {
        const CMatrix m = circuit::gate_matrix(gate);
        apply_1q_matrix(state, q[0], m(0, 0), m(0, 1), m(1, 0), m(1, 1));
        return;
    }
    case GateKind::CX:
        for_quads(state, q[0], q[1], [](cplx &, cplx &a10, cplx &, cplx &a11) { std::swap(a10, a11); });
        return;
    case GateKind::CZ:
        for_quads(state, q[0], q[1], [](cplx &, cplx &, cplx &, cplx &a11) { a11 = -a11; });
        return;
    case GateKind::CPhase: {
        const cplx d = std::polar(1.0, p[0]);
        for_quads(state, q[0], q[1], [d](cplx &, cplx &, cplx &, cplx &a11) { a11 *= d; });
        return;
    }
    case GateKind::SWAP:
        for_quads(state, q[0], q[1], [](cplx &, cplx &a10, cplx &a01, cplx &) { std::swap(a10, a01); });
        return;
    case GateKind::Unitary: {
        const auto &m = gate.dense();
        if (gate.arity() == 1) {
            apply_1q_matrix(state, q[0], m(0, 0), m(0, 1), m(1, 0), m(1, 1));
        } else if (gate.arity() == 2 && apply_2q_structured(state, q[0], q[1], m)) {
            return;
        } else if (gate.arity() == 2) {
            const cplx m00 = m(0, 0), m01 = m(0, 1), m02 = m(0, 2), m03 = m(0, 3);
            const cplx m10 = m(1, 0), m11 = m(1, 1), m12 = m(1, 2), m13 = m(1, 3);
            const cplx m20 = m(2, 0), m21 = m(2, 1), m22 = m(2, 2), m23 = m(2, 3);
            const cplx m30 = m(3, 0), m31 = m(3, 1), m32 = m(3, 2), m33 = m(3, 3);
            for_quads(state, q[0], q[1], [=](cplx &a0, cplx &a1, cplx &a2, cplx &a3) {
                const cplx x0 = a0, x1 = a1, x2 = a2, x3 = a3;
                a0 = m00 * x0 + m01 * x1 + m02 * x2 + m03 * x3;
                a1 = m10 * x0 + m11 * x1 + m12 * x2 + m13 * x3;
                a2 = m20 * x0 + m21 * x1 + m22 * x2 + m23 * x3;
                a3 = m30 * x0 + m31 * x1 + m32 * x2 + m33 * x3;
            });
        } else {
            apply_matrix(state, q, m);
        }
        return;
    }
    }
    throw std::logic_error("unknown gate kind");
}

void set_thread_count(int threads) {
#ifdef _OPENMP
    if (threads > 0) {
        omp_set_num_threads(threads);
    }
#else
    (void)threads;
#endif
}

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace gridqls::svsim
