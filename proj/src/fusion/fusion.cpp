#include "gridqls/fusion/fusion.hpp"

#include <algorithm>
#include <optional>

namespace gridqls::fusion {

using circuit::Gate;
using circuit::gate_matrix;

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

// 4x4 matrix of a 1q matrix placed in `slot` (0 or 1) of a two-qubit gate.
CMatrix lift(const CMatrix &u, std::size_t slot) {
    CMatrix m = CMatrix::Zero(4, 4);
    for (Eigen::Index r = 0; r < 4; ++r) {
        for (Eigen::Index c = 0; c < 4; ++c) {
            const auto other_r = slot == 0 ? r >> 1 : r & 1;
            const auto other_c = slot == 0 ? c >> 1 : c & 1;
            if (other_r == other_c) {
                m(r, c) = slot == 0 ? u(r & 1, c & 1) : u(r >> 1, c >> 1);
            }
        }
    }
    return m;
}

CMatrix swap_slots(const CMatrix &m) {
    static const int perm[4] = {0, 2, 1, 3};
    CMatrix out(4, 4);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out(perm[r], perm[c]) = m(r, c);
        }
    }
    return out;
}

std::size_t slot_of(const Gate &g, Qubit q) {
    return static_cast<std::size_t>(std::find(g.qubits().begin(), g.qubits().end(), q) - g.qubits().begin());
}

class Fuser {
  public:
    explicit Fuser(const Circuit &c) {
        slots_.reserve(c.size());
        for (const auto &g : c.gates()) {
            slots_.emplace_back(g);
        }
    }

    bool sweep(Strategy s) {
        bool changed = false;
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            if (!slots_[i]) {
                continue;
            }
            switch (s) {
            case Strategy::OneQubitPair:
                changed |= one_qubit_pair(i);
                break;
            case Strategy::OneQubitIntoNext:
                changed |= into_next(i);
                break;
            case Strategy::OneQubitIntoPrev:
                while (into_prev(i)) {
                    changed = true;
                }
                break;
            case Strategy::TwoQubitPair:
                changed |= two_qubit_pair(i);
                break;
            }
        }
        return changed;
    }

    Circuit result(const Circuit &like) const {
        Circuit out(like.width(), like.name());
        for (const auto &t : like.tags()) {
            out.add_tag(t);
        }
        out.add_tag("fused");
        for (const auto &g : slots_) {
            if (g) {
                out.append(*g);
            }
        }
        return out;
    }

    FusionReport report;

  private:
    std::size_t next_on(std::size_t i, Qubit q) const {
        for (std::size_t j = i + 1; j < slots_.size(); ++j) {
            if (slots_[j]) {
                const auto &qs = slots_[j]->qubits();
                if (std::find(qs.begin(), qs.end(), q) != qs.end()) {
                    return j;
                }
            }
        }
        return npos;
    }

    void record(Strategy s) {
        ++report.fusions_by_strategy[static_cast<std::size_t>(s)];
        report.trace.push_back(s);
    }

    bool one_qubit_pair(std::size_t i) {
        const Gate &a = *slots_[i];
        if (a.arity() != 1) {
            return false;
        }
        const auto j = next_on(i, a.qubits()[0]);
        if (j == npos || slots_[j]->arity() != 1) {
            return false;
        }
        slots_[j] = Gate::unitary(a.qubits(), gate_matrix(*slots_[j]) * gate_matrix(a));
        slots_[i].reset();
        record(Strategy::OneQubitPair);
        return true;
    }

    bool into_next(std::size_t i) {
        const Gate &a = *slots_[i];
        if (a.arity() != 1) {
            return false;
        }
        const Qubit q = a.qubits()[0];
        const auto j = next_on(i, q);
        if (j == npos || slots_[j]->arity() != 2) {
            return false;
        }
        const Gate &b = *slots_[j];
        slots_[j] = Gate::unitary(b.qubits(), gate_matrix(b) * lift(gate_matrix(a), slot_of(b, q)));
        slots_[i].reset();
        record(Strategy::OneQubitIntoNext);
        return true;
    }

    bool into_prev(std::size_t i) {
        const Gate &a = *slots_[i];
        if (a.arity() != 2) {
            return false;
        }
        for (auto q : a.qubits()) {
            const auto j = next_on(i, q);
            if (j != npos && slots_[j]->arity() == 1) {
                slots_[i] = Gate::unitary(a.qubits(), lift(gate_matrix(*slots_[j]), slot_of(a, q)) * gate_matrix(a));
                slots_[j].reset();
                record(Strategy::OneQubitIntoPrev);
                return true;
            }
        }
        return false;
    }

    bool two_qubit_pair(std::size_t i) {
        const Gate &a = *slots_[i];
        if (a.arity() != 2) {
            return false;
        }
        const auto j = next_on(i, a.qubits()[0]);
        if (j == npos || j != next_on(i, a.qubits()[1]) || slots_[j]->arity() != 2) {
            return false;
        }
        const Gate &b = *slots_[j];
        CMatrix mb = gate_matrix(b);
        if (b.qubits()[0] != a.qubits()[0]) {
            mb = swap_slots(mb);
        }
        slots_[j] = Gate::unitary(a.qubits(), mb * gate_matrix(a));
        slots_[i].reset();
        record(Strategy::TwoQubitPair);
        return true;
    }

    std::vector<std::optional<Gate>> slots_;
};

} // namespace

std::size_t depth(const Circuit &circuit) {
    std::vector<std::size_t> level(circuit.width(), 0);
    std::size_t d = 0;
    for (const auto &g : circuit.gates()) {
        std::size_t l = 0;
        for (auto q : g.qubits()) {
            l = std::max(l, level[q]);
        }
        ++l;
        for (auto q : g.qubits()) {
            level[q] = l;
        }
        d = std::max(d, l);
    }
    return d;
}

FusionResult fuse(const Circuit &circuit) {
    Fuser f(circuit);
    f.report.gates_before = circuit.size();
    f.report.depth_before = depth(circuit);
    for (const auto &g : circuit.gates()) {
        if (g.arity() > 2) {
            ++f.report.barriers;
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto s : {Strategy::OneQubitPair, Strategy::OneQubitIntoNext, Strategy::OneQubitIntoPrev,
                       Strategy::TwoQubitPair}) {
            changed |= f.sweep(s);
        }
    }
    FusionResult r{f.result(circuit), f.report};
    r.report.gates_after = r.circuit.size();
    r.report.depth_after = depth(r.circuit);
    return r;
}

} // namespace gridqls::fusion
