#pragma once

#include <array>
#include <string>
#include <vector>

#include "gridqls/circuit/gate.hpp"

namespace gridqls::circuit {

/**
 * @brief Ordered gate sequence over a fixed number of qubits.
 *
 * Gates run left to right. `append` only ever adds to the end, so earlier
 * gates are never touched once added. A finished circuit is a plain value and
 * may be shared read-only between threads.
 */
class Circuit {
  public:
    explicit Circuit(std::size_t width, std::string name = {});

    std::size_t width() const noexcept { return width_; }
    const std::vector<Gate> &gates() const noexcept { return gates_; }
    std::size_t size() const noexcept { return gates_.size(); }
    bool empty() const noexcept { return gates_.empty(); }
    const Gate &operator[](std::size_t i) const { return gates_.at(i); }

    const std::string &name() const noexcept { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }
    const std::vector<std::string> &tags() const noexcept { return tags_; }
    void add_tag(std::string tag) { tags_.push_back(std::move(tag)); }

    /// Throws std::out_of_range when a qubit index is >= width.
    Circuit &append(Gate gate);

    /// Append every gate of `other`, with other's qubit q placed on mapping[q].
    Circuit &append(const Circuit &other, const std::vector<Qubit> &mapping);
    /// Append `other` on the identity mapping (other.width() <= width()).
    Circuit &append(const Circuit &other);

    /// Reversed sequence of adjoint gates.
    Circuit inverse() const;

    /// Counts of gates by arity: [1q, 2q, wider].
    std::array<std::size_t, 3> arity_histogram() const;

    friend bool operator==(const Circuit &a, const Circuit &b) {
        return a.width_ == b.width_ && a.gates_ == b.gates_;
    }

  private:
    std::size_t width_;
    std::string name_;
    std::vector<std::string> tags_;
    std::vector<Gate> gates_;
};

/// Widest circuit `circuit_unitary` accepts.
inline constexpr std::size_t kMaxUnitaryWidth = 12;

/// Dense unitary of the whole circuit (product of embedded gate matrices).
/// Throws std::invalid_argument when width > kMaxUnitaryWidth.
CMatrix circuit_unitary(const Circuit &circuit);

/// Embed a k-qubit matrix acting on `qubits` into the full 2^width space.
CMatrix embed(const CMatrix &gate, const std::vector<Qubit> &qubits, std::size_t width);

/// min over global phase phi of ||a - e^{i phi} b||, in operator norm for
/// dimension <= 256 and Frobenius norm (an upper bound) above that.
double distance_up_to_phase(const CMatrix &a, const CMatrix &b);

/// Same for vectors (Euclidean norm).
double distance_up_to_phase(const CVector &a, const CVector &b);

} // namespace gridqls::circuit
