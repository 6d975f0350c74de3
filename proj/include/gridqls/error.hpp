#pragma once

#include <stdexcept>
#include <string>

namespace gridqls {

/// Malformed input text (circuit dumps, MatrixMarket, MATPOWER cases).
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Matrix is singular (or numerically so) where an inverse is required.
class SingularMatrixError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The phase register cannot resolve the spectrum, or a post-selection
/// outcome has vanishing probability.
class PrecisionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Iterative solve stopped at max_iter without meeting the tolerance.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string &what, std::size_t iterations, double final_mismatch)
        : std::runtime_error(what), iterations_(iterations), final_mismatch_(final_mismatch) {}

    std::size_t iterations() const noexcept { return iterations_; }
    double final_mismatch() const noexcept { return final_mismatch_; }

  private:
    std::size_t iterations_;
    double final_mismatch_;
};

} // namespace gridqls
