#pragma once

#include "gridqls/hhl/hhl.hpp"
#include "gridqls/prep/prep.hpp"

namespace gridqls::hhl {

struct PipelineOptions {
    prep::PrepareOptions prep;
    HHLOptions hhl;
};

/// One linear solve through prepare -> HHL -> recovery, next to a dense
/// direct solve of the original system.
struct PipelineResult {
    CVector x;           ///< HHL answer in original units
    CVector x_classical; ///< direct solve
    double l2_error = 0.0;       ///< ||x - x_classical||
    double relative_error = 0.0; ///< l2_error / ||x_classical||
    std::size_t original_dimension = 0;
    std::size_t prepared_dimension = 0;
    double original_condition_number = 0.0;
    double prepared_condition_number = 0.0;
    bool preconditioned = false;
    bool hermitized = false;
    std::size_t padding = 0;
    HHLSolution solution;
};

PipelineResult solve_linear(const CMatrix &matrix, const CVector &b, const PipelineOptions &options = {});

} // namespace gridqls::hhl
