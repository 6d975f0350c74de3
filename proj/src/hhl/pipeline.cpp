#include "gridqls/hhl/pipeline.hpp"

namespace gridqls::hhl {

PipelineResult solve_linear(const CMatrix &matrix, const CVector &b, const PipelineOptions &options) {
    const prep::PreparedSystem ps = prep::prepare(matrix, b, options.prep);
    PipelineResult r;
    r.original_dimension = ps.original_dimension;
    r.prepared_dimension = ps.dimension();
    r.original_condition_number = ps.original_condition_number;
    r.prepared_condition_number = ps.condition_number;
    r.preconditioned = ps.preconditioned;
    r.hermitized = ps.hermitized;
    r.padding = ps.padding;
    r.x_classical = prep::solve_dense(matrix, b);
    r.solution = solve(ps, options.hhl);
    r.x = r.solution.x;
    r.l2_error = (r.x - r.x_classical).norm();
    const double ref = r.x_classical.norm();
    r.relative_error = ref > 0.0 ? r.l2_error / ref : r.l2_error;
    return r;
}

} // namespace gridqls::hhl
