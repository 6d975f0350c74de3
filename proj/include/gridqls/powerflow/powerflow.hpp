#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridqls/hhl/pipeline.hpp"
#include "gridqls/powerflow/case.hpp"

namespace gridqls::powerflow {

/// Y-bus with series admittance 1/(r + jx), half the line charging at each
/// end, off-nominal taps and phase shifts, and bus shunts. Out-of-service
/// branches are skipped. Throws std::invalid_argument for r = x = 0.
CMatrix build_ybus(const PowerFlowCase &c);

/// Bus positions by role. A PV bus without an in-service generator is
/// treated as PQ; isolated buses appear in no list.
struct BusClasses {
    std::size_t slack = 0;
    std::vector<std::size_t> pv;
    std::vector<std::size_t> pq;
    std::vector<std::size_t> pvpq; ///< all non-slack, non-isolated buses in case order
};

BusClasses classify_buses(const PowerFlowCase &c);

struct BusState {
    RVector vm;
    RVector va; ///< radians
};

/// |V| = 1 and theta = 0, except generator setpoints on PV/slack magnitudes
/// and the slack bus angle from the case.
BusState flat_start(const PowerFlowCase &c);

/// Scheduled complex injection per bus: in-service generation minus load.
CVector scheduled_injection(const PowerFlowCase &c);

/// Complex injection V .* conj(Y V).
CVector calculated_injection(const CMatrix &ybus, const BusState &s);

/// A linear system handed to a solver.
struct LinearStep {
    RMatrix matrix;
    RVector rhs;
    std::vector<std::string> variable_labels;
};

/// [dP over pvpq; dQ over pq], scheduled minus calculated.
RVector mismatch(const PowerFlowCase &c, const BusState &s);

/**
 * Newton system: d(calculated)/d[theta(pvpq); |V|(pq)] with the mismatch as
 * rhs, so the update is J^-1 * mismatch. Labels are "theta:<bus>" and
 * "vm:<bus>".
 */
LinearStep jacobian(const PowerFlowCase &c, const BusState &s);

/// XB fast-decoupled B' over pvpq buses (-Im Y-bus of the network without
/// resistance, line charging, shunts, taps or shifts); rhs = dP / |V|.
LinearStep bprime_system(const PowerFlowCase &c, const BusState &s);

/// XB fast-decoupled B'' over pq buses (-Im Y-bus without phase shifts);
/// rhs = dQ / |V|.
LinearStep bdoubleprime_system(const PowerFlowCase &c, const BusState &s);

enum class Solver { Classical, HHL };
enum class Variant { Newton, FastDecoupled };

struct PowerFlowOptions {
    Solver solver = Solver::Classical;
    Variant variant = Variant::Newton;
    double tol = 1e-8;
    std::size_t max_iter = 30;
    hhl::PipelineOptions hhl; ///< used when solver == HHL
};

/// One linear solve inside the iteration.
struct StepRecord {
    std::size_t iteration = 0;
    std::string label; ///< "J", "B'" or "B''"
    std::size_t dimension = 0;
    double condition_number = 0.0;
    double mismatch_before = 0.0;
    /// Present for HHL-backed steps; l2 error there is against a direct solve
    /// of the same step.
    std::optional<hhl::PipelineResult> hhl;
};

struct PowerFlowResult {
    BusState state;
    bool converged = false;
    std::size_t iterations = 0;
    double final_mismatch = 0.0;
    std::vector<double> mismatch_history; ///< inf-norm before each iteration, then the final one
    std::vector<StepRecord> steps;
};

/**
 * Iterate from a flat start until ||mismatch||_inf < tol. Each linear step
 * goes to a dense direct solve or through the HHL pipeline.
 * Throws std::invalid_argument for tol <= 0 and gridqls::ConvergenceError
 * after max_iter iterations.
 */
PowerFlowResult solve_powerflow(const PowerFlowCase &c, const PowerFlowOptions &options = {});

std::string to_string(Solver s);
std::string to_string(Variant v);

} // namespace gridqls::powerflow
