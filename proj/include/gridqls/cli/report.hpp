#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridqls/fusion/fusion.hpp"
#include "gridqls/hhl/pipeline.hpp"
#include "gridqls/hhl/resources.hpp"

namespace gridqls::cli {

using nlohmann::json;

/// One linear solve laid out like a column of the published results table.
struct SolveReport {
    std::string case_name;
    std::size_t matrix_size = 0;
    double condition_number = 0.0;          ///< of the system as given
    double prepared_condition_number = 0.0; ///< of the matrix handed to HHL
    std::size_t n_total = 0;
    std::size_t n_data = 0;
    std::size_t n_qpe = 0;
    std::size_t n_neg_val = 0;
    std::size_t ancilla = 1;
    double circuit_generation_seconds = 0.0;
    double simulation_seconds = 0.0;
    double l2_error = 0.0;
    double relative_error = 0.0;
    double success_probability = 0.0;
    bool preconditioned = false;
    std::optional<fusion::FusionReport> fusion;
};

SolveReport make_report(const std::string &case_name, const hhl::PipelineResult &r);

json to_json(const fusion::FusionReport &r);
json to_json(const hhl::ResourcePlan &p);
json to_json(const SolveReport &r);

/// Top-level record: {"schema", "command", "seed", ...command payload}.
json make_record(const std::string &command, std::uint64_t seed);

inline constexpr const char *kReportSchema = "gridqls.report/1";

/// Problems with a machine-readable record; empty when it conforms to the
/// schema documented in the README.
std::vector<std::string> validate_record(const json &record);

/// Rows like the published table; one column per report.
std::string format_table(const std::vector<SolveReport> &reports);
std::string format_fusion(const fusion::FusionReport &r);
std::string format_plan(const hhl::ResourcePlan &p);

/// Real symmetric dim x dim matrix with eigenvalues drawn from [1, kappa_max]
/// in a random orthonormal basis, and a random unit rhs. Seeded.
std::pair<CMatrix, CVector> random_hermitian_system(std::size_t dim, std::uint64_t seed, double kappa_max = 4.0);

/// HHL circuit of a random system lowered to basis gates, the inversion
/// decomposed into RY/CX first. n_qpe defaults to the formula.
circuit::Circuit transpiled_demo_circuit(std::size_t dim, std::uint64_t seed,
                                         std::optional<std::size_t> n_qpe = std::nullopt);

} // namespace gridqls::cli
