#include <doctest.h>

#include "gridqls/cli/report.hpp"
#include "gridqls/prep/prep.hpp"

using namespace gridqls;
using namespace gridqls::cli;

namespace {

SolveReport sample_report(bool fused) {
    auto [a, b] = random_hermitian_system(4, 3);
    hhl::PipelineOptions o;
    o.hhl.n_qpe = 5;
    o.hhl.fuse = fused;
    return make_report("rand4", hhl::solve_linear(a, b, o));
}

json strip_timings(json j) {
    for (auto &r : j["reports"]) {
        r.erase("circuit_generation_seconds");
        r.erase("simulation_seconds");
    }
    return j;
}

} // namespace

TEST_CASE("random Hermitian systems") {
    auto [a, b] = random_hermitian_system(4, 11, 6.0);
    CHECK(prep::is_hermitian(a));
    CHECK(a.imag().isZero());
    CHECK(b.norm() == doctest::Approx(1.0));
    const double k = prep::condition_number(a);
    CHECK(k >= 1.0);
    CHECK(k <= 6.0 + 1e-9);
    auto [a2, b2] = random_hermitian_system(4, 11, 6.0);
    CHECK(a2 == a);
    CHECK(b2 == b);
}

TEST_CASE("report fields follow the solve") {
    const auto r = sample_report(true);
    CHECK(r.matrix_size == 4);
    CHECK(r.n_data == 2);
    CHECK(r.n_qpe == 5);
    CHECK(r.n_total == r.n_data + r.n_qpe + r.n_neg_val);
    CHECK(r.l2_error >= 0.0);
    CHECK(r.circuit_generation_seconds >= 0.0);
    CHECK(r.simulation_seconds >= 0.0);
    REQUIRE(r.fusion.has_value());
    CHECK(r.fusion->gates_after < r.fusion->gates_before);
}

TEST_CASE("records validate") {
    auto rec = make_record("solve-linear", 7);
    rec["reports"] = json::array({to_json(sample_report(true)), to_json(sample_report(false))});
    CHECK(validate_record(rec).empty());

    auto est = make_record("estimate", 0);
    est["resource_plan"] = to_json(hhl::estimate_resources(32, 492.5, true));
    CHECK(validate_record(est).empty());

    auto fs = make_record("fuse-stats", 0);
    fusion::FusionReport f;
    f.gates_before = 5;
    f.gates_after = 3;
    f.fusions_by_strategy = {1, 1, 0, 0};
    fs["fusion"] = to_json(f);
    CHECK(validate_record(fs).empty());
}

TEST_CASE("validation catches schema violations") {
    CHECK_FALSE(validate_record(json::array()).empty());
    auto rec = make_record("solve-linear", 0);
    CHECK_FALSE(validate_record(rec).empty()); // no reports

    rec["reports"] = json::array({to_json(sample_report(false))});
    rec["reports"][0]["l2_error"] = -1.0;
    CHECK_FALSE(validate_record(rec).empty());

    rec["reports"][0]["l2_error"] = 0.0;
    rec["reports"][0].erase("n_qpe");
    CHECK_FALSE(validate_record(rec).empty());

    auto bad_schema = make_record("estimate", 0);
    bad_schema["schema"] = "other/2";
    bad_schema["resource_plan"] = to_json(hhl::estimate_resources(2, 1.0, false));
    CHECK_FALSE(validate_record(bad_schema).empty());

    auto fs = make_record("fuse-stats", 0);
    fusion::FusionReport f;
    f.gates_before = 5;
    f.gates_after = 3;
    f.fusions_by_strategy = {1, 0, 0, 0};
    fs["fusion"] = to_json(f);
    CHECK_FALSE(validate_record(fs).empty());

    CHECK_FALSE(validate_record(make_record("launch", 0)).empty());
}

TEST_CASE("reports are deterministic apart from timings") {
    auto one = make_record("solve-linear", 1);
    one["reports"] = json::array({to_json(sample_report(true))});
    auto two = make_record("solve-linear", 1);
    two["reports"] = json::array({to_json(sample_report(true))});
    CHECK(strip_timings(one) == strip_timings(two));
}

TEST_CASE("text table") {
    auto r = sample_report(false);
    r.preconditioned = true;
    const auto t = format_table({r, sample_report(false)});
    CHECK(t.find("Matrix Size") != std::string::npos);
    CHECK(t.find("4 x 4") != std::string::npos);
    CHECK(t.find("rand4*") != std::string::npos);
    CHECK(t.find("Simulation (s)") != std::string::npos);
    CHECK(format_plan(hhl::estimate_resources(4, 1.0, false)).find("n_total   5") != std::string::npos);
}
