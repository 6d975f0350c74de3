#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gridqls/types.hpp"

namespace gridqls::powerflow {

enum class BusType { PQ = 1, PV = 2, Slack = 3, Isolated = 4 };

// Powers, shunts and generator limits are per unit on base_mva; angles are
// radians. Everything else keeps the case-file units.

struct Bus {
    int id = 0;
    BusType type = BusType::PQ;
    double pd = 0.0;
    double qd = 0.0;
    double gs = 0.0;
    double bs = 0.0;
    int area = 1;
    double vm = 1.0;
    double va = 0.0;
    double base_kv = 0.0;
    int zone = 1;
    double vmax = 1.1;
    double vmin = 0.9;
};

struct Generator {
    int bus = 0;
    double pg = 0.0;
    double qg = 0.0;
    double qmax = 0.0;
    double qmin = 0.0;
    double vg = 1.0;
    double mbase = 100.0;
    bool in_service = true;
    double pmax = 0.0;
    double pmin = 0.0;
};

struct Branch {
    int from = 0;
    int to = 0;
    double r = 0.0;
    double x = 0.0;
    double b = 0.0; ///< total line charging
    double rate_a = 0.0;
    double rate_b = 0.0;
    double rate_c = 0.0;
    double ratio = 0.0; ///< off-nominal tap; 0 means a plain line
    double angle = 0.0; ///< phase shift
    bool in_service = true;
    double angmin = -2.0 * kPi;
    double angmax = 2.0 * kPi;
};

struct PowerFlowCase {
    std::string name;
    double base_mva = 100.0;
    std::vector<Bus> buses;
    std::vector<Generator> generators;
    std::vector<Branch> branches;
    /// Non-fatal parse notes (ignored columns and the like).
    std::vector<std::string> warnings;

    /// Position of a bus id in `buses`. Throws std::out_of_range.
    std::size_t bus_index(int id) const;
    std::size_t slack_index() const;
};

// Accepted case-file subset (MATPOWER version 2 layout):
//
//   function mpc = <name>            optional, sets the case name
//   mpc.baseMVA = <number>;
//   mpc.bus = [ <13+ columns per row> ];
//   mpc.gen = [ <10+ columns per row> ];
//   mpc.branch = [ <11+ columns per row> ];
//
// Rows end at ';' or a newline; values are separated by blanks or commas;
// '%' starts a comment. Other assignments (gencost, bus_name, ...) are
// skipped. Columns past the standard MATPOWER layout are ignored with a
// warning. Bus types: 1 PQ, 2 PV, 3 slack, 4 isolated.

/// Throws gridqls::ParseError on a missing block, malformed row, bad bus
/// reference, duplicate bus id, or anything but exactly one slack bus.
PowerFlowCase parse_case(std::string_view text);
PowerFlowCase load_case(const std::filesystem::path &path);

/// Case-file text that parses back to the same case.
std::string serialize_case(const PowerFlowCase &c);

/// Field-by-field comparison with a relative tolerance on reals.
bool same_case(const PowerFlowCase &a, const PowerFlowCase &b, double rel_tol = 1e-12);

} // namespace gridqls::powerflow
