#pragma once

#include <string>
#include <string_view>

#include "gridqls/circuit/circuit.hpp"

namespace gridqls::circuit {

// Line-oriented circuit dump:
//
//   # comment
//   circuit <width> [name]
//   <KIND> [<p0>,<p1>,...] <q0> [<q1> ...]
//
// KIND is one of H X Y Z S SDG T TDG RX RY RZ P U3 CX CZ CP SWAP UNITARY
// (case-insensitive on input). The parameter token is present only for
// parametric kinds. For UNITARY it holds the 2^k x 2^k matrix row-major as
// interleaved re,im pairs, where k is the number of qubit tokens. Reals are
// written with 17 significant digits so a dump parses back bit-exactly.

std::string to_text(const Circuit &circuit);

/// Throws gridqls::ParseError with a 1-based line number on malformed input.
Circuit parse_circuit_text(std::string_view text);

} // namespace gridqls::circuit
