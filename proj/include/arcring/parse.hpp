#pragma once

// Text front ends: the slice-word grammar, braid words, and PD codes.

#include <stdexcept>
#include <string>
#include <vector>

#include "arcring/word.hpp"

namespace arcring {

// Which contract a rejected input violated.
enum class ParseFault { Syntax, Arity, Orientation, Pd };

struct ParseError : std::runtime_error {
  ParseError(ParseFault fault, int line, int col, const std::string& what);
  ParseFault fault;
  int line = 0, col = 0;  // 1-based; 0 when no location applies
};

// A word plus per-component reversal overrides; closed components have no
// boundary marks to carry orientation, so overrides travel separately.
struct TangleInput {
  TangleWord word;
  std::vector<bool> reversed;
};

// Statements separated by ';' or newline, comments from '#' to end of line:
//   bottom <2n>
//   [slice] <x|xbar|cap|cup|vert> <pos>
//   orient <signs, e.g. +-+->        one sign per boundary point, bottom
//                                    left-to-right then top
//   reverse-component <k>            0-based component index
TangleInput parse_tangle(const std::string& text);

// Whitespace- or comma-separated generators: s3, s-2, bare 3 or -2, and the
// suffix forms s1^-1, s1^{-1}.
TangleWord parse_braid(const std::string& text, int strands);

// Trace closure: strand i of the braid reconnects to itself around the left.
TangleWord braid_closure(const TangleWord& braid);

// PD crossing list X(a,b,c,d): edges numbered consecutively along each
// oriented component, a the incoming under-edge, b,c,d counterclockwise.
// O adds a crossingless loop. The result keeps the PD component
// orientations via reversal overrides.
TangleInput parse_pd(const std::string& text);

// Canonical text form; parse_tangle(emit_tangle(t)) reproduces t exactly.
std::string emit_tangle(const TangleInput& t);

}  // namespace arcring
