#pragma once

#include <string>

namespace stratgraph {

// Shortest round-trip decimal form; keeps emitted files byte-stable.
std::string format_double(double v);

}  // namespace stratgraph
