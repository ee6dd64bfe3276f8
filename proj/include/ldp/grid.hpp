#pragma once

#include <string_view>
#include <vector>

#include "ldp/distribution.hpp"

namespace ldp {

// Grid arguments accept either a comma list "0.5,0.75,1" or a range
// "A:B:STEP". The range starts at A and steps by STEP; B itself is
// included when (B - A)/STEP is integral within 1e-9, in which case the
// last point is snapped to exactly B. A bare number is a one-point grid.
// Throws ParseError on malformed input.
std::vector<double> parse_grid(std::string_view text);

// Same syntax restricted to positive integers (for n lists). The result
// is sorted and deduplicated.
std::vector<int> parse_int_list(std::string_view text);

} // namespace ldp
