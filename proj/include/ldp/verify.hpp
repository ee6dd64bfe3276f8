#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldp/distribution.hpp"

namespace ldp {

enum class CheckStatus { pass, fail, skip };

const char* to_string(CheckStatus s);

struct CheckResult {
    std::string name;
    CheckStatus status;
    double worst_margin; // most adverse slack observed; <= 0 means clean
    std::string detail;
};

// Runs every numerically checkable claim against one distribution:
// pressure convexity and derivative, truncation limits, the truncated dual
// inequality, rate-curve structure, dual equality, and (for finite-support
// kinds) the Chernoff bound, entropy-curve shape, randomized concatenation
// inequalities and dual-gap positivity. Checks needing exact enumeration
// report skip on kinds without finite support. Deterministic for a fixed
// (distribution, seed); the seed only feeds the randomized concatenation
// tuples.
std::vector<CheckResult> run_verification(const Distribution& d,
                                          std::uint64_t seed);

} // namespace ldp
