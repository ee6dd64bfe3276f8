#pragma once

#include <vector>

#include "ldp/distribution.hpp"
#include "ldp/extended_real.hpp"

namespace ldp {

// Position of the threshold x relative to the mean and the essential sup c.
enum class RateCase {
    at_or_below_mean, // x <= E[X1]: the tail probability does not decay
    interior,         // mean < x < c: exponential decay at a finite rate
    boundary_c,       // x = c < inf: decay governed by the atom mass at c
    above_c           // x > c: the event is impossible
};

const char* to_string(RateCase c);

struct RateResult {
    double x;
    ExtendedReal limit_value; // lim (1/n) log P(mean_n >= x), in [-inf, 0]
    ExtendedReal rate;        // -limit_value, in [0, +inf]
    ExtendedReal lambda_star; // argmin of p(lambda) - lambda x over lambda >= 0
    RateCase case_tag;
};

// Minimizer of lambda -> p(lambda) - lambda x over lambda >= 0.
//
// Returns 0 exactly when x <= mean. Otherwise brackets p'(lambda) = x by
// doubling lambda from 1 and bisects until |p'(lambda) - x| <=
// 1e-10 * max(1, |x|) or the bracket width drops below 1e-12. When the
// derivative never reaches x before the domain boundary or lambda = 1e6,
// the infimum is asymptotic and pos_inf is returned.
ExtendedReal optimize_lambda(const Distribution& d, double x);

// Full case analysis of the large-deviation limit at threshold x.
RateResult rate(const Distribution& d, double x);

std::vector<RateResult> rate_curve(const Distribution& d,
                                   const std::vector<double>& xs);

} // namespace ldp
