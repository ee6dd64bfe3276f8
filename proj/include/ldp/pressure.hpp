#pragma once

#include "ldp/distribution.hpp"
#include "ldp/extended_real.hpp"

namespace ldp {

// A log-MGF sample point. The value is never -inf and is exactly 0 at
// lambda = 0.
struct PressureValue {
    double lambda = 0.0;
    ExtendedReal value;
};

// p(lambda) = log E[e^{lambda X1}]. Infinity is a value here, not an error;
// exponential laws return pos_inf from the boundary lambda = rate onward.
ExtendedReal pressure(const Distribution& d, double lambda);

// p'(lambda), the mean of the tilted law. Throws std::domain_error when
// p(lambda) is infinite.
double pressure_derivative(const Distribution& d, double lambda);

// Supremum of the set where p is finite: the exponential rate for
// exponential laws, +inf for every other kind.
double pressure_domain_sup(const Distribution& d);

// log E[e^{lambda X1} 1_{|X1| <= K}]. Finite kinds filter atoms; continuous
// kinds integrate the tilted density over [-K, K] by adaptive Simpson split
// at the mode of lambda*x + log density. Finite for every real lambda.
ExtendedReal truncated_pressure(const Distribution& d, double lambda, double K);

} // namespace ldp
