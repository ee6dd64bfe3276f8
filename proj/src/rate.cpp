#include "ldp/rate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ldp/pressure.hpp"

namespace ldp {

namespace {

constexpr double kLambdaCap = 1e6;

// p'(lambda), extended past the domain boundary by +inf so the bisection
// below sees a non-decreasing function on all of [0, inf).
double derivative_or_inf(const Distribution& d, double lambda) {
    if (lambda >= pressure_domain_sup(d))
        return std::numeric_limits<double>::infinity();
    return pressure_derivative(d, lambda);
}

} // namespace

const char* to_string(RateCase c) {
    switch (c) {
    case RateCase::at_or_below_mean:
        return "at_or_below_mean";
    case RateCase::interior:
        return "interior";
    case RateCase::boundary_c:
        return "boundary_c";
    case RateCase::above_c:
        return "above_c";
    }
    return "?";
}

ExtendedReal optimize_lambda(const Distribution& d, double x) {
    if (x <= mean(d))
        return 0.0;
    // p' stays strictly below a finite essential sup, even though in floats
    // it can round up to it; at or above c the infimum is asymptotic.
    ExtendedReal c = essential_sup(d);
    if (c.is_finite() && x >= c.value())
        return ExtendedReal::pos_inf();
    double tol = 1e-10 * std::max(1.0, std::abs(x));

    double lo = 0.0;
    double hi = 1.0;
    while (derivative_or_inf(d, hi) < x) {
        lo = hi;
        hi *= 2.0;
        if (hi > kLambdaCap)
            return ExtendedReal::pos_inf();
    }
    // Invariant: p'(lo) < x <= p'(hi).
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        double dv = derivative_or_inf(d, mid);
        if (std::isfinite(dv) && std::abs(dv - x) <= tol)
            return mid;
        if (dv < x)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-12)
            break;
    }
    return 0.5 * (lo + hi);
}

RateResult rate(const Distribution& d, double x) {
    double m = mean(d);
    if (x <= m)
        return {x, 0.0, 0.0, 0.0, RateCase::at_or_below_mean};

    ExtendedReal c = essential_sup(d);
    if (c.is_finite()) {
        if (x > c.value()) {
            return {x, ExtendedReal::neg_inf(), ExtendedReal::pos_inf(),
                    ExtendedReal::pos_inf(), RateCase::above_c};
        }
        if (x == c.value()) {
            // P(mean_n >= c) = P(X1 = c)^n: the limit is the log atom mass.
            double w = d.weights().back();
            return {x, std::log(w), -std::log(w), ExtendedReal::pos_inf(),
                    RateCase::boundary_c};
        }
    }

    ExtendedReal ls = optimize_lambda(d, x);
    if (ls.is_finite()) {
        double l = ls.value();
        ExtendedReal p = pressure(d, l);
        ExtendedReal limit = p + ExtendedReal(-l * x);
        if (limit.is_finite() && limit.value() > 0.0)
            limit = 0.0;
        return {x, limit, -limit, ls, RateCase::interior};
    }
    // Asymptotic infimum: report the objective at the search cap.
    ExtendedReal limit = pressure(d, kLambdaCap) + ExtendedReal(-kLambdaCap * x);
    if (!(limit < 0.0))
        limit = 0.0;
    return {x, limit, -limit, ls, RateCase::interior};
}

std::vector<RateResult> rate_curve(const Distribution& d,
                                   const std::vector<double>& xs) {
    std::vector<RateResult> out;
    out.reserve(xs.size());
    for (double x : xs)
        out.push_back(rate(d, x));
    return out;
}

} // namespace ldp
