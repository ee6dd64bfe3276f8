#pragma once

#include <cstdint>

#include "ldp/distribution.hpp"
#include "ldp/extended_real.hpp"

namespace ldp {

enum class TailMethod { exact, naive, tilted };

const char* to_string(TailMethod m);

struct TailEstimate {
    int n;
    double x;
    ExtendedReal log_prob; // log P(mean_n >= x); neg_inf iff prob == 0
    double prob;
    double std_error;  // standard error of prob; 0 for the exact method
    TailMethod method;
    long long trials;  // 0 for the exact method
    std::uint64_t seed;
    double lambda_used; // tilt actually applied; 0 for exact and naive
};

struct EstimatorOptions {
    // 0 picks LDP_THREADS from the environment, falling back to the
    // hardware count. Results are bitwise identical for every value.
    int workers = 0;
};

// P(mean_n >= x) by exact convolution of the single-step law.
// Requires finite support; may throw SizeCapError for large n.
TailEstimate tail_exact(const Distribution& d, int n, double x);

// Plain Monte Carlo: fraction of `trials` sample means at or above x.
// Trials are drawn in fixed chunks of 4096 whose seeds derive from
// mix(seed, chunk_index), so the result does not depend on worker count.
TailEstimate tail_naive(const Distribution& d, int n, double x,
                        long long trials, std::uint64_t seed,
                        const EstimatorOptions& opts = {});

// Importance sampling under the exponential tilt at lambda* =
// optimize_lambda(d, x). Each trial contributes
// 1{mean_n >= x} * exp(-lambda* S_n + n p(lambda*)), an unbiased estimate
// of the tail probability with exponentially smaller variance on rare
// events. Accumulation runs in log space. When lambda* = 0 the naive
// estimator is run instead, still reported with method = tilted and
// lambda_used = 0. Throws std::domain_error when no finite tilt exists.
TailEstimate tail_tilted(const Distribution& d, int n, double x,
                         long long trials, std::uint64_t seed,
                         const EstimatorOptions& opts = {});

} // namespace ldp
