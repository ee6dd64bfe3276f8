#include "ldp/tail.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ldp/pressure.hpp"
#include "ldp/rate.hpp"
#include "ldp/rng.hpp"
#include "parallel_for.hpp"

namespace ldp {

namespace {

constexpr long long kChunk = 4096;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse2(double a, double b) {
    if (a < b)
        std::swap(a, b);
    if (b == kNegInf)
        return a;
    return a + std::log1p(std::exp(b - a));
}

void check_args(int n, long long trials) {
    if (n < 1)
        throw std::invalid_argument("tail estimator: n must be >= 1");
    if (trials < 1)
        throw std::invalid_argument("tail estimator: trials must be >= 1");
}

long long chunk_trials(long long trials, std::size_t chunk) {
    long long begin = static_cast<long long>(chunk) * kChunk;
    return std::min(kChunk, trials - begin);
}

} // namespace

namespace detail {

int resolve_workers(int requested) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("LDP_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 4096)
            return static_cast<int>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

} // namespace detail

const char* to_string(TailMethod m) {
    switch (m) {
    case TailMethod::exact:
        return "exact";
    case TailMethod::naive:
        return "naive";
    case TailMethod::tilted:
        return "tilted";
    }
    return "?";
}

TailEstimate tail_exact(const Distribution& d, int n, double x) {
    if (n < 1)
        throw std::invalid_argument("tail estimator: n must be >= 1");
    SumDistribution sd = exact_sum_distribution(d, n);
    ExtendedReal lp = sd.log_tail(static_cast<double>(n) * x);
    double prob = lp.is_neg_inf() ? 0.0 : std::exp(lp.as_double());
    return {n, x, lp, prob, 0.0, TailMethod::exact, 0, 0, 0.0};
}

TailEstimate tail_naive(const Distribution& d, int n, double x,
                        long long trials, std::uint64_t seed,
                        const EstimatorOptions& opts) {
    check_args(n, trials);
    double threshold = static_cast<double>(n) * x;
    std::size_t nchunks = static_cast<std::size_t>((trials + kChunk - 1) / kChunk);
    std::vector<long long> hits(nchunks, 0);
    detail::parallel_for(nchunks, detail::resolve_workers(opts.workers),
                         [&](std::size_t c) {
                             rng::Stream stream(rng::mix(seed, c));
                             long long todo = chunk_trials(trials, c);
                             long long h = 0;
                             for (long long t = 0; t < todo; ++t) {
                                 double s = 0.0;
                                 for (int i = 0; i < n; ++i)
                                     s += sample_one(d, stream);
                                 if (s >= threshold)
                                     ++h;
                             }
                             hits[c] = h;
                         });
    long long total = 0;
    for (long long h : hits)
        total += h;
    double prob = static_cast<double>(total) / static_cast<double>(trials);
    ExtendedReal lp =
        total == 0 ? ExtendedReal::neg_inf() : ExtendedReal(std::log(prob));
    double se = std::sqrt(prob * (1.0 - prob) / static_cast<double>(trials));
    return {n, x, lp, prob, se, TailMethod::naive, trials, seed, 0.0};
}

TailEstimate tail_tilted(const Distribution& d, int n, double x,
                         long long trials, std::uint64_t seed,
                         const EstimatorOptions& opts) {
    check_args(n, trials);
    ExtendedReal ls = optimize_lambda(d, x);
    if (ls.is_pos_inf())
        throw std::domain_error(
            "tail_tilted: no finite tilt reaches x (threshold at or beyond "
            "the essential sup)");
    double lambda = ls.value();
    if (lambda == 0.0) {
        TailEstimate est = tail_naive(d, n, x, trials, seed, opts);
        est.method = TailMethod::tilted;
        return est;
    }

    double p = pressure(d, lambda).value();
    Distribution tilted = tilt(d, lambda);
    double threshold = static_cast<double>(n) * x;
    double log_const = static_cast<double>(n) * p;

    std::size_t nchunks = static_cast<std::size_t>((trials + kChunk - 1) / kChunk);
    std::vector<double> l1(nchunks, kNegInf); // log sum of weights
    std::vector<double> l2(nchunks, kNegInf); // log sum of squared weights
    detail::parallel_for(nchunks, detail::resolve_workers(opts.workers),
                         [&](std::size_t c) {
                             rng::Stream stream(rng::mix(seed, c));
                             long long todo = chunk_trials(trials, c);
                             double a1 = kNegInf, a2 = kNegInf;
                             for (long long t = 0; t < todo; ++t) {
                                 double s = 0.0;
                                 for (int i = 0; i < n; ++i)
                                     s += sample_one(tilted, stream);
                                 if (s >= threshold) {
                                     double lw = log_const - lambda * s;
                                     a1 = lse2(a1, lw);
                                     a2 = lse2(a2, 2.0 * lw);
                                 }
                             }
                             l1[c] = a1;
                             l2[c] = a2;
                         });
    double L1 = kNegInf, L2 = kNegInf;
    for (std::size_t c = 0; c < nchunks; ++c) {
        L1 = lse2(L1, l1[c]);
        L2 = lse2(L2, l2[c]);
    }

    double logT = std::log(static_cast<double>(trials));
    if (L1 == kNegInf) {
        return {n, x,      ExtendedReal::neg_inf(), 0.0, 0.0,
                TailMethod::tilted, trials, seed, lambda};
    }
    double log_prob = L1 - logT;
    double prob = std::exp(log_prob);
    double se = 0.0;
    if (trials > 1) {
        // Sample variance in log space:
        // s^2 = (sum w^2 - T pbar^2) / (T - 1), guarded against drift.
        double delta = std::min(2.0 * L1 - logT - L2, 0.0);
        double log_s2 = L2 + std::log1p(-std::exp(delta)) -
                        std::log(static_cast<double>(trials - 1));
        if (!std::isnan(log_s2) && log_s2 != kNegInf)
            se = std::exp(0.5 * (log_s2 - logT));
    }
    return {n,      x,      ExtendedReal(log_prob), prob, se,
            TailMethod::tilted, trials, seed, lambda};
}

} // namespace ldp
