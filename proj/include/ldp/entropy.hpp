#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ldp/distribution.hpp"
#include "ldp/extended_real.hpp"
#include "ldp/tail.hpp"

namespace ldp {

// Empirical entropy curves s_n(x) = (1/n) log P(mean_n >= x) on a grid,
// together with their supremum over n and the predicted limit from the
// rate module.
struct EntropyCurve {
    std::vector<double> x_grid;             // strictly increasing
    std::vector<int> n_list;                // strictly increasing, >= 1
    std::vector<std::vector<ExtendedReal>> values; // [n index][x index]
    std::vector<ExtendedReal> sup_values;   // per x: max over n_list
    std::vector<ExtendedReal> predicted;    // per x: limit from rate()
    TailMethod estimator_method;
};

// Which numerical stand-in for s a check uses: the running supremum of the
// curve (the definition) or the limit predicted by convex duality.
enum class EntropySource { empirical_sup, predicted };

// Builds the curve with the chosen estimator. Monte Carlo cells draw their
// seeds from mix(seed, cell_index) with cell_index = n_index * |x_grid| +
// x_index, so results do not depend on evaluation order. Tilted cells
// whose threshold admits no finite tilt fall back to the naive estimator.
EntropyCurve entropy_curve(const Distribution& d,
                           const std::vector<double>& x_grid,
                           const std::vector<int>& n_list, TailMethod method,
                           long long trials, std::uint64_t seed,
                           const EstimatorOptions& opts = {});

struct ConcatenationReport {
    int m, n, q, r; // n = m q + r, 0 <= r < m
    double x, y, alpha;
    ExtendedReal lhs; // log P(mean_n >= alpha x + (1-alpha) y)
    ExtendedReal rhs; // floor(alpha q) log P(mean_m >= x)
                      //   + (q - floor(alpha q)) log P(mean_m >= y)
                      //   + r log P(X1 >= y)
    bool holds;       // lhs >= rhs - 1e-10
};

// Verifies the concatenation bound obtained from the Euclidean division of
// n by m: forcing each block of m steps to clear its own threshold forces
// the full mean above the mixed threshold. Exact tails on both sides.
ConcatenationReport concatenation_check(const Distribution& d, int m, int n,
                                        double x, double y, double alpha);

struct ShapeReport {
    bool monotone;        // sup_values and predicted non-increasing in x
    bool concave;         // midpoint concavity on finite triples, slack 1e-9
    bool below_predicted; // sup_values <= predicted + 1e-12
    double worst_monotone_margin;  // max increase between neighbors
    double worst_concavity_margin; // max chord excess over the middle value
    double worst_gap_margin;       // max of sup_values - predicted
    bool ok() const { return monotone && concave && below_predicted; }
};

// Structural claims about s: non-increasing, concave, dominated by the
// predicted limit. Requires an exact-method curve. Entries of -inf
// participate in the ordering checks but are excluded from concavity
// triples.
ShapeReport shape_check(const EntropyCurve& curve);

// Chernoff-direction gap p(lambda) - max over the curve's grid of
// (lambda u + s(u)), with s taken from the chosen source. Nonnegative up
// to float error for exact curves; shrinks as n_list and the grid refine.
// Throws std::invalid_argument when the grid maximum sits only on a
// boundary that is strictly inside the support (the range was too small).
ExtendedReal dual_gap(const Distribution& d, double lambda,
                      const EntropyCurve& curve,
                      EntropySource source = EntropySource::empirical_sup);

// Default u-range for dual_gap grids: [p'(lambda) - 1, p'(lambda) + 1]
// clipped to the support hull. The maximizer of lambda u + s(u) is the
// tilted mean, so this range brackets it.
std::pair<double, double> dual_gap_default_range(const Distribution& d,
                                                 double lambda);

// Max over {lo, lo+step, ...} ∪ {hi} of lambda u + limit_value(u), using
// the closed-form limit curve as s.
ExtendedReal dual_sup_predicted(const Distribution& d, double lambda,
                                double lo, double hi, double step);

} // namespace ldp
