#include "ldp/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ldp/pressure.hpp"
#include "ldp/rate.hpp"
#include "ldp/rng.hpp"

namespace ldp {

namespace {

void check_grids(const std::vector<double>& x_grid,
                 const std::vector<int>& n_list) {
    if (x_grid.empty() || n_list.empty())
        throw std::invalid_argument("entropy_curve: empty grid");
    for (std::size_t j = 1; j < x_grid.size(); ++j)
        if (!(x_grid[j] > x_grid[j - 1]))
            throw std::invalid_argument(
                "entropy_curve: x_grid must be strictly increasing");
    if (n_list.front() < 1)
        throw std::invalid_argument("entropy_curve: n must be >= 1");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw std::invalid_argument(
                "entropy_curve: n_list must be strictly increasing");
}

ExtendedReal clamp_log(ExtendedReal v) {
    if (v.is_finite() && v.value() > 0.0)
        return 0.0;
    return v;
}

double support_min(const Distribution& d) {
    switch (d.kind()) {
    case Kind::bernoulli:
    case Kind::finite:
        return d.atoms().front();
    case Kind::gaussian:
        return -std::numeric_limits<double>::infinity();
    case Kind::exponential:
    case Kind::poisson:
        return 0.0;
    }
    return -std::numeric_limits<double>::infinity();
}

// Difference a - b collapsed to a double for margin reporting.
double ext_diff(ExtendedReal a, ExtendedReal b) {
    if (a.is_finite() && b.is_finite())
        return a.value() - b.value();
    if (a <= b)
        return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::infinity();
}

struct SeriesShape {
    double worst_monotone = -std::numeric_limits<double>::infinity();
    double worst_concavity = -std::numeric_limits<double>::infinity();
};

SeriesShape series_shape(const std::vector<double>& xs,
                         const std::vector<ExtendedReal>& vs) {
    SeriesShape r;
    for (std::size_t j = 1; j < vs.size(); ++j)
        r.worst_monotone = std::max(r.worst_monotone, ext_diff(vs[j], vs[j - 1]));
    for (std::size_t j = 2; j < vs.size(); ++j) {
        if (!vs[j - 2].is_finite() || !vs[j - 1].is_finite() ||
            !vs[j].is_finite())
            continue;
        double x0 = xs[j - 2], x1 = xs[j - 1], x2 = xs[j];
        double chord = ((x2 - x1) * vs[j - 2].value() +
                        (x1 - x0) * vs[j].value()) /
                       (x2 - x0);
        r.worst_concavity =
            std::max(r.worst_concavity, chord - vs[j - 1].value());
    }
    return r;
}

} // namespace

EntropyCurve entropy_curve(const Distribution& d,
                           const std::vector<double>& x_grid,
                           const std::vector<int>& n_list, TailMethod method,
                           long long trials, std::uint64_t seed,
                           const EstimatorOptions& opts) {
    check_grids(x_grid, n_list);
    EntropyCurve curve;
    curve.x_grid = x_grid;
    curve.n_list = n_list;
    curve.estimator_method = method;
    curve.values.assign(n_list.size(),
                        std::vector<ExtendedReal>(x_grid.size(), 0.0));

    for (std::size_t i = 0; i < n_list.size(); ++i) {
        int n = n_list[i];
        if (method == TailMethod::exact) {
            SumDistribution sd = exact_sum_distribution(d, n);
            for (std::size_t j = 0; j < x_grid.size(); ++j) {
                ExtendedReal lt = sd.log_tail(static_cast<double>(n) * x_grid[j]);
                curve.values[i][j] = clamp_log(scale(1.0 / n, lt));
            }
        } else {
            for (std::size_t j = 0; j < x_grid.size(); ++j) {
                std::uint64_t cell_seed =
                    rng::mix(seed, i * x_grid.size() + j);
                double x = x_grid[j];
                TailEstimate est = [&] {
                    if (method == TailMethod::tilted) {
                        try {
                            return tail_tilted(d, n, x, trials, cell_seed,
                                               opts);
                        } catch (const std::domain_error&) {
                        }
                    }
                    return tail_naive(d, n, x, trials, cell_seed, opts);
                }();
                curve.values[i][j] = clamp_log(scale(1.0 / n, est.log_prob));
            }
        }
    }

    curve.sup_values.assign(x_grid.size(), ExtendedReal::neg_inf());
    for (std::size_t i = 0; i < n_list.size(); ++i)
        for (std::size_t j = 0; j < x_grid.size(); ++j)
            if (curve.values[i][j] > curve.sup_values[j])
                curve.sup_values[j] = curve.values[i][j];

    curve.predicted.reserve(x_grid.size());
    for (double x : x_grid)
        curve.predicted.push_back(rate(d, x).limit_value);
    return curve;
}

ConcatenationReport concatenation_check(const Distribution& d, int m, int n,
                                        double x, double y, double alpha) {
    if (m < 1 || n < m)
        throw std::invalid_argument("concatenation_check: need 1 <= m <= n");
    if (x > y)
        throw std::invalid_argument("concatenation_check: need x <= y");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument(
            "concatenation_check: alpha must lie in (0,1)");

    int q = n / m;
    int r = n % m;
    int jx = static_cast<int>(std::floor(alpha * q));
    int jy = q - jx;

    SumDistribution sn = exact_sum_distribution(d, n);
    SumDistribution sm = exact_sum_distribution(d, m);
    SumDistribution s1 = exact_sum_distribution(d, 1);

    double target = alpha * x + (1.0 - alpha) * y;
    ExtendedReal lhs = sn.log_tail(static_cast<double>(n) * target);

    ExtendedReal rhs = 0.0;
    auto add_term = [&rhs](int count, ExtendedReal lp) {
        if (count > 0)
            rhs = rhs + scale(static_cast<double>(count), lp);
    };
    add_term(jx, sm.log_tail(static_cast<double>(m) * x));
    add_term(jy, sm.log_tail(static_cast<double>(m) * y));
    add_term(r, s1.log_tail(y));

    bool holds = lhs >= rhs + ExtendedReal(-1e-10);
    return {m, n, q, r, x, y, alpha, lhs, rhs, holds};
}

ShapeReport shape_check(const EntropyCurve& curve) {
    if (curve.estimator_method != TailMethod::exact)
        throw std::invalid_argument("shape_check: curve must be exact");
    SeriesShape sup = series_shape(curve.x_grid, curve.sup_values);
    SeriesShape pred = series_shape(curve.x_grid, curve.predicted);

    ShapeReport rep;
    rep.worst_monotone_margin =
        std::max(sup.worst_monotone, pred.worst_monotone);
    rep.worst_concavity_margin =
        std::max(sup.worst_concavity, pred.worst_concavity);
    rep.worst_gap_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < curve.x_grid.size(); ++j)
        rep.worst_gap_margin =
            std::max(rep.worst_gap_margin,
                     ext_diff(curve.sup_values[j], curve.predicted[j]));

    rep.monotone = rep.worst_monotone_margin <= 1e-12;
    rep.concave = rep.worst_concavity_margin <= 1e-9;
    rep.below_predicted = rep.worst_gap_margin <= 1e-12;
    return rep;
}

ExtendedReal dual_gap(const Distribution& d, double lambda,
                      const EntropyCurve& curve, EntropySource source) {
    if (lambda < 0.0)
        throw std::invalid_argument("dual_gap: lambda must be >= 0");
    const auto& vals = source == EntropySource::predicted ? curve.predicted
                                                          : curve.sup_values;
    const auto& xs = curve.x_grid;
    if (xs.empty())
        throw std::invalid_argument("dual_gap: empty curve");

    ExtendedReal best = ExtendedReal::neg_inf();
    for (std::size_t j = 0; j < xs.size(); ++j) {
        ExtendedReal term = ExtendedReal(lambda * xs[j]) + vals[j];
        if (term > best)
            best = term;
    }
    bool interior = false, at_first = false, at_last = false;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        ExtendedReal term = ExtendedReal(lambda * xs[j]) + vals[j];
        if (!(term == best))
            continue;
        if (j == 0)
            at_first = true;
        else if (j + 1 == xs.size())
            at_last = true;
        else
            interior = true;
    }

    if (!interior) {
        ExtendedReal c = essential_sup(d);
        bool upper_ok = c.is_finite() && xs.back() >= c.value();
        bool lower_ok = xs.front() <= support_min(d) ||
                        (lambda == 0.0 && xs.front() <= mean(d));
        bool bad_last = at_last && !at_first && !upper_ok;
        bool bad_first = at_first && !at_last && !lower_ok && lambda > 0.0;
        if (bad_last || bad_first)
            throw std::invalid_argument(
                "dual_gap: grid maximum sits on the range boundary; widen "
                "the u-range");
    }
    return pressure(d, lambda) + (-best);
}

std::pair<double, double> dual_gap_default_range(const Distribution& d,
                                                 double lambda) {
    double center = pressure_derivative(d, lambda);
    double lo = center - 1.0;
    double hi = center + 1.0;
    lo = std::max(lo, support_min(d));
    ExtendedReal c = essential_sup(d);
    if (c.is_finite())
        hi = std::min(hi, c.value());
    if (!(lo < hi))
        throw std::invalid_argument(
            "dual_gap_default_range: degenerate support");
    return {lo, hi};
}

ExtendedReal dual_sup_predicted(const Distribution& d, double lambda,
                                double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo))
        throw std::invalid_argument("dual_sup_predicted: bad range");
    ExtendedReal best = ExtendedReal::neg_inf();
    auto consider = [&](double u) {
        ExtendedReal term = ExtendedReal(lambda * u) + rate(d, u).limit_value;
        if (term > best)
            best = term;
    };
    double span = hi - lo;
    long long count = static_cast<long long>(std::floor(span / step + 1e-9));
    for (long long k = 0; k <= count; ++k)
        consider(lo + static_cast<double>(k) * step);
    consider(hi);
    return best;
}

} // namespace ldp
