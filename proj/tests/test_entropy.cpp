#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ldp/distribution.hpp"
#include "ldp/entropy.hpp"
#include "ldp/pressure.hpp"
#include "ldp/rate.hpp"
#include "ldp/rng.hpp"
#include "oracles.hpp"

using ldp::Distribution;
using ldp::EntropyCurve;
using ldp::EntropySource;
using ldp::ExtendedReal;
using ldp::TailMethod;

namespace {

std::vector<int> powers_of_two(int count) {
    std::vector<int> ns;
    for (int k = 0; k < count; ++k)
        ns.push_back(1 << k);
    return ns;
}

} // namespace

TEST_CASE("exact curve matches brute-force per-n tails") {
    Distribution b = Distribution::bernoulli(0.5);
    EntropyCurve curve =
        ldp::entropy_curve(b, {0.75}, {1, 2, 4, 8}, TailMethod::exact, 0, 0);
    REQUIRE(curve.values.size() == 4);
    for (std::size_t i = 0; i < curve.n_list.size(); ++i) {
        int n = curve.n_list[i];
        double p = oracle::brute_force_tail(b, n, 0.75);
        CHECK(curve.values[i][0].value() ==
              doctest::Approx(std::log(p) / n).epsilon(1e-12));
    }
    // s_1 = s_2 = log(1/2); the sup over n <= 8 is attained at n = 8.
    CHECK(curve.values[0][0].value() == doctest::Approx(std::log(0.5)));
    CHECK(curve.values[1][0].value() == doctest::Approx(std::log(0.5)));
    CHECK(curve.sup_values[0].value() ==
          doctest::Approx(std::log(37.0 / 256.0) / 8.0).epsilon(1e-12));
    CHECK(curve.predicted[0].value() ==
          doctest::Approx(oracle::bernoulli_entropy(0.5, 0.75)).epsilon(1e-12));
    CHECK(curve.estimator_method == TailMethod::exact);
}

TEST_CASE("curve is identically zero at or below the support minimum") {
    Distribution b = Distribution::bernoulli(0.5);
    EntropyCurve curve = ldp::entropy_curve(b, {-0.5, 0.0}, powers_of_two(5),
                                            TailMethod::exact, 0, 0);
    for (const auto& row : curve.values)
        for (const ExtendedReal& v : row)
            CHECK(v == ExtendedReal(0.0));
    for (const ExtendedReal& v : curve.sup_values)
        CHECK(v == ExtendedReal(0.0));
    for (const ExtendedReal& v : curve.predicted)
        CHECK(v == ExtendedReal(0.0));
}

TEST_CASE("curve is -inf above the essential sup") {
    Distribution b = Distribution::bernoulli(0.5);
    EntropyCurve curve =
        ldp::entropy_curve(b, {1.5}, powers_of_two(4), TailMethod::exact, 0, 0);
    for (const auto& row : curve.values)
        CHECK(row[0].is_neg_inf());
    CHECK(curve.sup_values[0].is_neg_inf());
    CHECK(curve.predicted[0].is_neg_inf());
}

TEST_CASE("curve at the essential sup equals the top-atom log mass") {
    Distribution d = Distribution::parse("discrete:-1:0.5,2:0.3,5:0.2");
    EntropyCurve curve =
        ldp::entropy_curve(d, {5.0}, {1, 2, 3}, TailMethod::exact, 0, 0);
    for (const auto& row : curve.values)
        CHECK(row[0].value() == doctest::Approx(std::log(0.2)).epsilon(1e-12));
    CHECK(curve.predicted[0].value() ==
          doctest::Approx(std::log(0.2)).epsilon(1e-12));
}

TEST_CASE("curve invariants: values nonpositive, sup dominates rows") {
    Distribution d = Distribution::parse("discrete:-1:0.5,2:0.3,5:0.2");
    std::vector<double> grid;
    for (double x = -1.0; x <= 5.0; x += 0.5)
        grid.push_back(x);
    EntropyCurve curve =
        ldp::entropy_curve(d, grid, {1, 2, 3, 5, 8}, TailMethod::exact, 0, 0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        ExtendedReal max_row = ExtendedReal::neg_inf();
        for (std::size_t i = 0; i < curve.n_list.size(); ++i) {
            CHECK(curve.values[i][j] <= ExtendedReal(0.0));
            CHECK(curve.values[i][j] <= curve.sup_values[j]);
            if (curve.values[i][j] > max_row)
                max_row = curve.values[i][j];
        }
        CHECK(curve.sup_values[j] == max_row);
        // s_n <= s = limit: the sup never exceeds the prediction.
        CHECK(curve.sup_values[j] <= curve.predicted[j] + ExtendedReal(1e-12));
    }
}

TEST_CASE("entropy_curve rejects malformed grids") {
    Distribution b = Distribution::bernoulli(0.5);
    CHECK_THROWS_AS(
        ldp::entropy_curve(b, {}, {1}, TailMethod::exact, 0, 0),
        std::invalid_argument);
    CHECK_THROWS_AS(
        ldp::entropy_curve(b, {0.5}, {}, TailMethod::exact, 0, 0),
        std::invalid_argument);
    CHECK_THROWS_AS(
        ldp::entropy_curve(b, {0.5, 0.5}, {1}, TailMethod::exact, 0, 0),
        std::invalid_argument);
    CHECK_THROWS_AS(
        ldp::entropy_curve(b, {0.7, 0.5}, {1}, TailMethod::exact, 0, 0),
        std::invalid_argument);
    CHECK_THROWS_AS(
        ldp::entropy_curve(b, {0.5}, {0, 1}, TailMethod::exact, 0, 0),
        std::invalid_argument);
    CHECK_THROWS_AS(
        ldp::entropy_curve(b, {0.5}, {2, 2}, TailMethod::exact, 0, 0),
        std::invalid_argument);
}

TEST_CASE("Monte Carlo curve reports -inf on zero hits and is seeded") {
    Distribution b = Distribution::bernoulli(0.5);
    EntropyCurve curve = ldp::entropy_curve(b, {0.999}, {32}, TailMethod::naive,
                                            100, 7);
    CHECK(curve.values[0][0].is_neg_inf());
    CHECK(curve.predicted[0].is_finite()); // the limit itself is finite

    EntropyCurve a = ldp::entropy_curve(b, {0.6, 0.7}, {4, 8},
                                        TailMethod::naive, 2000, 11);
    EntropyCurve c = ldp::entropy_curve(b, {0.6, 0.7}, {4, 8},
                                        TailMethod::naive, 2000, 11);
    for (std::size_t i = 0; i < a.values.size(); ++i)
        for (std::size_t j = 0; j < a.values[i].size(); ++j)
            CHECK(a.values[i][j] == c.values[i][j]);
}

TEST_CASE("tilted curve falls back to naive where no finite tilt exists") {
    Distribution b = Distribution::bernoulli(0.5);
    // x = 1.0 sits at the essential sup: the tilt is infeasible there, the
    // cell silently uses the direct estimator instead of failing the curve.
    EntropyCurve curve = ldp::entropy_curve(b, {0.6, 1.0}, {4},
                                            TailMethod::tilted, 4000, 3);
    CHECK(curve.estimator_method == TailMethod::tilted);
    CHECK(curve.values[0][0].is_finite());
    // P(all four heads) = 1/16; 4000 trials find it.
    CHECK(curve.values[0][1].is_finite());
}

TEST_CASE("concatenation bound: blocks of two against n = 8") {
    Distribution b = Distribution::bernoulli(0.5);
    ldp::ConcatenationReport rep =
        ldp::concatenation_check(b, 2, 8, 0.75, 0.75, 0.5);
    CHECK(rep.q == 4);
    CHECK(rep.r == 0);
    CHECK(rep.lhs.value() ==
          doctest::Approx(std::log(37.0 / 256.0)).epsilon(1e-12));
    // floor(0.5*4) = 2 blocks at x plus 2 blocks at y, all P = 1/4.
    CHECK(rep.rhs.value() ==
          doctest::Approx(4.0 * std::log(0.25)).epsilon(1e-12));
    CHECK(rep.holds);
}

TEST_CASE("concatenation bound: degenerate m = n = 1") {
    Distribution b = Distribution::bernoulli(0.5);
    ldp::ConcatenationReport rep =
        ldp::concatenation_check(b, 1, 1, 0.75, 0.75, 0.5);
    CHECK(rep.q == 1);
    CHECK(rep.r == 0);
    CHECK(rep.lhs == rep.rhs);
    CHECK(rep.holds);
}

TEST_CASE("concatenation bound: mixed thresholds with a remainder") {
    Distribution b = Distribution::bernoulli(0.5);
    ldp::ConcatenationReport rep =
        ldp::concatenation_check(b, 3, 10, 0.6, 0.9, 0.5);
    CHECK(rep.q == 3);
    CHECK(rep.r == 1);
    // floor(0.5*3) = 1 block at x = 0.6, 2 blocks at y = 0.9, 1 single draw.
    double block_x = oracle::brute_force_tail(b, 3, 0.6);
    double block_y = oracle::brute_force_tail(b, 3, 0.9);
    double single = oracle::brute_force_tail(b, 1, 0.9);
    CHECK(rep.rhs.value() ==
          doctest::Approx(std::log(block_x) + 2.0 * std::log(block_y) +
                          std::log(single))
              .epsilon(1e-12));
    double lhs = oracle::brute_force_tail(b, 10, 0.5 * 0.6 + 0.5 * 0.9);
    CHECK(rep.lhs.value() == doctest::Approx(std::log(lhs)).epsilon(1e-12));
    CHECK(rep.holds);
}

TEST_CASE("concatenation bound holds when both sides are -inf") {
    Distribution b = Distribution::bernoulli(0.5);
    // alpha x + (1-alpha) y = 1.3 exceeds the essential sup, as does y.
    ldp::ConcatenationReport rep =
        ldp::concatenation_check(b, 2, 5, 0.5, 1.5, 0.2);
    CHECK(rep.rhs.is_neg_inf());
    CHECK(rep.lhs.is_neg_inf());
    CHECK(rep.holds);
}

TEST_CASE("concatenation bound rejects malformed tuples") {
    Distribution b = Distribution::bernoulli(0.5);
    CHECK_THROWS_AS(ldp::concatenation_check(b, 0, 4, 0.5, 0.6, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(ldp::concatenation_check(b, 5, 4, 0.5, 0.6, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(ldp::concatenation_check(b, 2, 4, 0.7, 0.6, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(ldp::concatenation_check(b, 2, 4, 0.5, 0.6, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(ldp::concatenation_check(b, 2, 4, 0.5, 0.6, 1.0),
                    std::invalid_argument);
}

TEST_CASE("concatenation bound holds on randomized tuples") {
    Distribution d = Distribution::parse("discrete:-1:0.5,2:0.3,5:0.2");
    ldp::rng::Stream stream(99);
    for (int t = 0; t < 100; ++t) {
        int m = 1 + static_cast<int>(stream.uniform() * 6.0);
        int n = m + static_cast<int>(stream.uniform() * (20 - m));
        double a = -1.0 + 6.0 * stream.uniform();
        double bx = -1.0 + 6.0 * stream.uniform();
        double x = std::min(a, bx), y = std::max(a, bx);
        double alpha = 0.05 + 0.9 * stream.uniform();
        ldp::ConcatenationReport rep =
            ldp::concatenation_check(d, m, n, x, y, alpha);
        CAPTURE(m);
        CAPTURE(n);
        CAPTURE(x);
        CAPTURE(y);
        CAPTURE(alpha);
        CHECK(rep.holds);
    }
}

TEST_CASE("shape_check passes on an exact curve and reports margins") {
    Distribution b = Distribution::bernoulli(0.5);
    std::vector<double> grid = {0.5, 0.625, 0.75, 0.875, 1.0};
    EntropyCurve curve =
        ldp::entropy_curve(b, grid, powers_of_two(7), TailMethod::exact, 0, 0);
    ldp::ShapeReport rep = ldp::shape_check(curve);
    CHECK(rep.monotone);
    CHECK(rep.concave);
    CHECK(rep.below_predicted);
    CHECK(rep.ok());
    CHECK(rep.worst_monotone_margin <= 1e-12);
    CHECK(rep.worst_concavity_margin <= 1e-9);
    CHECK(rep.worst_gap_margin <= 1e-12);
    // The prediction endpoints of the grid: exactly 0 at the mean, the
    // top-atom mass at the essential sup.
    CHECK(curve.predicted.front() == ExtendedReal(0.0));
    CHECK(curve.predicted.back().value() ==
          doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("shape_check requires an exact curve") {
    Distribution b = Distribution::bernoulli(0.5);
    EntropyCurve curve =
        ldp::entropy_curve(b, {0.5, 0.75}, {2, 4}, TailMethod::naive, 500, 1);
    CHECK_THROWS_AS(ldp::shape_check(curve), std::invalid_argument);
}

TEST_CASE("dual gap with the predicted curve is tiny on a fine grid") {
    Distribution b = Distribution::bernoulli(0.5);
    std::vector<double> grid;
    for (int k = 0; k <= 500; ++k)
        grid.push_back(0.5 + 1e-3 * k);
    EntropyCurve curve =
        ldp::entropy_curve(b, grid, {1}, TailMethod::exact, 0, 0);
    ExtendedReal gap =
        ldp::dual_gap(b, 1.0, curve, EntropySource::predicted);
    CHECK(gap.value() >= 0.0);
    CHECK(gap.value() <= 1e-3);

    ExtendedReal sup = ldp::dual_sup_predicted(b, 1.0, 0.5, 1.0, 1e-3);
    CHECK(sup.value() == doctest::Approx(0.620115).epsilon(1e-4));
    ExtendedReal p = ldp::pressure(b, 1.0);
    CHECK(p.value() == doctest::Approx(std::log(0.5 + 0.5 * std::exp(1.0))));
    CHECK(p.value() - sup.value() >= 0.0);
    CHECK(p.value() - sup.value() <= 1e-3);
}

TEST_CASE("dual gap is nonnegative and shrinks as n_list refines") {
    Distribution b = Distribution::bernoulli(0.5);
    std::vector<double> grid;
    for (int k = 0; k <= 50; ++k)
        grid.push_back(0.5 + 0.01 * k);
    EntropyCurve coarse =
        ldp::entropy_curve(b, grid, powers_of_two(4), TailMethod::exact, 0, 0);
    EntropyCurve fine =
        ldp::entropy_curve(b, grid, powers_of_two(7), TailMethod::exact, 0, 0);
    ExtendedReal g_coarse = ldp::dual_gap(b, 1.0, coarse);
    ExtendedReal g_fine = ldp::dual_gap(b, 1.0, fine);
    CHECK(g_coarse.value() >= -1e-12);
    CHECK(g_fine.value() >= -1e-12);
    CHECK(g_fine.value() <= g_coarse.value() + 1e-12);
}

TEST_CASE("dual gap at lambda = 0 with a grid reaching the mean is zero") {
    Distribution b = Distribution::bernoulli(0.5);
    EntropyCurve curve = ldp::entropy_curve(b, {0.3, 0.6, 0.9}, {1, 2, 4},
                                            TailMethod::exact, 0, 0);
    ExtendedReal gap = ldp::dual_gap(b, 0.0, curve, EntropySource::predicted);
    CHECK(gap == ExtendedReal(0.0));
}

TEST_CASE("dual gap flags a maximizer stuck on the grid boundary") {
    Distribution b = Distribution::bernoulli(0.5);
    // lambda = 2 pushes the maximizer to ~0.88, beyond this range.
    std::vector<double> grid = {0.5, 0.6, 0.7, 0.75};
    EntropyCurve curve =
        ldp::entropy_curve(b, grid, powers_of_two(5), TailMethod::exact, 0, 0);
    CHECK_THROWS_AS(ldp::dual_gap(b, 2.0, curve), std::invalid_argument);
    CHECK_THROWS_AS(
        ldp::dual_gap(b, 2.0, curve, EntropySource::predicted),
        std::invalid_argument);

    // A small positive lambda leaves the maximizer below this range.
    std::vector<double> high = {0.9, 0.95};
    EntropyCurve hcurve =
        ldp::entropy_curve(b, high, powers_of_two(5), TailMethod::exact, 0, 0);
    CHECK_THROWS_AS(ldp::dual_gap(b, 0.1, hcurve), std::invalid_argument);
}

TEST_CASE("dual gap boundary maximizer is fine at the essential sup") {
    Distribution b = Distribution::bernoulli(0.5);
    // Very large tilts legitimately maximize at u = c when the grid reaches
    // it; this is not a range problem.
    std::vector<double> grid = {0.5, 0.75, 1.0};
    EntropyCurve curve =
        ldp::entropy_curve(b, grid, powers_of_two(5), TailMethod::exact, 0, 0);
    ExtendedReal gap = ldp::dual_gap(b, 8.0, curve);
    CHECK(gap.value() >= -1e-12);
}

TEST_CASE("dual gap rejects negative lambda") {
    Distribution b = Distribution::bernoulli(0.5);
    EntropyCurve curve =
        ldp::entropy_curve(b, {0.5, 1.0}, {1}, TailMethod::exact, 0, 0);
    CHECK_THROWS_AS(ldp::dual_gap(b, -0.5, curve), std::invalid_argument);
}

TEST_CASE("default dual range brackets the tilted mean and clips") {
    Distribution b = Distribution::bernoulli(0.5);
    auto [lo, hi] = ldp::dual_gap_default_range(b, 1.0);
    double center = std::exp(1.0) / (1.0 + std::exp(1.0));
    CHECK(lo == doctest::Approx(0.0));
    CHECK(hi == doctest::Approx(1.0));
    CHECK(lo < center);
    CHECK(center < hi);

    Distribution g = Distribution::gaussian(0.0, 1.0);
    auto [glo, ghi] = ldp::dual_gap_default_range(g, 1.0);
    CHECK(glo == doctest::Approx(0.0));
    CHECK(ghi == doctest::Approx(2.0));

    Distribution one = Distribution::finite({3.0}, {1.0});
    CHECK_THROWS_AS(ldp::dual_gap_default_range(one, 1.0),
                    std::invalid_argument);
}

TEST_CASE("dual_sup_predicted covers endpoints and validates the range") {
    Distribution b = Distribution::bernoulli(0.5);
    // Degenerate range: single point evaluation.
    ExtendedReal v = ldp::dual_sup_predicted(b, 1.0, 0.75, 0.75, 0.1);
    double expect = 0.75 + oracle::bernoulli_entropy(0.5, 0.75);
    CHECK(v.value() == doctest::Approx(expect).epsilon(1e-12));
    // lambda = 0: the best value of s alone is 0 at u <= mean.
    ExtendedReal z = ldp::dual_sup_predicted(b, 0.0, 0.0, 1.0, 0.25);
    CHECK(z == ExtendedReal(0.0));
    CHECK_THROWS_AS(ldp::dual_sup_predicted(b, 1.0, 0.5, 1.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(ldp::dual_sup_predicted(b, 1.0, 1.0, 0.5, 0.1),
                    std::invalid_argument);
}
