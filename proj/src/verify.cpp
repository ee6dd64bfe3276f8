#include "ldp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ldp/entropy.hpp"
#include "ldp/pressure.hpp"
#include "ldp/rate.hpp"
#include "ldp/rng.hpp"
#include "ldp/tail.hpp"

namespace ldp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i)
        out.push_back(lo + (hi - lo) * i / (count - 1));
    out.back() = hi;
    return out;
}

double ext_diff(ExtendedReal a, ExtendedReal b) {
    if (a.is_finite() && b.is_finite())
        return a.value() - b.value();
    return a <= b ? -kInf : kInf;
}

CheckResult margin_check(std::string name, double margin, double tol,
                         std::string detail) {
    CheckStatus st = margin <= tol ? CheckStatus::pass : CheckStatus::fail;
    return {std::move(name), st, margin, std::move(detail)};
}

CheckResult skip(std::string name) {
    return {std::move(name), CheckStatus::skip, 0.0, "needs finite support"};
}

// Lambda grid bounded away from the domain boundary.
std::vector<double> lambda_grid(const Distribution& d, double lo, double hi,
                                int count, double headroom) {
    double dom = pressure_domain_sup(d);
    if (std::isfinite(dom))
        hi = std::min(hi, headroom * dom);
    return linspace(lo, hi, count);
}

std::vector<double> filtered_lambdas(const Distribution& d,
                                     std::initializer_list<double> want) {
    double dom = pressure_domain_sup(d);
    std::vector<double> out;
    for (double l : want)
        if (l < 0.9 * dom)
            out.push_back(l);
    if (out.empty())
        out.push_back(0.5 * dom);
    return out;
}

// Max of lambda u + limit_value(u) by nested grid refinement over the
// default bracketing range; accurate to ~1e-10 thanks to the flat top.
double refined_dual_sup(const Distribution& d, double lambda) {
    auto [lo, hi] = dual_gap_default_range(d, lambda);
    double best_u = lo, best = -kInf;
    for (int round = 0; round < 5; ++round) {
        double step = (hi - lo) / 32;
        for (int i = 0; i <= 32; ++i) {
            double u = lo + step * i;
            ExtendedReal term =
                ExtendedReal(lambda * u) + rate(d, u).limit_value;
            double v = term.as_double();
            if (v > best) {
                best = v;
                best_u = u;
            }
        }
        double nlo = std::max(lo, best_u - step);
        double nhi = std::min(hi, best_u + step);
        lo = nlo;
        hi = nhi;
    }
    return best;
}

// Support-spanning x grid used by the exact-enumeration suites.
std::vector<double> support_grid(const Distribution& d, int count) {
    return linspace(d.atoms().front(), d.atoms().back(), count);
}

CheckResult check_pressure_convexity(const Distribution& d) {
    std::vector<double> ls = lambda_grid(d, -2.0, 3.0, 21, 0.9);
    double worst = -kInf;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        for (std::size_t j = i; j < ls.size(); ++j) {
            double pi = pressure(d, ls[i]).value();
            double pj = pressure(d, ls[j]).value();
            for (double t : {0.25, 0.5, 0.75}) {
                double lam = t * ls[i] + (1.0 - t) * ls[j];
                double lhs = pressure(d, lam).value();
                worst = std::max(worst, lhs - (t * pi + (1.0 - t) * pj));
            }
        }
    }
    return margin_check("pressure_convexity", worst, 1e-9,
                        "chord test on a 21-point lambda grid");
}

CheckResult check_pressure_derivative(const Distribution& d) {
    constexpr double h = 1e-5;
    std::vector<double> ls = lambda_grid(d, -2.0 + h, 2.0, 15, 0.8);
    double worst = -kInf;
    for (double l : ls) {
        double fd =
            (pressure(d, l + h).value() - pressure(d, l - h).value()) /
            (2.0 * h);
        worst = std::max(worst, std::abs(pressure_derivative(d, l) - fd));
    }
    return margin_check("pressure_derivative_fd", worst, 1e-5,
                        "central difference, h = 1e-5");
}

double convergence_K(const Distribution& d, double lambda) {
    switch (d.kind()) {
    case Kind::bernoulli:
    case Kind::finite: {
        double m = 0.0;
        for (double a : d.atoms())
            m = std::max(m, std::abs(a));
        return m + 1.0;
    }
    case Kind::gaussian: {
        double mu = d.gaussian_mu();
        double sigma = d.gaussian_sigma();
        return std::abs(mu) + sigma * (std::abs(lambda) * sigma + 12.0);
    }
    case Kind::exponential:
        return 45.0 / (d.exponential_rate() - lambda);
    case Kind::poisson: {
        double theta = d.poisson_mean();
        return std::exp(lambda) * theta + 12.0 * std::sqrt(theta + 1.0) + 30.0;
    }
    }
    return 1.0;
}

CheckResult check_truncation_monotone(const Distribution& d) {
    std::vector<double> ls = filtered_lambdas(d, {0.0, 0.5, 1.0});
    double worst = -kInf;
    for (double l : ls) {
        ExtendedReal prev = ExtendedReal::neg_inf();
        for (double K : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
            ExtendedReal cur = truncated_pressure(d, l, K);
            worst = std::max(worst, ext_diff(prev, cur));
            prev = cur;
        }
    }
    return margin_check("truncation_monotone", worst, 1e-9,
                        "p_K non-decreasing in K");
}

CheckResult check_truncation_converges(const Distribution& d) {
    std::vector<double> ls = filtered_lambdas(d, {0.0, 0.5, 1.0});
    double worst = -kInf;
    for (double l : ls) {
        double K = convergence_K(d, l);
        double pk = truncated_pressure(d, l, K).value();
        double p = pressure(d, l).value();
        worst = std::max(worst, std::abs(pk - p));
    }
    return margin_check("truncation_converges", worst, 1e-6,
                        "|p_K - p| at kind-specific large K");
}

CheckResult check_truncated_dual(const Distribution& d) {
    std::vector<double> ls = filtered_lambdas(d, {0.5, 1.0, 2.0});
    double worst = -kInf;
    for (double l : ls) {
        double sup = refined_dual_sup(d, l);
        for (double K : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
            if (!(-l * K < sup))
                continue;
            ExtendedReal pk = truncated_pressure(d, l, K);
            worst = std::max(worst, ext_diff(pk, ExtendedReal(sup)));
        }
    }
    return margin_check("truncated_dual", worst, 1e-6,
                        "p_K(lambda) <= sup_u(lambda u + s(u))");
}

CheckResult check_rate_zero_at_mean(const Distribution& d) {
    double worst = -kInf;
    for (double x : {mean(d), mean(d) - 0.5, mean(d) - 2.0}) {
        RateResult r = rate(d, x);
        double bad = std::abs(r.limit_value.as_double()) +
                     std::abs(r.lambda_star.as_double());
        if (r.case_tag != RateCase::at_or_below_mean)
            bad = kInf;
        worst = std::max(worst, bad);
    }
    return margin_check("rate_zero_at_mean", worst, 0.0,
                        "limit and lambda* vanish exactly for x <= mean");
}

std::vector<double> rate_shape_grid(const Distribution& d) {
    switch (d.kind()) {
    case Kind::bernoulli:
    case Kind::finite:
        return support_grid(d, 21);
    case Kind::gaussian: {
        double mu = d.gaussian_mu();
        double sigma = d.gaussian_sigma();
        return linspace(mu - 2.0 * sigma, mu + 4.0 * sigma, 21);
    }
    case Kind::exponential: {
        double scale = 1.0 / d.exponential_rate();
        return linspace(0.2 * scale, 6.0 * scale, 21);
    }
    case Kind::poisson: {
        double theta = d.poisson_mean();
        return linspace(0.1, theta + 8.0 * std::sqrt(theta) + 4.0, 21);
    }
    }
    return {};
}

CheckResult check_rate_curve_shape(const Distribution& d) {
    std::vector<double> xs = rate_shape_grid(d);
    std::vector<ExtendedReal> vs;
    vs.reserve(xs.size());
    for (double x : xs)
        vs.push_back(rate(d, x).limit_value);

    double worst_mono = -kInf, worst_conc = -kInf;
    for (std::size_t j = 1; j < vs.size(); ++j)
        worst_mono = std::max(worst_mono, ext_diff(vs[j], vs[j - 1]));
    for (std::size_t j = 2; j < vs.size(); ++j) {
        if (!vs[j - 2].is_finite() || !vs[j - 1].is_finite() ||
            !vs[j].is_finite())
            continue;
        double chord = ((xs[j] - xs[j - 1]) * vs[j - 2].value() +
                        (xs[j - 1] - xs[j - 2]) * vs[j].value()) /
                       (xs[j] - xs[j - 2]);
        worst_conc = std::max(worst_conc, chord - vs[j - 1].value());
    }
    double worst = std::max(worst_mono, worst_conc);
    return margin_check("rate_curve_shape", worst, 1e-9,
                        "limit curve non-increasing and concave");
}

CheckResult check_dual_equality(const Distribution& d) {
    std::vector<double> ls = filtered_lambdas(d, {0.25, 0.5, 1.0, 2.0});
    double worst = -kInf;
    for (double l : ls) {
        double gap = pressure(d, l).value() - refined_dual_sup(d, l);
        worst = std::max(worst, std::abs(gap));
    }
    return margin_check("dual_equality_predicted", worst, 1e-5,
                        "p(lambda) vs refined sup of lambda u + s(u)");
}

CheckResult check_chernoff(const Distribution& d) {
    std::vector<double> xs = support_grid(d, 50);
    std::vector<double> lambdas = linspace(0.0, 5.0, 30);
    std::vector<double> pvals;
    pvals.reserve(lambdas.size());
    for (double l : lambdas)
        pvals.push_back(pressure(d, l).value());

    double worst = -kInf;
    for (int n = 1; n <= 64; ++n) {
        SumDistribution sd = exact_sum_distribution(d, n);
        for (double x : xs) {
            ExtendedReal lt = sd.log_tail(n * x);
            if (lt.is_neg_inf())
                continue;
            double lhs = lt.value() / n;
            for (std::size_t k = 0; k < lambdas.size(); ++k)
                worst = std::max(worst, lhs - (pvals[k] - lambdas[k] * x));
        }
    }
    return margin_check("chernoff_bound", worst, 1e-12,
                        "(1/n) log P <= p(lambda) - lambda x, n <= 64");
}

CheckResult check_entropy_shape(const Distribution& d) {
    std::vector<int> ns(64);
    for (int i = 0; i < 64; ++i)
        ns[i] = i + 1;
    EntropyCurve curve = entropy_curve(d, support_grid(d, 13), ns,
                                       TailMethod::exact, 0, 0);
    ShapeReport rep = shape_check(curve);
    double worst = std::max({rep.worst_monotone_margin,
                             rep.worst_concavity_margin,
                             rep.worst_gap_margin});
    CheckStatus st = rep.ok() ? CheckStatus::pass : CheckStatus::fail;
    return {"entropy_shape", st, worst,
            "sup and predicted curves: monotone, concave, sup <= predicted"};
}

CheckResult check_concatenation(const Distribution& d, std::uint64_t seed) {
    rng::Stream stream(rng::mix(seed, 0x636f6e636174ULL));
    double lo = d.atoms().front();
    double hi = d.atoms().back();
    double worst = -kInf;
    int failures = 0;
    for (int t = 0; t < 200; ++t) {
        int m = 1 + static_cast<int>(stream.next_u64() % 6);
        int n = m + static_cast<int>(stream.next_u64() %
                                     static_cast<std::uint64_t>(25 - m));
        double x = lo + (hi - lo) * stream.uniform();
        double y = lo + (hi - lo) * stream.uniform();
        if (x > y)
            std::swap(x, y);
        double alpha = 0.05 + 0.9 * stream.uniform();
        ConcatenationReport rep = concatenation_check(d, m, n, x, y, alpha);
        if (!rep.holds)
            ++failures;
        worst = std::max(worst, ext_diff(rep.rhs, rep.lhs));
    }
    CheckStatus st = failures == 0 ? CheckStatus::pass : CheckStatus::fail;
    return {"concatenation_random", st, worst,
            "200 seeded (m, n, x, y, alpha) tuples, slack 1e-10"};
}

CheckResult check_dual_gap_positive(const Distribution& d) {
    std::vector<int> ns(32);
    for (int i = 0; i < 32; ++i)
        ns[i] = i + 1;
    double worst = -kInf;
    for (int k = 0; k <= 12; ++k) {
        double l = 0.25 * k;
        auto [lo, hi] = dual_gap_default_range(d, l);
        EntropyCurve curve = entropy_curve(d, linspace(lo, hi, 201), ns,
                                           TailMethod::exact, 0, 0);
        ExtendedReal gap = dual_gap(d, l, curve);
        worst = std::max(worst, -gap.as_double());
    }
    return margin_check("dual_gap_positive", worst, 1e-12,
                        "p(lambda) >= grid sup of lambda u + sup_n s_n(u)");
}

} // namespace

const char* to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::pass:
        return "PASS";
    case CheckStatus::fail:
        return "FAIL";
    case CheckStatus::skip:
        return "SKIP";
    }
    return "?";
}

std::vector<CheckResult> run_verification(const Distribution& d,
                                          std::uint64_t seed) {
    std::vector<CheckResult> out;
    out.push_back(check_pressure_convexity(d));
    out.push_back(check_pressure_derivative(d));
    out.push_back(check_truncation_monotone(d));
    out.push_back(check_truncation_converges(d));
    out.push_back(check_truncated_dual(d));
    out.push_back(check_rate_zero_at_mean(d));
    out.push_back(check_rate_curve_shape(d));
    out.push_back(check_dual_equality(d));
    if (d.has_finite_support()) {
        out.push_back(check_chernoff(d));
        out.push_back(check_entropy_shape(d));
        out.push_back(check_concatenation(d, seed));
        out.push_back(check_dual_gap_positive(d));
    } else {
        out.push_back(skip("chernoff_bound"));
        out.push_back(skip("entropy_shape"));
        out.push_back(skip("concatenation_random"));
        out.push_back(skip("dual_gap_positive"));
    }
    return out;
}

} // namespace ldp
