#include "ldp/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace ldp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse2(double a, double b) {
    if (a < b)
        std::swap(a, b);
    if (b == kNegInf)
        return a;
    return a + std::log1p(std::exp(b - a));
}

// log sum_i exp(terms[i]) with the usual max shift.
double lse(const std::vector<double>& terms) {
    double m = kNegInf;
    for (double t : terms)
        m = std::max(m, t);
    if (m == kNegInf)
        return kNegInf;
    double s = 0.0;
    for (double t : terms)
        s += std::exp(t - m);
    return m + std::log(s);
}

// ---- adaptive Simpson on a scaled integrand -----------------------------

double simpson_slice(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson_slice(a, m, fa, flm, fm);
    double right = simpson_slice(m, b, fm, frm, fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
    if (!(b > a))
        return 0.0;
    double fa = f(a);
    double fm = f(0.5 * (a + b));
    double fb = f(b);
    double whole = simpson_slice(a, b, fa, fm, fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// log of integral_a^b e^{g(x)} dx, scaled by the peak of g so the working
// integrand stays in (0, 1]. `mode` is the maximizer of g on [a, b]; the
// interval is split there because the integrand spans many orders of
// magnitude on either side.
double log_integral_exp(const std::function<double(double)>& g, double a,
                        double b, double mode) {
    mode = std::clamp(mode, a, b);
    double gm = g(mode);
    if (gm == kNegInf)
        return kNegInf;
    auto h = [&](double x) { return std::exp(g(x) - gm); };
    // Rough scale first, then refine to ~1e-10 relative.
    double rough = 0.0;
    constexpr int kRough = 64;
    for (int i = 0; i <= kRough; ++i) {
        double x = a + (b - a) * i / kRough;
        double w = (i == 0 || i == kRough) ? 0.5 : 1.0;
        rough += w * h(x);
    }
    rough *= (b - a) / kRough;
    double tol = std::max(rough, 1e-300) * 1e-11;
    double integral = integrate(h, a, mode, tol) + integrate(h, mode, b, tol);
    if (!(integral > 0.0))
        return kNegInf;
    return gm + std::log(integral);
}

// log-weighted atoms of a finite-support law, tilted by lambda.
double finite_pressure(const Distribution& d, double lambda) {
    const auto& v = d.atoms();
    const auto& w = d.weights();
    std::vector<double> terms(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        terms[i] = lambda * v[i] + std::log(w[i]);
    return lse(terms);
}

double finite_tilted_mean(const Distribution& d, double lambda) {
    const auto& v = d.atoms();
    const auto& w = d.weights();
    double m = kNegInf;
    std::vector<double> e(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        e[i] = lambda * v[i] + std::log(w[i]);
        m = std::max(m, e[i]);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double t = std::exp(e[i] - m);
        num += v[i] * t;
        den += t;
    }
    return num / den;
}

} // namespace

ExtendedReal pressure(const Distribution& d, double lambda) {
    if (lambda == 0.0)
        return 0.0; // p(0) = log E[1], exactly
    switch (d.kind()) {
    case Kind::gaussian: {
        double mu = d.gaussian_mu();
        double sigma = d.gaussian_sigma();
        return lambda * mu + 0.5 * lambda * lambda * sigma * sigma;
    }
    case Kind::exponential: {
        double rate = d.exponential_rate();
        if (lambda >= rate)
            return ExtendedReal::pos_inf();
        return -std::log1p(-lambda / rate);
    }
    case Kind::poisson: {
        double v = d.poisson_mean() * std::expm1(lambda);
        if (std::isinf(v))
            return ExtendedReal::pos_inf();
        return v;
    }
    case Kind::bernoulli:
    case Kind::finite:
        return finite_pressure(d, lambda);
    }
    return 0.0;
}

double pressure_derivative(const Distribution& d, double lambda) {
    if (lambda == 0.0)
        return mean(d); // p'(0) = E[X1], same bits as mean()
    switch (d.kind()) {
    case Kind::gaussian: {
        double sigma = d.gaussian_sigma();
        return d.gaussian_mu() + lambda * sigma * sigma;
    }
    case Kind::exponential: {
        double rate = d.exponential_rate();
        if (lambda >= rate)
            throw std::domain_error("pressure_derivative: p(lambda) infinite");
        return 1.0 / (rate - lambda);
    }
    case Kind::poisson:
        return d.poisson_mean() * std::exp(lambda);
    case Kind::bernoulli:
    case Kind::finite:
        return finite_tilted_mean(d, lambda);
    }
    return 0.0;
}

double pressure_domain_sup(const Distribution& d) {
    if (d.kind() == Kind::exponential)
        return d.exponential_rate();
    return std::numeric_limits<double>::infinity();
}

ExtendedReal truncated_pressure(const Distribution& d, double lambda,
                                double K) {
    if (!(K > 0.0))
        throw std::invalid_argument("truncated_pressure: K must be positive");
    switch (d.kind()) {
    case Kind::bernoulli:
    case Kind::finite: {
        const auto& v = d.atoms();
        const auto& w = d.weights();
        std::vector<double> terms;
        terms.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            if (std::abs(v[i]) <= K)
                terms.push_back(lambda * v[i] + std::log(w[i]));
        if (terms.empty())
            return ExtendedReal::neg_inf();
        // Truncation only drops mass, so p_K <= p; clamp float drift.
        double t = lse(terms);
        ExtendedReal full = pressure(d, lambda);
        if (full.is_finite() && t > full.value())
            t = full.value();
        return t;
    }
    case Kind::poisson: {
        // Mass sits on 0, 1, ..., floor(K).
        double theta = d.poisson_mean();
        int kmax = static_cast<int>(std::floor(K));
        double acc = kNegInf;
        for (int k = 0; k <= kmax; ++k)
            acc = lse2(acc, lambda * k + k * std::log(theta) - theta -
                                std::lgamma(k + 1.0));
        return acc;
    }
    case Kind::gaussian: {
        double mu = d.gaussian_mu();
        double sigma = d.gaussian_sigma();
        auto g = [&](double x) {
            double z = (x - mu) / sigma;
            return lambda * x - 0.5 * z * z -
                   std::log(sigma * 2.5066282746310005024);
        };
        double mode = mu + lambda * sigma * sigma;
        return log_integral_exp(g, -K, K, mode);
    }
    case Kind::exponential: {
        double rate = d.exponential_rate();
        auto g = [&](double x) { return lambda * x + std::log(rate) - rate * x; };
        // Integrand is monotone in x: mode sits at an endpoint.
        double mode = lambda > rate ? K : 0.0;
        return log_integral_exp(g, 0.0, K, mode);
    }
    }
    return ExtendedReal::neg_inf();
}

} // namespace ldp
