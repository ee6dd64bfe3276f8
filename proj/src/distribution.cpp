#include "ldp/distribution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <utility>

namespace ldp {

namespace {

constexpr double kAtomMergeTol = 1e-12;
constexpr std::size_t kAtomCap = 1'000'000;

// log(e^a + e^b) without overflow; tolerates -inf inputs.
double lse2(double a, double b) {
    if (a < b)
        std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity())
        return a;
    return a + std::log1p(std::exp(b - a));
}

} // namespace

Distribution Distribution::bernoulli(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("bernoulli: p must lie in (0, 1)");
    Distribution d;
    d.kind_ = Kind::bernoulli;
    d.a_ = p;
    d.atoms_ = {0.0, 1.0};
    d.weights_ = {1.0 - p, p};
    d.cum_ = {1.0 - p, 1.0};
    return d;
}

Distribution Distribution::gaussian(double mu, double sigma) {
    if (!std::isfinite(mu) || !(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("gaussian: need finite mu and sigma > 0");
    Distribution d;
    d.kind_ = Kind::gaussian;
    d.a_ = mu;
    d.b_ = sigma;
    return d;
}

Distribution Distribution::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw std::invalid_argument("exponential: rate must be positive");
    Distribution d;
    d.kind_ = Kind::exponential;
    d.a_ = rate;
    return d;
}

Distribution Distribution::poisson(double mean) {
    if (!(mean > 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("poisson: mean must be positive");
    Distribution d;
    d.kind_ = Kind::poisson;
    d.a_ = mean;
    return d;
}

Distribution Distribution::finite(std::vector<double> values,
                                  std::vector<double> weights) {
    if (values.empty())
        throw std::invalid_argument("finite: need at least one atom");
    if (values.size() != weights.size())
        throw std::invalid_argument("finite: values/weights size mismatch");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("finite: atom values must be finite");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("finite: weights must be positive");

    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });

    // Merge atoms within the tolerance; group anchor is the smallest member.
    std::vector<double> v_out, w_out;
    for (std::size_t idx : order) {
        if (!v_out.empty() && values[idx] - v_out.back() <= kAtomMergeTol) {
            w_out.back() += weights[idx];
        } else {
            v_out.push_back(values[idx]);
            w_out.push_back(weights[idx]);
        }
    }
    double total = std::accumulate(w_out.begin(), w_out.end(), 0.0);
    for (double& w : w_out)
        w /= total;

    Distribution d;
    d.kind_ = Kind::finite;
    d.atoms_ = std::move(v_out);
    d.weights_ = std::move(w_out);
    d.cum_.resize(d.weights_.size());
    std::partial_sum(d.weights_.begin(), d.weights_.end(), d.cum_.begin());
    d.cum_.back() = 1.0;
    return d;
}

Distribution Distribution::empirical(std::span<const double> samples) {
    if (samples.empty())
        throw std::invalid_argument("empirical: need at least one sample");
    std::vector<double> values(samples.begin(), samples.end());
    std::vector<double> weights(samples.size(), 1.0);
    return finite(std::move(values), std::move(weights));
}

const std::vector<double>& Distribution::atoms() const {
    if (!has_finite_support())
        throw UnsupportedKindError("operation requires a finite-support law");
    return atoms_;
}

const std::vector<double>& Distribution::weights() const {
    if (!has_finite_support())
        throw UnsupportedKindError("operation requires a finite-support law");
    return weights_;
}

const std::vector<double>& Distribution::cumulative() const {
    if (!has_finite_support())
        throw UnsupportedKindError("operation requires a finite-support law");
    return cum_;
}

namespace {

std::string format_param(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string Distribution::to_string() const {
    switch (kind_) {
    case Kind::bernoulli:
        return "bernoulli:" + format_param(a_);
    case Kind::gaussian:
        return "gaussian:" + format_param(a_) + "," + format_param(b_);
    case Kind::exponential:
        return "exponential:" + format_param(a_);
    case Kind::poisson:
        return "poisson:" + format_param(a_);
    case Kind::finite: {
        std::string out = "discrete:";
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (i)
                out += ',';
            out += format_param(atoms_[i]) + ":" + format_param(weights_[i]);
        }
        return out;
    }
    }
    return {};
}

// ---- spec-string parsing ----------------------------------------------

namespace {

double parse_real_token(std::string_view token, std::size_t pos) {
    double out = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || token.empty())
        throw ParseError("expected a number, got '" + std::string(token) +
                             "' at position " + std::to_string(pos),
                         pos);
    return out;
}

std::vector<double> load_sample_column(const std::string& path,
                                       std::size_t pos) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("empirical: cannot open '" + path + "' at position " +
                             std::to_string(pos),
                         pos);
    std::vector<double> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        std::size_t start = line.find_first_not_of(' ');
        if (start == std::string::npos)
            continue;
        std::string token = line.substr(start);
        double v = 0.0;
        auto [ptr, ec] =
            std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc{} || ptr != token.data() + token.size()) {
            if (line_no == 1)
                continue; // header row
            throw ParseError("empirical: bad value '" + token + "' on line " +
                                 std::to_string(line_no) + " of " + path,
                             pos);
        }
        samples.push_back(v);
    }
    if (samples.empty())
        throw ParseError("empirical: no samples in " + path, pos);
    return samples;
}

} // namespace

Distribution Distribution::parse(std::string_view text) {
    std::size_t colon = text.find(':');
    if (colon == std::string_view::npos)
        throw ParseError("expected ':' after distribution kind in '" +
                             std::string(text) + "'",
                         text.size());
    std::string_view kind = text.substr(0, colon);
    std::string_view rest = text.substr(colon + 1);
    std::size_t rest_pos = colon + 1;

    auto rethrow_at = [&](const std::invalid_argument& e) -> Distribution {
        throw ParseError(std::string(e.what()) + " (in '" + std::string(text) +
                             "' at position " + std::to_string(rest_pos) + ")",
                         rest_pos);
    };

    try {
        if (kind == "bernoulli")
            return bernoulli(parse_real_token(rest, rest_pos));
        if (kind == "exponential")
            return exponential(parse_real_token(rest, rest_pos));
        if (kind == "poisson")
            return poisson(parse_real_token(rest, rest_pos));
        if (kind == "gaussian") {
            std::size_t comma = rest.find(',');
            if (comma == std::string_view::npos)
                throw ParseError("gaussian: expected MU,SIGMA at position " +
                                     std::to_string(rest_pos),
                                 rest_pos);
            double mu = parse_real_token(rest.substr(0, comma), rest_pos);
            double sigma = parse_real_token(rest.substr(comma + 1),
                                            rest_pos + comma + 1);
            return gaussian(mu, sigma);
        }
        if (kind == "discrete") {
            std::vector<double> values, weights;
            std::size_t pos = rest_pos;
            std::string_view tail = rest;
            while (true) {
                std::size_t comma = tail.find(',');
                std::string_view pair = comma == std::string_view::npos
                                            ? tail
                                            : tail.substr(0, comma);
                std::size_t sep = pair.find(':');
                if (sep == std::string_view::npos)
                    throw ParseError("discrete: expected V:W pair, got '" +
                                         std::string(pair) + "' at position " +
                                         std::to_string(pos),
                                     pos);
                values.push_back(parse_real_token(pair.substr(0, sep), pos));
                weights.push_back(
                    parse_real_token(pair.substr(sep + 1), pos + sep + 1));
                if (comma == std::string_view::npos)
                    break;
                tail = tail.substr(comma + 1);
                pos += comma + 1;
            }
            return finite(std::move(values), std::move(weights));
        }
        if (kind == "empirical") {
            if (rest.empty() || rest.front() != '@')
                throw ParseError("empirical: expected @PATH at position " +
                                     std::to_string(rest_pos),
                                 rest_pos);
            auto samples =
                load_sample_column(std::string(rest.substr(1)), rest_pos + 1);
            return empirical(samples);
        }
    } catch (const ParseError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        return rethrow_at(e);
    }
    throw ParseError("unknown distribution kind '" + std::string(kind) +
                         "' at position 0",
                     0);
}

// ---- moments and support ----------------------------------------------

double mean(const Distribution& d) {
    switch (d.kind()) {
    case Kind::gaussian:
        return d.gaussian_mu();
    case Kind::exponential:
        return 1.0 / d.exponential_rate();
    case Kind::poisson:
        return d.poisson_mean();
    case Kind::bernoulli:
    case Kind::finite: {
        const auto& v = d.atoms();
        const auto& w = d.weights();
        double m = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            m += v[i] * w[i];
        return m;
    }
    }
    return 0.0;
}

ExtendedReal essential_sup(const Distribution& d) {
    if (d.has_finite_support())
        return d.atoms().back();
    return ExtendedReal::pos_inf();
}

// ---- sampling ----------------------------------------------------------

double sample_one(const Distribution& d, rng::Stream& stream) {
    switch (d.kind()) {
    case Kind::bernoulli:
        return stream.uniform() < d.bernoulli_p() ? 1.0 : 0.0;
    case Kind::gaussian:
        return d.gaussian_mu() + d.gaussian_sigma() * stream.normal();
    case Kind::exponential:
        return stream.exponential() / d.exponential_rate();
    case Kind::poisson: {
        // Count unit-rate arrivals in [0, mean]; O(mean) draws but immune
        // to the exp(-mean) underflow of the product method.
        double budget = d.poisson_mean();
        double acc = stream.exponential();
        double k = 0.0;
        while (acc <= budget) {
            k += 1.0;
            acc += stream.exponential();
        }
        return k;
    }
    case Kind::finite: {
        const auto& cum = d.cumulative();
        double u = stream.uniform();
        auto it = std::lower_bound(cum.begin(), cum.end(), u);
        std::size_t idx = it == cum.end() ? cum.size() - 1
                                          : static_cast<std::size_t>(
                                                it - cum.begin());
        // lower_bound finds first cum >= u; u < 1 keeps idx in range, the
        // guard covers cumulative sums that round below 1.
        return d.atoms()[idx];
    }
    }
    return 0.0;
}

std::vector<double> sample(const Distribution& d, std::uint64_t seed,
                           std::size_t count) {
    rng::Stream stream(rng::mix(seed, 0));
    std::vector<double> out(count);
    for (double& x : out)
        x = sample_one(d, stream);
    return out;
}

// ---- exponential tilting ------------------------------------------------

Distribution tilt(const Distribution& d, double lambda) {
    if (lambda == 0.0)
        return d; // exact identity, bit for bit
    switch (d.kind()) {
    case Kind::bernoulli: {
        double p = d.bernoulli_p();
        // p e^l / (1-p+p e^l), arranged so the exponential never overflows
        double q = lambda > 0.0
                       ? p / (p + (1.0 - p) * std::exp(-lambda))
                       : p * std::exp(lambda) /
                             (1.0 - p + p * std::exp(lambda));
        return Distribution::bernoulli(q);
    }
    case Kind::gaussian: {
        double sigma = d.gaussian_sigma();
        return Distribution::gaussian(d.gaussian_mu() + lambda * sigma * sigma,
                                      sigma);
    }
    case Kind::exponential: {
        double rate = d.exponential_rate();
        if (lambda >= rate)
            throw std::domain_error("tilt: log-MGF infinite at lambda");
        return Distribution::exponential(rate - lambda);
    }
    case Kind::poisson:
        return Distribution::poisson(d.poisson_mean() * std::exp(lambda));
    case Kind::finite: {
        const auto& v = d.atoms();
        const auto& w = d.weights();
        // Reweight in log space and renormalize.
        std::vector<double> lw(v.size());
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < v.size(); ++i) {
            lw[i] = std::log(w[i]) + lambda * v[i];
            m = std::max(m, lw[i]);
        }
        std::vector<double> nw(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            nw[i] = std::exp(lw[i] - m);
        return Distribution::finite(v, std::move(nw));
    }
    }
    return d;
}

std::vector<double> tilted_sample(const Distribution& d, double lambda,
                                  std::uint64_t seed, std::size_t count) {
    return sample(tilt(d, lambda), seed, count);
}

// ---- exact sum law -------------------------------------------------------

namespace {

// Convolve two sorted log-weighted atom lists; merge within tolerance.
void convolve(const std::vector<double>& av, const std::vector<double>& alw,
              const std::vector<double>& bv, const std::vector<double>& blw,
              std::vector<double>& out_v, std::vector<double>& out_lw) {
    std::vector<std::pair<double, double>> prod;
    prod.reserve(av.size() * bv.size());
    for (std::size_t i = 0; i < av.size(); ++i)
        for (std::size_t j = 0; j < bv.size(); ++j)
            prod.emplace_back(av[i] + bv[j], alw[i] + blw[j]);
    std::sort(prod.begin(), prod.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    out_v.clear();
    out_lw.clear();
    for (const auto& [value, lw] : prod) {
        if (!out_v.empty() && value - out_v.back() <= kAtomMergeTol)
            out_lw.back() = lse2(out_lw.back(), lw);
        else {
            out_v.push_back(value);
            out_lw.push_back(lw);
        }
    }
}

} // namespace

SumDistribution exact_sum_distribution(const Distribution& d, int n) {
    if (n < 1)
        throw std::invalid_argument("exact_sum_distribution: n must be >= 1");
    const auto& step_v = d.atoms(); // throws UnsupportedKindError if needed
    const auto& step_w = d.weights();

    std::vector<double> step_lw(step_w.size());
    for (std::size_t i = 0; i < step_w.size(); ++i)
        step_lw[i] = std::log(step_w[i]);

    std::vector<double> acc_v = step_v;
    std::vector<double> acc_lw = step_lw;
    std::vector<double> next_v, next_lw;
    for (int k = 2; k <= n; ++k) {
        convolve(acc_v, acc_lw, step_v, step_lw, next_v, next_lw);
        if (next_v.size() > kAtomCap)
            throw SizeCapError("exact_sum_distribution: atom count " +
                               std::to_string(next_v.size()) +
                               " exceeds cap at n=" + std::to_string(k));
        acc_v.swap(next_v);
        acc_lw.swap(next_lw);
    }

    SumDistribution s;
    s.n = n;
    s.atoms = std::move(acc_v);
    s.log_weights = std::move(acc_lw);
    s.suffix_lse_.resize(s.atoms.size());
    double run = -std::numeric_limits<double>::infinity();
    for (std::size_t i = s.atoms.size(); i-- > 0;) {
        run = lse2(run, s.log_weights[i]);
        s.suffix_lse_[i] = run;
    }
    return s;
}

ExtendedReal SumDistribution::log_tail(double threshold) const {
    auto it = std::lower_bound(atoms.begin(), atoms.end(), threshold);
    if (it == atoms.end())
        return ExtendedReal::neg_inf();
    if (it == atoms.begin())
        return 0.0; // full mass: the weights are normalized by construction
    double lt = suffix_lse_[static_cast<std::size_t>(it - atoms.begin())];
    return std::min(lt, 0.0); // clamp float drift above certainty
}

} // namespace ldp
