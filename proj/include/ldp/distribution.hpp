#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ldp/extended_real.hpp"
#include "ldp/rng.hpp"

namespace ldp {

// Raised when a distribution spec string does not parse. `position` is the
// byte offset of the offending token inside the spec string.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

// Raised when an operation needs a finite-support law but got a continuous
// or unbounded one.
class UnsupportedKindError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when an exact convolution would exceed the atom-count cap.
class SizeCapError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Kind { bernoulli, gaussian, exponential, poisson, finite };

// Law of a single step X1. Parametric kinds store their parameters;
// finite laws store sorted atoms with normalized positive weights.
// Values are immutable after construction and safe to share across threads.
class Distribution {
  public:
    static Distribution bernoulli(double p);
    static Distribution gaussian(double mu, double sigma);
    static Distribution exponential(double rate);
    static Distribution poisson(double mean);
    // Atoms are sorted; entries within 1e-12 of each other are merged and
    // weights are normalized to sum to one.
    static Distribution finite(std::vector<double> values,
                               std::vector<double> weights);
    // A sample multiset, reduced to a finite law with uniform weights.
    static Distribution empirical(std::span<const double> samples);

    // Grammar: bernoulli:P | gaussian:MU,SIGMA | exponential:THETA |
    // poisson:THETA | discrete:V1:W1,V2:W2,... | empirical:@PATH
    // where PATH is a one-column CSV of samples (header optional).
    static Distribution parse(std::string_view text);

    Kind kind() const noexcept { return kind_; }
    bool has_finite_support() const noexcept {
        return kind_ == Kind::bernoulli || kind_ == Kind::finite;
    }

    double bernoulli_p() const { return require(Kind::bernoulli), a_; }
    double gaussian_mu() const { return require(Kind::gaussian), a_; }
    double gaussian_sigma() const { return require(Kind::gaussian), b_; }
    double exponential_rate() const { return require(Kind::exponential), a_; }
    double poisson_mean() const { return require(Kind::poisson), a_; }

    // Support atoms for finite-support kinds (bernoulli reports {0, 1}).
    const std::vector<double>& atoms() const;
    const std::vector<double>& weights() const;
    // Inclusive cumulative weights, aligned with atoms(); ends at 1.
    const std::vector<double>& cumulative() const;

    // Canonical spec string in the grammar above.
    std::string to_string() const;

  private:
    Distribution() = default;
    void require(Kind k) const {
        if (kind_ != k)
            throw std::logic_error("Distribution: parameter of another kind");
    }

    Kind kind_ = Kind::bernoulli;
    double a_ = 0.5;
    double b_ = 0.0;
    std::vector<double> atoms_;
    std::vector<double> weights_;
    std::vector<double> cum_; // inclusive cumulative weights, finite kind
};

double mean(const Distribution& d);
ExtendedReal essential_sup(const Distribution& d);

// One variate from an already-positioned stream.
double sample_one(const Distribution& d, rng::Stream& stream);

// `count` i.i.d. variates; bitwise-deterministic in (d, seed, count).
std::vector<double> sample(const Distribution& d, std::uint64_t seed,
                           std::size_t count);

// The exponentially tilted law dP_lambda ∝ e^{lambda x} dP, in closed form
// per kind. Throws std::domain_error when the log-MGF is infinite at lambda.
Distribution tilt(const Distribution& d, double lambda);

std::vector<double> tilted_sample(const Distribution& d, double lambda,
                                  std::uint64_t seed, std::size_t count);

// Exact law of the n-step sum S_n for finite-support kinds. Weights live in
// log space; tails are read off a right-to-left log-sum-exp table.
struct SumDistribution {
    int n = 1;
    std::vector<double> atoms;
    std::vector<double> log_weights;

    // log P(S_n >= threshold); neg_inf when no atom qualifies.
    ExtendedReal log_tail(double threshold) const;

  private:
    friend SumDistribution exact_sum_distribution(const Distribution&, int);
    std::vector<double> suffix_lse_; // suffix_lse_[i] = log sum_{j>=i} w_j
};

SumDistribution exact_sum_distribution(const Distribution& d, int n);

} // namespace ldp
