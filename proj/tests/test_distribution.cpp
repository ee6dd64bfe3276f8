#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "ldp/distribution.hpp"
#include "ldp/rng.hpp"
#include "oracles.hpp"

using ldp::Distribution;
using ldp::Kind;

TEST_CASE("parse accepts the full grammar") {
    CHECK(Distribution::parse("bernoulli:0.5").kind() == Kind::bernoulli);
    CHECK(Distribution::parse("gaussian:0,1").kind() == Kind::gaussian);
    CHECK(Distribution::parse("exponential:2").kind() == Kind::exponential);
    CHECK(Distribution::parse("poisson:1.5").kind() == Kind::poisson);
    Distribution d = Distribution::parse("discrete:-1:0.5,2:0.3,5:0.2");
    CHECK(d.kind() == Kind::finite);
    CHECK(d.atoms() == std::vector<double>{-1.0, 2.0, 5.0});
    CHECK(d.weights()[0] == doctest::Approx(0.5));
}

TEST_CASE("parse rejects malformed specs with positions") {
    CHECK_THROWS_AS(Distribution::parse("bogus:1"), ldp::ParseError);
    CHECK_THROWS_AS(Distribution::parse("bernoulli:1.5"), ldp::ParseError);
    CHECK_THROWS_AS(Distribution::parse("bernoulli:"), ldp::ParseError);
    CHECK_THROWS_AS(Distribution::parse("gaussian:0"), ldp::ParseError);
    CHECK_THROWS_AS(Distribution::parse("gaussian:0,-1"), ldp::ParseError);
    CHECK_THROWS_AS(Distribution::parse("discrete:1:0"), ldp::ParseError);
    CHECK_THROWS_AS(Distribution::parse("discrete:"), ldp::ParseError);
    CHECK_THROWS_AS(Distribution::parse(""), ldp::ParseError);
    try {
        Distribution::parse("gaussian:0,abc");
    } catch (const ldp::ParseError& e) {
        CHECK(std::string(e.what()).find("abc") != std::string::npos);
        CHECK(e.position() == 11);
    }
}

TEST_CASE("to_string reproduces a parseable spec") {
    for (const char* s :
         {"bernoulli:0.5", "gaussian:0,1", "exponential:2", "poisson:1.5",
          "discrete:-1:0.5,2:0.3,5:0.2"}) {
        Distribution d = Distribution::parse(s);
        Distribution r = Distribution::parse(d.to_string());
        CHECK(r.kind() == d.kind());
        CHECK(mean(r) == mean(d));
    }
}

TEST_CASE("mean and essential sup closed forms") {
    CHECK(mean(Distribution::bernoulli(0.3)) == doctest::Approx(0.3));
    CHECK(mean(Distribution::gaussian(2.0, 1.0)) == 2.0);
    CHECK(mean(Distribution::exponential(4.0)) == doctest::Approx(0.25));
    CHECK(mean(Distribution::poisson(2.5)) == 2.5);
    Distribution d = Distribution::parse("discrete:-1:0.5,2:0.3,5:0.2");
    CHECK(mean(d) == doctest::Approx(-0.5 + 0.6 + 1.0));

    CHECK(essential_sup(Distribution::bernoulli(0.3)).value() == 1.0);
    CHECK(essential_sup(d).value() == 5.0);
    CHECK(essential_sup(Distribution::gaussian(0, 1)).is_pos_inf());
    CHECK(essential_sup(Distribution::exponential(1)).is_pos_inf());
    CHECK(essential_sup(Distribution::poisson(1)).is_pos_inf());
}

TEST_CASE("finite atoms are sorted, merged and normalized") {
    Distribution d = Distribution::finite({2.0, -1.0, 2.0 + 1e-13, 0.0},
                                          {1.0, 1.0, 1.0, 1.0});
    CHECK(d.atoms() == std::vector<double>{-1.0, 0.0, 2.0});
    CHECK(d.weights()[2] == doctest::Approx(0.5));
    double total = 0.0;
    for (double w : d.weights())
        total += w;
    CHECK(total == doctest::Approx(1.0));
    CHECK(d.cumulative().back() == 1.0);
}

TEST_CASE("empirical files load as uniform finite laws") {
    const char* path = "empirical_test_data.csv";
    {
        std::ofstream f(path);
        f << "value\n1.5\n-0.5\n1.5\n3\n";
    }
    Distribution d = Distribution::parse(std::string("empirical:@") + path);
    CHECK(d.kind() == Kind::finite);
    CHECK(d.atoms() == std::vector<double>{-0.5, 1.5, 3.0});
    CHECK(d.weights()[1] == doctest::Approx(0.5));
    std::remove(path);
    CHECK_THROWS_AS(Distribution::parse("empirical:@missing_file.csv"),
                    ldp::ParseError);
}

TEST_CASE("atoms on continuous kinds are an unsupported query") {
    CHECK_THROWS_AS(Distribution::gaussian(0, 1).atoms(),
                    ldp::UnsupportedKindError);
    CHECK_THROWS_AS(Distribution::poisson(1).weights(),
                    ldp::UnsupportedKindError);
    CHECK(Distribution::bernoulli(0.5).has_finite_support());
    CHECK_FALSE(Distribution::exponential(1).has_finite_support());
}

TEST_CASE("sampling reproduces moments at CLT scale") {
    const long long N = 200000;
    struct Case {
        const char* spec;
        double mu, sd;
    } cases[] = {
        {"bernoulli:0.3", 0.3, std::sqrt(0.21)},
        {"gaussian:2,0.5", 2.0, 0.5},
        {"exponential:2", 0.5, 0.5},
        {"poisson:3", 3.0, std::sqrt(3.0)},
        {"discrete:-1:0.5,2:0.3,5:0.2", 1.1, std::sqrt(5.49)},
    };
    for (const auto& c : cases) {
        CAPTURE(c.spec);
        Distribution d = Distribution::parse(c.spec);
        std::vector<double> xs = sample(d, 7, N);
        double s = 0.0;
        for (double x : xs)
            s += x;
        double m = s / N;
        CHECK(std::abs(m - c.mu) <= 5.0 * c.sd / std::sqrt((double)N));
    }
}

TEST_CASE("sampling is deterministic in the seed") {
    Distribution d = Distribution::parse("gaussian:0,1");
    CHECK(sample(d, 42, 100) == sample(d, 42, 100));
    CHECK(sample(d, 42, 100) != sample(d, 43, 100));
}

TEST_CASE("tilting matches the closed forms") {
    CHECK(tilt(Distribution::bernoulli(0.25), 1.0).bernoulli_p() ==
          doctest::Approx(0.25 * std::exp(1.0) /
                          (0.75 + 0.25 * std::exp(1.0))));
    Distribution g = tilt(Distribution::gaussian(1.0, 2.0), 0.5);
    CHECK(g.gaussian_mu() == doctest::Approx(1.0 + 0.5 * 4.0));
    CHECK(g.gaussian_sigma() == 2.0);
    CHECK(tilt(Distribution::exponential(3.0), 1.0).exponential_rate() ==
          doctest::Approx(2.0));
    CHECK_THROWS_AS(tilt(Distribution::exponential(1.0), 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(tilt(Distribution::exponential(1.0), 2.0),
                    std::domain_error);
    CHECK(tilt(Distribution::poisson(2.0), 1.0).poisson_mean() ==
          doctest::Approx(2.0 * std::exp(1.0)));

    Distribution d = Distribution::parse("discrete:-1:0.5,2:0.3,5:0.2");
    Distribution t = tilt(d, 0.3);
    double z = 0.5 * std::exp(-0.3) + 0.3 * std::exp(0.6) + 0.2 * std::exp(1.5);
    CHECK(t.weights()[0] == doctest::Approx(0.5 * std::exp(-0.3) / z));
    CHECK(t.weights()[2] == doctest::Approx(0.2 * std::exp(1.5) / z));
    CHECK(t.atoms() == d.atoms());
}

TEST_CASE("zero tilt is the identity, bitwise") {
    for (const char* s : {"bernoulli:0.3", "gaussian:2,0.5", "exponential:2",
                          "poisson:3", "discrete:-1:0.5,2:0.3,5:0.2"}) {
        Distribution d = Distribution::parse(s);
        Distribution t = tilt(d, 0.0);
        CHECK(t.to_string() == d.to_string());
        CHECK(sample(t, 11, 50) == sample(d, 11, 50));
    }
}

TEST_CASE("exact sums match brute-force enumeration") {
    Distribution b = Distribution::bernoulli(0.5);
    Distribution d = Distribution::parse("discrete:-1:0.5,2:0.3,5:0.2");
    for (int n : {1, 2, 3, 5, 8}) {
        ldp::SumDistribution sb = ldp::exact_sum_distribution(b, n);
        for (double x : {-0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5}) {
            double expected = oracle::brute_force_tail(b, n, x);
            ldp::ExtendedReal lt = sb.log_tail(n * x);
            double got = lt.is_neg_inf() ? 0.0 : std::exp(lt.value());
            CHECK(got == doctest::Approx(expected).epsilon(1e-12));
        }
        ldp::SumDistribution sd2 = ldp::exact_sum_distribution(d, n);
        for (double x : {-1.0, 0.0, 1.1, 2.0, 3.5, 5.0}) {
            double expected = oracle::brute_force_tail(d, n, x);
            ldp::ExtendedReal lt = sd2.log_tail(n * x);
            double got = lt.is_neg_inf() ? 0.0 : std::exp(lt.value());
            CHECK(got == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("sum distribution invariants") {
    Distribution d = Distribution::parse("discrete:-1:0.5,2:0.3,5:0.2");
    ldp::SumDistribution s = ldp::exact_sum_distribution(d, 12);
    CHECK(s.n == 12);
    double total = 0.0;
    for (std::size_t i = 0; i < s.atoms.size(); ++i) {
        total += std::exp(s.log_weights[i]);
        if (i > 0)
            CHECK(s.atoms[i] > s.atoms[i - 1]);
    }
    CHECK(std::abs(total - 1.0) <= 1e-9);
    CHECK(s.log_tail(-1e9).as_double() == 0.0);
    CHECK(s.log_tail(1e9).is_neg_inf());
    CHECK_THROWS_AS(ldp::exact_sum_distribution(Distribution::gaussian(0, 1), 2),
                    ldp::UnsupportedKindError);
}

TEST_CASE("tilted sampling shifts the empirical mean") {
    Distribution b = Distribution::bernoulli(0.5);
    std::vector<double> xs = ldp::tilted_sample(b, 1.5, 3, 100000);
    double s = 0.0;
    for (double x : xs)
        s += x;
    double expect = std::exp(1.5) / (1.0 + std::exp(1.5));
    CHECK(std::abs(s / xs.size() - expect) < 0.01);
}
