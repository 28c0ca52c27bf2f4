#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/rng.hpp"
#include "stabilitylab/stats.hpp"

using namespace stab;

TEST_CASE("summarize fixtures") {
    std::vector<double> constant(10, 3.25);
    const auto s = stats::summarize(constant);
    CHECK(s.mean == 3.25);
    CHECK(s.stderr_mean == 0.0);
    CHECK(s.min == 3.25);
    CHECK(s.max == 3.25);

    std::vector<double> three = {1.0, 2.0, 3.0};
    CHECK(stats::summarize(three).q50 == 2.0);

    CHECK_THROWS_AS(stats::summarize(std::vector<double>{}), EmptyInput);
}

TEST_CASE("summarize uniform Monte Carlo mean") {
    Rng rng(42);
    std::vector<double> u(100000);
    for (double& x : u) x = rng.u01();
    const auto s = stats::summarize(u);
    CHECK(std::fabs(s.mean - 0.5) < 0.005);
    CHECK(s.q50 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("quantiles are monotone") {
    Rng rng(7);
    std::vector<double> v(501);
    for (double& x : v) x = rng.gaussian();
    const auto s = stats::summarize(v);
    CHECK(s.q10 <= s.q50);
    CHECK(s.q50 <= s.q90);
    CHECK(s.min <= s.q10);
    CHECK(s.q90 <= s.max);
}

TEST_CASE("ks_two_sample fixtures") {
    std::vector<double> a(50), b(50);
    for (int i = 0; i < 50; ++i) a[i] = b[i] = i * 0.1;
    const auto same = stats::ks_two_sample(a, b);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);

    for (int i = 0; i < 50; ++i) b[i] = 100.0 + i;
    const auto disjoint = stats::ks_two_sample(a, b);
    CHECK(disjoint.statistic == 1.0);
    CHECK(disjoint.p_value < 1e-10);

    std::vector<double> tiny(5, 0.0);
    CHECK_THROWS_AS(stats::ks_two_sample(tiny, a), TooFewSamples);
}

TEST_CASE("ks calibration: near-nominal rejection rate") {
    // two N(0,1) samples of 1000; at alpha = 0.05 the rejection count over
    // 200 trials stays below 5% (frozen seed)
    std::size_t rejects = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Rng rng(hash64(1000, trial));
        std::vector<double> a(1000), b(1000);
        for (double& x : a) x = rng.gaussian();
        for (double& x : b) x = rng.gaussian();
        if (stats::ks_two_sample(a, b).p_value < 0.05) ++rejects;
    }
    CHECK(rejects < 10);
}

TEST_CASE("chi_square_uniform fixtures") {
    std::vector<std::uint64_t> uniform(10, 50);
    const auto flat = stats::chi_square_uniform(uniform);
    CHECK(flat.statistic == 0.0);
    CHECK(flat.p_value == doctest::Approx(1.0));

    std::vector<std::uint64_t> spike(10, 0);
    spike[3] = 500;
    const auto extreme = stats::chi_square_uniform(spike);
    CHECK(extreme.statistic > 1000.0);
    CHECK(extreme.p_value < 1e-12);

    std::vector<std::uint64_t> few(10, 1);
    CHECK_THROWS_AS(stats::chi_square_uniform(few), TooFewSamples);
}

TEST_CASE("chi_square calibration at alpha = 0.01") {
    std::size_t passes = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Rng rng(hash64(2000, trial));
        std::vector<std::uint64_t> counts(6, 0);
        for (int i = 0; i < 600; ++i) ++counts[rng.below(6)];
        if (stats::chi_square_uniform(counts).p_value >= 0.01) ++passes;
    }
    CHECK(passes >= 196); // >= 98% of 200
}

TEST_CASE("chi_square_tail against known points") {
    // P(chi2_1 > 3.841) ~ 0.05, P(chi2_5 > 15.086) ~ 0.01
    CHECK(stats::chi_square_tail(3.841, 1.0) == doctest::Approx(0.05).epsilon(0.01));
    CHECK(stats::chi_square_tail(15.086, 5.0) == doctest::Approx(0.01).epsilon(0.02));
}

TEST_CASE("subgamma_max_check") {
    SUBCASE("m = 1 gives bound 0 and near-zero estimate") {
        Rng rng(3);
        const auto rep = stats::subgamma_max_check(
            [&rng]() { return rng.gaussian(); }, 1.0, 0.0, 1, 4000);
        CHECK(rep.bound == 0.0);
        CHECK(std::fabs(rep.estimate) < 4.0 * rep.stderr_mean + 1e-12);
        CHECK(rep.pass);
    }
    SUBCASE("standard Gaussians, m = 100") {
        Rng rng(4);
        const auto rep = stats::subgamma_max_check(
            [&rng]() { return rng.gaussian(); }, 1.0, 0.0, 100, 400);
        CHECK(rep.bound == doctest::Approx(std::sqrt(2.0 * std::log(100.0))));
        CHECK(rep.estimate == doctest::Approx(2.50).epsilon(0.05));
        CHECK(rep.pass);
    }
    SUBCASE("centered Exp(1), sub-Gamma(1,1), m = 50") {
        Rng rng(5);
        const auto rep = stats::subgamma_max_check(
            [&rng]() { return rng.exponential(1.0) - 1.0; }, 1.0, 1.0, 50, 400);
        CHECK(rep.bound ==
              doctest::Approx(std::sqrt(2.0 * std::log(50.0)) + std::log(50.0)));
        CHECK(rep.pass);
    }
}
