#pragma once
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace stab::stats {

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double stderr_mean = 0.0; // sd / sqrt(count)
    double q10 = 0.0;
    double q50 = 0.0;
    double q90 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

// Exact type-1 (order statistic) quantiles; throws EmptyInput on empty.
Summary summarize(std::span<const double> values);

struct TestResult {
    double statistic;
    double p_value;
};

// Two-sample Kolmogorov-Smirnov with the asymptotic Kolmogorov series
// p-value; both samples need at least 20 points.
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Pearson chi-square against the uniform distribution over k cells;
// requires total count >= 5k.
TestResult chi_square_uniform(std::span<const std::uint64_t> counts);

// Upper tail of the chi-square distribution with k degrees of freedom.
double chi_square_tail(double x, double dof);

struct SubgammaMaxReport {
    double bound;        // sqrt(2 sigma^2 log m) + c log m
    double estimate;     // Monte Carlo E max_i (X_i - E X_i)
    double stderr_mean;  // of the estimate
    bool pass;           // estimate <= bound + 3 SE
};

// sampler() must produce centered draws certified sub-Gamma(sigma2, c).
SubgammaMaxReport subgamma_max_check(const std::function<double()>& sampler,
                                     double sigma2, double c, std::size_t m,
                                     std::size_t reps);

} // namespace stab::stats
