#include "stabilitylab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/kernels.hpp"

namespace stab::stats {
namespace {

double type1_quantile(const std::vector<double>& sorted, double p) {
    // x_(ceil(p*n)) with 1-based order statistics; p in (0,1)
    const std::size_t n = sorted.size();
    std::size_t k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    if (k < 1) k = 1;
    if (k > n) k = n;
    return sorted[k - 1];
}

// Regularized lower incomplete gamma P(a,x): series for x < a+1,
// continued fraction (modified Lentz) otherwise.
double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    const double q = std::exp(-x + a * std::log(x) - gln) * h;
    return 1.0 - q;
}

double kolmogorov_q(double lambda) {
    // Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    const double q = 2.0 * sum;
    return std::clamp(q, 0.0, 1.0);
}

} // namespace

Summary summarize(std::span<const double> values) {
    if (values.empty()) throw EmptyInput("summarize: empty input");
    Summary s;
    s.count = values.size();
    const double n = static_cast<double>(s.count);
    s.mean = kern::sum(values.data(), values.size()) / n;
    double ss = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        ss += d * d;
    }
    const double sd = s.count > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    s.stderr_mean = sd / std::sqrt(n);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.q10 = type1_quantile(sorted, 0.10);
    s.q50 = type1_quantile(sorted, 0.50);
    s.q90 = type1_quantile(sorted, 0.90);
    return s;
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 20 || b.size() < 20)
        throw TooFewSamples("ks_two_sample: need at least 20 samples per side");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na -
                                  static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    return {d, kolmogorov_q(lambda)};
}

TestResult chi_square_uniform(std::span<const std::uint64_t> counts) {
    const std::size_t k = counts.size();
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (k < 2 || total < 5 * k)
        throw TooFewSamples("chi_square_uniform: need total >= 5k");
    const double expected = static_cast<double>(total) / static_cast<double>(k);
    double stat = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return {stat, chi_square_tail(stat, static_cast<double>(k - 1))};
}

double chi_square_tail(double x, double dof) {
    if (x <= 0.0) return 1.0;
    return 1.0 - gamma_p(dof / 2.0, x / 2.0);
}

SubgammaMaxReport subgamma_max_check(const std::function<double()>& sampler,
                                     double sigma2, double c, std::size_t m,
                                     std::size_t reps) {
    const double logm = std::log(static_cast<double>(m));
    const double bound = std::sqrt(2.0 * sigma2 * logm) + c * logm;
    std::vector<double> maxima(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        double mx = sampler();
        for (std::size_t i = 1; i < m; ++i) mx = std::max(mx, sampler());
        maxima[r] = mx;
    }
    const Summary s = summarize(maxima);
    SubgammaMaxReport rep;
    rep.bound = bound;
    rep.estimate = s.mean;
    rep.stderr_mean = s.stderr_mean;
    rep.pass = s.mean <= bound + 3.0 * s.stderr_mean;
    return rep;
}

} // namespace stab::stats
