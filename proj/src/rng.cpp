#include "stabilitylab/rng.hpp"

#include <algorithm>
#include <cmath>

namespace stab {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash64(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}
std::uint64_t hash64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return hash64(hash64(a, b), c);
}
std::uint64_t hash64(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                     std::uint64_t d) {
    return hash64(hash64(a, b, c), d);
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * u01() - 1.0;
        v = 2.0 * u01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
}

double Rng::exponential(double rate) {
    return -std::log(1.0 - u01()) / rate;
}

double Rng::gamma(double shape, double scale) {
    // Marsaglia-Tsang squeeze, shape >= 1
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = gaussian();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = u01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return scale * d * v;
    }
}

double Rng::beta(double a, double b) {
    const double ga = gamma(a, 1.0);
    const double gb = gamma(b, 1.0);
    return ga / (ga + gb);
}

std::uint64_t Rng::below(std::uint64_t n) {
    // rejection to kill modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

std::vector<std::uint32_t> Rng::sample_without_replacement(std::uint64_t n,
                                                           std::uint64_t k) {
    // Floyd's algorithm
    std::vector<std::uint32_t> out;
    out.reserve(k);
    for (std::uint64_t j = n - k; j < n; ++j) {
        const std::uint32_t t = static_cast<std::uint32_t>(below(j + 1));
        if (std::find(out.begin(), out.end(), t) == out.end())
            out.push_back(t);
        else
            out.push_back(static_cast<std::uint32_t>(j));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace stab
