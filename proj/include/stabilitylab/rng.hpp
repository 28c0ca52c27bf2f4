#pragma once
#include <cstdint>
#include <random>
#include <vector>

// Reproducible randomness. std::mt19937_64 is fully specified by the
// standard; the distributions are hand-rolled because the std:: ones are
// implementation-defined and would break the bit-exact output contract.
// Substreams are derived by a splitmix64 hash chain so that parallel
// schedules cannot reorder the randomness.

namespace stab {

std::uint64_t splitmix64(std::uint64_t x);

// Order-sensitive hash chain: hash64(a,b) != hash64(b,a).
std::uint64_t hash64(std::uint64_t a, std::uint64_t b);
std::uint64_t hash64(std::uint64_t a, std::uint64_t b, std::uint64_t c);
std::uint64_t hash64(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                     std::uint64_t d);

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform on [0,1) with 53 random bits
    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * u01(); }

    // Marsaglia polar method; consumes a variable, seed-determined number
    // of draws
    double gaussian();
    double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

    double exponential(double rate);

    // Marsaglia-Tsang; requires shape >= 1
    double gamma(double shape, double scale);

    // requires a, b >= 1
    double beta(double a, double b);

    // integer in [0, n)
    std::uint64_t below(std::uint64_t n);

    // k distinct indices from [0, n), ascending
    std::vector<std::uint32_t> sample_without_replacement(std::uint64_t n,
                                                          std::uint64_t k);

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace stab
