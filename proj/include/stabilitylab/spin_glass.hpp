#pragma once
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

// SK and Edwards-Anderson ground states. Both solvers walk a Gray code
// over the gauged state space (first spin pinned to +1) so each visited
// state costs one local-field update.

namespace stab::spin {

struct SpinConfig {
    std::vector<std::int8_t> sigma; // entries in {+1,-1}, sigma[0] == +1
};

struct LatticeBox {
    std::size_t d = 0;
    std::vector<std::size_t> shape;          // sites per dimension
    std::vector<std::vector<int>> sites;     // integer coordinates, site 0 = origin
    std::vector<std::pair<std::uint32_t, std::uint32_t>> bonds; // i < j
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>
        incident; // per site: (neighbor site, bond index)

    static LatticeBox box(const std::vector<std::size_t>& shape);
    static LatticeBox from_sites(std::size_t d,
                                 std::vector<std::vector<int>> sites);
    std::size_t site_count() const { return sites.size(); }
    bool connected() const;
};

// Flat bond index of {i,j}, i<j, among the n(n-1)/2 SK bonds.
std::size_t sk_bond_index(std::size_t i, std::size_t j, std::size_t n);

// H = -sum_{i<j} X_{ij} sigma_i sigma_j
double sk_energy(const std::vector<double>& bonds, const SpinConfig& s);

struct GroundState {
    SpinConfig config;
    double energy;
};

// Exact gauged minimizer, n <= 22.
GroundState sk_ground_state(const std::vector<double>& bonds, std::size_t n);

double ea_energy(const LatticeBox& lattice, const std::vector<double>& bonds,
                 const SpinConfig& s);

GroundState ea_ground_state(const LatticeBox& lattice,
                            const std::vector<double>& bonds);

enum class SpinFamily { SK, EA };

// SK: normalized Hamming. EA: sqrt((1/|L|) sum_bonds (s_i s_j - s'_i s'_j)^2).
double spin_metric(const SpinConfig& a, const SpinConfig& b, SpinFamily family,
                   const LatticeBox* lattice = nullptr);

// Streaming scan over all gauged states; callback receives (state bits of
// spins 1..n-1, exact energy). Used for near-optimal enumeration.
void sk_scan_states(const std::vector<double>& bonds, std::size_t n,
                    const std::function<void(std::uint32_t, double)>& visit);
void ea_scan_states(const LatticeBox& lattice, const std::vector<double>& bonds,
                    const std::function<void(std::uint32_t, double)>& visit);

SpinConfig spins_from_bits(std::uint32_t bits, std::size_t n);

// -(sqrt(2 zeta2 log|S_n|) + zeta_inf log|S_n|), the sub-Gamma lower
// bound on the SK ground energy for standard-Gaussian bonds:
// zeta2 = n(n-1)/2, zeta_inf = 1, |S_n| = 2^(n-1).
double sk_ground_energy_lower_bound(std::size_t n);

} // namespace stab::spin
