#include "stabilitylab/spin_glass.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/kernels.hpp"

namespace stab::spin {
namespace {

// Full symmetric coupling matrix (zero diagonal) so local-field updates
// touch contiguous rows.
std::vector<double> coupling_matrix(const std::vector<double>& bonds,
                                    std::size_t n) {
    std::vector<double> x(n * n, 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            x[i * n + j] = bonds[k];
            x[j * n + i] = bonds[k];
            ++k;
        }
    return x;
}

} // namespace

std::size_t sk_bond_index(std::size_t i, std::size_t j, std::size_t n) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

double sk_energy(const std::vector<double>& bonds, const SpinConfig& s) {
    const std::size_t n = s.sigma.size();
    double h = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            h -= bonds[k++] * s.sigma[i] * s.sigma[j];
    return h;
}

SpinConfig spins_from_bits(std::uint32_t bits, std::size_t n) {
    SpinConfig s;
    s.sigma.assign(n, 1);
    for (std::size_t j = 1; j < n; ++j)
        if (bits & (1u << (j - 1))) s.sigma[j] = -1;
    return s;
}

void sk_scan_states(const std::vector<double>& bonds, std::size_t n,
                    const std::function<void(std::uint32_t, double)>& visit) {
    if (n > 22) throw SizeExceeded("SK scan capped at n = 22");
    const std::vector<double> x = coupling_matrix(bonds, n);
    std::vector<double> field(n, 0.0); // field[i] = sum_j X_ij sigma_j
    std::vector<double> sigma(n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        field[i] = kern::sum(x.data() + i * n, n);
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) energy += sigma[i] * field[i];
    energy *= -0.5;
    std::uint32_t bits = 0;
    visit(bits, energy);
    const std::uint64_t states = std::uint64_t{1} << (n - 1);
    for (std::uint64_t t = 1; t < states; ++t) {
        const int b = __builtin_ctzll(t); // Gray flip position
        const std::size_t s = static_cast<std::size_t>(b) + 1;
        energy += 2.0 * sigma[s] * field[s];
        kern::axpy(-2.0 * sigma[s], x.data() + s * n, field.data(), n);
        sigma[s] = -sigma[s];
        bits ^= 1u << b;
        visit(bits, energy);
    }
}

GroundState sk_ground_state(const std::vector<double>& bonds, std::size_t n) {
    double best = 0.0;
    std::uint32_t best_bits = 0;
    bool first = true;
    sk_scan_states(bonds, n, [&](std::uint32_t bits, double e) {
        if (first || e < best) {
            best = e;
            best_bits = bits;
            first = false;
        }
    });
    GroundState gs;
    gs.config = spins_from_bits(best_bits, n);
    gs.energy = sk_energy(bonds, gs.config); // exact recompute, no drift
    return gs;
}

LatticeBox LatticeBox::box(const std::vector<std::size_t>& shape) {
    LatticeBox lb;
    lb.d = shape.size();
    lb.shape = shape;
    std::size_t total = 1;
    for (const std::size_t s : shape) total *= s;
    lb.sites.reserve(total);
    std::vector<int> coord(lb.d, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        lb.sites.push_back(coord);
        for (std::size_t k = lb.d; k-- > 0;) {
            if (++coord[k] < static_cast<int>(shape[k])) break;
            coord[k] = 0;
        }
    }
    return from_sites(lb.d, std::move(lb.sites));
}

LatticeBox LatticeBox::from_sites(std::size_t d,
                                  std::vector<std::vector<int>> sites) {
    LatticeBox lb;
    lb.d = d;
    lb.sites = std::move(sites);
    if (lb.sites.empty() || lb.sites[0] != std::vector<int>(d, 0))
        throw ValidationError("lattice must contain the origin as site 0");
    std::map<std::vector<int>, std::uint32_t> index;
    for (std::size_t i = 0; i < lb.sites.size(); ++i)
        index[lb.sites[i]] = static_cast<std::uint32_t>(i);
    lb.incident.resize(lb.sites.size());
    for (std::size_t i = 0; i < lb.sites.size(); ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            for (const int step : {-1, 1}) {
                std::vector<int> nb = lb.sites[i];
                nb[k] += step;
                const auto it = index.find(nb);
                if (it == index.end() || it->second <= i) continue;
                const std::uint32_t j = it->second;
                const std::uint32_t bond =
                    static_cast<std::uint32_t>(lb.bonds.size());
                lb.bonds.emplace_back(static_cast<std::uint32_t>(i), j);
                lb.incident[i].emplace_back(j, bond);
                lb.incident[j].emplace_back(static_cast<std::uint32_t>(i), bond);
            }
        }
    }
    if (!lb.connected()) throw ValidationError("lattice must be connected");
    return lb;
}

bool LatticeBox::connected() const {
    if (sites.empty()) return false;
    std::vector<bool> seen(sites.size(), false);
    std::vector<std::uint32_t> stack{0};
    seen[0] = true;
    std::size_t visited = 1;
    while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        for (const auto& [nb, bond] : incident[v]) {
            (void)bond;
            if (!seen[nb]) {
                seen[nb] = true;
                ++visited;
                stack.push_back(nb);
            }
        }
    }
    return visited == sites.size();
}

double ea_energy(const LatticeBox& lattice, const std::vector<double>& bonds,
                 const SpinConfig& s) {
    double h = 0.0;
    for (std::size_t b = 0; b < lattice.bonds.size(); ++b) {
        const auto& [i, j] = lattice.bonds[b];
        h -= bonds[b] * s.sigma[i] * s.sigma[j];
    }
    return h;
}

void ea_scan_states(const LatticeBox& lattice, const std::vector<double>& bonds,
                    const std::function<void(std::uint32_t, double)>& visit) {
    const std::size_t n = lattice.site_count();
    if (n > 22) throw SizeExceeded("EA scan capped at |Lambda| = 22");
    std::vector<double> sigma(n, 1.0);
    double energy = 0.0;
    for (const double b : bonds) energy -= b;
    std::uint32_t bits = 0;
    visit(bits, energy);
    const std::uint64_t states = std::uint64_t{1} << (n - 1);
    for (std::uint64_t t = 1; t < states; ++t) {
        const int b = __builtin_ctzll(t);
        const std::size_t s = static_cast<std::size_t>(b) + 1;
        double field = 0.0;
        for (const auto& [nb, bond] : lattice.incident[s])
            field += bonds[bond] * sigma[nb];
        energy += 2.0 * sigma[s] * field;
        sigma[s] = -sigma[s];
        bits ^= 1u << b;
        visit(bits, energy);
    }
}

GroundState ea_ground_state(const LatticeBox& lattice,
                            const std::vector<double>& bonds) {
    double best = 0.0;
    std::uint32_t best_bits = 0;
    bool first = true;
    ea_scan_states(lattice, bonds, [&](std::uint32_t bits, double e) {
        if (first || e < best) {
            best = e;
            best_bits = bits;
            first = false;
        }
    });
    GroundState gs;
    gs.config = spins_from_bits(best_bits, lattice.site_count());
    gs.energy = ea_energy(lattice, bonds, gs.config);
    return gs;
}

double spin_metric(const SpinConfig& a, const SpinConfig& b, SpinFamily family,
                   const LatticeBox* lattice) {
    const std::size_t n = a.sigma.size();
    if (family == SpinFamily::SK) {
        std::size_t diff = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (a.sigma[i] != b.sigma[i]) ++diff;
        return static_cast<double>(diff) / static_cast<double>(n);
    }
    double s = 0.0;
    for (const auto& [i, j] : lattice->bonds) {
        const double pa = a.sigma[i] * a.sigma[j];
        const double pb = b.sigma[i] * b.sigma[j];
        s += (pa - pb) * (pa - pb);
    }
    return std::sqrt(s / static_cast<double>(lattice->site_count()));
}

double sk_ground_energy_lower_bound(std::size_t n) {
    const double zeta2 = static_cast<double>(n * (n - 1)) / 2.0;
    const double log_states = static_cast<double>(n - 1) * std::log(2.0);
    return -(std::sqrt(2.0 * zeta2 * log_states) + log_states);
}

} // namespace stab::spin
