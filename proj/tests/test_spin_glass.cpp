#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/rng.hpp"
#include "stabilitylab/spin_glass.hpp"

using namespace stab;
using namespace stab::spin;

namespace {

std::vector<double> random_bonds(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> b(count);
    for (double& x : b) x = rng.gaussian();
    return b;
}

GroundState naive_sk(const std::vector<double>& bonds, std::size_t n) {
    GroundState best;
    best.energy = 1e300;
    for (std::uint32_t bits = 0; bits < (1u << (n - 1)); ++bits) {
        const auto s = spins_from_bits(bits, n);
        const double e = sk_energy(bonds, s);
        if (e < best.energy) {
            best.energy = e;
            best.config = s;
        }
    }
    return best;
}

} // namespace

TEST_CASE("sk_energy fixtures") {
    SpinConfig pp{{1, 1}};
    SpinConfig pm{{1, -1}};
    CHECK(sk_energy({0.5}, pp) == -0.5);
    CHECK(sk_energy({0.5}, pm) == 0.5);
}

TEST_CASE("Hamiltonian is invariant under a global spin flip") {
    const auto bonds = random_bonds(15, 3); // n = 6
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        SpinConfig s;
        s.sigma.resize(6);
        for (auto& x : s.sigma) x = rng.u01() < 0.5 ? 1 : -1;
        SpinConfig flipped = s;
        for (auto& x : flipped.sigma) x = -x;
        CHECK(sk_energy(bonds, s) == doctest::Approx(sk_energy(bonds, flipped)));
    }
}

TEST_CASE("sk_ground_state fixtures") {
    SUBCASE("n = 2: the bond sign fixes the second spin") {
        const auto plus = sk_ground_state({0.5}, 2);
        CHECK(plus.config.sigma == std::vector<std::int8_t>{1, 1});
        CHECK(plus.energy == -0.5);
        const auto minus = sk_ground_state({-0.8}, 2);
        CHECK(minus.config.sigma == std::vector<std::int8_t>{1, -1});
        CHECK(minus.energy == -0.8);
    }
    SUBCASE("all-positive bonds align every spin") {
        Rng rng(5);
        std::vector<double> bonds(10);
        for (double& b : bonds) b = 0.1 + rng.u01();
        const auto gs = sk_ground_state(bonds, 5);
        CHECK(gs.config.sigma == std::vector<std::int8_t>{1, 1, 1, 1, 1});
        CHECK(gs.energy == doctest::Approx(naive_sk(bonds, 5).energy));
    }
}

TEST_CASE("Gray-code scan equals naive enumeration") {
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 4 + trial % 7; // 4..10
        const auto bonds = random_bonds(n * (n - 1) / 2, hash64(60, trial));
        const auto gray = sk_ground_state(bonds, n);
        const auto naive = naive_sk(bonds, n);
        CHECK(gray.energy == doctest::Approx(naive.energy).epsilon(1e-12));
        CHECK(gray.config.sigma == naive.config.sigma);
        CHECK(gray.config.sigma[0] == 1); // gauge
    }
}

TEST_CASE("scan visits every gauged state exactly once") {
    const auto bonds = random_bonds(21, 61); // n = 7
    std::vector<bool> seen(1u << 6, false);
    std::size_t count = 0;
    sk_scan_states(bonds, 7, [&](std::uint32_t bits, double e) {
        CHECK_FALSE(seen[bits]);
        seen[bits] = true;
        ++count;
        // incremental energy tracks the exact one
        const double exact = sk_energy(bonds, spins_from_bits(bits, 7));
        CHECK(e == doctest::Approx(exact).epsilon(1e-9));
    });
    CHECK(count == 64);
}

TEST_CASE("spin_metric fixtures") {
    SpinConfig a{{1, 1, 1, 1}};
    CHECK(spin_metric(a, a, SpinFamily::SK) == 0.0);
    SpinConfig b{{1, -1, -1, -1}};
    CHECK(spin_metric(a, b, SpinFamily::SK) == 0.75);

    const auto chain = LatticeBox::box({2});
    SpinConfig u{{1, 1}};
    SpinConfig v{{1, -1}};
    CHECK(spin_metric(u, v, SpinFamily::EA, &chain) ==
          doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("lattice construction") {
    const auto grid = LatticeBox::box({3, 4});
    CHECK(grid.site_count() == 12);
    // bonds: 2*4 vertical + 3*3 horizontal = 17
    CHECK(grid.bonds.size() == 17);
    CHECK(grid.connected());
    CHECK(grid.sites[0] == std::vector<int>{0, 0});
    // |L| - 1 <= bonds <= d |L|
    CHECK(grid.bonds.size() >= grid.site_count() - 1);
    CHECK(grid.bonds.size() <= 2 * grid.site_count());

    CHECK_THROWS_AS(
        LatticeBox::from_sites(2, {{0, 0}, {5, 5}}), ValidationError);
}

TEST_CASE("ea_ground_state fixtures and oracle") {
    SUBCASE("two-site chain") {
        const auto chain = LatticeBox::box({2});
        CHECK(ea_ground_state(chain, {0.7}).energy == doctest::Approx(-0.7));
        CHECK(ea_ground_state(chain, {-0.4}).energy == doctest::Approx(-0.4));
    }
    SUBCASE("ferromagnetic 3x3 grid aligns") {
        const auto grid = LatticeBox::box({3, 3});
        Rng rng(7);
        std::vector<double> bonds(grid.bonds.size());
        for (double& b : bonds) b = 0.1 + rng.u01();
        const auto gs = ea_ground_state(grid, bonds);
        for (const auto s : gs.config.sigma) CHECK(s == 1);
    }
    SUBCASE("2x3 grid equals naive enumeration") {
        const auto grid = LatticeBox::box({2, 3});
        for (int trial = 0; trial < 20; ++trial) {
            Rng rng(hash64(70, trial));
            std::vector<double> bonds(grid.bonds.size());
            for (double& b : bonds) b = rng.gaussian();
            const auto gray = ea_ground_state(grid, bonds);
            double best = 1e300;
            for (std::uint32_t bits = 0; bits < (1u << 5); ++bits)
                best = std::min(best,
                                ea_energy(grid, bonds, spins_from_bits(bits, 6)));
            CHECK(gray.energy == doctest::Approx(best).epsilon(1e-12));
        }
    }
}

TEST_CASE("EA metric vanishes only on equal configs (connected lattice)") {
    const auto grid = LatticeBox::box({2, 4});
    const std::size_t n = grid.site_count();
    for (std::uint32_t b1 = 0; b1 < (1u << (n - 1)); ++b1)
        for (std::uint32_t b2 = 0; b2 < (1u << (n - 1)); ++b2) {
            const auto s1 = spins_from_bits(b1, n);
            const auto s2 = spins_from_bits(b2, n);
            const double d = spin_metric(s1, s2, SpinFamily::EA, &grid);
            if (b1 == b2)
                CHECK(d == 0.0);
            else
                CHECK(d > 0.0);
        }
}

TEST_CASE("ground energy respects the sub-Gamma lower bound") {
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 6 + trial % 9;
        const auto bonds = random_bonds(n * (n - 1) / 2, hash64(80, trial));
        const auto gs = sk_ground_state(bonds, n);
        CHECK(gs.energy > sk_ground_energy_lower_bound(n));
    }
}

TEST_CASE("Gray-code cap raises") {
    CHECK_THROWS_AS(sk_ground_state(std::vector<double>(23 * 22 / 2, 0.1), 23),
                    SizeExceeded);
}
