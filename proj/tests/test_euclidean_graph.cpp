#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/euclidean_graph.hpp"
#include "stabilitylab/stats.hpp"

using namespace stab;
using namespace stab::euclid;

namespace {

PointConfiguration from_coords(std::vector<double> coords, std::size_t d,
                               double q = 1.0) {
    PointConfiguration cfg;
    cfg.n = coords.size() / d;
    cfg.d = d;
    cfg.q = q;
    cfg.coords = std::move(coords);
    cfg.rebuild_planes();
    return cfg;
}

bool is_hamiltonian_cycle(const GraphSolution& g, std::size_t n) {
    if (g.edges.size() != n) return false;
    std::vector<int> deg(n, 0);
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& [u, v] : g.edges) {
        ++deg[u];
        ++deg[v];
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (const int d : deg)
        if (d != 2) return false;
    // single cycle: walk it
    std::vector<bool> seen(n, false);
    std::uint32_t cur = 0, prev = n;
    std::size_t steps = 0;
    while (!seen[cur]) {
        seen[cur] = true;
        ++steps;
        const std::uint32_t next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
        prev = cur;
        cur = next;
    }
    return steps == n;
}

bool is_spanning_tree(const GraphSolution& g, std::size_t n) {
    if (g.edges.size() != n - 1) return false;
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    std::function<std::uint32_t(std::uint32_t)> find =
        [&](std::uint32_t x) -> std::uint32_t {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [u, v] : g.edges) {
        const auto a = find(u), b = find(v);
        if (a == b) return false;
        parent[a] = b;
    }
    return true;
}

std::size_t max_degree(const GraphSolution& g, std::size_t n) {
    std::vector<std::size_t> deg(n, 0);
    for (const auto& [u, v] : g.edges) {
        ++deg[u];
        ++deg[v];
    }
    return *std::max_element(deg.begin(), deg.end());
}

} // namespace

TEST_CASE("mst fixtures on collinear points") {
    auto cfg = from_coords({0, 0, 1, 0, 3, 0}, 2, 1.0);
    const auto g1 = mst_solve(cfg);
    CHECK(g1.weight == doctest::Approx(3.0));
    CHECK(g1.edges == decltype(g1.edges){{0, 1}, {1, 2}});

    cfg.q = 2.0;
    const auto g2 = mst_solve(cfg);
    CHECK(g2.edges == g1.edges);
    CHECK(g2.weight == doctest::Approx(5.0)); // 1 + 4
}

TEST_CASE("mst on the unit square equals the tree enumeration minimum") {
    const auto cfg = from_coords({0, 0, 1, 0, 0, 1, 1, 1}, 2, 1.0);
    const auto kr = mst_solve(cfg);
    CHECK(kr.weight == doctest::Approx(3.0));
    const auto all = enumerate_solutions(cfg, GraphKind::Tree);
    CHECK(all.size() == 16);
    const double best =
        std::min_element(all.begin(), all.end(), [](const auto& a, const auto& b) {
            return a.weight < b.weight;
        })->weight;
    CHECK(kr.weight == doctest::Approx(best));
}

TEST_CASE("tsp fixtures") {
    SUBCASE("three points make the unique triangle") {
        const auto cfg = from_coords({0, 0, 1, 0, 0, 1}, 2);
        const auto g = tsp_solve(cfg);
        CHECK(g.edges.size() == 3);
        CHECK(g.weight == doctest::Approx(2.0 + std::sqrt(2.0)));
        CHECK(enumerate_solutions(cfg, GraphKind::Tour).size() == 1);
    }
    SUBCASE("unit square corners tour around the square") {
        const auto cfg = from_coords({0, 0, 1, 0, 0, 1, 1, 1}, 2);
        const auto g = tsp_solve(cfg);
        CHECK(g.weight == doctest::Approx(4.0));
        const auto all = enumerate_solutions(cfg, GraphKind::Tour);
        CHECK(all.size() == 3);
        for (const auto& t : all) CHECK(g.weight <= t.weight + 1e-12);
    }
}

TEST_CASE("Held-Karp equals brute force on random instances") {
    for (int trial = 0; trial < 30; ++trial) {
        Rng rng(hash64(500, trial));
        const std::size_t n = 5 + trial % 5; // 5..9
        const auto cfg = sample_points(n, 2, PointLaw::UniformBox, 1.0, rng);
        const auto hk = tsp_solve(cfg);
        const auto all = enumerate_solutions(cfg, GraphKind::Tour);
        const auto best = std::min_element(
            all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.weight < b.weight; });
        CHECK(hk.weight == doctest::Approx(best->weight).epsilon(1e-12));
        CHECK(hk.edges == best->edges);
        CHECK(is_hamiltonian_cycle(hk, n));
    }
}

TEST_CASE("graph_metric fixtures") {
    GraphSolution a{GraphKind::Tour, {{0, 1}, {0, 3}, {1, 2}, {2, 3}}, 0};
    CHECK(graph_metric(a, a, 4) == 0.0);
    GraphSolution b{GraphKind::Tour, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}, 0};
    CHECK(graph_metric(a, b, 4) == 1.0); // symmetric difference {01,23,02,13}
    GraphSolution star{GraphKind::Tree, {{0, 1}, {0, 2}, {0, 3}}, 0};
    GraphSolution path{GraphKind::Tree, {{0, 1}, {1, 2}, {2, 3}}, 0};
    CHECK(graph_metric(star, path, 4) == 1.0);
}

TEST_CASE("nn_min_distance fixtures") {
    const auto two = from_coords({0, 0, 3, 4}, 2);
    CHECK(nn_min_distance(two, 0).first == doctest::Approx(5.0));
    CHECK(nn_min_distance(two, 0).second == 1);

    // regular grid: nearest neighbor at spacing h
    const double h = 0.25;
    std::vector<double> coords;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            coords.push_back(i * h);
            coords.push_back(j * h);
        }
    const auto grid = from_coords(coords, 2);
    for (std::size_t i = 0; i < grid.n; ++i)
        CHECK(nn_min_distance(grid, i).first == doctest::Approx(h));
}

TEST_CASE("sample_points marginals and determinism") {
    Rng r1(17), r2(17);
    const auto a = sample_points(50, 2, PointLaw::UniformBox, 1.0, r1);
    const auto b = sample_points(50, 2, PointLaw::UniformBox, 1.0, r2);
    CHECK(a.coords == b.coords);

    Rng rg(18);
    const auto g = sample_points(4000, 2, PointLaw::Gaussian, 1.0, rg);
    const auto s = stats::summarize(g.coords);
    CHECK(std::fabs(s.mean) < 3.0 / std::sqrt(8000.0));
}

TEST_CASE("tsp sister tour: degenerate case and per-sample bounds") {
    SUBCASE("n = 3 returns the unique tour") {
        Rng rng(3);
        const auto cfg = sample_points(3, 2, PointLaw::UniformBox, 1.0, rng);
        auto pert = cfg;
        pert.coords[0] += 0.1;
        pert.rebuild_planes();
        const auto tour = tsp_solve(pert);
        const auto sister = tsp_sister_tour(cfg, pert, 0, tour);
        CHECK(sister.edges == tour.edges);
    }
    SUBCASE("random n = 10 instances satisfy both postconditions") {
        for (int trial = 0; trial < 25; ++trial) {
            Rng rng(hash64(600, trial));
            const std::size_t n = 10;
            auto cfg = sample_points(n, 2, PointLaw::UniformBox, 1.0, rng);
            const std::size_t l = trial % n;
            auto pert = cfg;
            pert.coords[l * 2] = rng.u01();
            pert.coords[l * 2 + 1] = rng.u01();
            pert.rebuild_planes();
            const auto tour = tsp_solve(pert);
            const auto sister = tsp_sister_tour(cfg, pert, l, tour);
            CHECK(is_hamiltonian_cycle(sister, n));
            CHECK(graph_metric(tour, sister, n) <= 6.0 / n + 1e-12);
            const double excess = tour_length(cfg, sister) - tour.weight;
            const double nn = nn_min_distance(cfg, l).first;
            CHECK(excess <= 2.0 * nn + 1e-9);
        }
    }
}

TEST_CASE("mst sister tree: bounds, degree cap, leaf case") {
    std::size_t leaf_cases = 0;
    for (int trial = 0; trial < 25; ++trial) {
        Rng rng(hash64(700, trial));
        const std::size_t n = 12;
        auto cfg = sample_points(n, 2, PointLaw::UniformBox, 1.0, rng);
        const std::size_t l = trial % n;
        auto pert = cfg;
        pert.coords[l * 2] = rng.u01();
        pert.coords[l * 2 + 1] = rng.u01();
        pert.rebuild_planes();
        const auto tree = mst_solve(pert);
        const auto sister = mst_sister_tree(cfg, pert, l, tree);
        CHECK(is_spanning_tree(sister, n));
        const double kappa = static_cast<double>(kissing_number(2));
        CHECK(graph_metric(tree, sister, n) <= 2.0 * kappa / n + 1e-12);
        CHECK(max_degree(sister, n) <= kissing_number(2) + 1);

        std::size_t deg_l = 0;
        for (const auto& [u, v] : tree.edges)
            if (u == l || v == l) ++deg_l;
        if (deg_l == 1) {
            ++leaf_cases;
            CHECK(graph_metric(tree, sister, n) <= 2.0 / n + 1e-12);
        }
        // excess inequality from the construction
        double nbr_sum = 0.0;
        for (const auto& [u, v] : tree.edges) {
            if (u == l) nbr_sum += pert.q_weight(u, v);
            if (v == l) nbr_sum += pert.q_weight(u, v);
        }
        const double q = cfg.q;
        const double excess = tour_length(cfg, sister) - tree.weight;
        const double nn = nn_min_distance(cfg, l).first;
        CHECK(excess <= (std::pow(2.0, q) - 1.0) * nbr_sum + std::pow(nn, q) + 1e-9);
    }
    CHECK(leaf_cases > 0); // the fixture set must exercise the leaf branch
}

TEST_CASE("mst sister tree with q = 2 power weights") {
    for (int trial = 0; trial < 10; ++trial) {
        Rng rng(hash64(710, trial));
        auto cfg = sample_points(10, 2, PointLaw::UniformBox, 2.0, rng);
        auto pert = cfg;
        pert.coords[4] = rng.u01();
        pert.coords[5] = rng.u01();
        pert.rebuild_planes();
        const auto tree = mst_solve(pert);
        const auto sister = mst_sister_tree(cfg, pert, 2, tree);
        CHECK(is_spanning_tree(sister, 10));
        CHECK(graph_metric(tree, sister, 10) <= 12.0 / 10 + 1e-12);
    }
}

TEST_CASE("MST degree stays below the kissing number (q = 1, d = 2)") {
    for (int trial = 0; trial < 400; ++trial) {
        Rng rng(hash64(800, trial));
        const auto cfg = sample_points(24, 2, PointLaw::UniformBox, 1.0, rng);
        CHECK(max_degree(mst_solve(cfg), 24) <= 6);
    }
}

TEST_CASE("MST length ratio spread shrinks with n") {
    // coefficient of variation of L / n^((d-q)/d) decreases over the grid
    double prev_cv = 1e300;
    for (const std::size_t n : {8u, 64u, 512u}) {
        std::vector<double> ratios;
        for (int rep = 0; rep < 16; ++rep) {
            Rng rng(hash64(900, n, rep));
            const auto cfg = sample_points(n, 2, PointLaw::UniformBox, 1.0, rng);
            ratios.push_back(mst_solve(cfg).weight / std::sqrt(static_cast<double>(n)));
        }
        const auto s = stats::summarize(ratios);
        const double cv = s.stderr_mean * std::sqrt(16.0) / s.mean;
        CHECK(cv < prev_cv);
        prev_cv = cv;
    }
}

TEST_CASE("solver caps raise") {
    Rng rng(1);
    const auto cfg = sample_points(16, 2, PointLaw::UniformBox, 1.0, rng);
    CHECK_THROWS_AS(tsp_solve(cfg), SizeExceeded);
    CHECK_THROWS_AS(kissing_number(7), SizeExceeded);
    CHECK(kissing_number(2) == 6);
    CHECK(kissing_number(3) == 12);
    CHECK(kissing_number(4) == 24);
}
