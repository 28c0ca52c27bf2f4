#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/problem.hpp"
#include "stabilitylab/stats.hpp"

using namespace stab;
using namespace stab::core;

namespace {

ProblemInstance sk_instance(std::size_t n, std::uint64_t seed = 1) {
    ProblemInstance inst;
    inst.family = Family::Sk;
    inst.n = n;
    inst.input_law = {InputLaw::Gaussian, 0.0, 1.0};
    inst.rng_seed = seed;
    return inst;
}

ProblemInstance tsp_instance(std::size_t n, std::uint64_t seed = 1) {
    ProblemInstance inst;
    inst.family = Family::Tsp;
    inst.n = n;
    inst.d = 2;
    inst.q = 1.0;
    inst.input_law = {InputLaw::UniformBox, 0.0, 1.0};
    inst.rng_seed = seed;
    return inst;
}

} // namespace

TEST_CASE("sample_inputs: determinism and index arithmetic") {
    const auto ctx = make_context(sk_instance(3));
    CHECK(ctx.k_n == 3); // bonds (1,2),(1,3),(2,3)
    const auto a = sample_inputs(ctx);
    const auto b = sample_inputs(ctx);
    CHECK(a.values == b.values);
    CHECK(a.count() == 3);

    ProblemInstance assn;
    assn.family = Family::Assignment;
    assn.n = 4;
    assn.input_law = {InputLaw::Exponential, 1.0, 0.0};
    CHECK(make_context(assn).k_n == 16);
}

TEST_CASE("exponential law calibration") {
    ProblemInstance inst;
    inst.family = Family::Assignment;
    inst.n = 100; // 10^4 inputs per draw
    inst.input_law = {InputLaw::Exponential, 1.0, 0.0};
    const auto ctx = make_context(inst);
    std::vector<double> pool;
    for (int rep = 0; rep < 10; ++rep) {
        const auto x = sample_inputs(ctx, hash64(5, rep));
        pool.insert(pool.end(), x.values.begin(), x.values.end());
    }
    CHECK(pool.size() == 100000);
    CHECK(std::fabs(stats::summarize(pool).mean - 1.0) < 0.02);
}

TEST_CASE("perturb_inputs block algebra") {
    const auto ctx = make_context(sk_instance(6));
    const auto scheme = make_scheme(ctx, SchemeVariant::SingleBlock);
    const auto x = sample_inputs(ctx, 11);
    const auto fresh = sample_inputs(ctx, 12);

    SUBCASE("singleton block touches one coordinate") {
        const auto y = perturb_inputs(x, scheme, 4, fresh);
        for (std::size_t i = 0; i < x.values.size(); ++i) {
            if (i == 4)
                CHECK(y.values[i] == fresh.values[i]);
            else
                CHECK(y.values[i] == x.values[i]);
        }
    }
    SUBCASE("full block returns fresh") {
        PerturbationScheme full;
        full.input_count = ctx.k_n;
        full.blocks.resize(1);
        for (std::size_t i = 0; i < ctx.k_n; ++i)
            full.blocks[0].push_back(static_cast<std::uint32_t>(i));
        CHECK(perturb_inputs(x, full, 0, fresh).values == fresh.values);
    }
    SUBCASE("two distinct blocks agree off both blocks") {
        const auto y1 = perturb_inputs(x, scheme, 1, fresh);
        const auto y2 = perturb_inputs(x, scheme, 3, fresh);
        for (std::size_t i = 0; i < x.values.size(); ++i)
            if (i != 1 && i != 3) CHECK(y1.values[i] == y2.values[i]);
    }
    SUBCASE("out-of-range block raises") {
        CHECK_THROWS_AS(perturb_inputs(x, scheme, 99, fresh), BlockOutOfRange);
    }
}

TEST_CASE("solve fixtures") {
    SUBCASE("SK n = 2 with a positive bond") {
        const auto ctx = make_context(sk_instance(2));
        InputVector x;
        x.values = {0.5};
        const auto sol = solve(ctx, x);
        CHECK(sol.ints == std::vector<std::int64_t>{1, 1});
        CHECK(sol.objective == -0.5);
        CHECK(objective_value(ctx, x, sol) == -0.5);
    }
    SUBCASE("assignment 2x2") {
        ProblemInstance inst;
        inst.family = Family::Assignment;
        inst.n = 2;
        const auto ctx = make_context(inst);
        InputVector x;
        x.values = {1, 2, 2, 1};
        const auto sol = solve(ctx, x);
        CHECK(sol.ints == std::vector<std::int64_t>{0, 1});
        CHECK(sol.objective == 2.0);
    }
    SUBCASE("TSP on three points is the triangle") {
        const auto ctx = make_context(tsp_instance(3));
        InputVector x;
        x.dim = 2;
        x.values = {0, 0, 1, 0, 0, 1};
        const auto sol = solve(ctx, x);
        CHECK(sol.ints.size() == 6); // 3 edges
        CHECK(sol.objective == doctest::Approx(2.0 + std::sqrt(2.0)));
    }
}

TEST_CASE("solve is minimal over the enumerable space, every family") {
    SUBCASE("sk") {
        const auto ctx = make_context(sk_instance(6, 7));
        const auto x = sample_inputs(ctx);
        const auto best = solve(ctx, x);
        const auto all = near_optimal_set(ctx, x, 1e18);
        CHECK(all.members.size() == 32);
        for (const auto& m : all.members)
            CHECK(best.objective <= m.objective + 1e-12);
    }
    SUBCASE("assignment") {
        ProblemInstance inst;
        inst.family = Family::Assignment;
        inst.n = 5;
        inst.input_law = {InputLaw::Exponential, 1.0, 0.0};
        inst.rng_seed = 8;
        const auto ctx = make_context(inst);
        const auto x = sample_inputs(ctx);
        const auto best = solve(ctx, x);
        const auto all = near_optimal_set(ctx, x, 1e18);
        CHECK(all.members.size() == 120);
        for (const auto& m : all.members)
            CHECK(best.objective <= m.objective + 1e-12);
    }
    SUBCASE("ea") {
        ProblemInstance inst;
        inst.family = Family::Ea;
        inst.lattice_shape = {2, 3};
        inst.input_law = {InputLaw::Gaussian, 0.0, 1.0};
        inst.rng_seed = 9;
        const auto ctx = make_context(inst);
        const auto x = sample_inputs(ctx);
        const auto best = solve(ctx, x);
        const auto all = near_optimal_set(ctx, x, 1e18);
        CHECK(all.members.size() == 32);
        for (const auto& m : all.members)
            CHECK(best.objective <= m.objective + 1e-12);
    }
    SUBCASE("brw") {
        ProblemInstance inst;
        inst.family = Family::Brw;
        inst.n = 6;
        inst.brw_model.progeny_pmf = {0.0, 0.0, 1.0};
        inst.rng_seed = 10;
        const auto ctx = make_context(inst);
        const auto x = sample_inputs(ctx);
        const auto best = solve(ctx, x);
        const auto all = near_optimal_set(ctx, x, 1e18);
        CHECK(all.members.size() == 64); // every leaf of the binary tree
        for (const auto& m : all.members)
            CHECK(best.objective <= m.objective + 1e-12);
        CHECK(objective_value(ctx, x, best) == doctest::Approx(best.objective));
    }
}

TEST_CASE("near_optimal_set windows") {
    SUBCASE("theta = 0 keeps only the optimizer") {
        const auto ctx = make_context(sk_instance(8, 20));
        const auto x = sample_inputs(ctx);
        const auto near = near_optimal_set(ctx, x, 0.0);
        REQUIRE(near.members.size() == 1);
        CHECK(near.members[0].same_encoding(solve(ctx, x)));
        CHECK(near.exhaustive);
    }
    SUBCASE("SK n = 2 windows from the spec") {
        const auto ctx = make_context(sk_instance(2));
        InputVector x;
        x.values = {0.5};
        CHECK(near_optimal_set(ctx, x, 0.7).members.size() == 1);
        CHECK(near_optimal_set(ctx, x, 1.0).members.size() == 2);
    }
    SUBCASE("windows nest") {
        const auto ctx = make_context(tsp_instance(7, 21));
        const auto x = sample_inputs(ctx);
        std::size_t prev = 0;
        for (const double theta : {0.0, 0.05, 0.2, 0.8, 1e18}) {
            const auto near = near_optimal_set(ctx, x, theta);
            CHECK(near.members.size() >= prev);
            prev = near.members.size();
        }
        CHECK(prev == 360); // all (7-1)!/2 tours
    }
    SUBCASE("matrix families refuse") {
        ProblemInstance inst;
        inst.family = Family::Wigner;
        inst.n = 8;
        const auto ctx = make_context(inst);
        const auto x = sample_inputs(ctx);
        CHECK_THROWS_AS(near_optimal_set(ctx, x, 0.1), ContinuousSpace);
    }
}

TEST_CASE("self-consistency: the perturbed optimum is its own near-optimal set") {
    const auto ctx = make_context(sk_instance(7, 30));
    const auto scheme = make_scheme(ctx, SchemeVariant::SingleBlock);
    const auto x = sample_inputs(ctx);
    const auto fresh = sample_inputs(ctx, 31);
    const auto xl = perturb_inputs(x, scheme, 2, fresh);
    const auto sol = solve(ctx, xl);
    const auto near = near_optimal_set(ctx, xl, 0.0);
    REQUIRE(near.members.size() == 1);
    CHECK(near.members[0].same_encoding(sol));
}

TEST_CASE("perturbation keeps the marginal law (KS on one coordinate)") {
    const auto ctx = make_context(sk_instance(5, 40));
    const auto scheme = make_scheme(ctx, SchemeVariant::SingleBlock);
    const std::size_t reps = 10000;
    std::vector<double> perturbed(reps), baseline(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto x = sample_inputs(ctx, hash64(41, r));
        const auto fresh = sample_inputs(ctx, hash64(42, r));
        perturbed[r] = perturb_inputs(x, scheme, 0, fresh).values[0];
        baseline[r] = sample_inputs(ctx, hash64(43, r)).values[0];
    }
    CHECK(stats::ks_two_sample(perturbed, baseline).p_value > 0.001);
}

TEST_CASE("scheme structure per family") {
    SUBCASE("SK row blocks: every bond in exactly two blocks") {
        const auto ctx = make_context(sk_instance(7));
        const auto rows = make_scheme(ctx, SchemeVariant::RowBlock);
        CHECK(rows.block_count() == 7);
        std::vector<std::size_t> cover(ctx.k_n, 0);
        for (const auto& blk : rows.blocks) {
            CHECK(blk.size() == 6);
            for (const auto idx : blk) ++cover[idx];
        }
        for (const auto c : cover) CHECK(c == 2);
    }
    SUBCASE("Wigner blocks") {
        ProblemInstance inst;
        inst.family = Family::Wigner;
        inst.n = 6;
        const auto ctx = make_context(inst);
        const auto single = make_scheme(ctx, SchemeVariant::SingleBlock);
        CHECK(single.block_count() == 21); // n(n+1)/2
        const auto rows = make_scheme(ctx, SchemeVariant::RowBlock);
        CHECK(rows.block_count() == 6);
        for (const auto& blk : rows.blocks) CHECK(blk.size() == 6);
        std::set<std::uint32_t> all;
        for (const auto& blk : rows.blocks) all.insert(blk.begin(), blk.end());
        CHECK(all.size() == 21); // union covers the index set
    }
    SUBCASE("Wishart column blocks") {
        ProblemInstance inst;
        inst.family = Family::Wishart;
        inst.n = 4;
        inst.m_rows = 6;
        const auto ctx = make_context(inst);
        const auto cols = make_scheme(ctx, SchemeVariant::RowBlock);
        CHECK(cols.block_count() == 4);
        for (const auto& blk : cols.blocks) CHECK(blk.size() == 6);
    }
}

TEST_CASE("perturbed_optimizers") {
    SUBCASE("degenerate fresh copy reproduces the optimizer") {
        const auto ctx = make_context(sk_instance(6, 50));
        const auto scheme = make_scheme(ctx, SchemeVariant::SingleBlock);
        const auto x = sample_inputs(ctx);
        const auto base = solve(ctx, x);
        // fresh = x makes every perturbed input equal to x
        for (std::size_t l = 0; l < scheme.block_count(); ++l) {
            const auto xl = perturb_inputs(x, scheme, l, x);
            CHECK(solve(ctx, xl).same_encoding(base));
        }
    }
    SUBCASE("TSP n = 3: one tour no matter the perturbation") {
        const auto ctx = make_context(tsp_instance(3, 51));
        const auto scheme = make_scheme(ctx, SchemeVariant::SingleBlock);
        const auto x = sample_inputs(ctx);
        const auto oc = perturbed_optimizers(ctx, x, scheme, 0, 77);
        CHECK(oc.points.size() == 1);
        CHECK(oc.point_of_block.size() == 3);
    }
    SUBCASE("subsample solves exactly the requested number of blocks") {
        const auto ctx = make_context(sk_instance(9, 52));
        const auto scheme = make_scheme(ctx, SchemeVariant::SingleBlock);
        const auto x = sample_inputs(ctx);
        const auto oc = perturbed_optimizers(ctx, x, scheme, 10, 78);
        CHECK(oc.selected_blocks.size() == 10);
        CHECK(oc.point_of_block.size() == 10);
        std::size_t total = 0;
        for (const auto m : oc.multiplicity) total += m;
        CHECK(total == 10);
    }
    SUBCASE("BRW subsample keeps ancestral edges of the argmin") {
        ProblemInstance inst;
        inst.family = Family::Brw;
        inst.n = 9;
        inst.brw_model.progeny_pmf = {0.0, 0.0, 1.0};
        inst.rng_seed = 53;
        const auto ctx = make_context(inst);
        const auto scheme = make_scheme(ctx, SchemeVariant::SingleBlock);
        const auto x = sample_inputs(ctx);
        const auto argmin = solve(ctx, x);
        std::set<std::uint32_t> ancestral;
        std::uint32_t v = ctx.tree.vertex_from_path(std::vector<std::uint32_t>(
            argmin.ints.begin(), argmin.ints.end()));
        while (v != 0) {
            ancestral.insert(v - 1);
            v = ctx.tree.parent[v];
        }
        const auto oc = perturbed_optimizers(ctx, x, scheme, 64, 79);
        CHECK(oc.selected_blocks.size() == 64);
        std::size_t anc_hits = 0;
        for (const auto b : oc.selected_blocks)
            if (ancestral.count(b)) ++anc_hits;
        CHECK(anc_hits >= 8);
    }
}

TEST_CASE("window_length rates") {
    CHECK(window_length({Family::Tsp, SchemeVariant::SingleBlock, 1.0}, 100, 2,
                        1.0) == doctest::Approx(0.1));
    CHECK(window_length({Family::Assignment, SchemeVariant::SingleBlock, 1.0},
                        50) == doctest::Approx(0.02));
    CHECK(window_length({Family::Sk, SchemeVariant::RowBlock, 1.0}, 49) ==
          doctest::Approx(7.0));
    CHECK(window_length({Family::Sk, SchemeVariant::SingleBlock, 2.0}, 49) ==
          doctest::Approx(2.0));
    CHECK(window_length({Family::Wigner, SchemeVariant::SingleBlock, 1.0}, 100) ==
          doctest::Approx(0.1));
    CHECK(window_length({Family::Wishart, SchemeVariant::RowBlock, 3.0}, 64) ==
          doctest::Approx(3.0));
    CHECK(window_length({Family::Ea, SchemeVariant::SingleBlock, 1.5}, 12) ==
          doctest::Approx(1.5));
    CHECK(window_length({Family::Brw, SchemeVariant::SingleBlock, 1.0}, 18) ==
          doctest::Approx(1.0));
    CHECK(window_length({Family::WeightedGraph, SchemeVariant::SingleBlock, 1.0},
                        8) == doctest::Approx(0.125));
    CHECK(window_length({Family::Mst, SchemeVariant::SingleBlock, 1.0}, 16, 2,
                        1.0) == doctest::Approx(0.25));
}

TEST_CASE("stability_statistic") {
    SUBCASE("TSP n = 3: a single ball always suffices") {
        const auto ctx = make_context(tsp_instance(3, 60));
        const auto scheme = make_scheme(ctx, SchemeVariant::SingleBlock);
        const auto x = sample_inputs(ctx);
        const auto rep = stability_statistic(ctx, x, scheme, 0.25, 0, 80);
        CHECK(rep.ball_count == 1);
        CHECK(rep.discarded.empty());
    }
    SUBCASE("epsilon domain errors") {
        const auto ctx = make_context(sk_instance(5, 61));
        const auto scheme = make_scheme(ctx, SchemeVariant::SingleBlock);
        const auto x = sample_inputs(ctx);
        CHECK_THROWS_AS(stability_statistic(ctx, x, scheme, 0.0, 0, 81),
                        ValidationError);
        CHECK_THROWS_AS(stability_statistic(ctx, x, scheme, 1.0, 0, 81),
                        ValidationError);
    }
    SUBCASE("deterministic given the stream") {
        const auto ctx = make_context(sk_instance(8, 62));
        const auto scheme = make_scheme(ctx, SchemeVariant::SingleBlock);
        const auto x = sample_inputs(ctx);
        const auto a = stability_statistic(ctx, x, scheme, 0.25, 12, 82);
        const auto b = stability_statistic(ctx, x, scheme, 0.25, 12, 82);
        CHECK(a.ball_count == b.ball_count);
        CHECK(a.discarded == b.discarded);
    }
}

TEST_CASE("objective recomputation round-trips for matrix families") {
    for (const Family f : {Family::Wigner, Family::Wishart}) {
        ProblemInstance inst;
        inst.family = f;
        inst.n = 10;
        inst.m_rows = f == Family::Wishart ? 12 : 0;
        inst.rng_seed = 70;
        const auto ctx = make_context(inst);
        const auto x = sample_inputs(ctx);
        const auto sol = solve(ctx, x);
        CHECK(objective_value(ctx, x, sol) ==
              doctest::Approx(sol.objective)
                  .epsilon(1e-9 * (1.0 + std::fabs(sol.objective))));
        // gauged unit vector
        double norm = 0.0;
        for (const double v : sol.reals) norm += v * v;
        CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("solution metrics per family") {
    SUBCASE("brw path metric from encodings") {
        ProblemInstance inst;
        inst.family = Family::Brw;
        inst.n = 4;
        inst.brw_model.progeny_pmf = {0.0, 0.0, 1.0};
        inst.rng_seed = 71;
        const auto ctx = make_context(inst);
        SolutionPoint a, b;
        a.ints = {0, 0, 0, 0};
        b.ints = {0, 0, 0, 1}; // sibling leaf
        CHECK(solution_metric(ctx, a, b) == doctest::Approx(2.0 / 4.0));
        b.ints = {1, 0, 0, 0};
        CHECK(solution_metric(ctx, a, b) == doctest::Approx(2.0));
        CHECK(solution_metric(ctx, a, a) == 0.0);
    }
    SUBCASE("spin metrics ride the family dispatch") {
        const auto ctx = make_context(sk_instance(4));
        SolutionPoint a, b;
        a.ints = {1, 1, 1, 1};
        b.ints = {1, -1, -1, -1};
        CHECK(solution_metric(ctx, a, b) == 0.75);
    }
}
