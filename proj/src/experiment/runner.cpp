#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/euclidean_graph.hpp"
#include "stabilitylab/experiment.hpp"
#include "stabilitylab/kernels.hpp"
#include "stabilitylab/random_matrix.hpp"

namespace stab::exp {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

core::LawSpec default_law(core::Family f) {
    core::LawSpec law;
    switch (f) {
        case core::Family::Tsp:
        case core::Family::Mst:
        case core::Family::WeightedGraph:
            law.kind = core::InputLaw::UniformBox;
            law.a = 0.0;
            law.b = 1.0;
            break;
        case core::Family::Assignment:
            law.kind = core::InputLaw::Exponential;
            law.a = 1.0;
            break;
        default:
            law.kind = core::InputLaw::Gaussian;
            law.a = 0.0;
            law.b = 1.0;
            break;
    }
    return law;
}

core::ProblemInstance make_instance(const ExperimentSpec& spec, std::size_t n,
                                    std::uint64_t instance_seed) {
    core::ProblemInstance inst;
    inst.family = spec.family;
    inst.n = n;
    inst.d = spec.d;
    inst.q = spec.q;
    inst.m_rows = spec.m_rows;
    inst.lattice_shape = spec.lattice_shape;
    inst.graph_kind = spec.graph_kind;
    inst.brw_model.progeny_pmf = spec.progeny_pmf;
    inst.brw_condition_survival = spec.brw_condition_survival;
    inst.input_law = spec.law_given ? spec.input_law : default_law(spec.family);
    inst.rng_seed = instance_seed;
    return inst;
}

std::size_t family_size(const ExperimentSpec& spec,
                        const core::ProblemContext& ctx, std::size_t n) {
    // the size parameter the window rules scale with
    if (spec.family == core::Family::Ea) return ctx.lattice.site_count();
    return n;
}

Row base_row(const ExperimentSpec& spec, std::size_t n, std::size_t rep,
             std::uint64_t seed) {
    Row r;
    r.family = core::family_name(spec.family);
    r.n = n;
    r.d = spec.d;
    r.q = spec.q;
    r.variant = spec.variant == core::SchemeVariant::SingleBlock
                    ? "single_block"
                    : "row_block";
    r.replication = rep;
    r.seed = seed;
    return r;
}

// ---- per-kind replication pipelines -----------------------------------

std::vector<Row> run_stability_rep(const ExperimentSpec& spec, std::size_t n,
                                   std::size_t rep) {
    const auto t0 = Clock::now();
    const std::uint64_t stream = hash64(spec.master_seed, rep, n);
    const std::uint64_t inst_seed =
        spec.brw_resample_tree ? hash64(spec.master_seed, rep, n, 0x7265u)
                               : hash64(spec.master_seed, n, 0x7265u);
    const auto ctx = core::make_context(make_instance(spec, n, inst_seed));
    const auto x = core::sample_inputs(ctx, hash64(stream, 1));
    const auto scheme = core::make_scheme(ctx, spec.variant);
    std::vector<Row> rows;
    for (std::size_t ei = 0; ei < spec.epsilon_grid.size(); ++ei) {
        const double eps = spec.epsilon_grid[ei];
        const auto rep_cover = core::stability_statistic(
            ctx, x, scheme, eps, spec.block_subsample, hash64(stream, 2, ei));
        Row r = base_row(spec, n, rep, stream);
        r.epsilon = eps;
        r.statistic_name = "ball_count";
        r.value = static_cast<double>(rep_cover.ball_count);
        rows.push_back(r);
        r.statistic_name = "discarded";
        r.value = static_cast<double>(rep_cover.discarded.size());
        rows.push_back(r);
        if (rep_cover.exact_min_packing) {
            r.statistic_name = "exact_min_packing";
            r.value = static_cast<double>(*rep_cover.exact_min_packing);
            rows.push_back(r);
        }
    }
    const double ms = ms_since(t0);
    for (auto& r : rows) r.runtime_ms = ms;
    return rows;
}

std::vector<Row> run_tightness_rep(const ExperimentSpec& spec, std::size_t n,
                                   std::size_t rep) {
    const auto t0 = Clock::now();
    const std::uint64_t stream = hash64(spec.master_seed, rep, n);
    const auto ctx = core::make_context(
        make_instance(spec, n, hash64(spec.master_seed, n, 0x7265u)));
    const auto x = core::sample_inputs(ctx, hash64(stream, 1));
    std::vector<Row> rows;
    for (const double c : spec.theta_c_grid) {
        const core::WindowRule rule{spec.family, spec.variant, c};
        const double theta =
            core::window_length(rule, family_size(spec, ctx, n), spec.d, spec.q);
        const auto near = core::near_optimal_set(ctx, x, theta);
        const auto cloud = metric::SolutionCloud::from_metric(
            near.members.size(), [&](std::size_t i, std::size_t j) {
                return core::solution_metric(ctx, near.members[i],
                                             near.members[j]);
            });
        for (const double eps : spec.epsilon_grid) {
            double packing;
            bool exact = true;
            try {
                packing = static_cast<double>(
                    metric::packing_number_exact(cloud, eps));
            } catch (const SizeExceeded&) {
                packing = static_cast<double>(
                    metric::packing_number_greedy(cloud, eps));
                exact = false;
            }
            Row r = base_row(spec, n, rep, stream);
            r.epsilon = eps;
            r.theta = theta;
            r.statistic_name = "packing_near_optimal";
            r.value = packing;
            rows.push_back(r);
            r.statistic_name = "packing_is_exact";
            r.value = exact ? 1.0 : 0.0;
            rows.push_back(r);
            r.statistic_name = "near_optimal_size";
            r.value = static_cast<double>(near.members.size());
            rows.push_back(r);
        }
    }
    const double ms = ms_since(t0);
    for (auto& r : rows) r.runtime_ms = ms;
    return rows;
}

std::vector<Row> run_calibrate_rep(const ExperimentSpec& spec, std::size_t n,
                                   std::size_t rep) {
    const auto t0 = Clock::now();
    const std::uint64_t stream = hash64(spec.master_seed, rep, n);
    const std::uint64_t inst_seed =
        spec.brw_resample_tree || spec.family == core::Family::Brw
            ? hash64(spec.master_seed, rep, n, 0x7265u)
            : hash64(spec.master_seed, n, 0x7265u);
    const auto ctx = core::make_context(make_instance(spec, n, inst_seed));
    const auto x = core::sample_inputs(ctx, hash64(stream, 1));
    const auto sol = core::solve(ctx, x);
    Row r = base_row(spec, n, rep, stream);
    const double nn = static_cast<double>(n);
    switch (spec.family) {
        case core::Family::Assignment:
            r.statistic_name = "optimal_cost";
            r.value = sol.objective;
            break;
        case core::Family::Wigner:
            r.statistic_name = "lambda1_over_sqrt_n";
            r.value = sol.objective / std::sqrt(nn);
            break;
        case core::Family::Wishart:
            r.statistic_name = "lambda_max_over_n";
            r.value = -sol.objective / nn;
            break;
        case core::Family::Brw:
            r.statistic_name = "min_disp_over_n";
            r.value = sol.objective / nn;
            break;
        case core::Family::Mst:
            r.statistic_name = "mst_ratio";
            r.value = sol.objective /
                      std::pow(nn, (static_cast<double>(spec.d) - spec.q) /
                                       static_cast<double>(spec.d));
            break;
        case core::Family::Tsp:
            r.statistic_name = "tsp_ratio";
            r.value = sol.objective /
                      std::pow(nn, (static_cast<double>(spec.d) - spec.q) /
                                       static_cast<double>(spec.d));
            break;
        case core::Family::Sk:
            r.statistic_name = "ground_energy_scaled";
            r.value = sol.objective / std::pow(nn, 1.5);
            break;
        case core::Family::Ea:
            r.statistic_name = "ground_energy_per_site";
            r.value = sol.objective /
                      static_cast<double>(ctx.lattice.site_count());
            break;
        case core::Family::WeightedGraph:
            r.statistic_name = "optimal_weight";
            r.value = sol.objective;
            break;
    }
    r.runtime_ms = ms_since(t0);
    return {r};
}

// ---- oracle checks ------------------------------------------------------

std::size_t oracle_mismatches(core::Family family, std::uint64_t seed) {
    switch (family) {
        case core::Family::Tsp: {
            Rng rng(seed);
            const auto cfg =
                euclid::sample_points(7, 2, euclid::PointLaw::UniformBox, 1.0, rng);
            const auto hk = euclid::tsp_solve(cfg);
            const auto all = euclid::enumerate_solutions(cfg, wgraph::GraphKind::Tour);
            const auto best = std::min_element(
                all.begin(), all.end(),
                [](const auto& a, const auto& b) { return a.weight < b.weight; });
            return hk.edges == best->edges &&
                           std::fabs(hk.weight - best->weight) <= 1e-9
                       ? 0
                       : 1;
        }
        case core::Family::Mst: {
            Rng rng(seed);
            const auto cfg =
                euclid::sample_points(6, 2, euclid::PointLaw::UniformBox, 1.0, rng);
            const auto kr = euclid::mst_solve(cfg);
            const auto all = euclid::enumerate_solutions(cfg, wgraph::GraphKind::Tree);
            const auto best = std::min_element(
                all.begin(), all.end(),
                [](const auto& a, const auto& b) { return a.weight < b.weight; });
            return std::fabs(kr.weight - best->weight) <= 1e-9 ? 0 : 1;
        }
        case core::Family::WeightedGraph: {
            Rng rng(seed);
            std::vector<double> upper(8 * 7 / 2);
            for (double& w : upper) w = rng.u01();
            const auto ew = wgraph::EdgeWeights::from_flat_upper(8, upper);
            const auto dp = wgraph::complete_graph_solve(ew, wgraph::GraphKind::Matching);
            double best = 1e300;
            wgraph::for_each_matching(8, [&](const wgraph::GraphSolution& g) {
                best = std::min(best, wgraph::solution_weight(ew, g));
            });
            return std::fabs(dp.weight - best) <= 1e-9 ? 0 : 1;
        }
        case core::Family::Assignment: {
            Rng rng(seed);
            wgraph::CostMatrix cm;
            cm.n = 6;
            cm.c.resize(36);
            for (double& c : cm.c) c = rng.exponential(1.0);
            const auto hung = wgraph::assignment_solve(cm);
            std::vector<std::uint32_t> pi(6);
            std::iota(pi.begin(), pi.end(), 0u);
            double best = 1e300;
            std::vector<std::uint32_t> best_pi;
            do {
                double c = 0.0;
                for (std::size_t i = 0; i < 6; ++i) c += cm.at(i, pi[i]);
                if (c < best) {
                    best = c;
                    best_pi = pi;
                }
            } while (std::next_permutation(pi.begin(), pi.end()));
            return hung.pi == best_pi && std::fabs(hung.cost - best) <= 1e-9 ? 0 : 1;
        }
        case core::Family::Sk: {
            Rng rng(seed);
            std::vector<double> bonds(8 * 7 / 2);
            for (double& b : bonds) b = rng.gaussian();
            const auto gray = spin::sk_ground_state(bonds, 8);
            double best = 1e300;
            spin::SpinConfig best_s;
            for (std::uint32_t bits = 0; bits < (1u << 7); ++bits) {
                const auto s = spin::spins_from_bits(bits, 8);
                const double e = spin::sk_energy(bonds, s);
                if (e < best) {
                    best = e;
                    best_s = s;
                }
            }
            return gray.config.sigma == best_s.sigma &&
                           std::fabs(gray.energy - best) <= 1e-9
                       ? 0
                       : 1;
        }
        case core::Family::Ea: {
            Rng rng(seed);
            const auto lat = spin::LatticeBox::box({2, 3});
            std::vector<double> bonds(lat.bonds.size());
            for (double& b : bonds) b = rng.gaussian();
            const auto gray = spin::ea_ground_state(lat, bonds);
            double best = 1e300;
            for (std::uint32_t bits = 0; bits < (1u << 5); ++bits) {
                const auto s = spin::spins_from_bits(bits, 6);
                best = std::min(best, spin::ea_energy(lat, bonds, s));
            }
            return std::fabs(gray.energy - best) <= 1e-9 ? 0 : 1;
        }
        case core::Family::Brw: {
            Rng rng(seed);
            brw::BrwModel model;
            model.progeny_pmf = {0.2, 0.3, 0.5};
            const auto dt = brw::sample_brw(model, 8, true, rng);
            const auto m = brw::min_displacement(dt);
            // oracle: per-leaf parent walk
            double best = 1e300;
            for (std::uint32_t v = dt.tree.leaf_begin(); v < dt.tree.leaf_end();
                 ++v) {
                double s = 0.0;
                std::uint32_t u = v;
                while (u != 0) {
                    s += dt.disp[u];
                    u = dt.tree.parent[u];
                }
                best = std::min(best, s);
            }
            return std::fabs(m.value - best) <= 1e-9 ? 0 : 1;
        }
        case core::Family::Wigner: {
            Rng rng(seed);
            const auto a = rmt::sample_wigner(12, rmt::EntryLaw::Gaussian, rng);
            const auto ed = rmt::symmetric_eigen(a);
            double tr = 0.0, tr2 = 0.0, sum = 0.0, sum2 = 0.0;
            for (std::size_t i = 0; i < 12; ++i) {
                tr += a.at(i, i);
                sum += ed.values[i];
                sum2 += ed.values[i] * ed.values[i];
            }
            tr2 = a.fro_norm() * a.fro_norm();
            const auto rep = rmt::interlacing_check(a);
            const bool ok = std::fabs(tr - sum) <= 1e-7 * (1.0 + std::fabs(tr)) &&
                            std::fabs(tr2 - sum2) <= 1e-7 * (1.0 + tr2) &&
                            rep.interlacing_ok && rep.gap_ok;
            return ok ? 0 : 1;
        }
        case core::Family::Wishart: {
            Rng rng(seed);
            const auto m = rmt::sample_wishart_factor(14, 10, rmt::EntryLaw::Gaussian, rng);
            const auto pair = rmt::extreme_eigenpair(m);
            // ||Mv||^2 must equal lambda within tolerance
            double s = 0.0;
            for (std::size_t r2 = 0; r2 < m.m; ++r2) {
                const double t =
                    kern::dot(m.a.data() + r2 * m.n, pair.vector.data(), m.n);
                s += t * t;
            }
            return std::fabs(s - pair.value) <= 1e-6 * (1.0 + std::fabs(s)) ? 0 : 1;
        }
    }
    return 1;
}

std::vector<Row> run_oracle_rep(const ExperimentSpec& spec, std::size_t rep) {
    const std::uint64_t stream = hash64(spec.master_seed, rep);
    std::vector<Row> rows;
    for (const core::Family f :
         {core::Family::Tsp, core::Family::Mst, core::Family::WeightedGraph,
          core::Family::Assignment, core::Family::Sk, core::Family::Ea,
          core::Family::Brw, core::Family::Wigner, core::Family::Wishart}) {
        const auto t0 = Clock::now();
        const std::size_t mismatches = oracle_mismatches(f, hash64(stream, static_cast<std::uint64_t>(f)));
        Row r = base_row(spec, 0, rep, stream);
        r.family = core::family_name(f);
        r.statistic_name = "mismatches";
        r.value = static_cast<double>(mismatches);
        r.runtime_ms = ms_since(t0);
        rows.push_back(r);
    }
    return rows;
}

} // namespace

ExperimentRecord run_experiment(const ExperimentSpec& spec) {
    validate(spec);
    ExperimentRecord record;
    record.spec = spec;

    struct Task {
        std::size_t n;
        std::size_t rep;
    };
    std::vector<Task> tasks;
    if (spec.kind == Kind::OracleCheck) {
        for (std::size_t rep = 0; rep < spec.replications; ++rep)
            tasks.push_back({0, rep});
    } else {
        for (const std::size_t n : spec.n_grid)
            for (std::size_t rep = 0; rep < spec.replications; ++rep)
                tasks.push_back({n, rep});
    }

    std::vector<std::vector<Row>> slots(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    const std::size_t workers =
        std::max<std::size_t>(1, std::min(spec.jobs, tasks.size()));
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                switch (spec.kind) {
                    case Kind::Stability:
                        slots[i] = run_stability_rep(spec, tasks[i].n, tasks[i].rep);
                        break;
                    case Kind::Tightness:
                        slots[i] = run_tightness_rep(spec, tasks[i].n, tasks[i].rep);
                        break;
                    case Kind::Calibrate:
                        slots[i] = run_calibrate_rep(spec, tasks[i].n, tasks[i].rep);
                        break;
                    case Kind::OracleCheck:
                        slots[i] = run_oracle_rep(spec, tasks[i].rep);
                        break;
                }
            } catch (const std::exception& e) {
                errors[i] = e.what();
                Row r = base_row(spec, tasks[i].n, tasks[i].rep,
                                 hash64(spec.master_seed, tasks[i].rep, tasks[i].n));
                r.statistic_name = "error";
                r.value = 1.0;
                slots[i] = {r}; // failure marker; partial results still flush
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (auto& s : slots)
        record.rows.insert(record.rows.end(), s.begin(), s.end());

    // order-insensitive aggregation into per-cell summaries
    std::map<std::string, std::vector<double>> cells;
    for (const Row& r : record.rows) {
        if (r.statistic_name == "error") continue;
        const std::string key = r.family + "|n=" + std::to_string(r.n) +
                                "|eps=" + format_double(r.epsilon) +
                                "|theta=" + format_double(r.theta) + "|" +
                                r.statistic_name;
        cells[key].push_back(r.value);
    }
    for (const auto& [key, values] : cells) {
        CellSummary cs;
        cs.key = key;
        cs.summary = stats::summarize(values);
        record.summaries.push_back(cs);
    }
    return record;
}

} // namespace stab::exp
