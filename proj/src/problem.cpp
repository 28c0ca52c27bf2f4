#include "stabilitylab/problem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/euclidean_graph.hpp"
#include "stabilitylab/kernels.hpp"
#include "stabilitylab/random_matrix.hpp"

namespace stab::core {
namespace {

// substream purpose tags
constexpr std::uint64_t kTagTree = 0x7472u;
constexpr std::uint64_t kTagInputs = 0x696eu;
constexpr std::uint64_t kTagFresh = 0x6672u;
constexpr std::uint64_t kTagSubsample = 0x7373u;

double draw(const LawSpec& law, Rng& rng) {
    switch (law.kind) {
        case InputLaw::UniformBox: return rng.uniform(law.a, law.b);
        case InputLaw::Gaussian: return rng.gaussian(law.a, law.b);
        case InputLaw::Exponential: return rng.exponential(law.a);
        case InputLaw::Gamma: return rng.gamma(law.a, law.b);
    }
    throw UnsupportedLaw("unknown input law");
}

euclid::PointConfiguration to_points(const ProblemContext& ctx,
                                     const InputVector& x) {
    euclid::PointConfiguration cfg;
    cfg.n = ctx.inst.n;
    cfg.d = ctx.inst.d;
    cfg.q = ctx.inst.q;
    cfg.coords = x.values;
    cfg.rebuild_planes();
    return cfg;
}

wgraph::EdgeWeights to_edge_weights(const ProblemContext& ctx,
                                    const InputVector& x) {
    return wgraph::EdgeWeights::from_flat_upper(ctx.inst.n, x.values);
}

wgraph::CostMatrix to_cost_matrix(const ProblemContext& ctx,
                                  const InputVector& x) {
    wgraph::CostMatrix cm;
    cm.n = ctx.inst.n;
    cm.c = x.values;
    return cm;
}

rmt::SymmetricMatrix to_wigner(const ProblemContext& ctx,
                               const InputVector& x) {
    const std::size_t n = ctx.inst.n;
    rmt::SymmetricMatrix m;
    m.n = n;
    m.a.assign(n * n, 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            m.at(i, j) = x.values[k];
            m.at(j, i) = x.values[k];
            ++k;
        }
    return m;
}

rmt::RectMatrix to_wishart(const ProblemContext& ctx, const InputVector& x) {
    rmt::RectMatrix m;
    m.m = ctx.inst.m_rows ? ctx.inst.m_rows : ctx.inst.n;
    m.n = ctx.inst.n;
    m.a = x.values;
    return m;
}

SolutionPoint encode_graph(const wgraph::GraphSolution& g, double objective) {
    SolutionPoint p;
    p.ints.reserve(g.edges.size() * 2);
    for (const auto& [u, v] : g.edges) {
        p.ints.push_back(u);
        p.ints.push_back(v);
    }
    p.objective = objective;
    return p;
}

wgraph::GraphSolution decode_graph(const SolutionPoint& p,
                                   wgraph::GraphKind kind) {
    wgraph::GraphSolution g{kind, {}, p.objective};
    for (std::size_t i = 0; i + 1 < p.ints.size(); i += 2)
        g.edges.emplace_back(static_cast<std::uint32_t>(p.ints[i]),
                             static_cast<std::uint32_t>(p.ints[i + 1]));
    return g;
}

SolutionPoint encode_spins(const spin::SpinConfig& s, double energy) {
    SolutionPoint p;
    p.ints.assign(s.sigma.begin(), s.sigma.end());
    p.objective = energy;
    return p;
}

spin::SpinConfig decode_spins(const SolutionPoint& p) {
    spin::SpinConfig s;
    s.sigma.assign(p.ints.begin(), p.ints.end());
    return s;
}

double near_tol(double opt) { return 1e-12 * (1.0 + std::fabs(opt)); }

} // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::Tsp: return "tsp";
        case Family::Mst: return "mst";
        case Family::WeightedGraph: return "weighted_graph";
        case Family::Assignment: return "assignment";
        case Family::Sk: return "sk";
        case Family::Ea: return "ea";
        case Family::Brw: return "brw";
        case Family::Wigner: return "wigner";
        case Family::Wishart: return "wishart";
    }
    return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
    for (const Family f :
         {Family::Tsp, Family::Mst, Family::WeightedGraph, Family::Assignment,
          Family::Sk, Family::Ea, Family::Brw, Family::Wigner, Family::Wishart})
        if (name == family_name(f)) return f;
    return std::nullopt;
}

ProblemContext make_context(const ProblemInstance& inst) {
    ProblemContext ctx;
    ctx.inst = inst;
    switch (inst.family) {
        case Family::Tsp:
        case Family::Mst:
            ctx.k_n = inst.n;
            ctx.input_dim = inst.d;
            break;
        case Family::WeightedGraph:
            ctx.k_n = inst.n * (inst.n - 1) / 2;
            break;
        case Family::Assignment:
            ctx.k_n = inst.n * inst.n;
            break;
        case Family::Sk:
            ctx.k_n = inst.n * (inst.n - 1) / 2;
            break;
        case Family::Ea: {
            ctx.lattice = spin::LatticeBox::box(inst.lattice_shape);
            ctx.k_n = ctx.lattice.bonds.size();
            break;
        }
        case Family::Brw: {
            if (inst.input_law.kind == InputLaw::Gaussian) {
                ctx.inst.brw_model.law = brw::DisplacementLaw::Gaussian;
            } else if (inst.input_law.kind == InputLaw::UniformBox) {
                ctx.inst.brw_model.law = brw::DisplacementLaw::Uniform;
            } else {
                throw UnsupportedLaw("BRW displacement laws: gaussian, uniform");
            }
            ctx.inst.brw_model.law_a = inst.input_law.a;
            ctx.inst.brw_model.law_b = inst.input_law.b;
            Rng rng(hash64(inst.rng_seed, kTagTree));
            ctx.tree = brw::sample_tree(ctx.inst.brw_model,
                                        static_cast<std::uint32_t>(inst.n),
                                        inst.brw_condition_survival, rng);
            ctx.k_n = ctx.tree.edge_count();
            break;
        }
        case Family::Wigner:
            ctx.k_n = inst.n * (inst.n + 1) / 2;
            break;
        case Family::Wishart: {
            const std::size_t m = inst.m_rows ? inst.m_rows : inst.n;
            ctx.k_n = m * inst.n;
            break;
        }
    }
    if (ctx.k_n < 1) throw ValidationError("instance has an empty index set");
    return ctx;
}

InputVector sample_inputs(const ProblemContext& ctx) {
    return sample_inputs(ctx, hash64(ctx.inst.rng_seed, kTagInputs));
}

InputVector sample_inputs(const ProblemContext& ctx, std::uint64_t stream) {
    Rng rng(stream);
    InputVector x;
    x.dim = ctx.input_dim;
    if (ctx.inst.family == Family::Brw) {
        const std::vector<double> disp =
            brw::sample_displacements(ctx.inst.brw_model, ctx.tree, rng);
        x.values.assign(disp.begin() + 1, disp.end()); // edge e = vertex e+1
        return x;
    }
    x.values.resize(ctx.k_n * ctx.input_dim);
    for (double& v : x.values) v = draw(ctx.inst.input_law, rng);
    return x;
}

PerturbationScheme make_scheme(const ProblemContext& ctx, SchemeVariant v) {
    const ProblemInstance& inst = ctx.inst;
    PerturbationScheme s;
    s.input_count = ctx.k_n;
    auto singletons = [&s]() {
        s.blocks.resize(s.input_count);
        for (std::size_t i = 0; i < s.input_count; ++i)
            s.blocks[i] = {static_cast<std::uint32_t>(i)};
    };
    switch (inst.family) {
        case Family::Tsp:
        case Family::Mst:
        case Family::WeightedGraph:
        case Family::Assignment:
        case Family::Brw:
            singletons();
            break;
        case Family::Sk: {
            if (v == SchemeVariant::SingleBlock) {
                singletons();
                break;
            }
            const std::size_t n = inst.n;
            s.blocks.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (j != i)
                        s.blocks[i].push_back(static_cast<std::uint32_t>(
                            spin::sk_bond_index(i, j, n)));
            break;
        }
        case Family::Ea: {
            if (v == SchemeVariant::SingleBlock) {
                singletons();
                break;
            }
            s.blocks.resize(ctx.lattice.site_count());
            for (std::size_t i = 0; i < ctx.lattice.site_count(); ++i)
                for (const auto& [nb, bond] : ctx.lattice.incident[i]) {
                    (void)nb;
                    s.blocks[i].push_back(bond);
                }
            break;
        }
        case Family::Wigner: {
            if (v == SchemeVariant::SingleBlock) {
                singletons();
                break;
            }
            const std::size_t n = inst.n;
            s.blocks.resize(n);
            auto upper_index = [n](std::size_t i, std::size_t j) {
                if (i > j) std::swap(i, j);
                return i * n - i * (i - 1) / 2 + (j - i);
            };
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    s.blocks[i].push_back(
                        static_cast<std::uint32_t>(upper_index(i, j)));
            break;
        }
        case Family::Wishart: {
            if (v == SchemeVariant::SingleBlock) {
                singletons();
                break;
            }
            const std::size_t m = inst.m_rows ? inst.m_rows : inst.n;
            s.blocks.resize(inst.n);
            for (std::size_t col = 0; col < inst.n; ++col)
                for (std::size_t row = 0; row < m; ++row)
                    s.blocks[col].push_back(
                        static_cast<std::uint32_t>(row * inst.n + col));
            break;
        }
    }
    return s;
}

InputVector perturb_inputs(const InputVector& x, const PerturbationScheme& s,
                           std::size_t l, const InputVector& fresh) {
    if (l >= s.blocks.size())
        throw BlockOutOfRange("block " + std::to_string(l) + " of " +
                              std::to_string(s.blocks.size()));
    InputVector out = x;
    for (const std::uint32_t idx : s.blocks[l])
        for (std::size_t k = 0; k < x.dim; ++k)
            out.values[idx * x.dim + k] = fresh.values[idx * x.dim + k];
    return out;
}

SolutionPoint solve(const ProblemContext& ctx, const InputVector& x) {
    switch (ctx.inst.family) {
        case Family::Tsp: {
            const auto cfg = to_points(ctx, x);
            const auto g = euclid::tsp_solve(cfg);
            return encode_graph(g, g.weight);
        }
        case Family::Mst: {
            const auto cfg = to_points(ctx, x);
            const auto g = euclid::mst_solve(cfg);
            return encode_graph(g, g.weight);
        }
        case Family::WeightedGraph: {
            const auto g = wgraph::complete_graph_solve(to_edge_weights(ctx, x),
                                                        ctx.inst.graph_kind);
            return encode_graph(g, g.weight);
        }
        case Family::Assignment: {
            const auto sol = wgraph::assignment_solve(to_cost_matrix(ctx, x));
            SolutionPoint p;
            p.ints.assign(sol.pi.begin(), sol.pi.end());
            p.objective = sol.cost;
            return p;
        }
        case Family::Sk: {
            const auto gs = spin::sk_ground_state(x.values, ctx.inst.n);
            return encode_spins(gs.config, gs.energy);
        }
        case Family::Ea: {
            const auto gs = spin::ea_ground_state(ctx.lattice, x.values);
            return encode_spins(gs.config, gs.energy);
        }
        case Family::Brw: {
            brw::DisplacedTree dt;
            dt.tree = ctx.tree;
            dt.disp.resize(ctx.tree.vertex_count(), 0.0);
            std::copy(x.values.begin(), x.values.end(), dt.disp.begin() + 1);
            const auto m = brw::min_displacement(dt);
            SolutionPoint p;
            const auto path = ctx.tree.path_encoding(m.leaf);
            p.ints.assign(path.begin(), path.end());
            p.objective = m.value;
            return p;
        }
        case Family::Wigner: {
            const auto pair = rmt::extreme_eigenpair(to_wigner(ctx, x),
                                                     rmt::ExtremeKind::WignerMin);
            SolutionPoint p;
            p.reals = pair.vector;
            p.objective = pair.value;
            return p;
        }
        case Family::Wishart: {
            const auto pair = rmt::extreme_eigenpair(to_wishart(ctx, x));
            SolutionPoint p;
            p.reals = pair.vector;
            p.objective = -pair.value; // psi = -||Mv||^2
            return p;
        }
    }
    throw std::logic_error("unknown family");
}

double objective_value(const ProblemContext& ctx, const InputVector& x,
                       const SolutionPoint& omega) {
    switch (ctx.inst.family) {
        case Family::Tsp:
        case Family::Mst: {
            const auto cfg = to_points(ctx, x);
            double w = 0.0;
            for (std::size_t i = 0; i + 1 < omega.ints.size(); i += 2)
                w += cfg.q_weight(static_cast<std::size_t>(omega.ints[i]),
                                  static_cast<std::size_t>(omega.ints[i + 1]));
            return w;
        }
        case Family::WeightedGraph: {
            const auto ew = to_edge_weights(ctx, x);
            double w = 0.0;
            for (std::size_t i = 0; i + 1 < omega.ints.size(); i += 2)
                w += ew.at(static_cast<std::size_t>(omega.ints[i]),
                           static_cast<std::size_t>(omega.ints[i + 1]));
            return w;
        }
        case Family::Assignment: {
            const auto cm = to_cost_matrix(ctx, x);
            double c = 0.0;
            for (std::size_t i = 0; i < omega.ints.size(); ++i)
                c += cm.at(i, static_cast<std::size_t>(omega.ints[i]));
            return c;
        }
        case Family::Sk:
            return spin::sk_energy(x.values, decode_spins(omega));
        case Family::Ea:
            return spin::ea_energy(ctx.lattice, x.values, decode_spins(omega));
        case Family::Brw: {
            std::uint32_t v = 0;
            double s = 0.0;
            for (const std::int64_t rank : omega.ints) {
                v = ctx.tree.first_child[v] + static_cast<std::uint32_t>(rank);
                s += x.values[v - 1];
            }
            return s;
        }
        case Family::Wigner: {
            const auto m = to_wigner(ctx, x);
            std::vector<double> mv(m.n);
            for (std::size_t i = 0; i < m.n; ++i)
                mv[i] = kern::dot(m.a.data() + i * m.n, omega.reals.data(), m.n);
            return kern::dot(mv.data(), omega.reals.data(), m.n);
        }
        case Family::Wishart: {
            const auto m = to_wishart(ctx, x);
            double s = 0.0;
            for (std::size_t r = 0; r < m.m; ++r) {
                const double t =
                    kern::dot(m.a.data() + r * m.n, omega.reals.data(), m.n);
                s += t * t;
            }
            return -s;
        }
    }
    throw std::logic_error("unknown family");
}

double solution_metric(const ProblemContext& ctx, const SolutionPoint& a,
                       const SolutionPoint& b) {
    switch (ctx.inst.family) {
        case Family::Tsp:
        case Family::Mst:
        case Family::WeightedGraph: {
            const auto ga = decode_graph(a, wgraph::GraphKind::Tour);
            const auto gb = decode_graph(b, wgraph::GraphKind::Tour);
            return static_cast<double>(wgraph::edge_count(ga, gb)) /
                   static_cast<double>(ctx.inst.n);
        }
        case Family::Assignment:
        case Family::Sk: {
            std::size_t diff = 0;
            for (std::size_t i = 0; i < a.ints.size(); ++i)
                if (a.ints[i] != b.ints[i]) ++diff;
            return static_cast<double>(diff) /
                   static_cast<double>(a.ints.size());
        }
        case Family::Ea:
            return spin::spin_metric(decode_spins(a), decode_spins(b),
                                     spin::SpinFamily::EA, &ctx.lattice);
        case Family::Brw: {
            const std::size_t n = ctx.inst.n;
            std::size_t common = 0;
            while (common < a.ints.size() && common < b.ints.size() &&
                   a.ints[common] == b.ints[common])
                ++common;
            return 2.0 * static_cast<double>(n - common) /
                   static_cast<double>(n);
        }
        case Family::Wigner:
        case Family::Wishart:
            return rmt::vector_metric(a.reals, b.reals);
    }
    throw std::logic_error("unknown family");
}

NearOptimalSet near_optimal_set(const ProblemContext& ctx,
                                const InputVector& x, double theta) {
    const Family fam = ctx.inst.family;
    if (fam == Family::Wigner || fam == Family::Wishart)
        throw ContinuousSpace("near-optimal enumeration needs a finite space");
    NearOptimalSet out;
    out.theta = theta;
    out.exhaustive = true;

    if (fam == Family::Sk || fam == Family::Ea) {
        // first pass with slack against incremental drift, then an exact
        // recompute on the shortlist
        double minE = std::numeric_limits<double>::infinity();
        auto track = [&minE](std::uint32_t, double e) { minE = std::min(minE, e); };
        const std::size_t n =
            fam == Family::Sk ? ctx.inst.n : ctx.lattice.site_count();
        if (fam == Family::Sk)
            spin::sk_scan_states(x.values, n, track);
        else
            spin::ea_scan_states(ctx.lattice, x.values, track);
        const double slack = 1e-6 * (1.0 + std::fabs(minE) + theta);
        std::vector<std::uint32_t> shortlist;
        auto collect = [&](std::uint32_t bits, double e) {
            if (e <= minE + theta + slack) shortlist.push_back(bits);
        };
        if (fam == Family::Sk)
            spin::sk_scan_states(x.values, n, collect);
        else
            spin::ea_scan_states(ctx.lattice, x.values, collect);
        double opt = std::numeric_limits<double>::infinity();
        std::vector<double> exact(shortlist.size());
        for (std::size_t i = 0; i < shortlist.size(); ++i) {
            const auto s = spin::spins_from_bits(shortlist[i], n);
            exact[i] = fam == Family::Sk
                           ? spin::sk_energy(x.values, s)
                           : spin::ea_energy(ctx.lattice, x.values, s);
            opt = std::min(opt, exact[i]);
        }
        for (std::size_t i = 0; i < shortlist.size(); ++i) {
            if (exact[i] <= opt + theta + near_tol(opt)) {
                out.members.push_back(encode_spins(
                    spin::spins_from_bits(shortlist[i], n), exact[i]));
            }
        }
        return out;
    }

    if (fam == Family::Brw) {
        brw::DisplacedTree dt;
        dt.tree = ctx.tree;
        dt.disp.resize(ctx.tree.vertex_count(), 0.0);
        std::copy(x.values.begin(), x.values.end(), dt.disp.begin() + 1);
        const std::vector<double> leaves = brw::leaf_positions(dt);
        const double opt = kern::min_index(leaves.data(), leaves.size()).value;
        const double cutoff = opt + theta + near_tol(opt);
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            if (leaves[i] <= cutoff) {
                SolutionPoint p;
                const auto path = ctx.tree.path_encoding(
                    ctx.tree.leaf_begin() + static_cast<std::uint32_t>(i));
                p.ints.assign(path.begin(), path.end());
                p.objective = leaves[i];
                out.members.push_back(std::move(p));
            }
        }
        return out;
    }

    if (fam == Family::Assignment) {
        const std::size_t n = ctx.inst.n;
        if (n > 8) throw SizeExceeded("assignment enumeration capped at n = 8");
        const auto cm = to_cost_matrix(ctx, x);
        std::vector<std::uint32_t> pi(n);
        std::iota(pi.begin(), pi.end(), 0u);
        double opt = std::numeric_limits<double>::infinity();
        std::vector<std::pair<std::vector<std::uint32_t>, double>> all;
        do {
            double c = 0.0;
            for (std::size_t i = 0; i < n; ++i) c += cm.at(i, pi[i]);
            opt = std::min(opt, c);
            all.emplace_back(pi, c);
        } while (std::next_permutation(pi.begin(), pi.end()));
        for (auto& [perm, c] : all) {
            if (c <= opt + theta + near_tol(opt)) {
                SolutionPoint p;
                p.ints.assign(perm.begin(), perm.end());
                p.objective = c;
                out.members.push_back(std::move(p));
            }
        }
        return out;
    }

    // graph families: stream the family's solution collection
    const std::size_t p_n = ctx.inst.n;
    std::function<double(const wgraph::GraphSolution&)> weight_of;
    wgraph::EdgeWeights ew;
    if (fam == Family::WeightedGraph) {
        ew = to_edge_weights(ctx, x);
    } else {
        ew = euclid::weight_table(to_points(ctx, x));
    }
    weight_of = [&ew](const wgraph::GraphSolution& g) {
        return wgraph::solution_weight(ew, g);
    };
    std::vector<std::pair<wgraph::GraphSolution, double>> kept;
    double opt = std::numeric_limits<double>::infinity();
    auto visit = [&](const wgraph::GraphSolution& g) {
        const double w = weight_of(g);
        opt = std::min(opt, w);
        if (w <= opt + theta + 1e-9) { // provisional; refiltered below
            kept.emplace_back(g, w);
        }
    };
    const wgraph::GraphKind kind =
        fam == Family::Tsp
            ? wgraph::GraphKind::Tour
            : (fam == Family::Mst ? wgraph::GraphKind::Tree
                                  : ctx.inst.graph_kind);
    switch (kind) {
        case wgraph::GraphKind::Tour: wgraph::for_each_tour(p_n, visit); break;
        case wgraph::GraphKind::Tree: wgraph::for_each_tree(p_n, visit); break;
        case wgraph::GraphKind::Matching:
            wgraph::for_each_matching(p_n, visit);
            break;
    }
    for (auto& [g, w] : kept) {
        if (w <= opt + theta + near_tol(opt))
            out.members.push_back(encode_graph(g, w));
    }
    return out;
}

OptimizerCloud perturbed_optimizers(const ProblemContext& ctx,
                                    const InputVector& x,
                                    const PerturbationScheme& scheme,
                                    std::size_t block_subsample,
                                    std::uint64_t stream) {
    OptimizerCloud oc;
    const std::size_t m = scheme.block_count();
    if (block_subsample == 0 || block_subsample >= m) {
        oc.selected_blocks.resize(m);
        std::iota(oc.selected_blocks.begin(), oc.selected_blocks.end(), 0u);
    } else if (ctx.inst.family == Family::Brw) {
        // stratified: ancestral edges of the current argmin first
        const SolutionPoint argmin = solve(ctx, x);
        std::set<std::uint32_t> ancestral;
        std::uint32_t v = ctx.tree.vertex_from_path(std::vector<std::uint32_t>(
            argmin.ints.begin(), argmin.ints.end()));
        while (v != 0) {
            ancestral.insert(v - 1); // edge index of the edge above v
            v = ctx.tree.parent[v];
        }
        Rng sub(hash64(stream, kTagSubsample));
        std::vector<std::uint32_t> anc(ancestral.begin(), ancestral.end());
        const std::size_t take_anc = std::min<std::size_t>(
            {std::size_t{8}, anc.size(), block_subsample});
        std::set<std::uint32_t> chosen;
        const auto anc_pick = sub.sample_without_replacement(anc.size(), take_anc);
        for (const std::uint32_t i : anc_pick) chosen.insert(anc[i]);
        while (chosen.size() < block_subsample)
            chosen.insert(static_cast<std::uint32_t>(sub.below(m)));
        oc.selected_blocks.assign(chosen.begin(), chosen.end());
    } else {
        Rng sub(hash64(stream, kTagSubsample));
        oc.selected_blocks = sub.sample_without_replacement(m, block_subsample);
    }
    if (oc.selected_blocks.size() > 2048)
        throw SizeExceeded("perturbed-optimizer cloud needs block_subsample");

    for (const std::uint32_t l : oc.selected_blocks) {
        const InputVector fresh = sample_inputs(ctx, hash64(stream, kTagFresh, l));
        const InputVector xl = perturb_inputs(x, scheme, l, fresh);
        SolutionPoint p = solve(ctx, xl);
        std::size_t idx = oc.points.size();
        for (std::size_t i = 0; i < oc.points.size(); ++i)
            if (oc.points[i].same_encoding(p)) {
                idx = i;
                break;
            }
        if (idx == oc.points.size()) {
            oc.points.push_back(std::move(p));
            oc.multiplicity.push_back(0);
        }
        ++oc.multiplicity[idx];
        oc.point_of_block.push_back(static_cast<std::uint32_t>(idx));
    }
    oc.cloud = metric::SolutionCloud::from_metric(
        oc.points.size(), [&](std::size_t i, std::size_t j) {
            return solution_metric(ctx, oc.points[i], oc.points[j]);
        });
    return oc;
}

metric::SolutionCloud block_multiset_cloud(const ProblemContext& ctx,
                                           const OptimizerCloud& oc) {
    (void)ctx;
    const std::size_t m = oc.point_of_block.size();
    return metric::SolutionCloud::from_metric(m, [&](std::size_t a, std::size_t b) {
        return oc.cloud.dist(oc.point_of_block[a], oc.point_of_block[b]);
    });
}

double window_length(const WindowRule& rule, std::size_t n, std::size_t d,
                     double q) {
    const double nn = static_cast<double>(n);
    switch (rule.family) {
        case Family::Tsp:
        case Family::Mst:
            return rule.c * std::pow(nn, -q / static_cast<double>(d));
        case Family::WeightedGraph:
        case Family::Assignment:
            return rule.c / nn;
        case Family::Sk:
            return rule.variant == SchemeVariant::RowBlock
                       ? rule.c * std::sqrt(nn)
                       : rule.c;
        case Family::Ea:
        case Family::Brw:
        case Family::Wishart:
            return rule.c;
        case Family::Wigner:
            return rule.c / std::sqrt(nn);
    }
    throw std::logic_error("unknown family");
}

metric::CoverReport stability_statistic(const ProblemContext& ctx,
                                        const InputVector& x,
                                        const PerturbationScheme& scheme,
                                        double epsilon,
                                        std::size_t block_subsample,
                                        std::uint64_t stream) {
    if (epsilon <= 0.0 || epsilon >= 1.0)
        throw ValidationError("stability epsilon must lie in (0,1)");
    const OptimizerCloud oc =
        perturbed_optimizers(ctx, x, scheme, block_subsample, stream);
    const metric::SolutionCloud blocks = block_multiset_cloud(ctx, oc);
    return metric::partial_cover_count(blocks, epsilon, epsilon);
}

} // namespace stab::core
