#include "stabilitylab/brw.hpp"

#include <algorithm>
#include <cmath>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/kernels.hpp"

namespace stab::brw {

double BrwModel::progeny_mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < progeny_pmf.size(); ++k)
        m += static_cast<double>(k) * progeny_pmf[k];
    return m;
}

std::uint32_t GWTree::generation_of(std::uint32_t v) const {
    std::uint32_t g = 0;
    while (gen_offset[g + 1] <= v) ++g;
    return g;
}

std::vector<std::uint32_t> GWTree::path_encoding(std::uint32_t v) const {
    std::vector<std::uint32_t> path;
    while (v != 0) {
        path.push_back(child_rank[v]);
        v = parent[v];
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::uint32_t GWTree::vertex_from_path(
    const std::vector<std::uint32_t>& path) const {
    std::uint32_t v = 0;
    for (const std::uint32_t rank : path) v = first_child[v] + rank;
    return v;
}

namespace {

std::uint32_t draw_progeny(const BrwModel& model, Rng& rng) {
    const double u = rng.u01();
    double acc = 0.0;
    for (std::size_t k = 0; k < model.progeny_pmf.size(); ++k) {
        acc += model.progeny_pmf[k];
        if (u < acc) return static_cast<std::uint32_t>(k);
    }
    return static_cast<std::uint32_t>(model.progeny_pmf.size() - 1);
}

double draw_displacement(const BrwModel& model, Rng& rng) {
    return model.law == DisplacementLaw::Gaussian
               ? rng.gaussian(model.law_a, model.law_b)
               : rng.uniform(model.law_a, model.law_b);
}

GWTree grow_once(const BrwModel& model, std::uint32_t n, Rng& rng) {
    GWTree t;
    t.generations = n;
    t.parent = {0};
    t.child_rank = {0};
    t.first_child = {0};
    t.progeny = {0};
    t.gen_offset = {0, 1};
    for (std::uint32_t g = 0; g < n; ++g) {
        const std::uint32_t begin = t.gen_offset[g];
        const std::uint32_t end = t.gen_offset[g + 1];
        for (std::uint32_t v = begin; v < end; ++v) {
            const std::uint32_t kids = draw_progeny(model, rng);
            t.progeny[v] = kids;
            if (kids > 0)
                t.first_child[v] = static_cast<std::uint32_t>(t.parent.size());
            for (std::uint32_t c = 0; c < kids; ++c) {
                t.parent.push_back(v);
                t.child_rank.push_back(c);
                t.first_child.push_back(0);
                t.progeny.push_back(0);
            }
        }
        t.gen_offset.push_back(static_cast<std::uint32_t>(t.parent.size()));
        const std::size_t newcount = t.gen_offset[g + 2] - t.gen_offset[g + 1];
        if (newcount > kLeafCap)
            throw PopulationCap("generation " + std::to_string(g + 1) +
                                " exceeds the leaf cap");
        if (newcount == 0) {
            // extinct: pad remaining generation offsets
            for (std::uint32_t gg = g + 2; gg <= n; ++gg)
                t.gen_offset.push_back(t.gen_offset.back());
            return t;
        }
    }
    return t;
}

} // namespace

GWTree sample_tree(const BrwModel& model, std::uint32_t n,
                   bool condition_on_survival, Rng& rng) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        GWTree t = grow_once(model, n, rng);
        if (t.survived() || !condition_on_survival) return t;
    }
    throw ExtinctTree("survival conditioning failed after 100000 attempts");
}

std::vector<double> sample_displacements(const BrwModel& model,
                                         const GWTree& tree, Rng& rng) {
    std::vector<double> disp(tree.vertex_count(), 0.0);
    for (std::size_t v = 1; v < tree.vertex_count(); ++v)
        disp[v] = draw_displacement(model, rng);
    return disp;
}

DisplacedTree sample_brw(const BrwModel& model, std::uint32_t n,
                         bool condition_on_survival, Rng& rng) {
    DisplacedTree dt;
    dt.tree = sample_tree(model, n, condition_on_survival, rng);
    dt.disp = sample_displacements(model, dt.tree, rng);
    return dt;
}

std::vector<double> leaf_positions(const DisplacedTree& dt) {
    const GWTree& t = dt.tree;
    std::vector<double> pos(t.vertex_count(), 0.0);
    for (std::size_t v = 1; v < t.vertex_count(); ++v)
        pos[v] = pos[t.parent[v]] + dt.disp[v];
    return {pos.begin() + t.leaf_begin(), pos.begin() + t.leaf_end()};
}

MinDisplacement min_displacement(const DisplacedTree& dt) {
    const GWTree& t = dt.tree;
    if (!t.survived()) throw ExtinctTree("min over an empty generation");
    const std::vector<double> leaves = leaf_positions(dt);
    const auto m = kern::min_index(leaves.data(), leaves.size());
    return {m.value, t.leaf_begin() + static_cast<std::uint32_t>(m.index)};
}

double brw_metric(const GWTree& tree, std::uint32_t v1, std::uint32_t v2) {
    const double n = static_cast<double>(tree.generations);
    std::uint32_t a = v1, b = v2;
    std::uint32_t ga = tree.generation_of(a), gb = tree.generation_of(b);
    std::size_t edges = 0;
    while (ga > gb) {
        a = tree.parent[a];
        --ga;
        ++edges;
    }
    while (gb > ga) {
        b = tree.parent[b];
        --gb;
        ++edges;
    }
    while (a != b) {
        a = tree.parent[a];
        b = tree.parent[b];
        edges += 2;
    }
    return static_cast<double>(edges) / n;
}

double log_mgf(const BrwModel& model, double s) {
    if (model.law == DisplacementLaw::Gaussian) {
        // E exp(-sX), X ~ N(a, b^2)
        return -model.law_a * s + 0.5 * model.law_b * model.law_b * s * s;
    }
    // Uniform[a,b]: E exp(-sX) = (exp(-sa) - exp(-sb)) / (s (b - a))
    const double a = model.law_a, b = model.law_b;
    if (s == 0.0) return 0.0;
    // stable form: factor out exp(-s a)
    const double w = s * (b - a);
    return -s * a + std::log1p(-std::exp(-w)) - std::log(w);
}

double log_mgf_derivative(const BrwModel& model, double s) {
    if (model.law == DisplacementLaw::Gaussian)
        return -model.law_a + model.law_b * model.law_b * s;
    // d/ds log E exp(-sX) = -E[X exp(-sX)] / E[exp(-sX)]
    const double a = model.law_a, b = model.law_b;
    if (s == 0.0) return -(a + b) / 2.0;
    const double w = s * (b - a);
    // derivative of (-s a + log(1 - e^{-w}) - log w) in s
    return -a + (b - a) * (std::exp(-w) / (1.0 - std::exp(-w))) - 1.0 / s;
}

PsiStar psi_star(double progeny_mean, const BrwModel& model) {
    if (progeny_mean <= 1.0)
        throw ValidationError("psi_star needs a supercritical progeny mean");
    const double logm = std::log(progeny_mean);
    auto g = [&](double s) {
        // s Psi'(s) - Psi(s); strictly increasing in s
        return s * log_mgf_derivative(model, s) - logm - log_mgf(model, s);
    };
    double lo = 1e-12, hi = 1.0;
    int guard = 0;
    while (g(hi) < 0.0) {
        hi *= 2.0;
        if (++guard > 200) throw NoFiniteMGF("no stationary point bracketed");
        if (!std::isfinite(g(hi)))
            throw NoFiniteMGF("log-MGF diverges before the stationary point");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    PsiStar out;
    out.s_star = 0.5 * (lo + hi);
    const double psi = logm + log_mgf(model, out.s_star);
    out.psi_star = psi / out.s_star;
    out.residual = std::fabs(out.s_star * log_mgf_derivative(model, out.s_star) - psi);
    return out;
}

} // namespace stab::brw
