#include "stabilitylab/euclidean_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/kernels.hpp"

namespace stab::euclid {
namespace {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

Edge mk_edge(std::uint32_t a, std::uint32_t b) {
    return a < b ? Edge{a, b} : Edge{b, a};
}

std::vector<std::uint32_t> neighbors_of(const GraphSolution& g,
                                        std::uint32_t v) {
    std::vector<std::uint32_t> out;
    for (const auto& [a, b] : g.edges) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::size_t kissing_number(std::size_t d) {
    switch (d) {
        case 1: return 2;
        case 2: return 6;
        case 3: return 12;
        case 4: return 24;
        default:
            throw SizeExceeded("kissing number tabulated for d <= 4");
    }
}

void PointConfiguration::rebuild_planes() {
    planes.assign(d, std::vector<double>(n));
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < n; ++i) planes[k][i] = coords[i * d + k];
}

double PointConfiguration::sq_dist(std::size_t i, std::size_t j) const {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double t = coords[i * d + k] - coords[j * d + k];
        s += t * t;
    }
    return s;
}

double PointConfiguration::q_weight(std::size_t i, std::size_t j) const {
    const double dist = std::sqrt(sq_dist(i, j));
    return q == 1.0 ? dist : std::pow(dist, q);
}

PointConfiguration sample_points(std::size_t n, std::size_t d, PointLaw law,
                                 double q, Rng& rng) {
    PointConfiguration cfg;
    cfg.n = n;
    cfg.d = d;
    cfg.q = q;
    cfg.coords.resize(n * d);
    for (double& c : cfg.coords)
        c = law == PointLaw::UniformBox ? rng.u01() : rng.gaussian();
    cfg.rebuild_planes();
    return cfg;
}

wgraph::EdgeWeights weight_table(const PointConfiguration& cfg) {
    wgraph::EdgeWeights ew;
    ew.p = cfg.n;
    ew.w.assign(cfg.n * cfg.n, 0.0);
    for (std::size_t i = 0; i < cfg.n; ++i)
        for (std::size_t j = i + 1; j < cfg.n; ++j) {
            const double w = cfg.q_weight(i, j);
            ew.w[i * cfg.n + j] = w;
            ew.w[j * cfg.n + i] = w;
        }
    return ew;
}

GraphSolution tsp_solve(const PointConfiguration& cfg) {
    if (cfg.n > 15) throw SizeExceeded("tsp_solve capped at n = 15");
    return wgraph::complete_graph_solve(weight_table(cfg), GraphKind::Tour);
}

GraphSolution mst_solve(const PointConfiguration& cfg) {
    return wgraph::complete_graph_solve(weight_table(cfg), GraphKind::Tree);
}

std::vector<GraphSolution> enumerate_solutions(const PointConfiguration& cfg,
                                               GraphKind kind) {
    const wgraph::EdgeWeights ew = weight_table(cfg);
    std::vector<GraphSolution> out = kind == GraphKind::Tour
                                         ? wgraph::enumerate_tours(cfg.n)
                                         : wgraph::enumerate_trees(cfg.n);
    for (auto& g : out) g.weight = wgraph::solution_weight(ew, g);
    return out;
}

double graph_metric(const GraphSolution& g1, const GraphSolution& g2,
                    std::size_t n) {
    return static_cast<double>(wgraph::edge_count(g1, g2)) /
           static_cast<double>(n);
}

std::pair<double, std::size_t> nn_min_distance(const PointConfiguration& cfg,
                                               std::size_t i) {
    const std::size_t n = cfg.n;
    std::vector<double> sq(n);
    std::vector<const double*> planes(cfg.d);
    for (std::size_t k = 0; k < cfg.d; ++k) planes[k] = cfg.planes[k].data();
    kern::sqdist_planar(planes.data(), cfg.d, n, cfg.point(i), sq.data());
    sq[i] = std::numeric_limits<double>::infinity();
    const auto m = kern::min_index(sq.data(), n);
    return {std::sqrt(m.value), m.index};
}

GraphSolution tsp_sister_tour(const PointConfiguration& cfg,
                              const PointConfiguration& perturbed_cfg,
                              std::size_t l,
                              const GraphSolution& optimal_perturbed_tour) {
    const std::size_t n = cfg.n;
    (void)perturbed_cfg;
    if (n == 3) return optimal_perturbed_tour; // degenerate: the unique tour
    const std::uint32_t lu = static_cast<std::uint32_t>(l);
    const auto lnbr = neighbors_of(optimal_perturbed_tour, lu);
    const std::uint32_t l1 = lnbr[0], l2 = lnbr[1];

    std::set<Edge> edges(optimal_perturbed_tour.edges.begin(),
                         optimal_perturbed_tour.edges.end());
    edges.erase(mk_edge(lu, l1));
    edges.erase(mk_edge(lu, l2));
    edges.insert(mk_edge(l1, l2));

    const std::uint32_t k =
        static_cast<std::uint32_t>(nn_min_distance(cfg, l).second);
    // a kept neighbor of k that was also a neighbor in the perturbed tour
    const auto korig = neighbors_of(optimal_perturbed_tour, k);
    std::uint32_t k1 = n;
    for (const std::uint32_t c : korig) {
        if (c == lu) continue;
        if (edges.count(mk_edge(k, c))) {
            k1 = c;
            break; // neighbors sorted: smaller index wins
        }
    }
    edges.erase(mk_edge(k, k1));
    edges.insert(mk_edge(k, lu));
    edges.insert(mk_edge(k1, lu));

    GraphSolution g{GraphKind::Tour,
                    std::vector<Edge>(edges.begin(), edges.end()), 0.0};
    std::sort(g.edges.begin(), g.edges.end());
    g.weight = wgraph::solution_weight(weight_table(cfg), g);
    return g;
}

GraphSolution mst_sister_tree(const PointConfiguration& cfg,
                              const PointConfiguration& perturbed_cfg,
                              std::size_t l,
                              const GraphSolution& optimal_perturbed_tree) {
    (void)perturbed_cfg;
    const std::uint32_t lu = static_cast<std::uint32_t>(l);
    const auto lnbr = neighbors_of(optimal_perturbed_tree, lu); // ascending
    std::set<Edge> edges(optimal_perturbed_tree.edges.begin(),
                         optimal_perturbed_tree.edges.end());
    for (const std::uint32_t c : lnbr) edges.erase(mk_edge(lu, c));
    for (std::size_t i = 1; i < lnbr.size(); ++i)
        edges.insert(mk_edge(lnbr[i - 1], lnbr[i]));
    const std::uint32_t k =
        static_cast<std::uint32_t>(nn_min_distance(cfg, l).second);
    edges.insert(mk_edge(k, lu));

    GraphSolution g{GraphKind::Tree,
                    std::vector<Edge>(edges.begin(), edges.end()), 0.0};
    std::sort(g.edges.begin(), g.edges.end());
    g.weight = wgraph::solution_weight(weight_table(cfg), g);
    return g;
}

double tour_length(const PointConfiguration& cfg, const GraphSolution& g) {
    return wgraph::solution_weight(weight_table(cfg), g);
}

} // namespace stab::euclid
