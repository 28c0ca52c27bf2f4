#pragma once
#include <cstddef>
#include <cstdint>
#include <vector>

#include "stabilitylab/rng.hpp"
#include "stabilitylab/weighted_graph.hpp"

// Euclidean TSP and MST with q-power edge weights: samplers, exact
// solvers, enumeration, the edge-symmetric-difference metric, sister
// constructions, and nearest-neighbor statistics.

namespace stab::euclid {

using wgraph::GraphKind;
using wgraph::GraphSolution;

// kissing number: bounds the Euclidean MST vertex degree
std::size_t kissing_number(std::size_t d);

enum class PointLaw { UniformBox, Gaussian };

struct PointConfiguration {
    std::size_t n = 0;
    std::size_t d = 2;
    double q = 1.0;                   // power weight in [1, d)
    std::vector<double> coords;       // row-major n x d
    std::vector<std::vector<double>> planes; // per-dimension copies for kernels

    const double* point(std::size_t i) const { return coords.data() + i * d; }
    void rebuild_planes();
    double q_weight(std::size_t i, std::size_t j) const; // ||xi-xj||^q
    double sq_dist(std::size_t i, std::size_t j) const;
};

PointConfiguration sample_points(std::size_t n, std::size_t d, PointLaw law,
                                 double q, Rng& rng);

// Full q-power weight table; used by the solvers so solver and enumerator
// see byte-identical weights.
wgraph::EdgeWeights weight_table(const PointConfiguration& cfg);

GraphSolution tsp_solve(const PointConfiguration& cfg); // n <= 15
GraphSolution mst_solve(const PointConfiguration& cfg);

// All Hamiltonian cycles (n <= 10) or spanning trees (n <= 8), weights
// filled in.
std::vector<GraphSolution> enumerate_solutions(const PointConfiguration& cfg,
                                               GraphKind kind);

// card(E(g1) delta E(g2)) / n
double graph_metric(const GraphSolution& g1, const GraphSolution& g2,
                    std::size_t n);

// min_{j != i} ||x_j - x_i||_2 and its argmin (smallest index on ties)
std::pair<double, std::size_t> nn_min_distance(const PointConfiguration& cfg,
                                               std::size_t i);

// Sister tour for the perturbation replacing point l: delete l's tour
// edges, reconnect its neighbors, reinsert l next to its nearest original
// neighbor k through an edge of k kept from the perturbed tour. When both
// of k's kept neighbors qualify the smaller index is chosen (the
// construction leaves this free; the choice is non-canonical). n = 3
// degenerates to the unique tour.
GraphSolution tsp_sister_tour(const PointConfiguration& cfg,
                              const PointConfiguration& perturbed_cfg,
                              std::size_t l,
                              const GraphSolution& optimal_perturbed_tour);

// Sister tree: delete l's tree edges, chain its former neighbors in
// ascending vertex order, attach l to its nearest original neighbor.
GraphSolution mst_sister_tree(const PointConfiguration& cfg,
                              const PointConfiguration& perturbed_cfg,
                              std::size_t l,
                              const GraphSolution& optimal_perturbed_tree);

double tour_length(const PointConfiguration& cfg, const GraphSolution& g);

} // namespace stab::euclid
