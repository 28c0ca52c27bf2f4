#pragma once
#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "stabilitylab/rng.hpp"

// Symmetric graph optimization on weighted complete graphs and the random
// assignment problem. Solvers are exact at desk scale: Kruskal for trees,
// bitmask DP for perfect matchings (p <= 16), Held-Karp for tours
// (p <= 15), Hungarian for assignment.

namespace stab::wgraph {

enum class GraphKind { Tree, Matching, Tour };

struct GraphSolution {
    GraphKind kind;
    // sorted list of (u,v) pairs with u < v; the canonical encoding
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    double weight = 0.0;

    bool operator==(const GraphSolution& o) const { return edges == o.edges; }
};

struct EdgeWeights {
    std::size_t p = 0;
    std::vector<double> w; // row-major p*p, symmetric, zero diagonal

    static EdgeWeights from_flat_upper(std::size_t p,
                                       const std::vector<double>& upper);
    double at(std::size_t i, std::size_t j) const { return w[i * p + j]; }
};

// Flat index of edge {i,j}, i<j, in the row-major upper triangle.
std::size_t edge_index(std::size_t i, std::size_t j, std::size_t p);

std::size_t edge_count(const GraphSolution& a, const GraphSolution& b); // |E(a) delta E(b)|

GraphSolution complete_graph_solve(const EdgeWeights& ew, GraphKind kind);

struct PermutationSolution {
    std::vector<std::uint32_t> pi;
    double cost = 0.0;
};

struct CostMatrix {
    std::size_t n = 0;
    std::vector<double> c; // row-major
    double at(std::size_t i, std::size_t j) const { return c[i * n + j]; }
};

// Hungarian with optimal dual potentials, followed by a lexicographic
// refinement over the tight-edge graph, so ties resolve to the
// lexicographically smallest optimal permutation.
PermutationSolution assignment_solve(const CostMatrix& cm);

// (1/n) #{i : p1(i) != p2(i)}
double perm_metric(const PermutationSolution& a, const PermutationSolution& b);

// Exhaustive structures; sizes guarded by SizeExceeded. The for_each_*
// forms stream canonical solutions without materializing the collection.
void for_each_tour(std::size_t p,
                   const std::function<void(const GraphSolution&)>& f);
void for_each_tree(std::size_t p,
                   const std::function<void(const GraphSolution&)>& f);
void for_each_matching(std::size_t p,
                       const std::function<void(const GraphSolution&)>& f);
std::vector<GraphSolution> enumerate_tours(std::size_t p);     // p <= 10
std::vector<GraphSolution> enumerate_trees(std::size_t p);     // p <= 8
std::vector<GraphSolution> enumerate_matchings(std::size_t p); // p <= 12

double solution_weight(const EdgeWeights& ew, const GraphSolution& g);

struct EdgeMembershipReport {
    std::vector<double> frequency; // per flat edge index
    double bound;                  // 2 e_max / (p-1)
    double e_max;
    std::size_t reps;
};

// Monte Carlo per-edge membership frequency of the optimal graph under
// i.i.d. U(0,1) edge weights, against the symmetry bound.
EdgeMembershipReport edge_membership_rate(std::size_t p, GraphKind kind,
                                          std::size_t reps,
                                          std::uint64_t seed);

double e_max_for(GraphKind kind);

} // namespace stab::wgraph
