#pragma once
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "stabilitylab/rng.hpp"

// Branching random walk: Galton-Watson trees in BFS layout, edge
// displacements, minimum displacement, the tree metric, and the velocity
// constant psi*.

namespace stab::brw {

struct GWTree {
    std::uint32_t generations = 0;
    std::vector<std::uint32_t> parent;      // parent[0] == 0 (root)
    std::vector<std::uint32_t> child_rank;  // rank among siblings
    std::vector<std::uint32_t> first_child; // 0 when childless
    std::vector<std::uint32_t> progeny;     // child count per vertex
    std::vector<std::uint32_t> gen_offset;  // generation g = [gen_offset[g], gen_offset[g+1])

    std::size_t vertex_count() const { return parent.size(); }
    std::size_t edge_count() const { return parent.empty() ? 0 : parent.size() - 1; }
    bool survived() const {
        return gen_offset.size() > generations + 1 &&
               gen_offset[generations + 1] > gen_offset[generations];
    }
    std::uint32_t leaf_begin() const { return gen_offset[generations]; }
    std::uint32_t leaf_end() const { return gen_offset[generations + 1]; }
    std::uint32_t generation_of(std::uint32_t v) const;
    // child-rank path from the root, length = generation of v
    std::vector<std::uint32_t> path_encoding(std::uint32_t v) const;
    // inverse of path_encoding
    std::uint32_t vertex_from_path(const std::vector<std::uint32_t>& path) const;
};

struct DisplacedTree {
    GWTree tree;
    std::vector<double> disp; // disp[v] = displacement on edge (parent(v), v); disp[0] = 0
};

enum class DisplacementLaw { Gaussian, Uniform };

struct BrwModel {
    std::vector<double> progeny_pmf; // over {0, 1, ..., k_max}
    DisplacementLaw law = DisplacementLaw::Gaussian;
    double law_a = 0.0; // Gaussian mean / Uniform lower
    double law_b = 1.0; // Gaussian sd / Uniform upper
    double progeny_mean() const;
};

inline constexpr std::size_t kLeafCap = 1'000'000;

// Grows a tree to generation n (PopulationCap above kLeafCap per
// generation). With condition_on_survival the tree is rejection-resampled
// until D_n is nonempty; the induced small-n bias is documented, not
// corrected.
GWTree sample_tree(const BrwModel& model, std::uint32_t n,
                   bool condition_on_survival, Rng& rng);

// i.i.d. displacements on the edges of an existing tree.
std::vector<double> sample_displacements(const BrwModel& model,
                                         const GWTree& tree, Rng& rng);

DisplacedTree sample_brw(const BrwModel& model, std::uint32_t n,
                         bool condition_on_survival, Rng& rng);

struct MinDisplacement {
    double value;
    std::uint32_t leaf;
};

// Exact minimum leaf displacement; ExtinctTree when D_n is empty.
MinDisplacement min_displacement(const DisplacedTree& dt);

// All leaf position sums S_v over D_n, indexed from leaf_begin().
std::vector<double> leaf_positions(const DisplacedTree& dt);

// card(I(v1 <-> v2)) / n via the lowest common ancestor
double brw_metric(const GWTree& tree, std::uint32_t v1, std::uint32_t v2);

struct PsiStar {
    double psi_star;
    double s_star;
    double residual; // |s* Psi'(s*) - Psi(s*)|
};

// psi* = inf_{s>0} Psi(s)/s with Psi(s) = log m + log E exp(-sX), found
// through the stationarity equation s Psi'(s) = Psi(s).
PsiStar psi_star(double progeny_mean, const BrwModel& model);

// log E exp(-sX) and its derivative for the model's displacement law
// (closed form for Gaussian, quadrature-backed closed form for Uniform).
double log_mgf(const BrwModel& model, double s);
double log_mgf_derivative(const BrwModel& model, double s);

} // namespace stab::brw
