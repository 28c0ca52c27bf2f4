#pragma once
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "stabilitylab/brw.hpp"
#include "stabilitylab/metric_core.hpp"
#include "stabilitylab/rng.hpp"
#include "stabilitylab/spin_glass.hpp"
#include "stabilitylab/weighted_graph.hpp"

// The shared optimization-problem contract: instances, inputs,
// perturbation blocks, exact solves with canonical encodings, near-optimal
// sets, window lengths, and the stability statistic. Family-specific work
// is delegated to the corresponding module.

namespace stab::core {

enum class Family { Tsp, Mst, WeightedGraph, Assignment, Sk, Ea, Brw, Wigner, Wishart };

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

enum class InputLaw { UniformBox, Gaussian, Exponential, Gamma };

struct LawSpec {
    InputLaw kind = InputLaw::Gaussian;
    // UniformBox: [a, b]; Gaussian: mean a, sd b; Exponential: rate a;
    // Gamma: shape a, scale b
    double a = 0.0;
    double b = 1.0;
};

struct ProblemInstance {
    Family family = Family::Sk;
    std::size_t n = 8;  // points / spins / matrix dimension / generations
    std::size_t d = 2;  // Euclidean dimension
    double q = 1.0;     // power weight
    std::size_t m_rows = 0; // Wishart rows; 0 means m = n
    std::vector<std::size_t> lattice_shape; // EA box sides
    wgraph::GraphKind graph_kind = wgraph::GraphKind::Tour;
    brw::BrwModel brw_model;
    bool brw_condition_survival = true;
    LawSpec input_law; // defaulted per family when unset in configs
    std::uint64_t rng_seed = 1;
};

// Instance-derived immutable context: the index set size, the EA lattice,
// and (for BRW) the tree, sampled deterministically from rng_seed.
struct ProblemContext {
    ProblemInstance inst;
    std::size_t k_n = 0;
    std::size_t input_dim = 1;
    spin::LatticeBox lattice; // EA only
    brw::GWTree tree;         // BRW only
};

ProblemContext make_context(const ProblemInstance& inst);

struct InputVector {
    std::vector<double> values; // count * dim, index-major
    std::size_t dim = 1;
    std::size_t count() const { return dim ? values.size() / dim : 0; }
    const double* at(std::size_t i) const { return values.data() + i * dim; }
};

// i.i.d. draws from the instance law, one per index; deterministic given
// the seed.
InputVector sample_inputs(const ProblemContext& ctx);
InputVector sample_inputs(const ProblemContext& ctx, std::uint64_t stream);

struct PerturbationScheme {
    std::vector<std::vector<std::uint32_t>> blocks;
    std::size_t input_count = 0;
    std::size_t block_count() const { return blocks.size(); }
};

enum class SchemeVariant { SingleBlock, RowBlock };

PerturbationScheme make_scheme(const ProblemContext& ctx, SchemeVariant v);

// Output agrees with x outside block l and with `fresh` on it.
InputVector perturb_inputs(const InputVector& x, const PerturbationScheme& s,
                           std::size_t l, const InputVector& fresh);

struct SolutionPoint {
    std::vector<std::int64_t> ints; // canonical integer encoding
    std::vector<double> reals;      // gauged continuous encoding
    double objective = 0.0;

    bool same_encoding(const SolutionPoint& o) const {
        return ints == o.ints && reals == o.reals;
    }
};

// Exact (combinatorial) or residual-certified (matrix) global minimizer.
SolutionPoint solve(const ProblemContext& ctx, const InputVector& x);

// Recomputes psi_n(x; omega) from the canonical encoding.
double objective_value(const ProblemContext& ctx, const InputVector& x,
                       const SolutionPoint& omega);

// d_n between canonical encodings.
double solution_metric(const ProblemContext& ctx, const SolutionPoint& a,
                       const SolutionPoint& b);

struct NearOptimalSet {
    double theta = 0.0;
    std::vector<SolutionPoint> members;
    bool exhaustive = false;
};

// Exhaustive enumeration within the window; family caps apply
// (SizeExceeded) and the matrix families refuse (ContinuousSpace).
NearOptimalSet near_optimal_set(const ProblemContext& ctx,
                                const InputVector& x, double theta);

struct OptimizerCloud {
    std::vector<SolutionPoint> points;           // deduplicated
    std::vector<std::size_t> multiplicity;       // blocks per point
    std::vector<std::uint32_t> point_of_block;   // per selected block
    std::vector<std::uint32_t> selected_blocks;  // block indices solved
    metric::SolutionCloud cloud;                 // over deduplicated points
};

// Solves every selected block's perturbed input; fresh copies come from
// substream hash(stream, block). `block_subsample` = 0 solves all blocks;
// BRW subsamples are stratified to include ancestral edges of the current
// argmin.
OptimizerCloud perturbed_optimizers(const ProblemContext& ctx,
                                    const InputVector& x,
                                    const PerturbationScheme& scheme,
                                    std::size_t block_subsample,
                                    std::uint64_t stream);

struct WindowRule {
    Family family;
    SchemeVariant variant = SchemeVariant::SingleBlock;
    double c = 1.0;
};

// c times the family/variant tightness rate at size n.
double window_length(const WindowRule& rule, std::size_t n, std::size_t d = 2,
                     double q = 1.0);

// Cover-after-discard statistic over the block multiset cloud:
// partial_cover_count at radius = epsilon, discard fraction = epsilon.
metric::CoverReport stability_statistic(const ProblemContext& ctx,
                                        const InputVector& x,
                                        const PerturbationScheme& scheme,
                                        double epsilon,
                                        std::size_t block_subsample,
                                        std::uint64_t stream);

// Distance matrix expanded back to one row per block (the set O_{n,A}
// deduplicates points, the discard budget counts blocks).
metric::SolutionCloud block_multiset_cloud(const ProblemContext& ctx,
                                           const OptimizerCloud& oc);

} // namespace stab::core
