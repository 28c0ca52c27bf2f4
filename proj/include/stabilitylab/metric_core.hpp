#pragma once
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

// Finite-metric-space geometry: packing numbers, internal covering
// numbers (centers restricted to the set itself), and the
// cover-after-discard statistic. All operations are pure functions of an
// immutable distance matrix.

namespace stab::metric {

// Classification tolerance for "distance <= delta" on continuous solution
// encodings.
inline constexpr double kDistanceTol = 1e-12;

class SolutionCloud {
  public:
    SolutionCloud() = default;

    static SolutionCloud from_distance_matrix(std::size_t n,
                                              std::vector<double> dist);

    // Builds the matrix by evaluating a symmetric metric callback.
    static SolutionCloud
    from_metric(std::size_t n,
                const std::function<double(std::size_t, std::size_t)>& d);

    // Points on the real line; handy for fixtures.
    static SolutionCloud from_line_points(const std::vector<double>& xs);

    std::size_t size() const { return n_; }
    double dist(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

    // Verifies symmetry, zero diagonal, nonnegativity and the triangle
    // inequality within `tol` for every triple.
    bool check_metric(double tol = 1e-9) const;

    double diameter() const;

  private:
    std::size_t n_ = 0;
    std::vector<double> dist_;
};

struct CoverReport {
    std::size_t ball_count = 0;
    std::vector<std::size_t> centers;
    std::vector<std::size_t> discarded;
    double radius = 0.0;
    std::size_t discard_budget = 0;
    // Exact min over discard sets of the delta-packing number at `radius`,
    // computed when the enumeration is affordable (|points| <= 12 and
    // C(|points|, budget) <= 50000).
    std::optional<std::size_t> exact_min_packing;
};

struct CoveringResult {
    std::size_t count = 0;
    bool exact = true; // false: greedy upper bound (cloud above the cap)
};

inline constexpr std::size_t kExactSizeCap = 64;

// Size of the greedy (point-order) delta-packing: a lower bound for the
// exact packing number. Empty cloud -> 0.
std::size_t packing_number_greedy(const SolutionCloud& cloud, double delta);

// Exact P(T, d, delta): maximum independent set of the graph with edges
// {i,j : dist <= delta}, via branch-and-bound with greedy-coloring
// bounds. Throws SizeExceeded above the cap.
std::size_t packing_number_exact(const SolutionCloud& cloud, double delta,
                                 std::size_t cap = kExactSizeCap);

// Minimum number of closed radius-delta balls centered at cloud points
// covering the cloud. Exact set cover up to the cap, greedy above it
// (flagged).
CoveringResult covering_number_internal(const SolutionCloud& cloud,
                                        double delta,
                                        std::size_t cap = kExactSizeCap);

// Greedy partial cover: picks centers maximizing newly covered points
// until at least ceil((1-discard_fraction) * |points|) are covered.
// ball_count upper-bounds min over admissible discard sets of the
// internal covering number at `radius` (hence the packing number at
// 2*radius); the exact min-packing branch is reported when affordable.
CoverReport partial_cover_count(const SolutionCloud& cloud, double radius,
                                double discard_fraction);

} // namespace stab::metric
