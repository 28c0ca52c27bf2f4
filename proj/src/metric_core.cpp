#include "stabilitylab/metric_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "stabilitylab/errors.hpp"

namespace stab::metric {
namespace {

using Bits = std::uint64_t;

inline bool within(double d, double delta) { return d <= delta + kDistanceTol; }

// Adjacency bitsets of the threshold graph {i,j : dist <= delta}, i != j.
std::vector<Bits> threshold_graph(const SolutionCloud& c, double delta) {
    const std::size_t n = c.size();
    std::vector<Bits> adj(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (within(c.dist(i, j), delta)) {
                adj[i] |= Bits{1} << j;
                adj[j] |= Bits{1} << i;
            }
    return adj;
}

// Max clique with greedy-coloring bounds (Tomita-style). MIS(G) is found
// as max clique of the complement.
class MaxClique {
  public:
    MaxClique(const std::vector<Bits>& adj, std::size_t n)
        : adj_(adj), n_(n) {}

    std::size_t run() {
        best_ = 0;
        const Bits all = n_ == 64 ? ~Bits{0} : (Bits{1} << n_) - 1;
        expand(all, 0);
        return best_;
    }

  private:
    void expand(Bits cand, std::size_t size) {
        if (cand == 0) {
            best_ = std::max(best_, size);
            return;
        }
        // greedy coloring of the candidate set; color number bounds the
        // clique size reachable through each vertex
        std::vector<std::size_t> order;
        std::vector<std::size_t> color;
        Bits uncolored = cand;
        std::size_t col = 0;
        while (uncolored) {
            ++col;
            Bits cls = uncolored;
            while (cls) {
                const int v = __builtin_ctzll(cls);
                order.push_back(static_cast<std::size_t>(v));
                color.push_back(col);
                const Bits bit = Bits{1} << v;
                cls &= ~(adj_[v] | bit);
                uncolored &= ~bit;
            }
        }
        for (std::size_t k = order.size(); k-- > 0;) {
            if (size + color[k] <= best_) return;
            const std::size_t v = order[k];
            const Bits bit = Bits{1} << v;
            expand(cand & adj_[v], size + 1);
            cand &= ~bit;
        }
    }

    const std::vector<Bits>& adj_;
    std::size_t n_;
    std::size_t best_ = 0;
};

std::size_t max_independent_set(const std::vector<Bits>& adj, std::size_t n) {
    if (n == 0) return 0;
    const Bits all = n == 64 ? ~Bits{0} : (Bits{1} << n) - 1;
    std::vector<Bits> comp(n);
    for (std::size_t i = 0; i < n; ++i)
        comp[i] = all & ~(adj[i] | (Bits{1} << i));
    return MaxClique(comp, n).run();
}

std::size_t popcount(Bits b) { return static_cast<std::size_t>(__builtin_popcountll(b)); }

// Closed balls as cover sets: ball[i] = {j : dist(i,j) <= delta}.
std::vector<Bits> cover_sets(const SolutionCloud& c, double delta) {
    const std::size_t n = c.size();
    std::vector<Bits> ball(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ball[i] |= Bits{1} << i;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && within(c.dist(i, j), delta)) ball[i] |= Bits{1} << j;
    }
    return ball;
}

// Greedy max-coverage; appends chosen centers, stops once `needed` points
// are covered. Ties go to the smaller index.
Bits greedy_cover(const std::vector<Bits>& ball, Bits universe,
                  std::size_t needed, std::vector<std::size_t>* centers) {
    Bits covered = 0;
    while (popcount(covered & universe) < needed) {
        std::size_t best = ball.size();
        std::size_t best_gain = 0;
        for (std::size_t i = 0; i < ball.size(); ++i) {
            const std::size_t gain = popcount((ball[i] & universe) & ~covered);
            if (gain > best_gain) {
                best_gain = gain;
                best = i;
            }
        }
        if (best == ball.size()) break; // nothing can grow the cover
        centers->push_back(best);
        covered |= ball[best];
    }
    return covered;
}

// Exact minimum set cover by branching on the uncovered element with the
// fewest candidate balls.
class SetCover {
  public:
    SetCover(const std::vector<Bits>& ball, Bits universe)
        : ball_(ball), universe_(universe) {}

    std::size_t run(std::size_t upper) {
        best_ = upper;
        search(0, 0);
        return best_;
    }

  private:
    void search(Bits covered, std::size_t used) {
        const Bits remaining = universe_ & ~covered;
        if (remaining == 0) {
            best_ = std::min(best_, used);
            return;
        }
        if (used + 1 >= best_) return;
        // lower bound: largest ball cannot cover more than its size
        std::size_t max_ball = 0;
        for (const Bits b : ball_) max_ball = std::max(max_ball, popcount(b & remaining));
        if (max_ball == 0) return;
        const std::size_t lb = (popcount(remaining) + max_ball - 1) / max_ball;
        if (used + lb >= best_) return;
        // branch on the hardest element
        int elem = -1;
        std::size_t fewest = SIZE_MAX;
        Bits rem = remaining;
        while (rem) {
            const int e = __builtin_ctzll(rem);
            rem &= rem - 1;
            std::size_t cnt = 0;
            for (const Bits b : ball_)
                if (b & (Bits{1} << e)) ++cnt;
            if (cnt < fewest) {
                fewest = cnt;
                elem = e;
            }
        }
        for (std::size_t i = 0; i < ball_.size(); ++i)
            if (ball_[i] & (Bits{1} << elem)) search(covered | ball_[i], used + 1);
    }

    const std::vector<Bits>& ball_;
    Bits universe_;
    std::size_t best_;
};

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i)
        r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

} // namespace

SolutionCloud SolutionCloud::from_distance_matrix(std::size_t n,
                                                  std::vector<double> dist) {
    SolutionCloud c;
    c.n_ = n;
    c.dist_ = std::move(dist);
    return c;
}

SolutionCloud SolutionCloud::from_metric(
    std::size_t n, const std::function<double(std::size_t, std::size_t)>& d) {
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = d(i, j);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    return from_distance_matrix(n, std::move(m));
}

SolutionCloud SolutionCloud::from_line_points(const std::vector<double>& xs) {
    return from_metric(xs.size(), [&xs](std::size_t i, std::size_t j) {
        return std::fabs(xs[i] - xs[j]);
    });
}

bool SolutionCloud::check_metric(double tol) const {
    for (std::size_t i = 0; i < n_; ++i) {
        if (dist(i, i) != 0.0) return false;
        for (std::size_t j = 0; j < n_; ++j) {
            if (dist(i, j) < 0.0 || dist(i, j) != dist(j, i)) return false;
            for (std::size_t k = 0; k < n_; ++k)
                if (dist(i, j) > dist(i, k) + dist(k, j) + tol) return false;
        }
    }
    return true;
}

double SolutionCloud::diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) d = std::max(d, dist(i, j));
    return d;
}

std::size_t packing_number_greedy(const SolutionCloud& cloud, double delta) {
    const std::size_t n = cloud.size();
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < n; ++i) {
        bool ok = true;
        for (const std::size_t j : kept)
            if (within(cloud.dist(i, j), delta)) {
                ok = false;
                break;
            }
        if (ok) kept.push_back(i);
    }
    return kept.size();
}

std::size_t packing_number_exact(const SolutionCloud& cloud, double delta,
                                 std::size_t cap) {
    const std::size_t n = cloud.size();
    if (n == 0) return 0;
    if (n > cap || n > 64)
        throw SizeExceeded("packing_number_exact: cloud size " +
                           std::to_string(n) + " above cap");
    const auto adj = threshold_graph(cloud, delta);
    return max_independent_set(adj, n);
}

CoveringResult covering_number_internal(const SolutionCloud& cloud,
                                        double delta, std::size_t cap) {
    const std::size_t n = cloud.size();
    if (n == 0) return {0, true};
    const auto ball = cover_sets(cloud, delta);
    const Bits universe = n == 64 ? ~Bits{0} : (Bits{1} << n) - 1;
    if (n > cap || n > 64) {
        std::vector<std::size_t> centers;
        greedy_cover(ball, universe, n, &centers);
        return {centers.size(), false};
    }
    std::vector<std::size_t> centers;
    greedy_cover(ball, universe, n, &centers);
    const std::size_t exact = SetCover(ball, universe).run(centers.size() + 1);
    return {exact, true};
}

CoverReport partial_cover_count(const SolutionCloud& cloud, double radius,
                                double discard_fraction) {
    const std::size_t n = cloud.size();
    CoverReport rep;
    rep.radius = radius;
    if (n == 0) return rep;
    if (n > 64) {
        // fall back to a plain index-set greedy on large clouds
        const std::size_t needed = static_cast<std::size_t>(
            std::ceil((1.0 - discard_fraction) * static_cast<double>(n)));
        rep.discard_budget = n - needed;
        std::vector<bool> covered(n, false);
        std::size_t total = 0;
        while (total < needed) {
            std::size_t best = n, gain_best = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t gain = 0;
                for (std::size_t j = 0; j < n; ++j)
                    if (!covered[j] && within(cloud.dist(i, j), radius)) ++gain;
                if (gain > gain_best) {
                    gain_best = gain;
                    best = i;
                }
            }
            if (best == n) break;
            rep.centers.push_back(best);
            for (std::size_t j = 0; j < n; ++j)
                if (within(cloud.dist(best, j), radius)) {
                    if (!covered[j]) ++total;
                    covered[j] = true;
                }
        }
        for (std::size_t j = 0; j < n; ++j)
            if (!covered[j]) rep.discarded.push_back(j);
        rep.ball_count = rep.centers.size();
        return rep;
    }

    const std::size_t needed = static_cast<std::size_t>(
        std::ceil((1.0 - discard_fraction) * static_cast<double>(n)));
    rep.discard_budget = n - needed;
    const auto ball = cover_sets(cloud, radius);
    const Bits universe = n == 64 ? ~Bits{0} : (Bits{1} << n) - 1;
    const Bits covered = greedy_cover(ball, universe, needed, &rep.centers);
    rep.ball_count = rep.centers.size();
    Bits missing = universe & ~covered;
    while (missing) {
        const int j = __builtin_ctzll(missing);
        missing &= missing - 1;
        rep.discarded.push_back(static_cast<std::size_t>(j));
    }

    // exact branch: min over discard sets of the packing number; packing
    // is monotone under point removal, so only budget-sized discards need
    // enumerating
    const std::size_t b = rep.discard_budget;
    if (n <= 12 && binomial(n, b) <= 50000.0) {
        std::size_t best = SIZE_MAX;
        std::vector<std::size_t> idx(b);
        for (std::size_t i = 0; i < b; ++i) idx[i] = i;
        auto eval = [&]() {
            Bits drop = 0;
            for (const std::size_t i : idx) drop |= Bits{1} << i;
            std::vector<std::size_t> keep;
            for (std::size_t i = 0; i < n; ++i)
                if (!(drop & (Bits{1} << i))) keep.push_back(i);
            const auto sub = SolutionCloud::from_metric(
                keep.size(), [&](std::size_t a, std::size_t c2) {
                    return cloud.dist(keep[a], keep[c2]);
                });
            best = std::min(best, packing_number_exact(sub, radius));
        };
        if (b == 0) {
            eval();
        } else {
            for (;;) {
                eval();
                std::size_t i = b;
                while (i > 0 && idx[i - 1] == n - b + (i - 1)) --i;
                if (i == 0) break;
                --i;
                ++idx[i];
                for (std::size_t j = i + 1; j < b; ++j) idx[j] = idx[j - 1] + 1;
            }
        }
        rep.exact_min_packing = best;
    }
    return rep;
}

} // namespace stab::metric
