#include "stabilitylab/weighted_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stabilitylab/errors.hpp"

namespace stab::wgraph {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Edge = std::pair<std::uint32_t, std::uint32_t>;

void canonicalize(GraphSolution& g) {
    for (auto& e : g.edges)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(g.edges.begin(), g.edges.end());
}

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

GraphSolution kruskal(const EdgeWeights& ew) {
    const std::size_t p = ew.p;
    struct E {
        double w;
        std::uint32_t u, v;
    };
    std::vector<E> edges;
    edges.reserve(p * (p - 1) / 2);
    for (std::uint32_t i = 0; i < p; ++i)
        for (std::uint32_t j = i + 1; j < p; ++j)
            edges.push_back({ew.at(i, j), i, j});
    std::sort(edges.begin(), edges.end(), [](const E& a, const E& b) {
        if (a.w != b.w) return a.w < b.w;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
    UnionFind uf(p);
    GraphSolution g{GraphKind::Tree, {}, 0.0};
    for (const E& e : edges) {
        if (uf.unite(e.u, e.v)) {
            g.edges.emplace_back(e.u, e.v);
            g.weight += e.w;
            if (g.edges.size() == p - 1) break;
        }
    }
    canonicalize(g);
    return g;
}

GraphSolution matching_dp(const EdgeWeights& ew) {
    const std::size_t p = ew.p;
    if (p % 2 != 0) throw OddVertexCount("matching needs an even vertex count");
    if (p > 16) throw SizeExceeded("matching DP capped at p = 16");
    const std::size_t full = std::size_t{1} << p;
    std::vector<double> dp(full, kInf);
    std::vector<std::int32_t> choice(full, -1); // packed (i<<8)|j
    dp[0] = 0.0;
    for (std::size_t mask = 1; mask < full; ++mask) {
        const int i = __builtin_ctzll(mask);
        const std::size_t rest = mask & ~(std::size_t{1} << i);
        if (rest == 0) continue; // odd population, unreachable
        for (std::size_t m = rest; m;) {
            const int j = __builtin_ctzll(m);
            m &= m - 1;
            const std::size_t prev = rest & ~(std::size_t{1} << j);
            if (dp[prev] == kInf) continue;
            const double cand = dp[prev] + ew.at(i, j);
            if (cand < dp[mask]) {
                dp[mask] = cand;
                choice[mask] = (i << 8) | j;
            }
        }
    }
    GraphSolution g{GraphKind::Matching, {}, dp[full - 1]};
    std::size_t mask = full - 1;
    while (mask) {
        const int i = choice[mask] >> 8;
        const int j = choice[mask] & 0xff;
        g.edges.emplace_back(static_cast<std::uint32_t>(i),
                             static_cast<std::uint32_t>(j));
        mask &= ~((std::size_t{1} << i) | (std::size_t{1} << j));
    }
    canonicalize(g);
    return g;
}

GraphSolution held_karp(const EdgeWeights& ew) {
    const std::size_t p = ew.p;
    if (p < 3) throw SizeExceeded("tours need at least 3 vertices");
    if (p > 15) throw SizeExceeded("Held-Karp capped at p = 15");
    const std::size_t states = std::size_t{1} << (p - 1); // subsets of 1..p-1
    std::vector<double> dp(states * (p - 1), kInf);
    std::vector<std::int8_t> parent(states * (p - 1), -1);
    auto at = [p](std::size_t mask, std::size_t j) {
        return mask * (p - 1) + j;
    };
    for (std::size_t j = 0; j < p - 1; ++j)
        dp[at(std::size_t{1} << j, j)] = ew.at(0, j + 1);
    for (std::size_t mask = 1; mask < states; ++mask) {
        for (std::size_t j = 0; j < p - 1; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            const double base = dp[at(mask, j)];
            if (base == kInf) continue;
            for (std::size_t k = 0; k < p - 1; ++k) {
                if (mask & (std::size_t{1} << k)) continue;
                const std::size_t nm = mask | (std::size_t{1} << k);
                const double cand = base + ew.at(j + 1, k + 1);
                if (cand < dp[at(nm, k)]) {
                    dp[at(nm, k)] = cand;
                    parent[at(nm, k)] = static_cast<std::int8_t>(j);
                }
            }
        }
    }
    const std::size_t full = states - 1;
    double best = kInf;
    std::size_t bestj = 0;
    for (std::size_t j = 0; j < p - 1; ++j) {
        const double cand = dp[at(full, j)] + ew.at(j + 1, 0);
        if (cand < best) {
            best = cand;
            bestj = j;
        }
    }
    GraphSolution g{GraphKind::Tour, {}, best};
    std::size_t mask = full, j = bestj;
    std::uint32_t cur = static_cast<std::uint32_t>(j + 1);
    g.edges.emplace_back(0u, cur);
    while (true) {
        const std::int8_t pj = parent[at(mask, j)];
        if (pj < 0) break;
        const std::uint32_t nxt = static_cast<std::uint32_t>(pj + 1);
        g.edges.emplace_back(cur, nxt);
        mask &= ~(std::size_t{1} << j);
        j = static_cast<std::size_t>(pj);
        cur = nxt;
    }
    g.edges.emplace_back(cur, 0u);
    canonicalize(g);
    return g;
}

// Kuhn's augmenting path on the tight-edge graph; rows `from` onward must
// be matchable into the free columns.
bool kuhn_try(const std::vector<std::vector<std::uint32_t>>& adj,
              std::uint32_t r, std::vector<std::int32_t>& col_match,
              std::vector<bool>& visited) {
    for (const std::uint32_t c : adj[r]) {
        if (visited[c]) continue;
        visited[c] = true;
        if (col_match[c] < 0 ||
            kuhn_try(adj, static_cast<std::uint32_t>(col_match[c]), col_match,
                     visited)) {
            col_match[c] = static_cast<std::int32_t>(r);
            return true;
        }
    }
    return false;
}

bool rows_matchable(const std::vector<std::vector<std::uint32_t>>& adj,
                    std::size_t n, const std::vector<std::int32_t>& fixed_col) {
    // fixed_col[i] >= 0 pins row i to that column; -1 rows must be matched
    // among the remaining columns
    std::vector<std::int32_t> col_match(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        if (fixed_col[i] >= 0) col_match[fixed_col[i]] = static_cast<std::int32_t>(i);
    for (std::size_t i = 0; i < n; ++i) {
        if (fixed_col[i] >= 0) continue;
        std::vector<bool> visited(n, false);
        for (std::size_t c = 0; c < n; ++c)
            if (col_match[c] >= 0 && fixed_col[col_match[c]] >= 0)
                visited[c] = true; // pinned columns are off-limits
        if (!kuhn_try(adj, static_cast<std::uint32_t>(i), col_match, visited))
            return false;
    }
    return true;
}

} // namespace

EdgeWeights EdgeWeights::from_flat_upper(std::size_t p,
                                         const std::vector<double>& upper) {
    EdgeWeights ew;
    ew.p = p;
    ew.w.assign(p * p, 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j) {
            ew.w[i * p + j] = upper[k];
            ew.w[j * p + i] = upper[k];
            ++k;
        }
    return ew;
}

std::size_t edge_index(std::size_t i, std::size_t j, std::size_t p) {
    if (i > j) std::swap(i, j);
    return i * p - i * (i + 1) / 2 + (j - i - 1);
}

std::size_t edge_count(const GraphSolution& a, const GraphSolution& b) {
    std::size_t common = 0;
    std::size_t i = 0, j = 0;
    while (i < a.edges.size() && j < b.edges.size()) {
        if (a.edges[i] == b.edges[j]) {
            ++common;
            ++i;
            ++j;
        } else if (a.edges[i] < b.edges[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return a.edges.size() + b.edges.size() - 2 * common;
}

GraphSolution complete_graph_solve(const EdgeWeights& ew, GraphKind kind) {
    switch (kind) {
        case GraphKind::Tree: return kruskal(ew);
        case GraphKind::Matching: return matching_dp(ew);
        case GraphKind::Tour: return held_karp(ew);
    }
    throw std::logic_error("unknown graph kind");
}

PermutationSolution assignment_solve(const CostMatrix& cm) {
    const std::size_t n = cm.n;
    if (n == 0) return {};
    // Hungarian (shortest augmenting path form), 1-indexed scratch
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cm.at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    // tight-edge graph w.r.t. the optimal duals; every optimal assignment
    // is a perfect matching inside it (complementary slackness)
    double scale = 1.0;
    for (std::size_t i = 0; i < n * n; ++i) scale = std::max(scale, std::fabs(cm.c[i]));
    const double tol = 1e-9 * scale;
    std::vector<std::vector<std::uint32_t>> tight(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (cm.at(i, j) - u[i + 1] - v[j + 1] <= tol)
                tight[i].push_back(static_cast<std::uint32_t>(j));

    // lexicographically smallest perfect matching in the tight graph
    std::vector<std::int32_t> fixed(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        for (const std::uint32_t j : tight[i]) {
            bool taken = false;
            for (std::size_t k = 0; k < i; ++k)
                if (fixed[k] == static_cast<std::int32_t>(j)) taken = true;
            if (taken) continue;
            fixed[i] = static_cast<std::int32_t>(j);
            if (rows_matchable(tight, n, fixed)) break;
            fixed[i] = -1;
        }
        if (fixed[i] < 0) {
            // tolerance too small for this instance; fall back to the
            // Hungarian matching itself
            fixed.assign(n, -1);
            for (std::size_t j = 1; j <= n; ++j)
                fixed[p[j] - 1] = static_cast<std::int32_t>(j - 1);
            break;
        }
    }

    PermutationSolution sol;
    sol.pi.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        sol.pi[i] = static_cast<std::uint32_t>(fixed[i]);
    for (std::size_t i = 0; i < n; ++i) sol.cost += cm.at(i, sol.pi[i]);
    return sol;
}

double perm_metric(const PermutationSolution& a, const PermutationSolution& b) {
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.pi.size(); ++i)
        if (a.pi[i] != b.pi[i]) ++diff;
    return static_cast<double>(diff) / static_cast<double>(a.pi.size());
}

void for_each_tour(std::size_t p,
                   const std::function<void(const GraphSolution&)>& f) {
    if (p < 3) throw SizeExceeded("tours need at least 3 vertices");
    if (p > 10) throw SizeExceeded("tour enumeration capped at p = 10");
    std::vector<std::uint32_t> perm(p - 1);
    std::iota(perm.begin(), perm.end(), 1u);
    do {
        if (perm.front() > perm.back()) continue; // one orientation per cycle
        GraphSolution g{GraphKind::Tour, {}, 0.0};
        std::uint32_t prev = 0;
        for (const std::uint32_t v : perm) {
            g.edges.emplace_back(prev, v);
            prev = v;
        }
        g.edges.emplace_back(prev, 0u);
        canonicalize(g);
        f(g);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

void for_each_tree(std::size_t p,
                   const std::function<void(const GraphSolution&)>& f) {
    if (p > 8) throw SizeExceeded("tree enumeration capped at p = 8");
    if (p < 2) return;
    if (p == 2) {
        GraphSolution g{GraphKind::Tree, {{0u, 1u}}, 0.0};
        f(g);
        return;
    }
    // decode every Pruefer sequence
    const std::size_t len = p - 2;
    std::vector<std::uint32_t> seq(len, 0);
    for (;;) {
        std::vector<std::uint32_t> deg(p, 1);
        for (const std::uint32_t s : seq) ++deg[s];
        GraphSolution g{GraphKind::Tree, {}, 0.0};
        for (std::size_t k = 0; k < len; ++k) {
            std::uint32_t leaf = 0;
            while (deg[leaf] != 1) ++leaf;
            g.edges.emplace_back(leaf, seq[k]);
            deg[leaf] = 0;
            --deg[seq[k]];
        }
        std::uint32_t a = 0;
        while (deg[a] != 1) ++a;
        std::uint32_t b = a + 1;
        while (deg[b] != 1) ++b;
        g.edges.emplace_back(a, b);
        canonicalize(g);
        f(g);
        // next sequence in base p
        std::size_t i = len;
        while (i > 0 && seq[i - 1] == p - 1) seq[--i] = 0;
        if (i == 0) break;
        ++seq[i - 1];
    }
}

namespace {
void matchings_rec(std::uint32_t p, std::uint32_t used_mask,
                   std::vector<Edge>& acc,
                   const std::function<void(const GraphSolution&)>& f) {
    std::uint32_t i = 0;
    while (i < p && (used_mask & (1u << i))) ++i;
    if (i == p) {
        GraphSolution g{GraphKind::Matching, acc, 0.0};
        canonicalize(g);
        f(g);
        return;
    }
    for (std::uint32_t j = i + 1; j < p; ++j) {
        if (used_mask & (1u << j)) continue;
        acc.emplace_back(i, j);
        matchings_rec(p, used_mask | (1u << i) | (1u << j), acc, f);
        acc.pop_back();
    }
}
} // namespace

void for_each_matching(std::size_t p,
                       const std::function<void(const GraphSolution&)>& f) {
    if (p % 2 != 0) throw OddVertexCount("matching enumeration needs even p");
    if (p > 16) throw SizeExceeded("matching enumeration capped at p = 16");
    std::vector<Edge> acc;
    matchings_rec(static_cast<std::uint32_t>(p), 0u, acc, f);
}

std::vector<GraphSolution> enumerate_tours(std::size_t p) {
    std::vector<GraphSolution> out;
    for_each_tour(p, [&out](const GraphSolution& g) { out.push_back(g); });
    return out;
}

std::vector<GraphSolution> enumerate_trees(std::size_t p) {
    std::vector<GraphSolution> out;
    for_each_tree(p, [&out](const GraphSolution& g) { out.push_back(g); });
    return out;
}

std::vector<GraphSolution> enumerate_matchings(std::size_t p) {
    if (p > 12) throw SizeExceeded("matching enumeration capped at p = 12");
    std::vector<GraphSolution> out;
    for_each_matching(p, [&out](const GraphSolution& g) { out.push_back(g); });
    return out;
}

double solution_weight(const EdgeWeights& ew, const GraphSolution& g) {
    double w = 0.0;
    for (const auto& [u, v] : g.edges) w += ew.at(u, v);
    return w;
}

double e_max_for(GraphKind kind) {
    switch (kind) {
        case GraphKind::Tour: return 1.0;
        case GraphKind::Tree: return 1.0; // (p-1)/p rounded up for the bound
        case GraphKind::Matching: return 0.5;
    }
    return 1.0;
}

EdgeMembershipReport edge_membership_rate(std::size_t p, GraphKind kind,
                                          std::size_t reps,
                                          std::uint64_t seed) {
    const std::size_t m = p * (p - 1) / 2;
    std::vector<std::size_t> hits(m, 0);
    for (std::size_t r = 0; r < reps; ++r) {
        Rng rng(hash64(seed, r));
        std::vector<double> upper(m);
        for (double& x : upper) x = rng.u01();
        const EdgeWeights ew = EdgeWeights::from_flat_upper(p, upper);
        const GraphSolution g = complete_graph_solve(ew, kind);
        for (const auto& [u, v] : g.edges) ++hits[edge_index(u, v, p)];
    }
    EdgeMembershipReport rep;
    rep.e_max = e_max_for(kind);
    rep.bound = 2.0 * rep.e_max / static_cast<double>(p - 1);
    rep.reps = reps;
    rep.frequency.resize(m);
    for (std::size_t e = 0; e < m; ++e)
        rep.frequency[e] =
            static_cast<double>(hits[e]) / static_cast<double>(reps);
    return rep;
}

} // namespace stab::wgraph
