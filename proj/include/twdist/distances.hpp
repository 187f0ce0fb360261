#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "twdist/display_graph.hpp"
#include "twdist/error.hpp"
#include "twdist/phylo.hpp"
#include "twdist/treewidth.hpp"

namespace twdist {

struct DtwResult {
    int value = 0;
    bool compatible = false;
    TwResult tw;  // on the normalized display graph when incompatible
};

inline DtwResult d_tw(const PhyloTree& t1, const PhyloTree& t2, const TwOptions& opt = {}) {
    require_same_taxa(t1.taxa(), t2.taxa());
    if (t1.size() < 3) throw Error("treewidth distance needs at least 3 taxa");
    DisplayGraph d = build_display_graph(t1, t2);
    DtwResult r;
    r.compatible = *d.compatible;
    r.tw = exact_treewidth(r.compatible ? d.graph : normalize(d).graph, opt);
    r.value = r.compatible ? 0 : r.tw.upper - 2;
    return r;
}

// ---- agreement forests -------------------------------------------------------

namespace detail {

using Bits = std::uint32_t;

// Per-tree tables for one taxon ordering: the vertex mask of every leaf-to-leaf
// path and the distance matrix used for quartet topologies.
struct TreeTables {
    std::vector<std::vector<Bits>> path;
    std::vector<std::vector<int>> dist;

    TreeTables(const PhyloTree& t, const TaxonSet& order) {
        const UGraph& g = t.graph();
        if (g.id_bound() > 32) throw SizeLimitExceeded("agreement forest search is limited to 16 taxa");
        std::size_t n = order.size();
        path.assign(n, std::vector<Bits>(n, 0));
        dist.assign(n, std::vector<int>(n, 0));
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<int> pred(g.id_bound(), -1), d(g.id_bound(), -1);
            VertexId s = t.leaf(order[i]);
            std::vector<VertexId> queue{s};
            d[s] = 0;
            for (std::size_t k = 0; k < queue.size(); ++k)
                for (VertexId w : g.neighbors(queue[k]))
                    if (d[w] < 0) {
                        d[w] = d[queue[k]] + 1;
                        pred[w] = static_cast<int>(queue[k]);
                        queue.push_back(w);
                    }
            for (std::size_t j = 0; j < n; ++j) {
                VertexId v = t.leaf(order[j]);
                dist[i][j] = d[v];
                Bits m = 0;
                for (int x = static_cast<int>(v); x >= 0; x = pred[x]) m |= Bits{1} << x;
                path[i][j] = m;
            }
        }
    }

    // 0: ab|cd, 1: ac|bd, 2: ad|bc
    int quartet(int a, int b, int c, int d) const {
        int s0 = dist[a][b] + dist[c][d], s1 = dist[a][c] + dist[b][d], s2 = dist[a][d] + dist[b][c];
        if (s0 < s1 && s0 < s2) return 0;
        return s1 < s2 ? 1 : 2;
    }
};

struct ForestSearch {
    const TreeTables& a;
    const TreeTables& b;
    int n;
    std::vector<std::vector<int>> blocks;
    std::vector<Bits> span_a, span_b;
    Bits used_a = 0, used_b = 0;

    // Can taxon x join block j without breaking agreement or disjointness?
    bool fits(int x, std::size_t j, Bits& na, Bits& nb) const {
        const auto& blk = blocks[j];
        for (std::size_t p = 0; p < blk.size(); ++p)
            for (std::size_t q = p + 1; q < blk.size(); ++q)
                for (std::size_t r = q + 1; r < blk.size(); ++r)
                    if (a.quartet(blk[p], blk[q], blk[r], x) != b.quartet(blk[p], blk[q], blk[r], x)) return false;
        na = span_a[j] | a.path[blk[0]][x];
        nb = span_b[j] | b.path[blk[0]][x];
        Bits others_a = used_a & ~span_a[j], others_b = used_b & ~span_b[j];
        return !(na & others_a) && !(nb & others_b);
    }

    bool search(int x, std::size_t limit) {
        if (x == n) return true;
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            Bits na, nb;
            if (!fits(x, j, na, nb)) continue;
            Bits oa = span_a[j], ob = span_b[j];
            used_a = (used_a & ~oa) | na;
            used_b = (used_b & ~ob) | nb;
            span_a[j] = na;
            span_b[j] = nb;
            blocks[j].push_back(x);
            if (search(x + 1, limit)) return true;
            blocks[j].pop_back();
            span_a[j] = oa;
            span_b[j] = ob;
            used_a = (used_a & ~na) | oa;
            used_b = (used_b & ~nb) | ob;
        }
        if (blocks.size() < limit) {
            Bits la = a.path[x][x], lb = b.path[x][x];
            if (!(used_a & la) && !(used_b & lb)) {
                blocks.push_back({x});
                span_a.push_back(la);
                span_b.push_back(lb);
                used_a |= la;
                used_b |= lb;
                if (search(x + 1, limit)) return true;
                used_a &= ~la;
                used_b &= ~lb;
                blocks.pop_back();
                span_a.pop_back();
                span_b.pop_back();
            }
        }
        return false;
    }
};

// Vertex set of the smallest subtree spanning the taxa.
inline VertexSet spanning_subtree(const PhyloTree& t, const TaxonSet& s) {
    std::vector<VertexId> out{t.leaf(s[0])};
    const UGraph& g = t.graph();
    for (std::size_t i = 1; i < s.size(); ++i) {
        std::vector<int> pred(g.id_bound(), -1);
        VertexId src = t.leaf(s[0]);
        std::vector<VertexId> queue{src};
        pred[src] = static_cast<int>(src);
        for (std::size_t k = 0; k < queue.size(); ++k)
            for (VertexId w : g.neighbors(queue[k]))
                if (pred[w] < 0) {
                    pred[w] = static_cast<int>(queue[k]);
                    queue.push_back(w);
                }
        for (VertexId v = t.leaf(s[i]); v != src; v = static_cast<VertexId>(pred[v])) out.push_back(v);
    }
    return make_vertex_set(out);
}

}  // namespace detail

inline bool is_agreement_forest(const PhyloTree& t1, const PhyloTree& t2, const std::vector<TaxonSet>& blocks) {
    require_same_taxa(t1.taxa(), t2.taxa());
    PhyloTree a = strip_roots(t1), b = strip_roots(t2);
    TaxonSet all;
    for (const auto& blk : blocks) {
        if (blk.empty()) throw Error("agreement forest block is empty");
        all.insert(all.end(), blk.begin(), blk.end());
    }
    std::sort(all.begin(), all.end());
    if (all != a.taxa()) throw Error("blocks do not partition the taxa");
    std::vector<TaxonSet> sorted;
    for (const auto& blk : blocks) sorted.push_back(make_taxon_set(blk));
    for (const auto& blk : sorted)
        if (blk.size() >= 4 && !is_compatible(restrict(a, blk), restrict(b, blk))) return false;
    for (const PhyloTree* t : {&a, &b}) {
        std::vector<bool> taken(t->graph().id_bound(), false);
        for (const auto& blk : sorted)
            for (VertexId v : detail::spanning_subtree(*t, blk)) {
                if (taken[v]) return false;
                taken[v] = true;
            }
    }
    return true;
}

struct MafResult {
    int size = 0;
    std::vector<TaxonSet> blocks;
};

// Exact maximum agreement forest by partition search with increasing block
// count, so the first forest found is optimal.
inline MafResult maximum_agreement_forest(const PhyloTree& t1, const PhyloTree& t2, std::size_t limit = 10) {
    require_same_taxa(t1.taxa(), t2.taxa());
    if (t1.size() > limit) throw SizeLimitExceeded("exact agreement forest limited to " + std::to_string(limit) + " taxa");
    PhyloTree a = strip_roots(t1), b = strip_roots(t2);
    const TaxonSet& x = a.taxa();
    detail::TreeTables ta(a, x), tb(b, x);
    int n = static_cast<int>(x.size());
    for (std::size_t k = 1; k <= x.size(); ++k) {
        detail::ForestSearch s{ta, tb, n, {}, {}, {}};
        if (!s.search(0, k)) continue;
        MafResult r;
        r.size = static_cast<int>(k);
        for (const auto& blk : s.blocks) {
            TaxonSet names;
            for (int i : blk) names.push_back(x[i]);
            r.blocks.push_back(names);
        }
        std::sort(r.blocks.begin(), r.blocks.end());
        return r;
    }
    throw Error("no agreement forest found");  // singletons always work
}

inline int d_maf(const PhyloTree& t1, const PhyloTree& t2, std::size_t limit = 10) { return maximum_agreement_forest(t1, t2, limit).size; }

inline int d_tbr(const PhyloTree& t1, const PhyloTree& t2, std::size_t limit = 10) { return d_maf(t1, t2, limit) - 1; }

// ---- parsimony ---------------------------------------------------------------

struct Character {
    std::map<std::string, std::string> assignment;

    std::size_t arity() const {
        std::set<std::string> s;
        for (const auto& [x, c] : assignment) s.insert(c);
        return s.size();
    }
};

namespace detail {

// Tree rooted at its smallest taxon, listed children-first.
struct Rooted {
    std::vector<VertexId> order;   // postorder, root leaf last
    std::vector<int> parent;       // by vertex id, -1 at the root
};

inline Rooted root_at_first_leaf(const PhyloTree& t) {
    const UGraph& g = t.graph();
    Rooted r;
    r.parent.assign(g.id_bound(), -1);
    VertexId root = t.leaf(t.taxa().front());
    std::vector<VertexId> pre{root};
    std::vector<bool> seen(g.id_bound(), false);
    seen[root] = true;
    for (std::size_t i = 0; i < pre.size(); ++i)
        for (VertexId w : g.neighbors(pre[i]))
            if (!seen[w]) {
                seen[w] = true;
                r.parent[w] = static_cast<int>(pre[i]);
                pre.push_back(w);
            }
    r.order.assign(pre.rbegin(), pre.rend());
    return r;
}

// Fitch with state sets as bitmasks. `state` gives each leaf's one-hot set.
inline int fitch(const UGraph& g, const Rooted& r, const std::vector<std::uint64_t>& leaf_set) {
    std::vector<std::uint64_t> set(g.id_bound(), 0);
    int cost = 0;
    for (VertexId v : r.order) {
        if (g.is_labelled(v)) {
            set[v] = leaf_set[v];
            if (r.parent[v] >= 0) continue;
            // root leaf: its single child decides
            for (VertexId w : g.neighbors(v))
                if (!(set[w] & set[v])) ++cost;
            continue;
        }
        std::uint64_t inter = ~std::uint64_t{0}, uni = 0;
        for (VertexId w : g.neighbors(v)) {
            if (static_cast<int>(w) == r.parent[v]) continue;
            inter &= set[w];
            uni |= set[w];
        }
        if (inter) {
            set[v] = inter;
        } else {
            set[v] = uni;
            ++cost;
        }
    }
    return cost;
}

}  // namespace detail

inline int fitch_score(const PhyloTree& t0, const Character& f) {
    PhyloTree t = strip_roots(t0);
    std::map<std::string, int> code;
    for (const auto& [x, c] : f.assignment) code.emplace(c, 0);
    if (code.size() > 64) throw SizeLimitExceeded("at most 64 character states");
    int next = 0;
    for (auto& [c, i] : code) i = next++;
    std::vector<std::uint64_t> leaf_set(t.graph().id_bound(), 0);
    for (const auto& x : t.taxa()) {
        auto it = f.assignment.find(x);
        if (it == f.assignment.end()) throw Error("character is not defined on taxon '" + x + "'");
        leaf_set[t.leaf(x)] = std::uint64_t{1} << code[it->second];
    }
    if (f.assignment.size() != t.size()) throw Error("character assigns states to taxa outside the tree");
    if (t.size() == 1) return 0;
    return detail::fitch(t.graph(), detail::root_at_first_leaf(t), leaf_set);
}

struct MpResult {
    int value = 0;
    Character witness;
};

// max |l_f(T1) - l_f(T2)| over all surjective binary characters.
inline MpResult d_mp_2state(const PhyloTree& t1, const PhyloTree& t2, std::size_t limit = 20) {
    require_same_taxa(t1.taxa(), t2.taxa());
    if (t1.size() > limit) throw SizeLimitExceeded("binary character enumeration limited to " + std::to_string(limit) + " taxa");
    PhyloTree a = strip_roots(t1), b = strip_roots(t2);
    const TaxonSet& x = a.taxa();
    std::size_t n = x.size();
    MpResult best;
    if (n < 2) return best;
    detail::Rooted ra = detail::root_at_first_leaf(a), rb = detail::root_at_first_leaf(b);
    std::vector<std::uint64_t> la(a.graph().id_bound(), 0), lb(b.graph().id_bound(), 0);
    std::uint64_t best_mask = 1;
    best.value = -1;
    // taxon 0 always gets state 0; masks over the rest, excluding all-zero
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t s = (i > 0 && ((mask >> (i - 1)) & 1)) ? 2 : 1;
            la[a.leaf(x[i])] = s;
            lb[b.leaf(x[i])] = s;
        }
        int d = std::abs(detail::fitch(a.graph(), ra, la) - detail::fitch(b.graph(), rb, lb));
        if (d > best.value) {
            best.value = d;
            best_mask = mask;
        }
    }
    for (std::size_t i = 0; i < n; ++i) best.witness.assignment[x[i]] = (i > 0 && ((best_mask >> (i - 1)) & 1)) ? "1" : "0";
    return best;
}

// n - 3 - floor((sqrt(n-2) - 1) / 2)
inline int tbr_diameter_upper(int n) {
    if (n < 4) throw Error("diameter bound needs n >= 4");
    int s = static_cast<int>(std::sqrt(static_cast<double>(n - 2)));
    while ((s + 1) * (s + 1) <= n - 2) ++s;
    while (s * s > n - 2) --s;
    return n - 3 - (s - 1) / 2;
}

struct TriangleViolation {
    PhyloTree a, b, c;  // d(a,c) > d(a,b) + d(b,c)
    int ab = 0, bc = 0, ac = 0;
};

// Random search for trees breaking the triangle inequality for d_tw.
inline std::optional<TriangleViolation> find_triangle_violation(std::size_t n, std::size_t tries, std::uint64_t seed,
                                                                const TwOptions& opt = {}) {
    std::mt19937_64 rng(seed);
    auto names = taxon_names(n);
    for (std::size_t i = 0; i < tries; ++i) {
        PhyloTree a = random_tree(names, rng());
        PhyloTree b = random_tree(names, rng());
        // mid tree one TBR move from a keeps d(a,b) small
        auto ball = tbr_unit_ball(a);
        PhyloTree m = ball[rng() % ball.size()];
        int am = d_tw(a, m, opt).value, mb = d_tw(m, b, opt).value, ab = d_tw(a, b, opt).value;
        if (ab > am + mb) return TriangleViolation{a, m, b, am, mb, ab};
    }
    return std::nullopt;
}

}  // namespace twdist
