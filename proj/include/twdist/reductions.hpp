#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "twdist/display_graph.hpp"
#include "twdist/error.hpp"
#include "twdist/phylo.hpp"
#include "twdist/treewidth.hpp"

namespace twdist {

namespace detail {

// Canonical string of the subtree hanging below v when entered from `from`.
inline std::string rooted_canonical(const UGraph& g, VertexId v, VertexId from) {
    if (g.is_labelled(v)) return quote_label(*g.label(v));
    std::vector<std::string> kids;
    for (VertexId w : g.neighbors(v))
        if (w != from) kids.push_back(rooted_canonical(g, w, v));
    std::sort(kids.begin(), kids.end());
    std::string out = "(";
    for (std::size_t i = 0; i < kids.size(); ++i) out += (i ? "," : "") + kids[i];
    return out + ")";
}

inline TaxonSet taxa_below(const UGraph& g, VertexId v, VertexId from) {
    TaxonSet out;
    std::vector<std::pair<VertexId, VertexId>> stack{{v, from}};
    while (!stack.empty()) {
        auto [x, p] = stack.back();
        stack.pop_back();
        if (g.is_labelled(x)) out.push_back(*g.label(x));
        for (VertexId w : g.neighbors(x))
            if (w != p) stack.push_back({w, x});
    }
    return make_taxon_set(out);
}

struct Hanging {
    Edge edge;
    VertexId root;
    std::string canon;
};

// Every (edge, side) of the tree keyed by the taxa on that side.
inline std::map<TaxonSet, Hanging> hanging_subtrees(const PhyloTree& t) {
    std::map<TaxonSet, Hanging> out;
    const UGraph& g = t.graph();
    for (Edge e : g.edges())
        for (auto [r, away] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
            TaxonSet s = taxa_below(g, r, away);
            if (s.size() >= 2) out.emplace(std::move(s), Hanging{e, r, rooted_canonical(g, r, away)});
        }
    return out;
}

inline void require_incompatible(const PhyloTree& a, const PhyloTree& b) {
    if (is_compatible(a, b)) throw Error("trees are compatible");
}

}  // namespace detail

struct PendantSubtree {
    TaxonSet taxa;
    Edge first;  // edge attaching the subtree in each tree
    Edge second;
    VertexId root_first;  // endpoint of that edge inside the subtree
    VertexId root_second;
};

// Maximal taxon sets hanging off an edge of both trees with the same rooted
// shape. Unrooted agreement of the restrictions is not enough.
inline std::vector<PendantSubtree> find_common_pendant_subtrees(const PhyloTree& t1, const PhyloTree& t2) {
    require_same_taxa(t1.taxa(), t2.taxa());
    PhyloTree a = strip_roots(t1), b = strip_roots(t2);
    auto ha = detail::hanging_subtrees(a), hb = detail::hanging_subtrees(b);
    std::vector<PendantSubtree> common;
    for (const auto& [taxa, x] : ha) {
        auto it = hb.find(taxa);
        if (it != hb.end() && it->second.canon == x.canon) common.push_back({taxa, x.edge, it->second.edge, x.root, it->second.root});
    }
    std::vector<PendantSubtree> out;
    for (const auto& c : common) {
        bool maximal = true;
        for (const auto& d : common)
            if (d.taxa.size() > c.taxa.size() && std::includes(d.taxa.begin(), d.taxa.end(), c.taxa.begin(), c.taxa.end())) maximal = false;
        if (maximal) out.push_back(c);
    }
    return out;
}

struct CpsGroup {
    std::string label;  // fresh taxon standing for the collapsed subtree
    TaxonSet taxa;      // original taxa it replaces
};

struct CpsReport {
    PhyloTree first;
    PhyloTree second;
    std::vector<CpsGroup> groups;
    std::optional<int> tw_before;
    std::optional<int> tw_after;
};

// Collapses common cherries until none is left. Each maximal common pendant
// subtree ends up as a single fresh taxon.
inline CpsReport apply_cps(const PhyloTree& t1, const PhyloTree& t2, bool compute_tw = false) {
    require_same_taxa(t1.taxa(), t2.taxa());
    PhyloTree a = strip_roots(t1), b = strip_roots(t2);
    detail::require_incompatible(a, b);
    UGraph ga = a.graph(), gb = b.graph();
    std::map<std::string, TaxonSet> groups;
    auto sibling = [](const UGraph& g, VertexId leaf) -> std::optional<VertexId> {
        VertexId p = g.neighbors(leaf)[0];
        for (VertexId w : g.neighbors(p))
            if (w != leaf && g.is_labelled(w)) return w;
        return std::nullopt;
    };
    auto find_cherry = [&]() -> std::optional<std::pair<std::string, std::string>> {
        for (const auto& x : ga.labels()) {
            auto ya = sibling(ga, ga.vertex_of(x));
            if (!ya) continue;
            std::string y = *ga.label(*ya);
            auto yb = sibling(gb, gb.vertex_of(x));
            if (yb && *gb.label(*yb) == y) return std::pair{std::min(x, y), std::max(x, y)};
        }
        return std::nullopt;
    };
    bool any = false;
    while (auto cherry = find_cherry()) {
        any = true;
        auto [x, y] = *cherry;
        std::string fresh = x + "_" + y;
        while (ga.find(fresh)) fresh += "_";
        for (UGraph* g : {&ga, &gb}) {
            VertexId vx = g->vertex_of(x), vy = g->vertex_of(y);
            VertexId p = g->neighbors(vx)[0];
            g->remove_vertex(vx);
            g->remove_vertex(vy);
            g->set_label(p, fresh);
        }
        TaxonSet merged;
        for (const auto& z : {x, y}) {
            auto it = groups.find(z);
            if (it == groups.end()) {
                merged.push_back(z);
            } else {
                merged.insert(merged.end(), it->second.begin(), it->second.end());
                groups.erase(it);
            }
        }
        groups[fresh] = make_taxon_set(merged);
    }
    if (!any) throw Error("nothing to reduce");
    CpsReport r{PhyloTree(std::move(ga)), PhyloTree(std::move(gb)), {}, {}, {}};
    for (auto& [label, taxa] : groups) r.groups.push_back({label, taxa});
    if (compute_tw) {
        r.tw_before = treewidth(build_display_graph(a, b).graph);
        r.tw_after = treewidth(build_display_graph(r.first, r.second).graph);
    }
    return r;
}

// d-cc rule: keep the first ceil(d/2) and last floor(d/2) chain taxa.
inline std::pair<PhyloTree, PhyloTree> clip_chain(const PhyloTree& t1, const PhyloTree& t2, const Chain& c, int d) {
    PhyloTree a = strip_roots(t1), b = strip_roots(t2);
    if (!is_common_chain(a, b, c.taxa)) throw Error("not a common chain");
    int t = static_cast<int>(c.length());
    if (t < 3) throw Error("chain must have at least 3 taxa");
    if (d < 2 || d > t - 1) throw Error("d must lie in [2, " + std::to_string(t - 1) + "]");
    detail::require_incompatible(a, b);
    int head = (d + 1) / 2, tail = d / 2;
    TaxonSet drop(c.taxa.begin() + head, c.taxa.end() - tail);
    drop = make_taxon_set(drop);
    std::vector<std::string> keep;
    for (const auto& x : a.taxa())
        if (!std::binary_search(drop.begin(), drop.end(), x)) keep.push_back(x);
    PhyloTree ra = restrict(a, keep), rb = restrict(b, keep);
    const std::string& left = c.taxa[head - 1];
    const std::string& right = c.taxa[t - tail];
    for (const PhyloTree* r : {&ra, &rb})
        if (!r->graph().adjacent(r->parent(left), r->parent(right))) throw Error("clipped chain ends are not adjacent");
    return {std::move(ra), std::move(rb)};
}

// The 2 x t ladder formed by the two parent paths of a chain.
inline VertexSet chain_grid(const DisplayGraph& dg, const Chain& c) {
    std::vector<VertexId> out;
    for (const auto* side : {&c.parents_first, &c.parents_second}) {
        const auto& map = side == &c.parents_first ? dg.from_first : dg.from_second;
        for (VertexId p : *side) {
            auto it = map.find(p);
            if (it == map.end()) throw Error("chain not found in provenance");
            out.push_back(it->second);
        }
    }
    return make_vertex_set(out);
}

namespace detail {

// Components of D after deleting the grid and the chain taxa.
inline std::vector<VertexSet> off_grid_components(const DisplayGraph& dg, const Chain& c, const VertexSet& grid) {
    std::vector<VertexId> drop = grid;
    for (const auto& x : c.taxa)
        if (auto v = dg.graph.find(x)) drop.push_back(*v);
    return connected_components(remove_vertices(dg.graph, make_vertex_set(drop)));
}

}  // namespace detail

// Does deleting the grid disconnect D? Chain taxa hang only off the grid and
// are dropped with it, as if already suppressed.
inline bool chain_is_separator(const DisplayGraph& dg, const Chain& c) {
    return detail::off_grid_components(dg, c, chain_grid(dg, c)).size() > 1;
}

// Stronger form: no component left after deleting the grid touches both the
// first rung {v1,u1} and the last rung {vt,ut}.
inline bool chain_separates_ends(const DisplayGraph& dg, const Chain& c) {
    VertexSet grid = chain_grid(dg, c);
    auto comps = detail::off_grid_components(dg, c, grid);
    std::map<VertexId, std::size_t> comp_of;
    for (std::size_t i = 0; i < comps.size(); ++i)
        for (VertexId v : comps[i]) comp_of[v] = i;
    auto touched = [&](std::initializer_list<VertexId> rung) {
        std::set<std::size_t> out;
        for (VertexId r : rung)
            for (VertexId w : dg.graph.neighbors(r))
                if (comp_of.count(w)) out.insert(comp_of[w]);
        return out;
    };
    std::size_t t = c.length();
    auto first = touched({dg.from_first.at(c.parents_first[0]), dg.from_second.at(c.parents_second[0])});
    auto last = touched({dg.from_first.at(c.parents_first[t - 1]), dg.from_second.at(c.parents_second[t - 1])});
    for (std::size_t i : first)
        if (last.count(i)) return false;
    return true;
}

struct ClusterParts {
    Split split;  // X* is split.left
    UGraph G_star, G_starstar;
    UGraph bracket_star, bracket_starstar;
    VertexId u1 = 0, u2 = 0, v1 = 0, v2 = 0;  // display ids; u on the X* side
    int p = 0, q = 0;                         // tw of the restricted display graphs
    int tw_star = 0, tw_starstar = 0;
    int tw_bracket_star = 0, tw_bracket_starstar = 0;
    int tw_display = 0;

    // Is tw(D) = max(p, q) according to the bracket conditions?
    bool predicts_tight() const {
        bool star_ok = tw_bracket_star == tw_star, starstar_ok = tw_bracket_starstar == tw_starstar;
        if (p < q) return starstar_ok;
        if (q < p) return star_ok;
        return star_ok && starstar_ok;
    }
};

inline ClusterParts cluster_decompose(const PhyloTree& t1, const PhyloTree& t2, const Split& s, const TwOptions& opt = {}) {
    require_same_taxa(t1.taxa(), t2.taxa());
    PhyloTree a = strip_roots(t1), b = strip_roots(t2);
    detail::require_incompatible(a, b);
    std::optional<SplitWitness> w;
    for (const auto& c : common_splits(a, b))
        if (c.split == s) w = c;
    if (!w) throw Error("not a common split: " + s.str());
    DisplayGraph dg = build_display_graph(a, b);
    const TaxonSet& star = s.left;
    auto endpoints = [&](const PhyloTree& t, Edge e, const std::map<VertexId, VertexId>& map) {
        TaxonSet below = detail::taxa_below(t.graph(), e.u, e.v);
        bool u_star = below == star;
        VertexId in = u_star ? e.u : e.v, out = u_star ? e.v : e.u;
        return std::pair{map.at(in), map.at(out)};
    };
    ClusterParts r;
    r.split = s;
    std::tie(r.u1, r.v1) = endpoints(a, w->first, dg.from_first);
    std::tie(r.u2, r.v2) = endpoints(b, w->second, dg.from_second);
    UGraph cut = dg.graph;
    cut.remove_edge(r.u1, r.v1);
    cut.remove_edge(r.u2, r.v2);
    auto comps = connected_components(cut);
    if (comps.size() != 2) throw Error("split edges do not disconnect the display graph");
    bool first_is_star = std::binary_search(comps[0].begin(), comps[0].end(), r.u1);
    r.G_star = induced_subgraph(cut, comps[first_is_star ? 0 : 1]);
    r.G_starstar = induced_subgraph(cut, comps[first_is_star ? 1 : 0]);
    r.bracket_star = r.G_star;
    r.bracket_star.add_edge(r.u1, r.u2);
    r.bracket_starstar = r.G_starstar;
    r.bracket_starstar.add_edge(r.v1, r.v2);
    r.p = treewidth(build_display_graph(restrict(a, s.left), restrict(b, s.left)).graph, opt);
    r.q = treewidth(build_display_graph(restrict(a, s.right), restrict(b, s.right)).graph, opt);
    r.tw_star = treewidth(r.G_star, opt);
    r.tw_starstar = treewidth(r.G_starstar, opt);
    r.tw_bracket_star = treewidth(r.bracket_star, opt);
    r.tw_bracket_starstar = treewidth(r.bracket_starstar, opt);
    r.tw_display = treewidth(dg.graph, opt);
    return r;
}

}  // namespace twdist
