#pragma once

// Does a network display a tree? Decided by deleting r(N) non-bridge edges
// and comparing the pruned spanning tree with the tree.
//
// The monadic second-order formulation of the same question asks for an
// edge set (the deleted edges, here E'), that the remainder is connected and
// acyclic (here: non-bridge deletions of exactly r(N) edges), and that the
// surviving subtree induces the tree's quartets (here: pruning, suppression
// and a label-preserving isomorphism, with quartet equality as a cross-check).
// It is not evaluated; the combinatorial steps below stand in for it.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twdist/display_graph.hpp"
#include "twdist/error.hpp"
#include "twdist/graph.hpp"
#include "twdist/phylo.hpp"
#include "twdist/treewidth.hpp"

namespace twdist {

struct DisplayCertificate {
    std::vector<Edge> deleted;  // E', sorted
    UGraph spanning_tree;       // N - E'
    UGraph subdivision;         // spanning tree with unlabelled pendant parts pruned
    UGraph pruned;              // subdivision with unlabelled degree-2 vertices suppressed
};

namespace detail {

inline std::vector<Edge> bridges(const UGraph& g) {
    std::vector<Edge> out;
    std::vector<int> tin(g.id_bound(), -1), low(g.id_bound(), 0);
    int timer = 0;
    std::function<void(VertexId, VertexId, bool)> dfs = [&](VertexId v, VertexId parent, bool has_parent) {
        tin[v] = low[v] = timer++;
        bool skipped_parent = false;
        for (VertexId w : g.neighbors(v)) {
            if (has_parent && w == parent && !skipped_parent) {
                skipped_parent = true;  // a parallel copy still counts as a back edge
                continue;
            }
            if (tin[w] >= 0) {
                low[v] = std::min(low[v], tin[w]);
            } else {
                dfs(w, v, true);
                low[v] = std::min(low[v], low[w]);
                if (low[w] > tin[v]) out.push_back(make_edge(v, w));
            }
        }
    };
    for (VertexId v : g.vertices())
        if (tin[v] < 0) dfs(v, v, false);
    std::sort(out.begin(), out.end());
    return out;
}

inline UGraph prune_unlabelled_leaves(UGraph g) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (VertexId v : g.vertices())
            if (!g.is_labelled(v) && g.degree(v) <= 1 && g.vertex_count() > 1) {
                g.remove_vertex(v);
                changed = true;
            }
    }
    return g;
}

inline UGraph suppress_unlabelled_degree2(UGraph g) {
    for (VertexId v : g.vertices())
        if (!g.is_labelled(v) && g.degree(v) == 2) g.suppress(v);
    return g;
}

inline bool same_tree(const UGraph& pruned, const PhyloTree& t) {
    try {
        return PhyloTree(pruned).canonical() == strip_roots(t).canonical();
    } catch (const Error&) {
        return false;
    }
}

inline DisplayCertificate certificate_for(const UGraph& n, std::vector<Edge> deleted) {
    std::sort(deleted.begin(), deleted.end());
    DisplayCertificate c{deleted, n, {}, {}};
    for (Edge e : deleted) c.spanning_tree.remove_edge(e.u, e.v);
    c.subdivision = prune_unlabelled_leaves(c.spanning_tree);
    c.pruned = suppress_unlabelled_degree2(c.subdivision);
    return c;
}

}  // namespace detail

// First certificate in lexicographic order of E', or nothing after an
// exhaustive search. Bridges of the current remainder are never deleted, so
// every complete choice leaves a spanning tree.
inline std::optional<DisplayCertificate> displays(const PhyloNetwork& n, const PhyloTree& t, std::size_t max_r = 12) {
    require_same_taxa(n.taxa(), t.taxa());
    std::size_t r = reticulation_number(n);
    if (r > max_r) throw SizeLimitExceeded("reticulation number " + std::to_string(r) + " exceeds limit " + std::to_string(max_r));
    std::vector<Edge> all = n.graph().edges();
    std::vector<Edge> chosen;
    std::optional<DisplayCertificate> found;
    std::function<void(UGraph&, std::size_t)> rec = [&](UGraph& g, std::size_t from) {
        if (found) return;
        if (chosen.size() == r) {
            auto c = detail::certificate_for(n.graph(), chosen);
            if (detail::same_tree(c.pruned, t)) found = std::move(c);
            return;
        }
        std::vector<Edge> br = detail::bridges(g);
        for (std::size_t i = from; i < all.size() && !found; ++i) {
            if (all.size() - i < r - chosen.size()) break;
            Edge e = all[i];
            if (std::binary_search(br.begin(), br.end(), e)) continue;
            g.remove_edge(e.u, e.v);
            chosen.push_back(e);
            rec(g, i + 1);
            chosen.pop_back();
            g.add_edge(e.u, e.v);
        }
    };
    UGraph g = n.graph();
    rec(g, 0);
    return found;
}

// Reason the certificate fails, or nothing.
inline std::optional<std::string> certificate_problem(const PhyloNetwork& n, const PhyloTree& t, const DisplayCertificate& c) {
    const UGraph& g = n.graph();
    if (c.deleted.size() != reticulation_number(n)) return "E' has " + std::to_string(c.deleted.size()) + " edges, r(N) is " + std::to_string(reticulation_number(n));
    UGraph rest = g;
    for (Edge e : c.deleted) {
        if (!rest.has_edge(e)) return "deleted edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " is not in N";
        rest.remove_edge(e.u, e.v);
    }
    if (!is_connected(rest)) return "N - E' is disconnected";
    if (rest.edge_count() + 1 != rest.vertex_count()) return "N - E' is not a spanning tree";
    if (!(rest == c.spanning_tree)) return "recorded spanning tree differs from N - E'";
    UGraph pruned = detail::suppress_unlabelled_degree2(detail::prune_unlabelled_leaves(rest));
    if (!detail::same_tree(pruned, t)) return "pruned spanning tree is not the tree";
    return std::nullopt;
}

// ---- embedding surjection ------------------------------------------------

struct EmbeddingReport {
    std::map<VertexId, VertexId> f;  // subdivision vertex -> tree vertex (of the root-stripped tree)
    bool fixes_taxa = false;         // f(l) = l
    bool connected_preimages = false;  // disjoint by construction; each induces a connected subtree
    bool unique_edge_images = false;   // each tree edge has exactly one preimage edge
    bool surjective = false;
    bool ok() const { return fixes_taxa && connected_preimages && unique_edge_images && surjective; }
};

// Branch vertices map through the isomorphism; a degree-2 vertex on the path
// for tree edge {a,b} goes to the nearer endpoint, ties to the smaller tree
// vertex id.
inline EmbeddingReport extract_embedding(const PhyloTree& t0, const DisplayCertificate& c) {
    PhyloTree t = strip_roots(t0);
    const UGraph& s = c.subdivision;
    UGraph p = detail::suppress_unlabelled_degree2(s);
    auto iso = find_isomorphism(p, t.graph());
    if (!iso) throw Error("certificate does not embed the tree");
    EmbeddingReport rep;
    for (auto [a, b] : *iso) rep.f[a] = b;
    // walk each path between branch vertices
    for (VertexId a : p.vertices())
        for (VertexId first : s.neighbors(a)) {
            if (rep.f.count(first)) continue;
            std::vector<VertexId> path{a, first};
            while (!rep.f.count(path.back())) {
                const auto& nb = s.neighbors(path.back());
                path.push_back(nb[0] == path[path.size() - 2] ? nb[1] : nb[0]);
            }
            VertexId ta = rep.f[a], tb = rep.f[path.back()];
            std::size_t m = path.size() - 1;
            for (std::size_t i = 1; i < m; ++i) {
                bool to_a = i < m - i || (i == m - i && ta < tb);
                rep.f[path[i]] = to_a ? ta : tb;
            }
        }

    const UGraph& tg = t.graph();
    rep.fixes_taxa = true;
    for (VertexId v : s.vertices())
        if (s.is_labelled(v)) rep.fixes_taxa &= tg.is_labelled(rep.f.at(v)) && *tg.label(rep.f.at(v)) == *s.label(v);
    std::map<VertexId, VertexSet> pre;
    for (auto [x, y] : rep.f) pre[y].push_back(x);
    rep.surjective = pre.size() == tg.vertex_count() && rep.f.size() == s.vertex_count();
    rep.connected_preimages = true;
    for (auto& [y, xs] : pre) rep.connected_preimages &= is_connected(induced_subgraph(s, make_vertex_set(xs)));
    std::map<Edge, int> images;
    for (Edge e : s.edges()) {
        VertexId x = rep.f.at(e.u), y = rep.f.at(e.v);
        if (x != y) ++images[make_edge(x, y)];
    }
    rep.unique_edge_images = images.size() == tg.edge_count();
    for (Edge e : tg.edges()) rep.unique_edge_images &= images[e] == 1;
    return rep;
}

// ---- treewidth bounds for displayed trees --------------------------------

struct DisplayBounds {
    int tw_display = 0;
    int tw_network = 0;
    int r = 0;
    TreeDecomposition via_reticulations;  // width <= r + 2
    TreeDecomposition via_network;        // width <= 2 tw(N) + 1
    bool reticulation_bound() const { return tw_display <= r + 2; }
    bool network_bound() const { return tw_display <= 2 * tw_network + 1; }
    int slack() const { return std::min(2 * tw_network + 1, r + 2) - tw_display; }
};

// Exact tw(D(N,T)) and tw(N), plus both decompositions the bounds come
// from, built explicitly and validated. Throws unless N displays T.
inline DisplayBounds check_display_bounds(const PhyloNetwork& n, const PhyloTree& t0, const DisplayCertificate& c, const TwOptions& opt = {}) {
    if (auto why = certificate_problem(n, t0, c)) throw Error("not a display certificate: " + *why);
    PhyloTree t = strip_roots(t0);
    DisplayGraph d = build_display_graph(n.graph(), t.graph());
    DisplayBounds b;
    b.r = static_cast<int>(reticulation_number(n));
    b.tw_display = exact_treewidth(d.graph, opt).upper;
    TwResult tn = exact_treewidth(n.graph(), opt);
    b.tw_network = tn.upper;

    // Width-2 decomposition of D(N - E', T), then one endpoint of every
    // deleted edge added to every bag.
    {
        DisplayGraph dt = build_display_graph(c.spanning_tree, t.graph());
        TreeDecomposition base = exact_treewidth(dt.graph, opt).decomposition;
        if (dt.from_first != d.from_first || dt.from_second != d.from_second) throw Error("internal: display graphs numbered differently");
        for (Edge e : c.deleted)
            for (auto& bag : base.bags) bag.push_back(d.from_first.at(e.u));
        for (auto& bag : base.bags) bag = make_vertex_set(bag);
        b.via_reticulations = base;
    }
    // Each bag of N's decomposition gains f(x) for every subdivision vertex x in it.
    {
        EmbeddingReport emb = extract_embedding(t, c);
        TreeDecomposition out = tn.decomposition;
        for (auto& bag : out.bags) {
            VertexSet nb;
            for (VertexId x : bag) {
                nb.push_back(d.from_first.at(x));
                if (auto it = emb.f.find(x); it != emb.f.end()) nb.push_back(d.from_second.at(it->second));
            }
            bag = make_vertex_set(nb);
        }
        b.via_network = out;
    }
    for (const auto* dec : {&b.via_reticulations, &b.via_network}) {
        Validation v = validate(*dec, d.graph);
        if (!v.ok) throw Error("internal: constructed decomposition invalid: " + v.violation);
    }
    if (b.via_reticulations.width() > b.r + 2 || b.via_network.width() > 2 * b.tw_network + 1)
        throw Error("internal: constructed decomposition exceeds its bound");
    return b;
}

// A network that does not display the tree while tw(D(N,T)) = tw(N), found
// by seeded search over random networks on `taxa` taxa with r reticulations.
struct NoDisplayWitness {
    PhyloNetwork network;
    PhyloTree tree;
    int tw = 0;
};

inline std::optional<NoDisplayWitness> find_nodisplay_equal_tw(std::size_t taxa, std::size_t r, std::size_t tries, std::uint64_t seed) {
    auto names = taxon_names(taxa);
    for (std::size_t i = 0; i < tries; ++i) {
        PhyloNetwork n = random_network(names, r, seed + 2 * i);
        PhyloTree t = random_tree(names, seed + 2 * i + 1);
        if (displays(n, t)) continue;
        int tn = treewidth(n.graph());
        int td = treewidth(build_display_graph(n, t).graph);
        if (td == tn) return NoDisplayWitness{n, t, td};
    }
    return std::nullopt;
}

}  // namespace twdist
