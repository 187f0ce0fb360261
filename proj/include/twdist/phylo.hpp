#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twdist/error.hpp"
#include "twdist/graph.hpp"

namespace twdist {

using TaxonSet = std::vector<std::string>;  // sorted, distinct

inline TaxonSet make_taxon_set(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline bool plain_label_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '|' || c == '-';
}

// Newick spelling of a taxon label: bare when possible, else single-quoted.
inline std::string quote_label(std::string_view s) {
    if (!s.empty() && std::all_of(s.begin(), s.end(), plain_label_char)) return std::string(s);
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += '\'';
        out += c;
    }
    return out + "'";
}

namespace detail {

inline void check_tree_shape(const UGraph& g, const VertexSet& roots) {
    if (g.label_count() == 0) throw Error("a tree needs at least one taxon");
    if (!is_connected(g)) throw Error("tree is not connected");
    if (g.edge_count() + 1 != g.vertex_count()) throw Error("tree contains a cycle");
    for (VertexId v : g.vertices()) {
        std::size_t d = g.degree(v);
        if (g.is_labelled(v)) {
            if (d > 1) throw Error("taxon '" + *g.label(v) + "' is not a leaf");
        } else if (d == 2) {
            if (!std::binary_search(roots.begin(), roots.end(), v)) throw Error("not unrooted binary: vertex " + std::to_string(v) + " has degree 2");
        } else if (d != 3) {
            throw Error("not unrooted binary: vertex " + std::to_string(v) + " has degree " + std::to_string(d));
        }
    }
    for (VertexId r : roots)
        if (!g.contains(r) || g.degree(r) != 2 || g.is_labelled(r)) throw Error("designated root must be an unlabelled degree-2 vertex");
}

}  // namespace detail

// Unrooted binary phylogenetic tree. Designated degree-2 "roots" are allowed
// only when a construction asks for them.
class PhyloTree {
public:
    PhyloTree() = default;

    explicit PhyloTree(UGraph g, VertexSet roots = {}) : g_(std::move(g)), roots_(make_vertex_set(std::move(roots))) {
        detail::check_tree_shape(g_, roots_);
        taxa_ = g_.labels();
    }

    const UGraph& graph() const { return g_; }
    const TaxonSet& taxa() const { return taxa_; }
    std::size_t size() const { return taxa_.size(); }
    const VertexSet& roots() const { return roots_; }

    VertexId leaf(std::string_view x) const { return g_.vertex_of(x); }

    // The unique neighbour of a leaf.
    VertexId parent(std::string_view x) const {
        VertexId v = leaf(x);
        if (g_.degree(v) != 1) throw Error("taxon '" + std::string(x) + "' has no parent");
        return g_.neighbors(v)[0];
    }

    // Label-anchored canonical string: equal iff label-preserving isomorphic.
    std::string canonical() const {
        VertexId start = leaf(taxa_.front());
        if (g_.degree(start) == 0) return quote_label(taxa_.front());
        return quote_label(taxa_.front()) + ":" + encode(g_.neighbors(start)[0], start);
    }

private:
    std::string encode(VertexId v, VertexId from) const {
        if (g_.is_labelled(v)) return quote_label(*g_.label(v));
        std::vector<std::string> parts;
        for (VertexId w : g_.neighbors(v))
            if (w != from) parts.push_back(encode(w, v));
        std::sort(parts.begin(), parts.end());
        std::string out = "(";
        for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
        return out + ")";
    }

    UGraph g_;
    VertexSet roots_;
    TaxonSet taxa_;
};

// Unrooted binary phylogenetic network (simple, connected).
class PhyloNetwork {
public:
    PhyloNetwork() = default;

    explicit PhyloNetwork(UGraph g) : g_(std::move(g)) {
        if (g_.label_count() == 0) throw Error("a network needs at least one taxon");
        if (!is_connected(g_)) throw Error("network is not connected");
        for (Edge e : g_.edges())
            if (g_.multiplicity(e.u, e.v) > 1) throw Error("network has parallel edges");
        bool single = g_.vertex_count() == 1;
        for (VertexId v : g_.vertices()) {
            std::size_t d = g_.degree(v);
            if (g_.is_labelled(v)) {
                if (d != 1 && !single) throw Error("labelled vertex '" + *g_.label(v) + "' must be a leaf");
            } else if (d == 1) {
                throw Error("unlabelled leaf " + std::to_string(v));
            } else if (d != 3) {
                throw Error("internal vertex " + std::to_string(v) + " has degree " + std::to_string(d) + ", expected 3");
            }
        }
        taxa_ = g_.labels();
    }

    explicit PhyloNetwork(const PhyloTree& t) : PhyloNetwork(strip_roots_graph(t)) {}

    const UGraph& graph() const { return g_; }
    const TaxonSet& taxa() const { return taxa_; }
    std::size_t size() const { return taxa_.size(); }

private:
    static UGraph strip_roots_graph(const PhyloTree& t) {
        UGraph g = t.graph();
        for (VertexId r : t.roots()) g.suppress(r);
        return g;
    }

    UGraph g_;
    TaxonSet taxa_;
};

inline void require_same_taxa(const TaxonSet& a, const TaxonSet& b) {
    if (a == b) return;
    std::vector<std::string> diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
    std::string msg = "taxon sets differ:";
    for (const auto& d : diff) msg += " " + d;
    throw Error(msg);
}

// Same tree with designated roots suppressed.
inline PhyloTree strip_roots(const PhyloTree& t) {
    if (t.roots().empty()) return t;
    UGraph g = t.graph();
    for (VertexId r : t.roots()) g.suppress(r);
    return PhyloTree(std::move(g));
}

inline std::size_t reticulation_number(const PhyloNetwork& n) {
    return n.graph().edge_count() + 1 - n.graph().vertex_count();
}

inline std::size_t level(const PhyloNetwork& n) {
    std::size_t best = 0;
    for (const UGraph& b : biconnected_components(n.graph())) best = std::max(best, b.edge_count() + 1 - b.vertex_count());
    return best;
}

// ---- restriction and comparison --------------------------------------------

// T|Y keeping the surviving vertex ids.
inline PhyloTree restrict(const PhyloTree& t, const std::vector<std::string>& y) {
    TaxonSet ys = make_taxon_set(y);
    if (ys.empty()) throw Error("cannot restrict to an empty taxon set");
    for (const auto& x : ys)
        if (!std::binary_search(t.taxa().begin(), t.taxa().end(), x)) throw Error("taxon '" + x + "' is not in the tree");
    UGraph g = t.graph();
    auto keep = [&](VertexId v) { return g.label(v) && std::binary_search(ys.begin(), ys.end(), *g.label(v)); };
    std::vector<VertexId> stack = g.vertices();
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        if (!g.contains(v) || keep(v) || g.degree(v) > 1) continue;
        std::vector<VertexId> nb = g.neighbors(v);
        g.remove_vertex(v);
        for (VertexId w : nb) stack.push_back(w);
    }
    for (VertexId v : g.vertices())
        if (!g.is_labelled(v) && g.degree(v) == 2) g.suppress(v);
    return PhyloTree(std::move(g));
}

inline bool is_compatible(const PhyloTree& a, const PhyloTree& b) {
    require_same_taxa(a.taxa(), b.taxa());
    return strip_roots(a).canonical() == strip_roots(b).canonical();
}

struct Quartet {
    std::array<std::string, 2> pair1;
    std::array<std::string, 2> pair2;

    static Quartet make(std::string a, std::string b, std::string c, std::string d) {
        std::array<std::string, 2> p{std::move(a), std::move(b)}, q{std::move(c), std::move(d)};
        std::sort(p.begin(), p.end());
        std::sort(q.begin(), q.end());
        if (q < p) std::swap(p, q);
        return {p, q};
    }

    std::string str() const { return pair1[0] + "," + pair1[1] + "|" + pair2[0] + "," + pair2[1]; }
    friend auto operator<=>(const Quartet&, const Quartet&) = default;
};

namespace detail {

// Pairwise path lengths between leaves.
inline std::map<std::string, std::map<std::string, int>> leaf_distances(const PhyloTree& t) {
    std::map<std::string, std::map<std::string, int>> out;
    const UGraph& g = t.graph();
    for (const auto& x : t.taxa()) {
        std::vector<int> dist(g.id_bound(), -1);
        std::vector<VertexId> queue{t.leaf(x)};
        dist[queue[0]] = 0;
        for (std::size_t i = 0; i < queue.size(); ++i)
            for (VertexId w : g.neighbors(queue[i]))
                if (dist[w] < 0) {
                    dist[w] = dist[queue[i]] + 1;
                    queue.push_back(w);
                }
        for (const auto& y : t.taxa()) out[x][y] = dist[t.leaf(y)];
    }
    return out;
}

}  // namespace detail

// Quartet topologies by the four-point condition on path lengths.
inline std::vector<Quartet> quartets(const PhyloTree& t) {
    if (t.size() < 4) throw Error("quartets need at least 4 taxa");
    auto d = detail::leaf_distances(t);
    const auto& x = t.taxa();
    std::vector<Quartet> out;
    std::size_t n = x.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t e = c + 1; e < n; ++e) {
                    const auto &A = x[a], &B = x[b], &C = x[c], &D = x[e];
                    int s1 = d[A][B] + d[C][D], s2 = d[A][C] + d[B][D], s3 = d[A][D] + d[B][C];
                    if (s1 < s2 && s1 < s3)
                        out.push_back(Quartet::make(A, B, C, D));
                    else if (s2 < s1 && s2 < s3)
                        out.push_back(Quartet::make(A, C, B, D));
                    else
                        out.push_back(Quartet::make(A, D, B, C));
                }
    std::sort(out.begin(), out.end());
    return out;
}

// ---- splits -----------------------------------------------------------------

struct Split {
    TaxonSet left;   // holds the smallest taxon
    TaxonSet right;

    static Split make(TaxonSet a, TaxonSet b) {
        a = make_taxon_set(std::move(a));
        b = make_taxon_set(std::move(b));
        if (a.empty() || b.empty()) throw Error("split sides must be non-empty");
        if (b.front() < a.front()) std::swap(a, b);
        return {std::move(a), std::move(b)};
    }

    bool nontrivial() const { return left.size() >= 2 && right.size() >= 2; }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < left.size(); ++i) s += (i ? "," : "") + left[i];
        s += "|";
        for (std::size_t i = 0; i < right.size(); ++i) s += (i ? "," : "") + right[i];
        return s;
    }

    friend auto operator<=>(const Split&, const Split&) = default;
};

inline Split parse_split(std::string_view text) {
    auto bar = text.find('|');
    if (bar == std::string_view::npos || text.find('|', bar + 1) != std::string_view::npos) throw Error("split must look like \"a,b|c,d\"");
    auto side = [](std::string_view s) {
        TaxonSet out;
        std::size_t start = 0;
        while (start <= s.size()) {
            auto comma = s.find(',', start);
            if (comma == std::string_view::npos) comma = s.size();
            std::string tok(s.substr(start, comma - start));
            if (tok.empty()) throw Error("empty taxon in split");
            out.push_back(tok);
            start = comma + 1;
        }
        return out;
    };
    return Split::make(side(text.substr(0, bar)), side(text.substr(bar + 1)));
}

struct EdgeSplit {
    Split split;
    Edge edge;
};

// The bipartition induced by every edge of the tree.
inline std::vector<EdgeSplit> edge_splits(const PhyloTree& t) {
    const UGraph& g = t.graph();
    std::vector<EdgeSplit> out;
    for (Edge e : g.edges()) {
        UGraph h = g;
        h.remove_edge(e);
        TaxonSet side_u, side_v;
        std::vector<bool> seen(g.id_bound(), false);
        std::vector<VertexId> stack{e.u};
        seen[e.u] = true;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            if (h.label(v)) side_u.push_back(*h.label(v));
            for (VertexId w : h.neighbors(v))
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        for (const auto& x : t.taxa())
            if (!seen[t.leaf(x)]) side_v.push_back(x);
        out.push_back({Split::make(side_u, side_v), e});
    }
    return out;
}

inline std::vector<Split> splits(const PhyloTree& t) {
    std::vector<Split> out;
    for (const auto& es : edge_splits(t))
        if (es.split.nontrivial()) out.push_back(es.split);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct SplitWitness {
    Split split;
    Edge first;   // edge of the first tree inducing the split
    Edge second;  // same in the second tree
};

inline std::vector<SplitWitness> common_splits(const PhyloTree& a, const PhyloTree& b) {
    require_same_taxa(a.taxa(), b.taxa());
    std::map<Split, Edge> in_b;
    for (const auto& es : edge_splits(b))
        if (es.split.nontrivial()) in_b.emplace(es.split, es.edge);
    std::map<Split, SplitWitness> found;
    for (const auto& es : edge_splits(a)) {
        if (!es.split.nontrivial()) continue;
        auto it = in_b.find(es.split);
        if (it != in_b.end()) found.emplace(es.split, SplitWitness{es.split, es.edge, it->second});
    }
    std::vector<SplitWitness> out;
    for (auto& [s, w] : found) out.push_back(w);
    return out;
}

// ---- chains -----------------------------------------------------------------

struct Chain {
    std::vector<std::string> taxa;
    std::vector<VertexId> parents_first;
    std::vector<VertexId> parents_second;

    std::size_t length() const { return taxa.size(); }
};

namespace detail {

// Taxa whose parent carries no other taxon.
inline bool lone_child(const PhyloTree& t, const std::string& x) {
    if (t.size() < 3) return false;
    VertexId p = t.parent(x);
    for (VertexId w : t.graph().neighbors(p))
        if (t.graph().is_labelled(w) && *t.graph().label(w) != x) return false;
    return true;
}

}  // namespace detail

// Is the sequence a chain in both trees? Each parent carries only its own
// taxon, and the parents are distinct and form a path in that order.
inline bool is_common_chain(const PhyloTree& a0, const PhyloTree& b0, const std::vector<std::string>& xs) {
    if (xs.size() < 2) return false;
    PhyloTree a = strip_roots(a0), b = strip_roots(b0);
    for (const PhyloTree* t : {&a, &b}) {
        std::vector<VertexId> ps;
        for (const auto& x : xs) {
            if (!std::binary_search(t->taxa().begin(), t->taxa().end(), x)) return false;
            if (t->graph().degree(t->leaf(x)) != 1 || !detail::lone_child(*t, x)) return false;
            ps.push_back(t->parent(x));
        }
        if (make_vertex_set(ps).size() != ps.size()) return false;
        for (std::size_t i = 0; i + 1 < ps.size(); ++i)
            if (!t->graph().adjacent(ps[i], ps[i + 1])) return false;
    }
    return true;
}

inline std::vector<Chain> find_common_chains(const PhyloTree& a0, const PhyloTree& b0) {
    require_same_taxa(a0.taxa(), b0.taxa());
    PhyloTree a = strip_roots(a0), b = strip_roots(b0);
    std::vector<std::string> lone;
    for (const auto& x : a.taxa())
        if (detail::lone_child(a, x) && detail::lone_child(b, x)) lone.push_back(x);
    std::map<std::string, std::vector<std::string>> link;
    for (std::size_t i = 0; i < lone.size(); ++i)
        for (std::size_t j = i + 1; j < lone.size(); ++j) {
            const auto &x = lone[i], &y = lone[j];
            if (a.graph().adjacent(a.parent(x), a.parent(y)) && b.graph().adjacent(b.parent(x), b.parent(y))) {
                link[x].push_back(y);
                link[y].push_back(x);
            }
        }
    std::vector<Chain> out;
    std::set<std::string> used;
    for (const auto& x : lone) {
        if (used.count(x) || link[x].size() > 1) continue;
        // x is an end of its path component
        std::vector<std::string> seq{x};
        used.insert(x);
        std::string prev, cur = x;
        for (;;) {
            std::string next;
            for (const auto& y : link[cur])
                if (y != prev) next = y;
            if (next.empty()) break;
            seq.push_back(next);
            used.insert(next);
            prev = cur;
            cur = next;
        }
        if (seq.size() < 3) continue;
        if (seq.back() < seq.front()) std::reverse(seq.begin(), seq.end());
        Chain c;
        c.taxa = seq;
        for (const auto& s : seq) {
            c.parents_first.push_back(a.parent(s));
            c.parents_second.push_back(b.parent(s));
        }
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const Chain& p, const Chain& q) { return p.taxa < q.taxa; });
    return out;
}

// ---- TBR --------------------------------------------------------------------

namespace detail {

struct CutState {
    UGraph g;
    VertexSet side1;  // holds cut.u (or what replaced it)
    VertexSet side2;
};

inline CutState cut_tree(const PhyloTree& t, Edge cut) {
    CutState st{t.graph(), {}, {}};
    if (!st.g.has_edge(cut)) throw Error("cut edge not present");
    st.g.remove_edge(cut);
    for (const auto& comp : connected_components(st.g))
        (std::binary_search(comp.begin(), comp.end(), cut.u) ? st.side1 : st.side2) = comp;
    for (VertexId x : {cut.u, cut.v})
        if (!st.g.is_labelled(x) && st.g.degree(x) == 2) {
            st.g.suppress(x);
            for (VertexSet* s : {&st.side1, &st.side2}) s->erase(std::remove(s->begin(), s->end(), x), s->end());
        }
    return st;
}

inline std::vector<std::optional<Edge>> attach_options(const CutState& st, const VertexSet& side) {
    if (side.size() == 1) return {std::nullopt};
    std::vector<std::optional<Edge>> out;
    for (Edge e : st.g.edges())
        if (std::binary_search(side.begin(), side.end(), e.u)) out.push_back(e);
    return out;
}

}  // namespace detail

// Cuts `cut`, then rejoins the side holding cut.u (at attach1) to the side
// holding cut.v (at attach2). Attach edges refer to each side after its cut
// endpoint has been suppressed; a side that is a single leaf takes nullopt.
inline PhyloTree tbr_move(const PhyloTree& t0, Edge cut, std::optional<Edge> attach1, std::optional<Edge> attach2) {
    PhyloTree t = strip_roots(t0);
    detail::CutState st = detail::cut_tree(t, make_edge(cut.u, cut.v));
    auto join_point = [&](const VertexSet& side, std::optional<Edge> at) -> VertexId {
        if (!at) {
            if (side.size() != 1) throw Error("attach edge required for a side with more than one vertex");
            return side.front();
        }
        Edge e = make_edge(at->u, at->v);
        if (!st.g.has_edge(e)) throw Error("attach edge not present");
        if (!std::binary_search(side.begin(), side.end(), e.u)) throw Error("attach edge on wrong side of the cut");
        return st.g.subdivide(e);
    };
    bool swapped = make_edge(cut.u, cut.v).u != cut.u;
    VertexId p1 = join_point(swapped ? st.side2 : st.side1, attach1);
    VertexId p2 = join_point(swapped ? st.side1 : st.side2, attach2);
    st.g.add_edge(p1, p2);
    return PhyloTree(std::move(st.g));
}

// All trees one TBR move away, up to isomorphism, excluding t.
inline std::vector<PhyloTree> tbr_unit_ball(const PhyloTree& t0) {
    if (t0.size() < 4) throw Error("unit ball needs at least 4 taxa");
    PhyloTree t = strip_roots(t0);
    std::map<std::string, PhyloTree> seen;
    std::string self = t.canonical();
    for (Edge cut : t.graph().edges()) {
        detail::CutState st = detail::cut_tree(t, cut);
        for (const auto& a1 : detail::attach_options(st, st.side1))
            for (const auto& a2 : detail::attach_options(st, st.side2)) {
                PhyloTree u = tbr_move(t, cut, a1, a2);
                std::string c = u.canonical();
                if (c != self) seen.emplace(c, std::move(u));
            }
    }
    std::vector<PhyloTree> out;
    for (auto& [c, u] : seen) out.push_back(std::move(u));
    return out;
}

// ---- generators -------------------------------------------------------------

inline PhyloTree random_tree(const std::vector<std::string>& taxa, std::uint64_t seed) {
    if (taxa.empty()) throw Error("random_tree needs at least one taxon");
    std::mt19937_64 rng(seed);
    UGraph g;
    VertexId first = g.add_vertex(taxa[0]);
    if (taxa.size() >= 2) g.add_edge(first, g.add_vertex(taxa[1]));
    for (std::size_t i = 2; i < taxa.size(); ++i) {
        auto es = g.edges();
        Edge e = es[std::uniform_int_distribution<std::size_t>(0, es.size() - 1)(rng)];
        VertexId w = g.subdivide(e);
        g.add_edge(w, g.add_vertex(taxa[i]));
    }
    return PhyloTree(std::move(g));
}

// Adds r edges, each between the subdivision points of two distinct edges.
inline PhyloNetwork random_network_over(const PhyloTree& t, std::size_t r, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    UGraph g = PhyloNetwork(t).graph();
    for (std::size_t i = 0; i < r; ++i) {
        auto es = g.edges();
        if (es.size() < 2) throw Error("tree too small to add reticulations");
        std::uniform_int_distribution<std::size_t> pick(0, es.size() - 1);
        std::size_t a = pick(rng), b = pick(rng);
        while (b == a) b = pick(rng);
        VertexId w1 = g.subdivide(es[a]);
        VertexId w2 = g.subdivide(es[b]);
        g.add_edge(w1, w2);
    }
    return PhyloNetwork(std::move(g));
}

inline PhyloNetwork random_network(const std::vector<std::string>& taxa, std::size_t r, std::uint64_t seed) {
    return random_network_over(random_tree(taxa, seed), r, seed ^ 0x9e3779b97f4a7c15ULL);
}

inline std::vector<std::string> taxon_names(std::size_t n, const std::string& prefix = "x") {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// (x1,x2),x3,...,(x_{n-1},x_n)
inline PhyloTree caterpillar(const std::vector<std::string>& taxa) {
    std::size_t n = taxa.size();
    if (n < 3) return random_tree(taxa, 0);
    UGraph g;
    std::vector<VertexId> spine;
    for (std::size_t i = 0; i + 2 < n; ++i) spine.push_back(g.add_vertex());
    for (std::size_t i = 0; i + 1 < spine.size(); ++i) g.add_edge(spine[i], spine[i + 1]);
    g.add_edge(spine.front(), g.add_vertex(taxa[0]));
    for (std::size_t i = 1; i + 1 < n; ++i) g.add_edge(spine[i - 1], g.add_vertex(taxa[i]));
    g.add_edge(spine.back(), g.add_vertex(taxa[n - 1]));
    return PhyloTree(std::move(g));
}

// Every topology on the taxa (by inserting leaves into every edge).
inline std::vector<PhyloTree> all_trees(const std::vector<std::string>& taxa) {
    if (taxa.size() < 3) return {random_tree(taxa, 0)};
    std::vector<UGraph> cur;
    {
        UGraph g;
        VertexId c = g.add_vertex();
        for (int i = 0; i < 3; ++i) g.add_edge(c, g.add_vertex(taxa[i]));
        cur.push_back(std::move(g));
    }
    for (std::size_t i = 3; i < taxa.size(); ++i) {
        std::vector<UGraph> next;
        for (const UGraph& g : cur)
            for (Edge e : g.edges()) {
                UGraph h = g;
                VertexId w = h.subdivide(e);
                h.add_edge(w, h.add_vertex(taxa[i]));
                next.push_back(std::move(h));
            }
        cur = std::move(next);
    }
    std::vector<PhyloTree> out;
    for (auto& g : cur) out.emplace_back(std::move(g));
    return out;
}

}  // namespace twdist
