#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twdist/error.hpp"

namespace twdist {

using VertexId = std::uint32_t;

struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(VertexId a, VertexId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<VertexId>;

inline VertexSet make_vertex_set(std::vector<VertexId> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Undirected multigraph without self-loops. Ids are handed out in increasing
// order and never reused, so vertices keep their identity across edits.
class UGraph {
public:
    VertexId add_vertex() { return push(std::nullopt); }

    VertexId add_vertex(std::string label) {
        if (label.empty()) throw Error("empty taxon label");
        if (by_label_.count(label)) throw Error("duplicate taxon label '" + label + "'");
        VertexId v = push(label);
        by_label_.emplace(std::move(label), v);
        return v;
    }

    // Creates a vertex with a caller-chosen id (used by importers).
    void add_vertex_with_id(VertexId id, std::optional<std::string> label) {
        if (id < alive_.size() && alive_[id]) throw Error("duplicate vertex id " + std::to_string(id));
        if (label && label->empty()) throw Error("empty taxon label");
        if (label && by_label_.count(*label)) throw Error("duplicate taxon label '" + *label + "'");
        if (id >= alive_.size()) {
            alive_.resize(id + 1, false);
            adj_.resize(id + 1);
            labels_.resize(id + 1);
        }
        alive_[id] = true;
        labels_[id] = label;
        if (label) by_label_.emplace(*label, id);
        ++nv_;
    }

    void remove_vertex(VertexId v) {
        check(v);
        for (VertexId w : std::vector<VertexId>(adj_[v])) remove_edge(v, w);
        if (labels_[v]) by_label_.erase(*labels_[v]);
        labels_[v].reset();
        alive_[v] = false;
        --nv_;
    }

    void add_edge(VertexId a, VertexId b) {
        check(a);
        check(b);
        if (a == b) throw Error("self-loop at vertex " + std::to_string(a));
        adj_[a].push_back(b);
        adj_[b].push_back(a);
        ++ne_;
    }

    void add_edge(Edge e) { add_edge(e.u, e.v); }

    // Removes one occurrence of the edge.
    void remove_edge(VertexId a, VertexId b) {
        if (!contains(a) || !contains(b)) throw Error("edge not present");
        auto ia = std::find(adj_[a].begin(), adj_[a].end(), b);
        if (ia == adj_[a].end()) throw Error("edge not present");
        adj_[a].erase(ia);
        adj_[b].erase(std::find(adj_[b].begin(), adj_[b].end(), a));
        --ne_;
    }

    void remove_edge(Edge e) { remove_edge(e.u, e.v); }

    void set_label(VertexId v, std::string label) {
        check(v);
        if (label.empty()) throw Error("empty taxon label");
        auto it = by_label_.find(label);
        if (it != by_label_.end() && it->second != v) throw Error("duplicate taxon label '" + label + "'");
        clear_label(v);
        by_label_.emplace(label, v);
        labels_[v] = std::move(label);
    }

    void clear_label(VertexId v) {
        check(v);
        if (labels_[v]) by_label_.erase(*labels_[v]);
        labels_[v].reset();
    }

    bool contains(VertexId v) const { return v < alive_.size() && alive_[v]; }
    std::size_t vertex_count() const { return nv_; }
    std::size_t edge_count() const { return ne_; }
    VertexId id_bound() const { return static_cast<VertexId>(alive_.size()); }

    std::size_t degree(VertexId v) const {
        check(v);
        return adj_[v].size();
    }

    // Neighbours with multiplicity, in insertion order.
    const std::vector<VertexId>& neighbors(VertexId v) const {
        check(v);
        return adj_[v];
    }

    std::size_t multiplicity(VertexId a, VertexId b) const {
        check(a);
        check(b);
        return static_cast<std::size_t>(std::count(adj_[a].begin(), adj_[a].end(), b));
    }

    bool adjacent(VertexId a, VertexId b) const { return multiplicity(a, b) > 0; }
    bool has_edge(Edge e) const { return contains(e.u) && contains(e.v) && adjacent(e.u, e.v); }

    std::vector<VertexId> vertices() const {
        std::vector<VertexId> out;
        out.reserve(nv_);
        for (VertexId v = 0; v < alive_.size(); ++v)
            if (alive_[v]) out.push_back(v);
        return out;
    }

    // Every edge once per occurrence, sorted.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(ne_);
        for (VertexId v = 0; v < alive_.size(); ++v) {
            if (!alive_[v]) continue;
            for (VertexId w : adj_[v])
                if (v < w) out.push_back({v, w});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    const std::optional<std::string>& label(VertexId v) const {
        check(v);
        return labels_[v];
    }

    bool is_labelled(VertexId v) const { return label(v).has_value(); }

    std::optional<VertexId> find(std::string_view label) const {
        auto it = by_label_.find(label);
        if (it == by_label_.end()) return std::nullopt;
        return it->second;
    }

    VertexId vertex_of(std::string_view label) const {
        auto v = find(label);
        if (!v) throw Error("unknown taxon '" + std::string(label) + "'");
        return *v;
    }

    // Labels in lexicographic order.
    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        out.reserve(by_label_.size());
        for (const auto& [l, v] : by_label_) out.push_back(l);
        return out;
    }

    std::size_t label_count() const { return by_label_.size(); }

    // In-place primitives; the free functions below wrap them with value semantics.

    VertexId subdivide(Edge e) {
        remove_edge(e);
        VertexId w = add_vertex();
        add_edge(e.u, w);
        add_edge(w, e.v);
        return w;
    }

    // Returns the surviving vertex.
    VertexId contract(Edge e) {
        if (!has_edge(e)) throw Error("edge not present");
        if (labels_[e.u] && labels_[e.v]) throw Error("cannot contract an edge between two taxa");
        VertexId keep = e.u, gone = e.v;
        if (labels_[gone] && !labels_[keep]) std::swap(keep, gone);
        for (VertexId w : std::vector<VertexId>(adj_[gone])) {
            remove_edge(gone, w);
            if (w != keep) add_edge(keep, w);
        }
        remove_vertex(gone);
        return keep;
    }

    Edge suppress(VertexId v) {
        check(v);
        if (adj_[v].size() != 2) throw Error("vertex " + std::to_string(v) + " does not have degree 2");
        VertexId a = adj_[v][0], b = adj_[v][1];
        if (a == b) throw Error("suppression would create a self-loop");
        remove_vertex(v);
        add_edge(a, b);
        return make_edge(a, b);
    }

    friend bool operator==(const UGraph& x, const UGraph& y) {
        if (x.vertices() != y.vertices() || x.edges() != y.edges()) return false;
        for (VertexId v : x.vertices())
            if (x.labels_[v] != y.labels_[v]) return false;
        return true;
    }

private:
    VertexId push(std::optional<std::string> label) {
        alive_.push_back(true);
        adj_.emplace_back();
        labels_.push_back(std::move(label));
        ++nv_;
        return static_cast<VertexId>(alive_.size() - 1);
    }

    void check(VertexId v) const {
        if (!contains(v)) throw Error("unknown vertex " + std::to_string(v));
    }

    std::vector<bool> alive_;
    std::vector<std::vector<VertexId>> adj_;
    std::vector<std::optional<std::string>> labels_;
    std::map<std::string, VertexId, std::less<>> by_label_;
    std::size_t nv_ = 0;
    std::size_t ne_ = 0;
};

// ---- value-returning operations -------------------------------------------

inline UGraph delete_edge(UGraph g, Edge e) {
    g.remove_edge(e);
    return g;
}

inline UGraph contract_edge(UGraph g, Edge e) {
    g.contract(e);
    return g;
}

// Labelled vertices are refused unless the caller opts in.
inline UGraph suppress_degree2(UGraph g, VertexId v, bool allow_labelled = false) {
    if (!allow_labelled && g.is_labelled(v)) throw Error("refusing to suppress taxon vertex " + std::to_string(v));
    g.suppress(v);
    return g;
}

inline UGraph subdivide_edge(UGraph g, Edge e) {
    g.subdivide(e);
    return g;
}

// Collapses parallel edges.
inline UGraph simplify(const UGraph& g) {
    UGraph out = g;
    for (Edge e : g.edges())
        while (out.multiplicity(e.u, e.v) > 1) out.remove_edge(e);
    return out;
}

inline UGraph induced_subgraph(const UGraph& g, const VertexSet& keep) {
    UGraph out = g;
    std::vector<bool> in(g.id_bound(), false);
    for (VertexId v : keep) {
        if (!g.contains(v)) throw Error("unknown vertex " + std::to_string(v));
        in[v] = true;
    }
    for (VertexId v : g.vertices())
        if (!in[v]) out.remove_vertex(v);
    return out;
}

inline UGraph remove_vertices(const UGraph& g, const VertexSet& drop) {
    UGraph out = g;
    for (VertexId v : drop) {
        if (!g.contains(v)) throw Error("unknown vertex " + std::to_string(v));
        if (out.contains(v)) out.remove_vertex(v);
    }
    return out;
}

inline std::vector<VertexSet> connected_components(const UGraph& g) {
    std::vector<VertexSet> comps;
    std::vector<bool> seen(g.id_bound(), false);
    for (VertexId s : g.vertices()) {
        if (seen[s]) continue;
        VertexSet comp;
        std::vector<VertexId> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (VertexId w : g.neighbors(v))
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

inline bool is_connected(const UGraph& g) { return connected_components(g).size() <= 1; }

inline bool is_separator(const UGraph& g, const VertexSet& s) {
    for (VertexId v : s)
        if (!g.contains(v)) throw Error("vertex " + std::to_string(v) + " not in graph");
    return connected_components(remove_vertices(g, s)).size() > connected_components(g).size();
}

// |E| - |V| + #components; parallel pairs count as cycles.
inline std::size_t cycle_rank(const UGraph& g) {
    return g.edge_count() + connected_components(g).size() - g.vertex_count();
}

inline bool is_forest(const UGraph& g) { return cycle_rank(g) == 0; }

inline bool is_unique_triangle_graph(const UGraph& g) {
    if (cycle_rank(g) != 1) return false;
    // Peel to the 2-core; with cycle rank one that is exactly the cycle.
    UGraph core = g;
    bool changed = true;
    while (changed) {
        changed = false;
        for (VertexId v : core.vertices())
            if (core.degree(v) <= 1) {
                core.remove_vertex(v);
                changed = true;
            }
    }
    if (core.vertex_count() != 3) return false;
    for (VertexId v : core.vertices())
        if (g.degree(v) == 2) return true;
    return false;
}

// Blocks as subgraphs that keep the original vertex ids. Isolated vertices
// belong to no block.
inline std::vector<UGraph> biconnected_components(const UGraph& g) {
    std::vector<Edge> edges = g.edges();
    std::vector<std::vector<std::pair<VertexId, std::size_t>>> inc(g.id_bound());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        inc[edges[i].u].push_back({edges[i].v, i});
        inc[edges[i].v].push_back({edges[i].u, i});
    }
    std::vector<int> disc(g.id_bound(), -1), low(g.id_bound(), 0);
    std::vector<std::size_t> edge_stack;
    std::vector<std::vector<std::size_t>> blocks;
    int timer = 0;

    std::function<void(VertexId, std::size_t)> dfs = [&](VertexId v, std::size_t via) {
        disc[v] = low[v] = timer++;
        for (auto [w, ei] : inc[v]) {
            if (ei == via) continue;
            if (disc[w] == -1) {
                edge_stack.push_back(ei);
                dfs(w, ei);
                low[v] = std::min(low[v], low[w]);
                if (low[w] >= disc[v]) {
                    std::vector<std::size_t> block;
                    std::size_t top;
                    do {
                        top = edge_stack.back();
                        edge_stack.pop_back();
                        block.push_back(top);
                    } while (top != ei);
                    blocks.push_back(std::move(block));
                }
            } else if (disc[w] < disc[v]) {
                edge_stack.push_back(ei);
                low[v] = std::min(low[v], disc[w]);
            }
        }
    };
    for (VertexId v : g.vertices())
        if (disc[v] == -1) dfs(v, static_cast<std::size_t>(-1));

    std::vector<UGraph> out;
    for (const auto& block : blocks) {
        VertexSet vs;
        for (std::size_t ei : block) {
            vs.push_back(edges[ei].u);
            vs.push_back(edges[ei].v);
        }
        vs = make_vertex_set(std::move(vs));
        UGraph b = induced_subgraph(g, vs);
        for (Edge e : b.edges()) b.remove_edge(e);
        for (std::size_t ei : block) b.add_edge(edges[ei]);
        out.push_back(std::move(b));
    }
    return out;
}

// ---- isomorphism -------------------------------------------------------------

namespace detail {

struct Dense {
    std::vector<VertexId> ids;
    std::vector<std::vector<int>> mult;
    std::vector<std::string> label;  // empty when unlabelled
    std::vector<int> degree;
};

inline Dense densify(const UGraph& g) {
    Dense d;
    d.ids = g.vertices();
    std::size_t n = d.ids.size();
    std::vector<int> index(g.id_bound(), -1);
    for (std::size_t i = 0; i < n; ++i) index[d.ids[i]] = static_cast<int>(i);
    d.mult.assign(n, std::vector<int>(n, 0));
    d.label.resize(n);
    d.degree.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        VertexId v = d.ids[i];
        d.degree[i] = static_cast<int>(g.degree(v));
        if (g.label(v)) d.label[i] = "#" + *g.label(v);
        for (VertexId w : g.neighbors(v)) ++d.mult[i][index[w]];
    }
    return d;
}

// Joint colour refinement on two graphs so colours are comparable.
inline bool refine(const Dense& a, const Dense& b, std::vector<int>& ca, std::vector<int>& cb) {
    std::size_t n = a.ids.size();
    std::size_t classes = 0;
    for (;;) {
        using Sig = std::pair<int, std::vector<std::pair<int, int>>>;
        auto signature = [&](const Dense& d, const std::vector<int>& c, std::size_t i) {
            Sig s{c[i], {}};
            for (std::size_t j = 0; j < n; ++j)
                if (d.mult[i][j]) s.second.push_back({c[j], d.mult[i][j]});
            std::sort(s.second.begin(), s.second.end());
            return s;
        };
        std::map<Sig, int> ids;
        std::vector<Sig> sa(n), sb(n);
        for (std::size_t i = 0; i < n; ++i) {
            sa[i] = signature(a, ca, i);
            sb[i] = signature(b, cb, i);
            ids.emplace(sa[i], 0);
            ids.emplace(sb[i], 0);
        }
        int next = 0;
        for (auto& [s, id] : ids) id = next++;
        std::vector<int> na(n), nb(n), count(next, 0);
        for (std::size_t i = 0; i < n; ++i) {
            na[i] = ids[sa[i]];
            nb[i] = ids[sb[i]];
            ++count[na[i]];
            --count[nb[i]];
        }
        for (int c : count)
            if (c != 0) return false;
        ca = std::move(na);
        cb = std::move(nb);
        if (static_cast<std::size_t>(next) == classes) return true;
        classes = static_cast<std::size_t>(next);
    }
}

inline bool match(const Dense& a, const Dense& b, std::vector<int> ca, std::vector<int> cb, std::vector<int>& out) {
    if (!refine(a, b, ca, cb)) return false;
    std::size_t n = a.ids.size();
    // Pick the smallest non-singleton class.
    std::map<int, int> size;
    for (int c : ca) ++size[c];
    int pick = -1, best = 1 << 30;
    for (auto [c, s] : size)
        if (s > 1 && s < best) {
            best = s;
            pick = c;
        }
    if (pick < 0) {
        std::vector<int> pos(size.size() + 1, -1);
        std::map<int, int> where;
        for (std::size_t j = 0; j < n; ++j) where[cb[j]] = static_cast<int>(j);
        std::vector<int> m(n);
        for (std::size_t i = 0; i < n; ++i) m[i] = where[ca[i]];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (a.mult[i][j] != b.mult[m[i]][m[j]]) return false;
        out = std::move(m);
        return true;
    }
    std::size_t x = 0;
    while (ca[x] != pick) ++x;
    int fresh = static_cast<int>(2 * n + 5);
    for (std::size_t y = 0; y < n; ++y) {
        if (cb[y] != pick) continue;
        std::vector<int> ca2 = ca, cb2 = cb;
        ca2[x] = fresh;
        cb2[y] = fresh;
        if (match(a, b, ca2, cb2, out)) return true;
    }
    return false;
}

}  // namespace detail

// Label-preserving isomorphism (unlabelled vertices map freely). Returns the
// vertex mapping from a to b when one exists.
inline std::optional<std::map<VertexId, VertexId>> find_isomorphism(const UGraph& a, const UGraph& b) {
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return std::nullopt;
    if (a.labels() != b.labels()) return std::nullopt;
    detail::Dense da = detail::densify(a), db = detail::densify(b);
    std::map<std::string, int> init;
    for (std::size_t i = 0; i < da.ids.size(); ++i) {
        init.emplace(da.label[i], 0);
        init.emplace(db.label[i], 0);
    }
    int next = 0;
    for (auto& [l, id] : init) id = next++;
    std::vector<int> ca(da.ids.size()), cb(db.ids.size());
    for (std::size_t i = 0; i < da.ids.size(); ++i) {
        ca[i] = init[da.label[i]];
        cb[i] = init[db.label[i]];
    }
    std::vector<int> m;
    if (!detail::match(da, db, ca, cb, m)) return std::nullopt;
    std::map<VertexId, VertexId> out;
    for (std::size_t i = 0; i < m.size(); ++i) out[da.ids[i]] = db.ids[m[i]];
    return out;
}

inline bool isomorphic(const UGraph& a, const UGraph& b) { return find_isomorphism(a, b).has_value(); }

// Canonical code for small graphs: the lexicographically least multiplicity
// matrix over all orderings that list vertices by (label, degree).
inline std::vector<std::string> small_canonical_form(const UGraph& g) {
    detail::Dense d = detail::densify(g);
    std::size_t n = d.ids.size();
    if (n > 10) throw SizeLimitExceeded("canonical form is limited to 10 vertices");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](int i) { return std::make_pair(d.label[i], d.degree[i]); };
    std::sort(order.begin(), order.end(), [&](int x, int y) { return key(x) < key(y); });
    std::vector<std::pair<std::size_t, std::size_t>> groups;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && key(order[j]) == key(order[i])) ++j;
        groups.push_back({i, j});
        i = j;
    }
    std::vector<std::string> header;
    for (int i : order) header.push_back(d.label[i] + "/" + std::to_string(d.degree[i]));
    std::string best;
    bool have = false;
    std::function<void(std::size_t)> rec = [&](std::size_t gi) {
        if (gi == groups.size()) {
            std::string code;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) code.push_back(static_cast<char>('0' + d.mult[order[i]][order[j]]));
            if (!have || code < best) {
                best = code;
                have = true;
            }
            return;
        }
        auto [lo, hi] = groups[gi];
        std::sort(order.begin() + lo, order.begin() + hi);
        do {
            rec(gi + 1);
        } while (std::next_permutation(order.begin() + lo, order.begin() + hi));
    };
    rec(0);
    header.push_back(best);
    return header;
}

// DOT rendering. `color` may return an empty string for uncoloured vertices.
inline std::string to_dot(const UGraph& g, const std::function<std::string(VertexId)>& color = {}) {
    std::string out = "graph G {\n";
    for (VertexId v : g.vertices()) {
        out += "  " + std::to_string(v) + " [";
        if (g.label(v))
            out += "shape=box,label=\"" + *g.label(v) + "\"";
        else
            out += "shape=circle,label=\"" + std::to_string(v) + "\"";
        std::string c = color ? color(v) : std::string();
        if (!c.empty()) out += ",color=" + c;
        out += "];\n";
    }
    for (Edge e : g.edges()) out += "  " + std::to_string(e.u) + " -- " + std::to_string(e.v) + ";\n";
    out += "}\n";
    return out;
}

}  // namespace twdist
