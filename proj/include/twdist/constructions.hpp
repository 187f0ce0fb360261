#pragma once

// Tree pairs whose display graphs contain prescribed minors, the doubling
// family, and minor-model certificates.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "twdist/display_graph.hpp"
#include "twdist/error.hpp"
#include "twdist/graph.hpp"
#include "twdist/json_io.hpp"
#include "twdist/phylo.hpp"
#include "twdist/treewidth.hpp"

namespace twdist {

// ---- small pattern graphs ------------------------------------------------

inline UGraph complete_graph(std::size_t n) {
    UGraph g;
    for (std::size_t i = 0; i < n; ++i) g.add_vertex();
    for (VertexId a = 0; a < n; ++a)
        for (VertexId b = a + 1; b < n; ++b) g.add_edge(a, b);
    return g;
}

inline UGraph cycle_graph(std::size_t n) {
    if (n < 3) throw Error("a cycle needs at least 3 vertices");
    UGraph g;
    for (std::size_t i = 0; i < n; ++i) g.add_vertex();
    for (VertexId i = 0; i < n; ++i) g.add_edge(i, static_cast<VertexId>((i + 1) % n));
    return g;
}

inline UGraph petersen_graph() {
    UGraph g;
    for (int i = 0; i < 10; ++i) g.add_vertex();
    for (VertexId i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5);
        g.add_edge(i, i + 5);
        g.add_edge(i + 5, (i + 2) % 5 + 5);
    }
    return g;
}

// Vertex (r, c) has id r*k + c.
inline UGraph grid_graph(std::size_t k) {
    UGraph g;
    for (std::size_t i = 0; i < k * k; ++i) g.add_vertex();
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) {
            auto id = static_cast<VertexId>(r * k + c);
            if (c + 1 < k) g.add_edge(id, id + 1);
            if (r + 1 < k) g.add_edge(id, static_cast<VertexId>(id + k));
        }
    return g;
}

// ---- minor models --------------------------------------------------------

struct MinorModel {
    UGraph pattern;
    UGraph host;
    std::map<VertexId, VertexSet> branch_sets;
    // One host edge per pattern edge occurrence (parallel pattern edges need
    // distinct host edges).
    std::vector<std::pair<Edge, Edge>> edge_witness;
};

// Reason the model is invalid, or nothing.
inline std::optional<std::string> minor_model_problem(const MinorModel& m) {
    std::map<VertexId, VertexId> owner;
    for (VertexId a : m.pattern.vertices()) {
        auto it = m.branch_sets.find(a);
        if (it == m.branch_sets.end() || it->second.empty()) return "pattern vertex " + std::to_string(a) + " has no branch set";
        for (VertexId x : it->second) {
            if (!m.host.contains(x)) return "branch set of " + std::to_string(a) + " uses missing host vertex " + std::to_string(x);
            if (!owner.emplace(x, a).second) return "host vertex " + std::to_string(x) + " lies in two branch sets";
        }
        if (!is_connected(induced_subgraph(m.host, make_vertex_set(it->second))))
            return "branch set of " + std::to_string(a) + " is not connected";
    }
    for (const auto& [a, set] : m.branch_sets)
        if (!m.pattern.contains(a)) return "branch set for unknown pattern vertex " + std::to_string(a);

    std::map<Edge, std::size_t> need, used;
    for (Edge e : m.pattern.edges()) ++need[e];
    for (const auto& [pe, he] : m.edge_witness) {
        Edge p = make_edge(pe.u, pe.v), h = make_edge(he.u, he.v);
        auto n = need.find(p);
        if (n == need.end() || n->second == 0) return "witness for a pattern edge that is missing or already covered";
        --n->second;
        if (!m.host.has_edge(h)) return "witness edge " + std::to_string(h.u) + "-" + std::to_string(h.v) + " is not in the host";
        if (++used[h] > m.host.multiplicity(h.u, h.v)) return "host edge used as witness more often than it occurs";
        auto ou = owner.find(h.u), ov = owner.find(h.v);
        if (ou == owner.end() || ov == owner.end()) return "witness edge leaves the branch sets";
        bool ok = (ou->second == p.u && ov->second == p.v) || (ou->second == p.v && ov->second == p.u);
        if (!ok) return "witness edge does not join the right branch sets";
    }
    for (const auto& [e, left] : need)
        if (left) return "pattern edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " has no witness";
    return std::nullopt;
}

inline bool verify_minor_model(const MinorModel& m) { return !minor_model_problem(m); }

// Fills edge_witness from the branch sets, taking distinct host edges for
// parallel pattern edges. Throws when some pattern edge cannot be witnessed.
inline void attach_witnesses(MinorModel& m) {
    std::map<VertexId, VertexId> owner;
    for (const auto& [a, set] : m.branch_sets)
        for (VertexId x : set) owner[x] = a;
    std::map<Edge, std::vector<Edge>> between;
    for (Edge h : m.host.edges()) {
        auto ou = owner.find(h.u), ov = owner.find(h.v);
        if (ou == owner.end() || ov == owner.end() || ou->second == ov->second) continue;
        between[make_edge(ou->second, ov->second)].push_back(h);
    }
    m.edge_witness.clear();
    std::map<Edge, std::size_t> next;
    for (Edge p : m.pattern.edges()) {
        auto& pool = between[p];
        std::size_t& i = next[p];
        if (i >= pool.size()) throw Error("no host edge between branch sets of " + std::to_string(p.u) + " and " + std::to_string(p.v));
        m.edge_witness.push_back({p, pool[i++]});
    }
}

inline json minor_model_to_json(const MinorModel& m) {
    json bs = json::array();
    for (const auto& [a, set] : m.branch_sets) bs.push_back({{"vertex", a}, {"branch_set", set}});
    json ws = json::array();
    for (const auto& [p, h] : m.edge_witness) ws.push_back({{"pattern_edge", {p.u, p.v}}, {"host_edge", {h.u, h.v}}});
    return {{"pattern", graph_to_json(m.pattern)}, {"host", graph_to_json(m.host)}, {"branch_sets", bs}, {"edge_witness", ws}};
}

inline MinorModel minor_model_from_json(const json& j) {
    MinorModel m;
    m.pattern = graph_from_json(j.at("pattern"));
    m.host = graph_from_json(j.at("host"));
    for (const auto& b : j.at("branch_sets")) m.branch_sets[b.at("vertex").get<VertexId>()] = b.at("branch_set").get<VertexSet>();
    for (const auto& w : j.at("edge_witness")) {
        auto p = w.at("pattern_edge").get<std::vector<VertexId>>();
        auto h = w.at("host_edge").get<std::vector<VertexId>>();
        if (p.size() != 2 || h.size() != 2) throw Error("edge witness entries need two endpoints");
        m.edge_witness.push_back({Edge{p[0], p[1]}, Edge{h[0], h[1]}});
    }
    return m;
}

namespace detail {

// Contraction search over partitions of one connected host component into
// exactly k connected parts. A connected pattern is a minor of a connected
// host iff some such partition has a quotient containing the pattern, since
// leftover host vertices can always be absorbed into a neighbouring part.
class MinorSearch {
public:
    MinorSearch(const UGraph& h, const UGraph& g, const VertexSet& comp) : hv_(h.vertices()), comp_(comp) {
        k_ = hv_.size();
        std::map<VertexId, int> hi, gi;
        for (std::size_t i = 0; i < hv_.size(); ++i) hi[hv_[i]] = static_cast<int>(i);
        for (std::size_t i = 0; i < comp_.size(); ++i) gi[comp_[i]] = static_cast<int>(i);
        hmult_.assign(k_, std::vector<int>(k_, 0));
        for (Edge e : h.edges()) {
            ++hmult_[hi[e.u]][hi[e.v]];
            ++hmult_[hi[e.v]][hi[e.u]];
        }
        for (std::size_t a = 0; a < k_; ++a)
            for (std::size_t b = a + 1; b < k_; ++b) h_simple_ += hmult_[a][b] > 0;
        for (Edge e : g.edges()) {
            auto a = gi.find(e.u), b = gi.find(e.v);
            if (a != gi.end() && b != gi.end()) gedges_.push_back({a->second, b->second});
        }
    }

    // Part index per component vertex, and the pattern-to-part assignment.
    std::optional<std::pair<std::vector<int>, std::vector<int>>> run() {
        std::vector<int> part(comp_.size());
        std::iota(part.begin(), part.end(), 0);
        if (comp_.size() < k_) return std::nullopt;
        if (dfs(part, static_cast<int>(comp_.size()))) return std::pair{found_, assign_};
        return std::nullopt;
    }

private:
    static std::uint64_t key(const std::vector<int>& p) {
        std::uint64_t x = 0;
        for (int v : p) x = (x << 4) | static_cast<std::uint64_t>(v);
        return x;
    }

    static void canonical(std::vector<int>& p) {
        std::vector<int> rename(p.size(), -1);
        int next = 0;
        for (int& v : p) {
            if (rename[v] < 0) rename[v] = next++;
            v = rename[v];
        }
    }

    bool dfs(const std::vector<int>& part, int parts) {
        std::vector<std::vector<int>> q(parts, std::vector<int>(parts, 0));
        int simple = 0;
        for (auto [a, b] : gedges_) {
            int x = part[a], y = part[b];
            if (x == y) continue;
            if (!q[x][y]++) ++simple;
            ++q[y][x];
        }
        if (simple < h_simple_) return false;
        if (parts == static_cast<int>(k_)) return embeds(part, q);
        for (auto [a, b] : gedges_) {
            int x = part[a], y = part[b];
            if (x == y) continue;
            std::vector<int> next = part;
            for (int& v : next)
                if (v == y) v = x;
            canonical(next);
            if (!seen_.insert(key(next)).second) continue;
            if (dfs(next, parts - 1)) return true;
        }
        return false;
    }

    bool embeds(const std::vector<int>& part, const std::vector<std::vector<int>>& q) {
        std::vector<int> perm(k_);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            bool ok = true;
            for (std::size_t a = 0; a < k_ && ok; ++a)
                for (std::size_t b = a + 1; b < k_ && ok; ++b) ok = hmult_[a][b] <= q[perm[a]][perm[b]];
            if (ok) {
                found_ = part;
                assign_ = perm;
                return true;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    }

    VertexSet hv_, comp_;
    std::size_t k_ = 0;
    std::vector<std::vector<int>> hmult_;
    int h_simple_ = 0;
    std::vector<std::pair<int, int>> gedges_;
    std::unordered_set<std::uint64_t> seen_;
    std::vector<int> found_, assign_;
};

}  // namespace detail

// Exhaustive minor test for a connected pattern with at most 6 vertices in a
// host with at most 16 vertices. Returns a verified model or nothing.
inline std::optional<MinorModel> find_minor(const UGraph& h, const UGraph& g) {
    if (h.vertex_count() == 0) throw Error("empty pattern");
    if (h.vertex_count() > 6) throw SizeLimitExceeded("find_minor is limited to patterns with 6 vertices");
    if (g.vertex_count() > 16) throw SizeLimitExceeded("find_minor is limited to hosts with 16 vertices");
    if (!is_connected(h)) throw Error("find_minor needs a connected pattern");
    for (const VertexSet& comp : connected_components(g)) {
        auto hit = detail::MinorSearch(h, g, comp).run();
        if (!hit) continue;
        const auto& [part, assign] = *hit;
        MinorModel m{h, g, {}, {}};
        VertexSet hv = h.vertices();
        for (std::size_t i = 0; i < hv.size(); ++i) {
            VertexSet set;
            for (std::size_t j = 0; j < comp.size(); ++j)
                if (part[j] == assign[i]) set.push_back(comp[j]);
            m.branch_sets[hv[i]] = set;
        }
        attach_witnesses(m);
        if (auto why = minor_model_problem(m)) throw Error("internal: minor search built an invalid model: " + *why);
        return m;
    }
    return std::nullopt;
}

// ---- doubling family -----------------------------------------------------

namespace detail {

struct Doubled {
    UGraph g;
    VertexId root = 0;
    std::map<VertexId, VertexId> second_copy;  // old vertex -> its image in the new copy
};

// The first copy keeps every vertex id; the new copy's taxa get `suffix`.
inline Doubled double_graph(const PhyloTree& t, const std::string& suffix) {
    if (t.roots().size() != 1) throw Error("doubling needs exactly one degree-2 vertex, tree has " + std::to_string(t.roots().size()));
    Doubled d{t.graph(), 0, {}};
    const UGraph& g = t.graph();
    for (VertexId v : g.vertices()) d.second_copy[v] = g.label(v) ? d.g.add_vertex(*g.label(v) + suffix) : d.g.add_vertex();
    for (Edge e : g.edges()) d.g.add_edge(d.second_copy[e.u], d.second_copy[e.v]);
    VertexId r = t.roots()[0];
    d.root = d.g.add_vertex();
    d.g.add_edge(d.root, r);
    d.g.add_edge(d.root, d.second_copy[r]);
    return d;
}

}  // namespace detail

// Two copies of t joined through a new degree-2 vertex between their old
// degree-2 vertices. Taxa of the new copy get "." + stage appended.
inline PhyloTree double_tree(const PhyloTree& t, int stage) {
    auto d = detail::double_graph(t, "." + std::to_string(stage));
    return PhyloTree(std::move(d.g), {d.root});
}

inline PhyloTree rooted_quartet(const std::string& a, const std::string& b, const std::string& c, const std::string& d) {
    UGraph g;
    VertexId r = g.add_vertex(), p = g.add_vertex(), q = g.add_vertex();
    g.add_edge(r, p);
    g.add_edge(r, q);
    g.add_edge(p, g.add_vertex(a));
    g.add_edge(p, g.add_vertex(b));
    g.add_edge(q, g.add_vertex(c));
    g.add_edge(q, g.add_vertex(d));
    return PhyloTree(std::move(g), {r});
}

struct DoublingInstance {
    PhyloTree first;
    PhyloTree second;
    DisplayGraph display;           // keeps both degree-2 vertices
    TreeDecomposition decomposition;  // width 3, from the inductive chain of bags
    VertexId u = 0;                 // degree-2 vertex of the first tree, in the display graph
    VertexId v = 0;
};

// Stage i of the doubling family started from ab|cd and ac|bd, with a
// decomposition of the display graph assembled copy by copy: each stage
// keeps both copies' bags and links the bags holding the old degree-2
// vertices through {u*,u1,v1} - {u*,v*,v1} - {u*,v*,v2} - {u*,u2,v2}.
inline DoublingInstance doubling_family(int i) {
    if (i < 0) throw Error("doubling stage must be non-negative");
    if (i > 12) throw SizeLimitExceeded("doubling stage above 12");
    PhyloTree t1 = rooted_quartet("a", "b", "c", "d");
    PhyloTree t2 = rooted_quartet("a", "c", "b", "d");

    // Bags hold keys: 1:<id> and 2:<id> for internal vertices of either
    // tree, x:<label> for taxa.
    using Key = std::string;
    auto key1 = [](VertexId v) { return "1:" + std::to_string(v); };
    auto key2 = [](VertexId v) { return "2:" + std::to_string(v); };
    std::vector<std::vector<Key>> bags;
    std::vector<std::pair<std::size_t, std::size_t>> links;
    std::size_t root_bag = 0;

    {
        DisplayGraph d = build_display_graph(t1, t2);
        VertexId u = d.from_first.at(t1.roots()[0]), v = d.from_second.at(t2.roots()[0]);
        UGraph forced = d.graph;
        forced.add_edge(u, v);
        TwResult r = exact_treewidth(forced);
        if (r.upper != 3) throw Error("internal: base decomposition has width " + std::to_string(r.upper));
        std::map<VertexId, Key> back;
        for (auto [a, x] : d.from_first) back[x] = t1.graph().label(a) ? "x:" + *t1.graph().label(a) : key1(a);
        for (auto [b, x] : d.from_second)
            if (!t2.graph().label(b)) back[x] = key2(b);
        for (std::size_t j = 0; j < r.decomposition.bags.size(); ++j) {
            std::vector<Key> bag;
            bool has_u = false, has_v = false;
            for (VertexId x : r.decomposition.bags[j]) {
                bag.push_back(back.at(x));
                has_u |= x == u;
                has_v |= x == v;
            }
            if (has_u && has_v) root_bag = j;
            bags.push_back(std::move(bag));
        }
        links = r.decomposition.tree;
    }

    for (int stage = 1; stage <= i; ++stage) {
        std::string suffix = "." + std::to_string(stage);
        auto d1 = detail::double_graph(t1, suffix);
        auto d2 = detail::double_graph(t2, suffix);
        auto rename = [&](const Key& k) -> Key {
            if (k[0] == 'x') return k + suffix;
            VertexId id = static_cast<VertexId>(std::stoul(k.substr(2)));
            return k[0] == '1' ? key1(d1.second_copy.at(id)) : key2(d2.second_copy.at(id));
        };
        std::size_t n = bags.size();
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Key> bag;
            for (const Key& k : bags[j]) bag.push_back(rename(k));
            bags.push_back(std::move(bag));
        }
        std::size_t nl = links.size();
        for (std::size_t j = 0; j < nl; ++j) links.push_back({links[j].first + n, links[j].second + n});
        Key us = key1(d1.root), vs = key2(d2.root);
        Key u1 = key1(t1.roots()[0]), v1 = key2(t2.roots()[0]);
        Key u2 = rename(u1), v2 = rename(v1);
        std::size_t c = bags.size();
        bags.push_back({us, u1, v1});
        bags.push_back({us, vs, v1});
        bags.push_back({us, vs, v2});
        bags.push_back({us, u2, v2});
        links.push_back({root_bag, c});
        links.push_back({c, c + 1});
        links.push_back({c + 1, c + 2});
        links.push_back({c + 2, c + 3});
        links.push_back({c + 3, root_bag + n});
        root_bag = c + 1;
        t1 = PhyloTree(std::move(d1.g), {d1.root});
        t2 = PhyloTree(std::move(d2.g), {d2.root});
    }

    DoublingInstance out{t1, t2, build_display_graph(t1, t2), {}, 0, 0};
    std::map<Key, VertexId> to_display;
    for (auto [a, x] : out.display.from_first) to_display[t1.graph().label(a) ? "x:" + *t1.graph().label(a) : key1(a)] = x;
    for (auto [b, x] : out.display.from_second)
        if (!t2.graph().label(b)) to_display[key2(b)] = x;
    for (const auto& bag : bags) {
        VertexSet s;
        for (const Key& k : bag) s.push_back(to_display.at(k));
        out.decomposition.bags.push_back(make_vertex_set(std::move(s)));
    }
    out.decomposition.tree = links;
    out.u = out.display.from_first.at(t1.roots()[0]);
    out.v = out.display.from_second.at(t2.roots()[0]);
    return out;
}

inline std::pair<PhyloTree, PhyloTree> doubling_pair(int i) {
    auto d = doubling_family(i);
    return {d.first, d.second};
}

// Copies of a and b in state 0, copies of c and d in state 1.
inline std::map<std::string, std::string> doubling_character(const TaxonSet& taxa) {
    std::map<std::string, std::string> f;
    for (const auto& x : taxa) f[x] = x[0] == 'a' || x[0] == 'b' ? "0" : "1";
    return f;
}

// ---- embedding arbitrary graphs ------------------------------------------

struct EmbedAudit {
    std::size_t n = 0, d = 0;
    std::size_t taxa = 0, internal_first = 0, internal_second = 0, edges_first = 0, edges_second = 0;
    std::size_t display_vertices = 0, display_edges = 0;

    std::size_t taxa_bound() const { return (n + 2) + n * d; }
    std::size_t internal_bound() const { return n * (d + 1); }
    std::size_t display_vertex_bound() const { return 2 * n * (d + 1) + (n + 2) + n * d; }
    std::size_t display_edge_bound() const { return 4 * n + 2 + 4 * n * d; }

    bool taxa_ok() const { return taxa <= taxa_bound(); }
    bool internal_ok() const { return internal_first <= internal_bound() && internal_second <= internal_bound(); }
    bool display_vertices_ok() const { return display_vertices <= display_vertex_bound(); }
    bool display_edges_ok() const { return display_edges <= display_edge_bound(); }
    bool all_ok() const { return taxa_ok() && internal_ok() && display_vertices_ok() && display_edges_ok(); }
};

struct EmbedResult {
    PhyloTree first;
    PhyloTree second;
    MinorModel model;  // host is the display graph of the two trees
    EmbedAudit audit;
};

// Both trees start as the caterpillar on n+2 taxa whose spine vertices stand
// for the vertices of g. Spine-adjacent edges of g are already present in
// the first tree; every other edge e = {u,v} gets taxa e<j>a, e<j>b hung
// from u and v in the first tree and joined through a new cherry vertex on a
// subdivided edge of the second tree (edges picked round-robin). Spine
// vertices of degree above 3 then become paths.
inline EmbedResult embed_graph_as_display_minor(const UGraph& g) {
    std::size_t n = g.vertex_count();
    if (n < 2) throw Error("embedding needs at least 2 vertices");
    if (!is_connected(g)) throw Error("embedding needs a connected graph");
    std::size_t d = 0;
    for (VertexId v : g.vertices()) d = std::max(d, g.degree(v));
    if (d < 2) throw Error("embedding needs maximum degree at least 2");
    for (Edge e : g.edges())
        if (e.u == e.v) throw Error("self-loops are not supported");

    VertexSet gv = g.vertices();
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[gv[i]] = i;

    // Caterpillar on r1..r(n+2); spine[i] stands for gv[i].
    auto caterpillar_graph = [&](std::vector<VertexId>& spine) {
        UGraph t;
        for (std::size_t i = 0; i < n; ++i) spine.push_back(t.add_vertex());
        for (std::size_t i = 0; i + 1 < n; ++i) t.add_edge(spine[i], spine[i + 1]);
        std::size_t r = 0;
        auto leaf = [&](VertexId at) { t.add_edge(at, t.add_vertex("r" + std::to_string(++r))); };
        leaf(spine[0]);
        for (std::size_t i = 0; i < n; ++i) leaf(spine[i]);
        leaf(spine[n - 1]);
        return t;
    };
    std::vector<VertexId> spine1, spine2;
    UGraph a = caterpillar_graph(spine1);
    UGraph b = caterpillar_graph(spine2);

    std::vector<bool> spine_used(n, false);  // spine edge i -- i+1 already encodes one edge of g
    std::map<VertexId, std::vector<std::string>> hung;  // first-tree spine vertex -> gadget taxa
    struct Gadget {
        Edge pattern;
        std::string xa, xb;
        VertexId z;
    };
    std::vector<Gadget> gadgets;
    std::vector<std::pair<Edge, std::size_t>> spine_edges;  // pattern edge -> spine index i (edge i -- i+1)
    std::size_t rr = 0, j = 0;
    for (Edge e : g.edges()) {
        std::size_t iu = index[e.u], iv = index[e.v];
        std::size_t lo = std::min(iu, iv);
        if (std::max(iu, iv) == lo + 1 && !spine_used[lo]) {
            spine_used[lo] = true;
            spine_edges.push_back({e, lo});
            continue;
        }
        ++j;
        std::string xa = "e" + std::to_string(j) + "a", xb = "e" + std::to_string(j) + "b";
        a.add_edge(spine1[iu], a.add_vertex(xa));
        a.add_edge(spine1[iv], a.add_vertex(xb));
        auto es = b.edges();
        VertexId y = b.subdivide(es[rr++ % es.size()]);
        VertexId z = b.add_vertex();
        b.add_edge(z, y);
        b.add_edge(z, b.add_vertex(xa));
        b.add_edge(z, b.add_vertex(xb));
        gadgets.push_back({e, xa, xb, z});
    }

    // Split spine vertices of degree t+2 > 3 into paths u_1..u_t.
    std::map<VertexId, VertexSet> path_of;  // spine vertex of the first tree -> its path
    for (std::size_t i = 0; i < n; ++i) {
        VertexId u = spine1[i];
        std::vector<VertexId> nb = a.neighbors(u);
        std::size_t deg = nb.size();
        path_of[u] = {u};
        if (deg <= 3) continue;
        std::size_t t = deg - 2;
        for (VertexId w : nb) a.remove_edge(u, w);
        VertexSet path{u};
        for (std::size_t k = 1; k < t; ++k) {
            VertexId p = a.add_vertex();
            a.add_edge(path.back(), p);
            path.push_back(p);
        }
        a.add_edge(path[0], nb[0]);
        a.add_edge(path[0], nb[1]);
        for (std::size_t k = 2; k < t; ++k) a.add_edge(path[k - 1], nb[k]);
        a.add_edge(path[t - 1], nb[deg - 2]);
        a.add_edge(path[t - 1], nb[deg - 1]);
        path_of[u] = path;
    }

    EmbedResult out{PhyloTree(a), PhyloTree(b), {}, {}};
    DisplayGraph dg = build_display_graph(out.first, out.second);
    MinorModel& m = out.model;
    m.pattern = g;
    m.host = dg.graph;
    for (std::size_t i = 0; i < n; ++i) {
        VertexSet s;
        for (VertexId p : path_of[spine1[i]]) s.push_back(dg.from_first.at(p));
        m.branch_sets[gv[i]] = s;
    }
    for (const auto& [e, i] : spine_edges) {
        // the spine edge survives between some vertex of each path
        Edge found{};
        bool ok = false;
        for (VertexId p : path_of[spine1[i]])
            for (VertexId q : path_of[spine1[i + 1]])
                if (!ok && a.adjacent(p, q)) {
                    found = make_edge(dg.from_first.at(p), dg.from_first.at(q));
                    ok = true;
                }
        if (!ok) throw Error("internal: spine edge lost while splitting");
        m.edge_witness.push_back({e, found});
    }
    for (const auto& gd : gadgets) {
        VertexId xa = dg.graph.vertex_of(gd.xa), xb = dg.graph.vertex_of(gd.xb), z = dg.from_second.at(gd.z);
        auto& su = m.branch_sets[gd.pattern.u];
        su.push_back(xa);
        su.push_back(z);
        m.branch_sets[gd.pattern.v].push_back(xb);
        m.edge_witness.push_back({gd.pattern, make_edge(z, xb)});
    }
    for (auto& [v, s] : m.branch_sets) s = make_vertex_set(s);

    EmbedAudit& au = out.audit;
    au.n = n;
    au.d = d;
    au.taxa = out.first.size();
    auto internal = [](const PhyloTree& t) { return t.graph().vertex_count() - t.size(); };
    au.internal_first = internal(out.first);
    au.internal_second = internal(out.second);
    au.edges_first = out.first.graph().edge_count();
    au.edges_second = out.second.graph().edge_count();
    au.display_vertices = dg.graph.vertex_count();
    au.display_edges = dg.graph.edge_count();
    return out;
}

// ---- grid embedding -------------------------------------------------------

struct GridResult {
    PhyloTree first;
    PhyloTree second;
    MinorModel model;  // pattern: k x k grid, host: display graph
};

// Two interlocking combs. The first tree owns row 0 and the even columns
// above the last row; the second owns the last row and the odd columns
// below row 0. Each grid edge between the combs becomes a taxon, and the two
// corners whose edges both stay inside one comb get an extra taxon so they
// survive as degree-3 vertices. Degree-4 grid vertices are split in two.
// Which corners need the extra taxon depends on the parity of k.
inline GridResult grid_display_pair(std::size_t k) {
    if (k < 3) throw Error("grid side must be at least 3");
    if (k > 40) throw SizeLimitExceeded("grid side above 40");
    UGraph grid = grid_graph(k);
    auto id = [k](std::size_t r, std::size_t c) { return static_cast<VertexId>(r * k + c); };
    auto owner = [k](VertexId v) {
        std::size_t r = v / k, c = v % k;
        if (r == 0) return 0;
        if (r == k - 1) return 1;
        return c % 2 == 0 ? 0 : 1;
    };

    // Per tree: grid vertex -> tree vertex, taxa hung on tree vertices.
    UGraph tree[2];
    std::map<VertexId, VertexId> at[2];
    for (VertexId v : grid.vertices()) at[owner(v)][v] = tree[owner(v)].add_vertex();
    std::map<Edge, std::string> cut_taxon;
    std::size_t next = 0;
    for (Edge e : grid.edges()) {
        int ou = owner(e.u), ov = owner(e.v);
        if (ou == ov) {
            tree[ou].add_edge(at[ou][e.u], at[ou][e.v]);
            continue;
        }
        std::string x = "g" + std::to_string(++next);
        cut_taxon[e] = x;
        tree[ou].add_edge(at[ou][e.u], tree[ou].add_vertex(x));
        tree[ov].add_edge(at[ov][e.v], tree[ov].add_vertex(x));
    }
    // Corners without a cut edge get an extra taxon: hung on the corner in
    // its own tree, on a subdivided edge of the other tree.
    std::vector<std::string> extra;
    std::vector<std::pair<VertexId, VertexId>> absorbed[2];  // subdivision vertex -> grid vertex it joins
    const VertexId corners[] = {id(0, 0), id(0, k - 1), id(k - 1, 0), id(k - 1, k - 1)};
    // an edge of the other tree away from the corners and the taxa
    auto inner_edge = [&](int s) {
        std::set<VertexId> avoid;
        for (VertexId c : corners)
            if (owner(c) == s) avoid.insert(at[s][c]);
        for (Edge e : tree[s].edges())
            if (!tree[s].is_labelled(e.u) && !tree[s].is_labelled(e.v) && !avoid.count(e.u) && !avoid.count(e.v)) return e;
        throw Error("internal: no inner edge to attach a corner taxon");
    };
    for (VertexId c : corners) {
        bool cut = false;
        for (VertexId w : grid.neighbors(c)) cut |= owner(w) != owner(c);
        if (cut) continue;
        std::string x = "h" + std::to_string(extra.size() + 1);
        extra.push_back(x);
        int o = owner(c);
        tree[o].add_edge(at[o][c], tree[o].add_vertex(x));
        UGraph& other = tree[1 - o];
        Edge e = inner_edge(1 - o);
        VertexId y = other.subdivide(e);
        other.add_edge(y, other.add_vertex(x));
        for (auto [v, tv] : at[1 - o])
            if (tv == e.u) absorbed[1 - o].push_back({y, v});
    }
    if (extra.size() != 2) throw Error("internal: expected two corners to need an extra taxon");

    // Degree-4 vertices become two adjacent degree-3 vertices; degree-2
    // corners are suppressed and represented by their cut taxon.
    std::map<VertexId, VertexSet> parts[2];
    std::map<VertexId, std::string> corner_taxon;
    for (int s = 0; s < 2; ++s)
        for (auto [v, tv] : at[s]) {
            UGraph& t = tree[s];
            std::vector<VertexId> nb = t.neighbors(tv);
            if (nb.size() == 4) {
                VertexId w = t.add_vertex();
                t.remove_edge(tv, nb[2]);
                t.remove_edge(tv, nb[3]);
                t.add_edge(tv, w);
                t.add_edge(w, nb[2]);
                t.add_edge(w, nb[3]);
                parts[s][v] = {tv, w};
            } else if (nb.size() == 2) {
                for (VertexId x : nb)
                    if (t.is_labelled(x)) corner_taxon[v] = *t.label(x);
                if (!corner_taxon.count(v)) throw Error("internal: corner without its cut taxon");
                t.suppress(tv);
            } else {
                parts[s][v] = {tv};
            }
        }

    for (int s = 0; s < 2; ++s)
        for (auto [y, v] : absorbed[s]) parts[s].at(v).push_back(y);

    GridResult out{PhyloTree(tree[0]), PhyloTree(tree[1]), {}};
    DisplayGraph dg = build_display_graph(out.first, out.second);
    MinorModel& m = out.model;
    m.pattern = grid;
    m.host = dg.graph;
    for (VertexId v : grid.vertices()) {
        int s = owner(v);
        VertexSet set;
        if (auto it = corner_taxon.find(v); it != corner_taxon.end()) {
            set.push_back(dg.graph.vertex_of(it->second));
        } else {
            const auto& from = s == 0 ? dg.from_first : dg.from_second;
            for (VertexId tv : parts[s].at(v)) set.push_back(from.at(tv));
        }
        m.branch_sets[v] = set;
    }
    // A cut taxon joins the branch set on its first-tree side unless it
    // already stands for a corner.
    for (const auto& [e, x] : cut_taxon) {
        VertexId xv = dg.graph.vertex_of(x);
        if (corner_taxon.count(e.u) && corner_taxon[e.u] == x) continue;
        if (corner_taxon.count(e.v) && corner_taxon[e.v] == x) continue;
        VertexId side = owner(e.u) == 0 ? e.u : e.v;
        m.branch_sets[side].push_back(xv);
    }
    for (auto& [v, s] : m.branch_sets) s = make_vertex_set(s);
    attach_witnesses(m);
    return out;
}

}  // namespace twdist
