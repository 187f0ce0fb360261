#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "twdist/error.hpp"
#include "twdist/graph.hpp"

namespace twdist {

struct TreeDecomposition {
    std::vector<VertexSet> bags;
    std::vector<std::pair<std::size_t, std::size_t>> tree;

    // Largest bag size minus one; -1 for the empty decomposition.
    int width() const {
        int w = -1;
        for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
        return w;
    }
};

struct Validation {
    bool ok = true;
    std::string violation;  // "tw1: ..." etc. when !ok
    explicit operator bool() const { return ok; }
};

inline Validation validate(const TreeDecomposition& d, const UGraph& g) {
    auto fail = [](std::string why) { return Validation{false, std::move(why)}; };
    std::size_t nb = d.bags.size();
    if (nb == 0) {
        if (g.vertex_count() == 0) return {};
        return fail("tw1: vertex " + std::to_string(g.vertices().front()) + " is in no bag");
    }
    // Bag tree must be a tree on 0..nb-1.
    if (d.tree.size() != nb - 1) return fail("bag tree has " + std::to_string(d.tree.size()) + " edges for " + std::to_string(nb) + " bags");
    std::vector<std::vector<std::size_t>> adj(nb);
    for (auto [i, j] : d.tree) {
        if (i >= nb || j >= nb || i == j) return fail("bag tree edge out of range");
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    {
        std::vector<bool> seen(nb, false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        std::size_t count = 0;
        while (!stack.empty()) {
            std::size_t b = stack.back();
            stack.pop_back();
            ++count;
            for (std::size_t c : adj[b])
                if (!seen[c]) {
                    seen[c] = true;
                    stack.push_back(c);
                }
        }
        if (count != nb) return fail("bag tree is not connected");
    }
    std::vector<std::vector<std::size_t>> holding(g.id_bound());
    for (std::size_t i = 0; i < nb; ++i)
        for (VertexId v : d.bags[i]) {
            if (!g.contains(v)) return fail("bag " + std::to_string(i) + " holds unknown vertex " + std::to_string(v));
            holding[v].push_back(i);
        }
    for (VertexId v : g.vertices())
        if (holding[v].empty()) return fail("tw1: vertex " + std::to_string(v) + " is in no bag");
    for (Edge e : g.edges()) {
        bool covered = false;
        for (std::size_t i : holding[e.u])
            if (std::binary_search(d.bags[i].begin(), d.bags[i].end(), e.v) ||
                std::find(d.bags[i].begin(), d.bags[i].end(), e.v) != d.bags[i].end()) {
                covered = true;
                break;
            }
        if (!covered) return fail("tw2: edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "} is in no bag");
    }
    for (VertexId v : g.vertices()) {
        const auto& hs = holding[v];
        std::set<std::size_t> in(hs.begin(), hs.end());
        std::set<std::size_t> seen{hs.front()};
        std::vector<std::size_t> stack{hs.front()};
        while (!stack.empty()) {
            std::size_t b = stack.back();
            stack.pop_back();
            for (std::size_t c : adj[b])
                if (in.count(c) && seen.insert(c).second) stack.push_back(c);
        }
        if (seen.size() != in.size()) return fail("tw3: bags holding vertex " + std::to_string(v) + " are not connected");
    }
    return {};
}

// Contracts bag-tree edges whose bags are nested, so no bag contains another.
inline TreeDecomposition make_small(const TreeDecomposition& d) {
    std::size_t nb = d.bags.size();
    std::vector<VertexSet> bags = d.bags;
    for (auto& b : bags) b = make_vertex_set(b);
    std::vector<std::set<std::size_t>> adj(nb);
    for (auto [i, j] : d.tree) {
        adj[i].insert(j);
        adj[j].insert(i);
    }
    std::vector<bool> alive(nb, true);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < nb && !changed; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j : adj[i]) {
                if (!std::includes(bags[j].begin(), bags[j].end(), bags[i].begin(), bags[i].end())) continue;
                for (std::size_t k : adj[i])
                    if (k != j) {
                        adj[k].erase(i);
                        adj[k].insert(j);
                        adj[j].insert(k);
                    }
                adj[j].erase(i);
                adj[i].clear();
                alive[i] = false;
                changed = true;
                break;
            }
        }
    }
    TreeDecomposition out;
    std::vector<std::size_t> index(nb);
    for (std::size_t i = 0; i < nb; ++i)
        if (alive[i]) {
            index[i] = out.bags.size();
            out.bags.push_back(bags[i]);
        }
    for (std::size_t i = 0; i < nb; ++i)
        if (alive[i])
            for (std::size_t j : adj[i])
                if (i < j) out.tree.push_back({index[i], index[j]});
    return out;
}

// Bags {v} ∪ later neighbours in the filled graph, hung off the earliest
// eliminated later neighbour.
inline TreeDecomposition decomposition_from_order(const UGraph& g, const std::vector<VertexId>& order) {
    std::size_t n = order.size();
    if (n != g.vertex_count()) throw Error("elimination order must list every vertex once");
    std::vector<int> pos(g.id_bound(), -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (!g.contains(order[i]) || pos[order[i]] != -1) throw Error("elimination order must list every vertex once");
        pos[order[i]] = static_cast<int>(i);
    }
    std::vector<std::set<VertexId>> nb(g.id_bound());
    for (Edge e : g.edges()) {
        nb[e.u].insert(e.v);
        nb[e.v].insert(e.u);
    }
    TreeDecomposition d;
    std::vector<std::size_t> parent_vertex(n, SIZE_MAX);
    for (std::size_t i = 0; i < n; ++i) {
        VertexId v = order[i];
        VertexSet later;
        for (VertexId w : nb[v])
            if (pos[w] > static_cast<int>(i)) later.push_back(w);
        for (VertexId a : later)
            for (VertexId b : later)
                if (a != b) nb[a].insert(b);
        VertexSet bag = later;
        bag.push_back(v);
        d.bags.push_back(make_vertex_set(std::move(bag)));
        int first = std::numeric_limits<int>::max();
        for (VertexId w : later) first = std::min(first, pos[w]);
        if (!later.empty()) parent_vertex[i] = static_cast<std::size_t>(first);
    }
    std::size_t last_root = SIZE_MAX;
    for (std::size_t i = 0; i < n; ++i) {
        if (parent_vertex[i] != SIZE_MAX) {
            d.tree.push_back({i, parent_vertex[i]});
        } else {
            if (last_root != SIZE_MAX) d.tree.push_back({last_root, i});
            last_root = i;
        }
    }
    return d;
}

// Width of the given elimination order (max number of later neighbours).
inline int order_width(const UGraph& g, const std::vector<VertexId>& order) {
    return decomposition_from_order(g, order).width();
}

struct TwOptions {
    std::size_t exact_limit = 24;        // vertices left after simplification
    std::size_t node_budget = 2'000'000; // search nodes for bounded_treewidth
    double budget_seconds = 0;           // 0 = no wall-clock limit
    std::vector<TreeDecomposition> hints;
    int known_lower_bound = 0;           // a caller-proven lower bound
};

struct TwResult {
    int lower = 0;
    int upper = 0;
    bool exact = false;
    TreeDecomposition decomposition;
};

namespace detail {

using Mask = std::uint64_t;

inline Mask bit(int i) { return Mask{1} << i; }

// Dense simple graph on 0..n-1 with an id table back to the source graph.
struct Core {
    std::vector<VertexId> ids;
    std::vector<std::vector<char>> adj;

    std::size_t size() const { return ids.size(); }

    static Core from(const UGraph& g) {
        Core c;
        c.ids = g.vertices();
        std::vector<int> idx(g.id_bound(), -1);
        for (std::size_t i = 0; i < c.ids.size(); ++i) idx[c.ids[i]] = static_cast<int>(i);
        c.adj.assign(c.ids.size(), std::vector<char>(c.ids.size(), 0));
        for (Edge e : g.edges()) c.adj[idx[e.u]][idx[e.v]] = c.adj[idx[e.v]][idx[e.u]] = 1;
        return c;
    }
};

inline int degeneracy(const Core& c) {
    std::size_t n = c.size();
    std::vector<bool> gone(n, false);
    std::vector<int> deg(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) deg[i] += c.adj[i][j];
    int best = 0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t v = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!gone[i] && (v == n || deg[i] < deg[v])) v = i;
        best = std::max(best, deg[v]);
        gone[v] = true;
        for (std::size_t j = 0; j < n; ++j)
            if (!gone[j] && c.adj[v][j]) --deg[j];
    }
    return best;
}

// Minor-min-width: contract a min-degree vertex into its min-degree neighbour.
inline int minor_min_width(const Core& c) {
    std::size_t n = c.size();
    auto adj = c.adj;
    std::vector<bool> gone(n, false);
    std::vector<int> deg(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) deg[i] += adj[i][j];
    int best = 0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t v = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!gone[i] && (v == n || deg[i] < deg[v])) v = i;
        best = std::max(best, deg[v]);
        std::size_t u = n;
        for (std::size_t j = 0; j < n; ++j)
            if (!gone[j] && adj[v][j] && (u == n || deg[j] < deg[u])) u = j;
        gone[v] = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (gone[j] || !adj[v][j]) continue;
            adj[v][j] = adj[j][v] = 0;
            --deg[j];
            if (u != n && j != u && !adj[u][j]) {
                adj[u][j] = adj[j][u] = 1;
                ++deg[u];
                ++deg[j];
            }
        }
    }
    return best;
}

enum class Heuristic { min_degree, min_fill };

// Greedy elimination; ties go to the lowest index. Returns (width, order).
inline std::pair<int, std::vector<int>> greedy_order(const Core& c, Heuristic h) {
    std::size_t n = c.size();
    auto adj = c.adj;
    std::vector<bool> gone(n, false);
    std::vector<int> order;
    int width = n ? 0 : -1;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t v = n;
        long best = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (gone[i]) continue;
            long score = 0;
            if (h == Heuristic::min_degree) {
                for (std::size_t j = 0; j < n; ++j) score += !gone[j] && adj[i][j];
            } else {
                std::vector<std::size_t> nb;
                for (std::size_t j = 0; j < n; ++j)
                    if (!gone[j] && adj[i][j]) nb.push_back(j);
                for (std::size_t a = 0; a < nb.size(); ++a)
                    for (std::size_t b = a + 1; b < nb.size(); ++b) score += !adj[nb[a]][nb[b]];
            }
            if (v == n || score < best) {
                v = i;
                best = score;
            }
        }
        std::vector<std::size_t> nb;
        for (std::size_t j = 0; j < n; ++j)
            if (!gone[j] && adj[v][j]) nb.push_back(j);
        width = std::max(width, static_cast<int>(nb.size()));
        for (std::size_t a : nb)
            for (std::size_t b : nb)
                if (a != b) adj[a][b] = 1;
        gone[v] = true;
        order.push_back(static_cast<int>(v));
    }
    return {width, order};
}

// Decides tw <= k by searching elimination prefixes; dead prefixes (as vertex
// sets) are memoised, which makes this the usual subset dynamic program.
class EliminationSearch {
public:
    explicit EliminationSearch(const Core& c) : n_(static_cast<int>(c.size())) {
        if (c.size() > 64) throw SizeLimitExceeded("elimination search handles at most 64 vertices");
        adj_.assign(n_, 0);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (c.adj[i][j]) adj_[i] |= bit(j);
        full_ = n_ == 64 ? ~Mask{0} : bit(n_) - 1;
    }

    // Returns 1 yes, 0 no, -1 budget exhausted.
    int decide(int k, std::size_t node_budget, std::chrono::steady_clock::time_point deadline, bool timed) {
        k_ = k;
        budget_ = node_budget;
        deadline_ = deadline;
        timed_ = timed;
        aborted_ = false;
        dead_.clear();
        order_.clear();
        bool ok = dfs(0);
        if (ok) {
            std::reverse(order_.begin(), order_.end());
            return 1;
        }
        return aborted_ ? -1 : 0;
    }

    const std::vector<int>& order() const { return order_; }
    std::size_t nodes() const { return nodes_; }

private:
    // Vertices outside S ∪ {v} reachable from v through S.
    Mask q(Mask s, int v) const {
        Mask reach = adj_[v], done = 0;
        Mask todo = reach & s;
        while (todo) {
            int u = std::countr_zero(todo);
            done |= bit(u);
            reach |= adj_[u];
            todo = reach & s & ~done;
        }
        return reach & ~s & ~bit(v);
    }

    bool dfs(Mask s) {
        Mask rest = full_ & ~s;
        if (std::popcount(rest) <= k_ + 1) {
            for (Mask r = rest; r; r &= r - 1) order_.push_back(std::countr_zero(r));
            return true;
        }
        if (dead_.count(s)) return false;
        if (aborted_) return false;
        ++nodes_;
        if (nodes_ > budget_ || (timed_ && (nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_)) {
            aborted_ = true;
            return false;
        }
        std::vector<Mask> qs(n_, 0);
        for (Mask r = rest; r; r &= r - 1) {
            int v = std::countr_zero(r);
            qs[v] = q(s, v);
        }
        // A vertex whose neighbourhood is a clique (or a clique plus one) and
        // small enough can be eliminated without branching.
        for (Mask r = rest; r; r &= r - 1) {
            int v = std::countr_zero(r);
            int d = std::popcount(qs[v]);
            if (d > k_) continue;
            auto clique = [&](Mask set) {
                for (Mask a = set; a; a &= a - 1) {
                    int x = std::countr_zero(a);
                    Mask need = set & ~bit(x);
                    if ((qs[x] & need) != need) return false;
                }
                return true;
            };
            bool ok = clique(qs[v]);
            for (Mask a = qs[v]; a && !ok; a &= a - 1) ok = clique(qs[v] & ~bit(std::countr_zero(a)));
            if (ok) {
                if (dfs(s | bit(v))) {
                    order_.push_back(v);
                    return true;
                }
                dead_.insert(s);
                return false;
            }
        }
        for (Mask r = rest; r; r &= r - 1) {
            int v = std::countr_zero(r);
            if (std::popcount(qs[v]) > k_) continue;
            if (dfs(s | bit(v))) {
                order_.push_back(v);
                return true;
            }
            if (aborted_) return false;
        }
        dead_.insert(s);
        return false;
    }

    int n_;
    std::vector<Mask> adj_;
    Mask full_ = 0;
    int k_ = 0;
    std::size_t budget_ = 0;
    std::size_t nodes_ = 0;
    bool timed_ = false;
    bool aborted_ = false;
    std::chrono::steady_clock::time_point deadline_;
    std::unordered_set<Mask> dead_;
    std::vector<int> order_;
};

struct Lift {
    enum Kind { isolated, pendant, series } kind;
    VertexId v, a, b;
};

// Removes degree <= 1 vertices and suppresses degree-2 vertices on a simple
// graph, collapsing any parallel edge that appears. Only valid when the
// caller has a floor of 2 on the treewidth.
inline std::vector<Lift> reduce_low_degree(UGraph& g) {
    std::vector<Lift> lifts;
    bool changed = true;
    while (changed) {
        changed = false;
        for (VertexId v : g.vertices()) {
            if (!g.contains(v)) continue;
            std::size_t d = g.degree(v);
            if (d == 0) {
                lifts.push_back({Lift::isolated, v, v, v});
                g.remove_vertex(v);
                changed = true;
            } else if (d == 1) {
                lifts.push_back({Lift::pendant, v, g.neighbors(v)[0], 0});
                g.remove_vertex(v);
                changed = true;
            } else if (d == 2) {
                VertexId a = g.neighbors(v)[0], b = g.neighbors(v)[1];
                lifts.push_back({Lift::series, v, a, b});
                g.remove_vertex(v);
                if (!g.adjacent(a, b)) g.add_edge(a, b);
                changed = true;
            }
        }
    }
    return lifts;
}

inline void apply_lifts(TreeDecomposition& d, const std::vector<Lift>& lifts) {
    auto find_bag = [&](VertexSet need) -> std::size_t {
        for (std::size_t i = 0; i < d.bags.size(); ++i)
            if (std::includes(d.bags[i].begin(), d.bags[i].end(), need.begin(), need.end())) return i;
        throw Error("internal: lifting found no bag");
    };
    for (auto it = lifts.rbegin(); it != lifts.rend(); ++it) {
        const Lift& l = *it;
        std::size_t nb = d.bags.size();
        if (l.kind == Lift::isolated) {
            d.bags.push_back({l.v});
            if (nb) d.tree.push_back({0, nb});
        } else if (l.kind == Lift::pendant) {
            std::size_t host = find_bag({l.a});
            d.bags.push_back(make_vertex_set({l.v, l.a}));
            d.tree.push_back({host, nb});
        } else {
            std::size_t host = find_bag(make_vertex_set({l.a, l.b}));
            d.bags.push_back(make_vertex_set({l.v, l.a, l.b}));
            d.tree.push_back({host, nb});
        }
    }
}

inline TreeDecomposition forest_decomposition(const UGraph& g) {
    TreeDecomposition d;
    if (g.vertex_count() == 0) return d;
    std::vector<std::size_t> home(g.id_bound(), SIZE_MAX);
    // Root each component at its smallest vertex, one bag per edge.
    for (const auto& comp : connected_components(g)) {
        std::size_t root_bag = d.bags.size();
        d.bags.push_back({comp.front()});
        if (root_bag) d.tree.push_back({0, root_bag});
        home[comp.front()] = root_bag;
        std::vector<VertexId> stack{comp.front()};
        std::vector<bool> seen(g.id_bound(), false);
        seen[comp.front()] = true;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (VertexId w : g.neighbors(v)) {
                if (seen[w]) continue;
                seen[w] = true;
                std::size_t b = d.bags.size();
                d.bags.push_back(make_vertex_set({v, w}));
                d.tree.push_back({home[v], b});
                home[w] = b;
                stack.push_back(w);
            }
        }
    }
    return d;
}

struct ComponentPlan {
    UGraph core;            // reduced simple graph
    std::vector<Lift> lifts;
    int floor = 0;          // treewidth floor from the structure (0, 1 or 2)
    bool forest = false;
    UGraph original;
};

inline std::vector<ComponentPlan> plan(const UGraph& g) {
    UGraph s = simplify(g);
    std::vector<ComponentPlan> out;
    for (const auto& comp : connected_components(s)) {
        ComponentPlan p;
        p.original = induced_subgraph(s, comp);
        if (is_forest(p.original)) {
            p.forest = true;
            p.floor = p.original.edge_count() ? 1 : 0;
        } else {
            p.floor = 2;
            p.core = p.original;
            p.lifts = reduce_low_degree(p.core);
        }
        out.push_back(std::move(p));
    }
    return out;
}

inline TreeDecomposition join(std::vector<TreeDecomposition> parts) {
    TreeDecomposition d;
    for (auto& p : parts) {
        if (p.bags.empty()) continue;
        std::size_t off = d.bags.size();
        for (auto& b : p.bags) d.bags.push_back(std::move(b));
        for (auto [i, j] : p.tree) d.tree.push_back({i + off, j + off});
        if (off) d.tree.push_back({0, off});
    }
    return d;
}

struct CoreOutcome {
    int lower = 0;
    int upper = 0;
    TreeDecomposition decomposition;  // of the core graph
};

inline TreeDecomposition core_decomposition(const Core& c, const UGraph& core, const std::vector<int>& order) {
    std::vector<VertexId> ids;
    for (int i : order) ids.push_back(c.ids[static_cast<std::size_t>(i)]);
    return decomposition_from_order(core, ids);
}

// Bounds the treewidth of a reduced core. With `exact`, searches until the
// bounds meet or throws when the core is too large.
inline CoreOutcome solve_core(const UGraph& core, int skip_below, bool exact, const TwOptions& opt) {
    CoreOutcome out;
    if (core.vertex_count() == 0) {
        out.lower = out.upper = -1;
        return out;
    }
    Core c = Core::from(core);
    if (exact && c.size() > opt.exact_limit)
        throw SizeLimitExceeded("graph has " + std::to_string(c.size()) + " vertices after simplification; exact limit is " +
                                std::to_string(opt.exact_limit) + " (use bounded_treewidth)");
    out.lower = std::max(degeneracy(c), minor_min_width(c));
    auto [w1, o1] = greedy_order(c, Heuristic::min_fill);
    auto [w2, o2] = greedy_order(c, Heuristic::min_degree);
    const auto& best_order = w1 <= w2 ? o1 : o2;
    out.upper = std::min(w1, w2);
    out.decomposition = core_decomposition(c, core, best_order);
    if (out.lower >= out.upper || c.size() > 64) return out;

    EliminationSearch search(c);
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(opt.budget_seconds));
    bool timed = !exact && opt.budget_seconds > 0;
    std::size_t budget = exact ? std::numeric_limits<std::size_t>::max() : opt.node_budget;
    for (int k = std::max(out.lower, skip_below); k < out.upper; ++k) {
        int r = search.decide(k, budget, deadline, timed);
        if (r == 1) {
            out.upper = k;
            out.decomposition = core_decomposition(c, core, search.order());
            break;
        }
        if (r == -1) break;
        out.lower = k + 1;
    }
    if (out.lower < skip_below && out.upper <= skip_below) out.lower = out.upper;
    return out;
}

inline TwResult run(const UGraph& g, bool exact, const TwOptions& opt) {
    auto plans = plan(g);
    // Cheap lower bounds first so components can skip irrelevant searches.
    int global_floor = std::max(opt.known_lower_bound, 0);
    for (const auto& p : plans) global_floor = std::max(global_floor, p.floor);

    int lower = g.vertex_count() ? 0 : -1, upper = g.vertex_count() ? 0 : -1;
    std::vector<TreeDecomposition> parts;
    for (auto& p : plans) {
        if (p.forest) {
            parts.push_back(forest_decomposition(p.original));
            lower = std::max(lower, p.floor);
            upper = std::max(upper, p.floor);
            continue;
        }
        CoreOutcome co = solve_core(p.core, global_floor, exact, opt);
        TreeDecomposition d = co.decomposition;
        apply_lifts(d, p.lifts);
        lower = std::max({lower, p.floor, co.lower});
        upper = std::max({upper, p.floor, co.upper});
        parts.push_back(std::move(d));
    }
    TwResult r;
    r.decomposition = join(std::move(parts));
    r.upper = r.decomposition.width();
    upper = r.upper;
    for (const auto& h : opt.hints) {
        if (!validate(h, g)) continue;
        if (h.width() < upper) {
            upper = h.width();
            r.decomposition = h;
        }
    }
    if (g.vertex_count()) lower = std::max(lower, opt.known_lower_bound);
    if (lower > upper) throw Error("lower bound " + std::to_string(lower) + " exceeds a validated decomposition of width " + std::to_string(upper));
    r.lower = lower;
    r.upper = upper;
    r.exact = lower == upper;
    return r;
}

}  // namespace detail

// Exact treewidth with a certificate; throws SizeLimitExceeded when a reduced
// component is larger than opt.exact_limit.
inline TwResult exact_treewidth(const UGraph& g, const TwOptions& opt = {}) {
    TwResult r = detail::run(g, true, opt);
    if (!r.exact) throw Error("internal: exact search did not close the bounds");
    return r;
}

inline TwResult bounded_treewidth(const UGraph& g, const TwOptions& opt = {}) { return detail::run(g, false, opt); }

inline int treewidth(const UGraph& g, const TwOptions& opt = {}) { return exact_treewidth(g, opt).upper; }

// ---- small-k recognisers ---------------------------------------------------

namespace detail {

inline void add_if_missing(UGraph& g, VertexId a, VertexId b) {
    if (!g.adjacent(a, b)) g.add_edge(a, b);
}

inline bool try_rule(UGraph& g, VertexId v, int k) {
    std::size_t d = g.degree(v);
    if (d <= 1) {
        g.remove_vertex(v);
        return true;
    }
    if (k >= 2 && d == 2) {
        VertexId a = g.neighbors(v)[0], b = g.neighbors(v)[1];
        g.remove_vertex(v);
        add_if_missing(g, a, b);
        return true;
    }
    if (k < 3 || d != 3) return false;
    VertexSet nv = make_vertex_set(g.neighbors(v));
    // Triangle rule.
    for (int i = 0; i < 3; ++i) {
        VertexId a = nv[i], b = nv[(i + 1) % 3], c = nv[(i + 2) % 3];
        if (g.adjacent(a, b)) {
            g.remove_vertex(v);
            add_if_missing(g, a, c);
            add_if_missing(g, b, c);
            return true;
        }
    }
    // Buddy rule.
    for (VertexId w : g.vertices()) {
        if (w == v || g.degree(w) != 3) continue;
        if (make_vertex_set(g.neighbors(w)) != nv) continue;
        g.remove_vertex(v);
        g.remove_vertex(w);
        add_if_missing(g, nv[0], nv[1]);
        add_if_missing(g, nv[1], nv[2]);
        add_if_missing(g, nv[0], nv[2]);
        return true;
    }
    // Cube rule with v as the hub: its three neighbours have degree 3 and
    // pairwise share exactly one further neighbour.
    for (VertexId x : nv)
        if (g.degree(x) != 3) return false;
    std::vector<VertexSet> outer;
    for (VertexId x : nv) {
        VertexSet o;
        for (VertexId y : g.neighbors(x))
            if (y != v) o.push_back(y);
        o = make_vertex_set(o);
        if (o.size() != 2) return false;
        for (VertexId y : o)
            if (y == v || std::find(nv.begin(), nv.end(), y) != nv.end()) return false;
        outer.push_back(o);
    }
    VertexSet all;
    for (const auto& o : outer) all.insert(all.end(), o.begin(), o.end());
    VertexSet a = make_vertex_set(all);
    if (a.size() != 3) return false;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            if (outer[i] == outer[j]) return false;
    for (VertexId x : nv) g.remove_vertex(x);
    g.remove_vertex(v);
    add_if_missing(g, a[0], a[1]);
    add_if_missing(g, a[1], a[2]);
    add_if_missing(g, a[0], a[2]);
    return true;
}

}  // namespace detail

// tw(g) <= k for k in {1,2,3} by reduction rules.
inline bool treewidth_at_most(const UGraph& g, int k) {
    if (k < 1 || k > 3) throw Error("treewidth_at_most supports k in {1,2,3}");
    if (k == 1) return is_forest(g);
    UGraph h = simplify(g);
    bool changed = true;
    while (changed && h.vertex_count() > 0) {
        changed = false;
        for (VertexId v : h.vertices()) {
            if (!h.contains(v)) continue;
            if (detail::try_rule(h, v, k)) changed = true;
        }
    }
    return h.vertex_count() == 0;
}

// Minimum over all elimination orderings of the maximum back-degree. Kept
// independent of the engine above: no simplification, no memo.
inline int brute_force_oracle(const UGraph& g) {
    std::size_t n = g.vertex_count();
    if (n > 10) throw SizeLimitExceeded("brute-force oracle is limited to 10 vertices");
    if (n == 0) return -1;
    std::vector<VertexId> ids = g.vertices();
    std::vector<std::uint16_t> adj(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && g.adjacent(ids[i], ids[j])) adj[i] |= static_cast<std::uint16_t>(1u << j);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    int best = static_cast<int>(n);
    do {
        auto a = adj;
        std::uint16_t left = static_cast<std::uint16_t>((1u << n) - 1);
        int w = 0;
        for (int v : perm) {
            std::uint16_t nb = a[v] & left;
            w = std::max(w, std::popcount(nb));
            if (w >= best) break;
            for (std::size_t x = 0; x < n; ++x)
                if (nb & (1u << x)) a[x] |= static_cast<std::uint16_t>(nb & ~(1u << x));
            left &= static_cast<std::uint16_t>(~(1u << v));
        }
        best = std::min(best, w);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace twdist
