#pragma once

// Replays the desk-scale results as named claims. Each claim draws its
// instances from a seed derived from the master seed and its id, so a run is
// reproducible per (seed, profile) even though claims execute concurrently.

#include <chrono>
#include <functional>
#include <future>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "twdist/constructions.hpp"
#include "twdist/display_check.hpp"
#include "twdist/distances.hpp"
#include "twdist/instances.hpp"
#include "twdist/json_io.hpp"
#include "twdist/newick.hpp"
#include "twdist/reductions.hpp"

namespace twdist {

enum class Profile { smoke, desk, extended };

inline Profile parse_profile(const std::string& s) {
    if (s == "smoke") return Profile::smoke;
    if (s == "desk") return Profile::desk;
    if (s == "extended") return Profile::extended;
    throw Error("unknown profile '" + s + "' (smoke, desk, extended)");
}

inline const char* profile_name(Profile p) {
    switch (p) {
        case Profile::smoke: return "smoke";
        case Profile::desk: return "desk";
        default: return "extended";
    }
}

struct ClaimReport {
    std::string id;
    std::string operation;  // module operation exercised
    std::string anchor;     // the result it replays
    std::size_t instances = 0;
    std::size_t failures = 0;
    std::optional<json> counterexample;  // first failing instance
    std::vector<std::string> notes;
    double seconds = 0;
    bool passed() const { return failures == 0 && !error; }
    std::optional<std::string> error;  // exception that stopped the claim
};

struct VerifyOptions {
    std::vector<std::string> only;  // claim ids; empty = all
    bool corrupt_cps = false;       // negative control: break the pendant-subtree reduction
    bool parallel = true;
};

namespace detail {

inline std::uint64_t claim_seed(std::uint64_t master, const std::string& id) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : id) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    std::uint64_t z = master + h + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Ctx {
    Profile profile;
    std::uint64_t seed;
    const VerifyOptions& opt;
    std::size_t pick(std::size_t smoke, std::size_t desk, std::size_t extended) const {
        return profile == Profile::smoke ? smoke : profile == Profile::desk ? desk : extended;
    }
};

// Counts instances and keeps the first counterexample.
struct Tally {
    ClaimReport& r;
    void check(bool ok, const std::function<json()>& payload) {
        ++r.instances;
        if (ok) return;
        ++r.failures;
        if (!r.counterexample) r.counterexample = payload();
    }
};

inline json pair_json(const PhyloTree& a, const PhyloTree& b) { return {{"first", write_tree(a)}, {"second", write_tree(b)}}; }

inline int tw_pair(const PhyloTree& a, const PhyloTree& b) { return treewidth(build_display_graph(a, b).graph); }

// Connected graph: random tree plus extra edges.
inline UGraph random_connected_graph(std::size_t n, std::size_t extra, std::mt19937_64& rng) {
    UGraph g;
    for (std::size_t i = 0; i < n; ++i) g.add_vertex();
    for (VertexId v = 1; v < n; ++v) g.add_edge(v, static_cast<VertexId>(rng() % v));
    for (std::size_t i = 0; i < extra; ++i) {
        VertexId a = static_cast<VertexId>(rng() % n), b = static_cast<VertexId>(rng() % n);
        if (a != b && !g.adjacent(a, b)) g.add_edge(a, b);
    }
    return g;
}

inline void obs2_invariance(const Ctx& c, ClaimReport& r) {
    std::mt19937_64 rng(c.seed);
    Tally t{r};
    std::size_t count = c.pick(60, 400, 2000);
    for (std::size_t i = 0; i < count; ++i) {
        UGraph g = random_connected_graph(3 + rng() % 6, rng() % 6, rng);
        if (is_unique_triangle_graph(g)) continue;
        int base = brute_force_oracle(g);
        auto es = g.edges();
        Edge e = es[rng() % es.size()];
        UGraph sub = subdivide_edge(g, e);
        int ts = brute_force_oracle(sub);
        std::optional<int> tsup;
        std::vector<VertexId> deg2;
        for (VertexId v : g.vertices())
            if (g.degree(v) == 2 && !g.adjacent(g.neighbors(v)[0], g.neighbors(v)[1]) && g.neighbors(v)[0] != g.neighbors(v)[1]) deg2.push_back(v);
        if (!deg2.empty()) tsup = brute_force_oracle(suppress_degree2(g, deg2[rng() % deg2.size()]));
        t.check(ts == base && (!tsup || *tsup == base), [&] {
            return json{{"graph", graph_to_json(g)}, {"tw", base}, {"tw_subdivided", ts}, {"tw_suppressed", tsup ? json(*tsup) : json(nullptr)}};
        });
    }
}

inline void compat_iff_tw2(const Ctx& c, ClaimReport& r) {
    Tally t{r};
    std::size_t max_n = c.pick(5, 6, 6);
    for (std::size_t n = 3; n <= max_n; ++n) {
        auto trees = all_trees(taxon_names(n));
        for (const auto& a : trees)
            for (const auto& b : trees) {
                bool same = a.canonical() == b.canonical();
                int tw = tw_pair(a, b);
                t.check((tw == 2) == same, [&] {
                    json j = pair_json(a, b);
                    j["tw"] = tw;
                    j["isomorphic"] = same;
                    return j;
                });
            }
    }
    if (c.profile == Profile::extended) {
        std::mt19937_64 rng(c.seed);
        auto taxa = taxon_names(8);
        for (int i = 0; i < 300; ++i) {
            PhyloTree a = random_tree(taxa, rng()), b = random_tree(taxa, rng());
            bool same = a.canonical() == b.canonical();
            int tw = tw_pair(a, b);
            t.check((tw == 2) == same, [&] { return pair_json(a, b); });
        }
    }
}

inline void cps_invariance(const Ctx& c, ClaimReport& r) {
    std::mt19937_64 rng(c.seed);
    Tally t{r};
    std::size_t count = c.pick(25, 200, 600);
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t base = c.profile == Profile::smoke ? 4 : 4 + rng() % 4;
        std::size_t grafts = 1 + rng() % (c.profile == Profile::smoke ? 1 : std::min<std::size_t>(2, 9 - base));
        TreePair p = random_cherry_injected_pair(base, grafts, rng());
        CpsReport rep;
        try {
            rep = apply_cps(p.first, p.second);
        } catch (const Error&) {
            ++skipped;
            continue;
        }
        PhyloTree second = rep.second;
        if (c.opt.corrupt_cps) {
            // swap two taxa of the reduced second tree
            UGraph g = second.graph();
            auto taxa = second.taxa();
            if (taxa.size() >= 2) {
                VertexId x = g.vertex_of(taxa[0]), y = g.vertex_of(taxa[1]);
                g.clear_label(x);
                g.clear_label(y);
                g.set_label(x, taxa[1]);
                g.set_label(y, taxa[0]);
                second = PhyloTree(g);
            }
        }
        int before = d_tw(p.first, p.second).value;
        int after = second.size() >= 3 ? d_tw(rep.first, second).value : 0;
        t.check(before == after, [&] {
            json j = pair_json(p.first, p.second);
            j["reduced"] = pair_json(rep.first, second);
            j["d_tw_before"] = before;
            j["d_tw_after"] = after;
            return j;
        });
    }
    if (skipped) r.notes.push_back(std::to_string(skipped) + " drawn pairs had nothing to reduce");
    if (c.opt.corrupt_cps) r.notes.push_back("negative control: reduction corrupted on purpose");
}

inline void chain_clip_bounds(const Ctx& c, ClaimReport& r) {
    std::mt19937_64 rng(c.seed);
    Tally t{r};
    std::size_t count = c.pick(20, 100, 300);
    std::size_t separated = 0;
    for (std::size_t i = 0; i < count; ++i) {
        bool aligned = i % 3 == 0;
        TreePair p = random_chain_pair(4 + rng() % 2, 3 + rng() % 2, rng(), aligned);
        if (is_compatible(p.first, p.second)) continue;
        DisplayGraph d = build_display_graph(p.first, p.second);
        int before = treewidth(d.graph);
        for (const auto& ch : find_common_chains(p.first, p.second)) {
            auto [x, y] = clip_chain(p.first, p.second, ch, 2);
            int after = tw_pair(x, y);
            bool sep = chain_separates_ends(d, ch);
            separated += sep;
            bool ok = after <= before && before <= after + 1 && (!sep || after == before);
            t.check(ok, [&] {
                json j = pair_json(p.first, p.second);
                j["chain"] = ch.taxa;
                j["tw_before"] = before;
                j["tw_after"] = after;
                j["separating"] = sep;
                return j;
            });
        }
    }
    r.notes.push_back(std::to_string(separated) + " clipped chains separate their end rungs (equality required there)");
}

// Shared instance stream for the two cluster claims.
template <class F>
void for_cluster_instances(const Ctx& c, F&& f) {
    std::mt19937_64 rng(c.seed);
    std::size_t want = c.pick(20, 100, 300), done = 0;
    for (std::size_t i = 0; i < 8 * want && done < want; ++i) {
        TreePair p = random_common_split_pair(5 + rng() % 4, rng());
        if (is_compatible(p.first, p.second)) continue;
        auto cs = common_splits(p.first, p.second);
        const Split& s = cs[rng() % cs.size()].split;
        f(p, s, cluster_decompose(p.first, p.second, s));
        ++done;
    }
}

inline void cluster_bounds(const Ctx& c, ClaimReport& r) {
    Tally t{r};
    for_cluster_instances(c, [&](const TreePair& p, const Split& s, const ClusterParts& cp) {
        int m = std::max(cp.p, cp.q);
        t.check(m <= cp.tw_display && cp.tw_display <= m + 1, [&] {
            json j = pair_json(p.first, p.second);
            j["split"] = s.str();
            j["p"] = cp.p;
            j["q"] = cp.q;
            j["tw"] = cp.tw_display;
            return j;
        });
    });
}

inline void cluster_nec_suff(const Ctx& c, ClaimReport& r) {
    Tally t{r};
    std::size_t tight = 0;
    for_cluster_instances(c, [&](const TreePair& p, const Split& s, const ClusterParts& cp) {
        bool is_tight = cp.tw_display == std::max(cp.p, cp.q);
        tight += is_tight;
        t.check(cp.predicts_tight() == is_tight, [&] {
            json j = pair_json(p.first, p.second);
            j["split"] = s.str();
            j["predicted_tight"] = cp.predicts_tight();
            j["tight"] = is_tight;
            return j;
        });
    });
    r.notes.push_back(std::to_string(tight) + " instances meet the lower bound");
}

inline void unitball_tbr(const Ctx& c, ClaimReport& r) {
    std::mt19937_64 rng(c.seed);
    Tally t{r};
    std::size_t trees = c.pick(6, 30, 80);
    for (std::size_t i = 0; i < trees; ++i) {
        std::size_t n = c.profile == Profile::smoke ? 4 + i % 2 : 4 + i % 4;
        PhyloTree a = random_tree(taxon_names(n), rng());
        for (const auto& b : tbr_unit_ball(a)) {
            int v = d_tw(a, b).value;
            t.check(v == 1, [&] {
                json j = pair_json(a, b);
                j["d_tw"] = v;
                return j;
            });
        }
    }
}

inline void unitball_mp2(const Ctx& c, ClaimReport& r) {
    std::mt19937_64 rng(c.seed);
    Tally t{r};
    std::size_t ones = 0;
    auto consider = [&](const PhyloTree& a, const PhyloTree& b) {
        auto m = d_mp_2state(a, b);
        if (m.value != 1) return;
        ++ones;
        int v = d_tw(a, b).value;
        t.check(v == 1, [&] {
            json j = pair_json(a, b);
            j["d_tw"] = v;
            return j;
        });
    };
    auto five = all_trees(taxon_names(5));
    for (std::size_t i = 0; i < five.size(); ++i)
        for (std::size_t j = i + 1; j < five.size(); ++j) consider(five[i], five[j]);
    std::size_t samples = c.pick(0, 300, 1500);
    for (std::size_t i = 0; i < samples; ++i) {
        auto taxa = taxon_names(6 + i % 2);
        PhyloTree a = random_tree(taxa, rng());
        auto ball = tbr_unit_ball(a);
        // neighbours of neighbours reach two-state distance 1 and 2
        PhyloTree b = ball[rng() % ball.size()];
        auto ball2 = tbr_unit_ball(b);
        consider(a, ball2[rng() % ball2.size()]);
    }
    r.notes.push_back(std::to_string(ones) + " pairs at two-state parsimony distance 1");
}

inline void doubling_tw3(const Ctx& c, ClaimReport& r) {
    Tally t{r};
    int top = static_cast<int>(c.pick(2, 3, 5));
    for (int i = 0; i <= top; ++i) {
        auto f = doubling_family(i);
        Validation v = validate(f.decomposition, f.display.graph);
        bool incompatible = !is_compatible(f.first, f.second);
        TwOptions o;
        o.hints = {f.decomposition};
        o.known_lower_bound = incompatible ? 3 : 0;
        TwResult tw = bounded_treewidth(f.display.graph, o);
        t.check(v.ok && f.decomposition.width() == 3 && incompatible && tw.exact && tw.upper == 3, [&] {
            return json{{"stage", i}, {"valid", v.ok}, {"violation", v.violation}, {"width", f.decomposition.width()}, {"incompatible", incompatible}};
        });
    }
}

inline void doubling_maf_growth(const Ctx& c, ClaimReport& r) {
    Tally t{r};
    (void)c;
    auto maf = [](int i) {
        auto [a, b] = doubling_pair(i);
        return d_maf(strip_roots(a), strip_roots(b));
    };
    int m0 = maf(0), m1 = maf(1);
    t.check(m0 == 2, [&] { return json{{"stage", 0}, {"d_maf", m0}}; });
    t.check(m1 >= 2 * m0 - 1 && m1 > m0, [&] { return json{{"stage", 1}, {"d_maf", m1}, {"previous", m0}}; });
    r.notes.push_back("d_maf at stages 0,1: " + std::to_string(m0) + ", " + std::to_string(m1));
}

inline void doubling_mp_growth(const Ctx& c, ClaimReport& r) {
    Tally t{r};
    int top = static_cast<int>(c.pick(2, 3, 5));
    for (int i = 0; i <= top; ++i) {
        auto [a, b] = doubling_pair(i);
        Character f{doubling_character(a.taxa())};
        int sa = fitch_score(a, f), sb = fitch_score(b, f);
        t.check(sa <= (1 << i) && sb >= (2 << i) && sb - sa >= (1 << i), [&] { return json{{"stage", i}, {"score_first", sa}, {"score_second", sb}}; });
    }
}

inline void embed_minor(const Ctx& c, ClaimReport& r) {
    std::mt19937_64 rng(c.seed);
    Tally t{r};
    std::vector<std::pair<std::string, UGraph>> cases{{"K4", complete_graph(4)}, {"C5", cycle_graph(5)}, {"Petersen", petersen_graph()}};
    if (c.profile != Profile::smoke) cases.push_back({"K5", complete_graph(5)});
    std::size_t randoms = c.pick(2, 10, 40);
    for (std::size_t i = 0; i < randoms; ++i) cases.push_back({"random" + std::to_string(i), random_connected_graph(4 + rng() % 6, 1 + rng() % 6, rng)});
    for (const auto& [name, g] : cases) {
        auto e = embed_graph_as_display_minor(g);
        auto why = minor_model_problem(e.model);
        t.check(!why && e.audit.all_ok(), [&] {
            return json{{"graph", name}, {"problem", why ? *why : ""}, {"taxa", e.audit.taxa}, {"display_vertices", e.audit.display_vertices},
                        {"display_edges", e.audit.display_edges}};
        });
    }
}

inline void grid_minor(const Ctx& c, ClaimReport& r) {
    Tally t{r};
    std::size_t top = c.pick(4, 5, 7);
    for (std::size_t k = 3; k <= top; ++k) {
        auto g = grid_display_pair(k);
        auto why = minor_model_problem(g.model);
        std::size_t taxa = (k - 1) * (k - 1) + 3;
        bool counts = g.first.size() == taxa && g.second.size() == taxa && g.model.host.vertex_count() == 3 * (k - 1) * (k - 1) + 5;
        int grid_tw = k <= 5 ? treewidth(g.model.pattern) : static_cast<int>(k);
        TwResult host = bounded_treewidth(g.model.host);
        t.check(!why && counts && grid_tw == static_cast<int>(k) && host.upper >= static_cast<int>(k), [&] {
            return json{{"k", k}, {"problem", why ? *why : ""}, {"counts", counts}, {"grid_tw", grid_tw}, {"host_upper", host.upper}};
        });
        r.notes.push_back("k=" + std::to_string(k) + ": engine bounds on tw(D) " + std::to_string(host.lower) + ".." + std::to_string(host.upper) +
                          ", minor gives >= " + std::to_string(k));
    }
}

inline void display_bounds(const Ctx& c, ClaimReport& r) {
    std::mt19937_64 rng(c.seed);
    Tally t{r};
    std::size_t count = c.pick(10, 50, 150);
    std::size_t max_r = c.profile == Profile::smoke ? 2 : 4;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t n = 4 + rng() % 4, rr = rng() % (max_r + 1);
        PhyloTree tree = random_tree(taxon_names(n), rng());
        PhyloNetwork net = random_network_over(tree, rr, rng());
        auto cert = displays(net, tree);
        if (!cert) {
            t.check(false, [&] { return json{{"network", graph_to_json(net.graph())}, {"tree", write_tree(tree)}, {"problem", "no certificate"}}; });
            continue;
        }
        auto why = certificate_problem(net, tree, *cert);
        bool emb = extract_embedding(tree, *cert).ok();
        auto b = check_display_bounds(net, tree, *cert);
        t.check(!why && emb && b.reticulation_bound() && b.network_bound(), [&] {
            return json{{"network", graph_to_json(net.graph())}, {"tree", write_tree(tree)}, {"tw_display", b.tw_display}, {"tw_network", b.tw_network}, {"r", b.r}};
        });
    }
    PhyloTree tree = random_tree(taxon_names(6), rng());
    PhyloNetwork same(tree);
    auto cert = displays(same, tree);
    auto b = check_display_bounds(same, tree, *cert);
    t.check(b.tw_display == 2 && b.r == 0, [&] { return json{{"tree", write_tree(tree)}, {"tw_display", b.tw_display}}; });
    if (c.profile != Profile::smoke) {
        if (auto w = find_nodisplay_equal_tw(6, 3, 300, c.seed))
            r.notes.push_back("non-displayed tree with tw(D) = tw(N) = " + std::to_string(w->tw) + ": " + write_tree(w->tree));
        else
            r.notes.push_back("no non-displayed tree with tw(D) = tw(N) in the search range");
    }
}

inline void tbr_diameter(const Ctx& c, ClaimReport& r) {
    Tally t{r};
    std::size_t top = c.pick(5, 5, 6);
    for (std::size_t n = 4; n <= top; ++n) {
        auto trees = all_trees(taxon_names(n));
        int worst = 0;
        for (std::size_t i = 0; i < trees.size(); ++i)
            for (std::size_t j = i + 1; j < trees.size(); ++j) worst = std::max(worst, d_tbr(trees[i], trees[j]));
        int bound = tbr_diameter_upper(static_cast<int>(n));
        t.check(worst <= bound, [&] { return json{{"n", n}, {"max_d_tbr", worst}, {"bound", bound}}; });
        r.notes.push_back("n=" + std::to_string(n) + ": max d_tbr " + std::to_string(worst) + ", bound " + std::to_string(bound));
    }
}

inline void dtw_le_dtbr(const Ctx& c, ClaimReport& r) {
    std::mt19937_64 rng(c.seed);
    Tally t{r};
    auto consider = [&](const PhyloTree& a, const PhyloTree& b) {
        int tw = d_tw(a, b).value, tbr = d_tbr(a, b);
        t.check(tw <= tbr, [&] {
            json j = pair_json(a, b);
            j["d_tw"] = tw;
            j["d_tbr"] = tbr;
            return j;
        });
    };
    auto five = all_trees(taxon_names(5));
    for (std::size_t i = 0; i < five.size(); ++i)
        for (std::size_t j = i + 1; j < five.size(); ++j) consider(five[i], five[j]);
    std::size_t samples = c.pick(0, 150, 600);
    for (std::size_t i = 0; i < samples; ++i) {
        auto taxa = taxon_names(6 + i % 3);
        consider(random_tree(taxa, rng()), random_tree(taxa, rng()));
    }
    for (int i = 0; i <= 1; ++i) {
        auto [a, b] = doubling_pair(i);
        consider(strip_roots(a), strip_roots(b));
    }
}

inline void triangle_violation_search(const Ctx& c, ClaimReport& r) {
    Tally t{r};
    std::size_t tries = c.pick(50, 400, 3000);
    for (std::size_t n : {6, 7}) {
        auto v = find_triangle_violation(n, tries, c.seed + n, {});
        if (!v) {
            r.notes.push_back("n=" + std::to_string(n) + ": no violation in " + std::to_string(tries) + " tries");
            continue;
        }
        int ab = d_tw(v->a, v->b).value, bc = d_tw(v->b, v->c).value, ac = d_tw(v->a, v->c).value;
        bool confirmed = ab == v->ab && bc == v->bc && ac == v->ac && ab + bc < ac;
        t.check(confirmed, [&] { return json{{"a", write_tree(v->a)}, {"b", write_tree(v->b)}, {"c", write_tree(v->c)}}; });
        r.notes.push_back("n=" + std::to_string(n) + ": violation " + std::to_string(ab) + " + " + std::to_string(bc) + " < " + std::to_string(ac) + " for " +
                          write_tree(v->a) + " " + write_tree(v->b) + " " + write_tree(v->c));
    }
}

struct ClaimDef {
    const char* id;
    const char* operation;
    const char* anchor;
    void (*run)(const Ctx&, ClaimReport&);
};

inline const std::vector<ClaimDef>& claim_table() {
    static const std::vector<ClaimDef> table{
        {"obs2-invariance", "graph_core.subdivide_edge / suppress_degree2", "Observation: subdividing an edge or suppressing a degree-2 vertex keeps treewidth", obs2_invariance},
        {"compat-iff-tw2", "treewidth.exact_treewidth on display_graph", "Theorem: trees are compatible iff their display graph has treewidth 2", compat_iff_tw2},
        {"cps-invariance", "reductions.apply_cps", "Theorem: common pendant subtree reduction preserves display treewidth", cps_invariance},
        {"chain-clip-bounds", "reductions.clip_chain", "Lemmas: clipping a common chain to length 2 changes treewidth by at most one, not at all when it separates", chain_clip_bounds},
        {"cluster-bounds", "reductions.cluster_decompose", "Theorem: max(p,q) <= tw(D) <= max(p,q)+1 around a common split", cluster_bounds},
        {"cluster-nec-suff", "reductions.cluster_decompose", "Theorem: bracket-graph equalities decide when the lower bound is attained", cluster_nec_suff},
        {"unitball-tbr", "phylo_model.tbr_unit_ball + distances.d_tw", "Theorem: TBR distance 1 implies treewidth distance 1", unitball_tbr},
        {"unitball-mp2", "distances.d_mp_2state + distances.d_tw", "Theorem: parsimony distance 1 implies treewidth distance 1 (two-state form)", unitball_mp2},
        {"doubling-tw3", "constructions.doubling_pair", "Claim: every doubled pair has display treewidth 3", doubling_tw3},
        {"doubling-maf-growth", "constructions.doubling_pair + distances.d_maf", "Lemma: d_maf of the next stage is at least 2 d_maf - 1", doubling_maf_growth},
        {"doubling-mp-growth", "constructions.doubling_pair + distances.fitch_score", "Theorem: parsimony distance of the doubled pairs is unbounded", doubling_mp_growth},
        {"embed-minor", "constructions.embed_graph_as_display_minor", "Theorem: every graph of max degree d is a minor of a display graph with O(nd) size", embed_minor},
        {"grid-minor", "constructions.grid_display_pair", "Grid packing: (k-1)^2+3 taxa give a k x k grid minor", grid_minor},
        {"display-bounds", "display_check.displays + check_display_bounds", "Corollary: tw(D(N,T)) <= min(2 tw(N)+1, r(N)+2) when N displays T", display_bounds},
        {"tbr-diameter", "distances.d_tbr + tbr_diameter_upper", "Corollary: TBR diameter upper bound", tbr_diameter},
        {"dtw-le-dtbr", "distances.d_tw + d_tbr", "Corollary: treewidth distance is at most TBR distance", dtw_le_dtbr},
        {"triangle-violation-search", "distances.find_triangle_violation", "Treewidth distance is not a metric: triangle inequality can fail", triangle_violation_search},
    };
    return table;
}

}  // namespace detail

inline std::vector<std::string> claim_ids() {
    std::vector<std::string> out;
    for (const auto& d : detail::claim_table()) out.push_back(d.id);
    return out;
}

inline std::vector<ClaimReport> verify_all(std::uint64_t seed, Profile profile, const VerifyOptions& opt = {}) {
    for (const auto& id : opt.only) {
        auto ids = claim_ids();
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw Error("unknown claim '" + id + "'");
    }
    std::vector<const detail::ClaimDef*> chosen;
    for (const auto& d : detail::claim_table())
        if (opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), d.id) != opt.only.end()) chosen.push_back(&d);

    auto run_one = [&](const detail::ClaimDef* d) {
        ClaimReport r;
        r.id = d->id;
        r.operation = d->operation;
        r.anchor = d->anchor;
        auto start = std::chrono::steady_clock::now();
        try {
            d->run(detail::Ctx{profile, detail::claim_seed(seed, d->id), opt}, r);
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return r;
    };
    std::vector<ClaimReport> out;
    if (opt.parallel) {
        std::vector<std::future<ClaimReport>> jobs;
        for (const auto* d : chosen) jobs.push_back(std::async(std::launch::async, run_one, d));
        for (auto& j : jobs) out.push_back(j.get());
    } else {
        for (const auto* d : chosen) out.push_back(run_one(d));
    }
    return out;
}

inline json report_to_json(const ClaimReport& r) {
    json j{{"claim", r.id}, {"operation", r.operation}, {"anchor", r.anchor}, {"instances", r.instances}, {"failures", r.failures},
           {"passed", r.passed()}, {"seconds", r.seconds}, {"notes", r.notes}};
    if (r.counterexample) j["counterexample"] = *r.counterexample;
    if (r.error) j["error"] = *r.error;
    return j;
}

inline json reports_to_json(const std::vector<ClaimReport>& rs, std::uint64_t seed, Profile p) {
    json claims = json::array();
    for (const auto& r : rs) claims.push_back(report_to_json(r));
    bool all = std::all_of(rs.begin(), rs.end(), [](const ClaimReport& r) { return r.passed(); });
    return {{"seed", seed}, {"profile", profile_name(p)}, {"passed", all}, {"claims", claims}};
}

inline std::string reports_to_table(const std::vector<ClaimReport>& rs) {
    std::ostringstream os;
    os << std::left << std::setw(27) << "claim" << std::setw(7) << "result" << std::right << std::setw(10) << "instances" << std::setw(9) << "failures"
       << std::setw(9) << "seconds" << "\n";
    for (const auto& r : rs) {
        os << std::left << std::setw(27) << r.id << std::setw(7) << (r.passed() ? "pass" : "FAIL") << std::right << std::setw(10) << r.instances
           << std::setw(9) << r.failures << std::setw(9) << std::fixed << std::setprecision(2) << r.seconds << "\n";
        if (r.error) os << "    error: " << *r.error << "\n";
        for (const auto& n : r.notes) os << "    " << n << "\n";
        if (r.counterexample) os << "    counterexample: " << r.counterexample->dump() << "\n";
    }
    os << "\ntraceability\n";
    for (const auto& r : rs) os << "  " << std::left << std::setw(27) << r.id << r.operation << "\n  " << std::setw(27) << "" << r.anchor << "\n";
    return os.str();
}

}  // namespace twdist
