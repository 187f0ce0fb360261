#include <gtest/gtest.h>

#include <random>

#include "twdist/instances.hpp"
#include "twdist/reductions.hpp"

using namespace twdist;

namespace {

PhyloTree T(const char* s) { return parse_tree(s); }

int tw_of(const PhyloTree& a, const PhyloTree& b) { return treewidth(build_display_graph(a, b).graph); }

// S is a common pendant set iff it is a cluster in both trees and the two
// restrictions to S plus one outside taxon coincide.
std::set<TaxonSet> pendant_oracle(const PhyloTree& a, const PhyloTree& b) {
    std::set<TaxonSet> sides_a, sides_b, common;
    for (const auto& [tree, out] : {std::pair{&a, &sides_a}, std::pair{&b, &sides_b}})
        for (const auto& es : edge_splits(*tree)) {
            out->insert(es.split.left);
            out->insert(es.split.right);
        }
    for (const auto& s : sides_a) {
        if (s.size() < 2 || !sides_b.count(s)) continue;
        std::string z;
        for (const auto& x : a.taxa())
            if (!std::binary_search(s.begin(), s.end(), x)) z = x;
        auto with = s;
        with.push_back(z);
        if (restrict(a, with).canonical() == restrict(b, with).canonical()) common.insert(s);
    }
    std::set<TaxonSet> maximal;
    for (const auto& s : common) {
        bool covered = false;
        for (const auto& t : common)
            if (t.size() > s.size() && std::includes(t.begin(), t.end(), s.begin(), s.end())) covered = true;
        if (!covered) maximal.insert(s);
    }
    return maximal;
}

std::set<TaxonSet> pendant_sets(const PhyloTree& a, const PhyloTree& b) {
    std::set<TaxonSet> out;
    for (const auto& p : find_common_pendant_subtrees(a, b)) out.insert(p.taxa);
    return out;
}

bool has_common_cherry(const PhyloTree& a, const PhyloTree& b) {
    for (const auto& p : find_common_pendant_subtrees(a, b))
        if (p.taxa.size() == 2) return true;
    for (const auto& x : a.taxa())
        for (const auto& y : a.taxa())
            if (x < y && a.parent(x) == a.parent(y) && b.parent(x) == b.parent(y)) return true;
    return false;
}

}  // namespace

TEST(Pendant, RootLocationMatters) {
    PhyloTree t1 = T("(((a,b),(c,d)),(e,f));");
    PhyloTree t2 = T("((((c,d),b),a),(e,f));");
    EXPECT_EQ(pendant_sets(t1, t2), (std::set<TaxonSet>{{"c", "d"}, {"e", "f"}}));
    // the unrooted restrictions to {a,b,c,d} agree all the same
    EXPECT_TRUE(is_compatible(restrict(t1, {"a", "b", "c", "d"}), restrict(t2, {"a", "b", "c", "d"})));
    EXPECT_TRUE(find_common_pendant_subtrees(T("((a,b),(c,d));"), T("((a,c),(b,d));")).empty());
}

TEST(Pendant, IdenticalTrees) {
    PhyloTree t = random_tree(taxon_names(8), 3);
    auto found = find_common_pendant_subtrees(t, t);
    ASSERT_EQ(found.size(), 8u);
    for (const auto& p : found) {
        EXPECT_EQ(p.taxa.size(), 7u);
        EXPECT_TRUE(t.graph().has_edge(p.first));
        EXPECT_TRUE(p.root_first == p.first.u || p.root_first == p.first.v);
    }
}

TEST(Pendant, MatchesOracle) {
    std::mt19937_64 rng(17);
    int nonempty = 0;
    for (int i = 0; i < 300; ++i) {
        TreePair p = random_cherry_injected_pair(4 + rng() % 3, rng() % 4, rng());
        auto got = pendant_sets(p.first, p.second);
        nonempty += !got.empty();
        EXPECT_EQ(got, pendant_oracle(p.first, p.second));
    }
    EXPECT_GT(nonempty, 100);
}

TEST(Cps, CommonCherry) {
    PhyloTree a = T("((x,y),(c,d),(e,f));"), b = T("((x,y),(c,e),(d,f));");
    CpsReport r = apply_cps(a, b, true);
    EXPECT_EQ(r.first.size(), 5u);
    ASSERT_EQ(r.groups.size(), 1u);
    EXPECT_EQ(r.groups[0].label, "x_y");
    EXPECT_EQ(r.groups[0].taxa, (TaxonSet{"x", "y"}));
    EXPECT_EQ(*r.tw_before, *r.tw_after);
    EXPECT_FALSE(is_compatible(r.first, r.second));
}

TEST(Cps, FreshLabelAvoidsClash) {
    PhyloTree a = T("((x,y),(x_y,d),(e,f));"), b = T("((x,y),(x_y,e),(d,f));");
    CpsReport r = apply_cps(a, b);
    ASSERT_EQ(r.groups.size(), 1u);
    EXPECT_EQ(r.groups[0].label, "x_y_");
}

TEST(Cps, Errors) {
    EXPECT_THROW(apply_cps(T("((a,b),(c,d));"), T("((a,c),(b,d));")), Error);
    try {
        apply_cps(T("((a,b),(c,d));"), T("((a,c),(b,d));"));
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "nothing to reduce");
    }
    EXPECT_THROW(apply_cps(T("((a,b),(c,d));"), T("((a,b),(c,d));")), Error);
}

TEST(Cps, PreservesTreewidth) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 200; ++i) {
        std::size_t base = 4 + rng() % 3;
        TreePair p = random_cherry_injected_pair(base, 1 + rng() % (9 - base), rng());
        ASSERT_LE(p.first.size(), 9u);
        CpsReport r = apply_cps(p.first, p.second, true);
        EXPECT_EQ(*r.tw_before, *r.tw_after);
        EXPECT_EQ(*r.tw_before, brute_force_oracle(normalize(build_display_graph(p.first, p.second)).graph));
        EXPECT_FALSE(has_common_cherry(r.first, r.second));
        // every original taxon is either kept or inside exactly one group
        std::size_t covered = r.first.size() - r.groups.size();
        for (const auto& g : r.groups) covered += g.taxa.size();
        EXPECT_EQ(covered, p.first.size());
        for (const auto& g : r.groups) EXPECT_TRUE(std::binary_search(r.first.taxa().begin(), r.first.taxa().end(), g.label));
    }
}

TEST(Chain, ClipShape) {
    PhyloTree a = chain_tree("(x1,x2)", taxon_names(5, "c"), "(x3,x4)");
    PhyloTree b = chain_tree("(x1,x3)", taxon_names(5, "c"), "(x2,x4)");
    auto chains = find_common_chains(a, b);
    ASSERT_EQ(chains.size(), 1u);
    ASSERT_EQ(chains[0].length(), 5u);
    for (int d = 2; d <= 4; ++d) {
        auto [x, y] = clip_chain(a, b, chains[0], d);
        EXPECT_EQ(x.size(), 4u + d);
        auto after = find_common_chains(x, y);
        if (d >= 3) {
            ASSERT_EQ(after.size(), 1u);
            EXPECT_EQ(after[0].length(), static_cast<std::size_t>(d));
        }
        // first ceil(d/2) and last floor(d/2) survive
        for (int i = 0; i < (d + 1) / 2; ++i) EXPECT_TRUE(x.graph().find(chains[0].taxa[i]));
        for (int i = 0; i < d / 2; ++i) EXPECT_TRUE(x.graph().find(chains[0].taxa[4 - i]));
        EXPECT_LE(tw_of(x, y), tw_of(a, b));
    }
    EXPECT_THROW(clip_chain(a, b, chains[0], 1), Error);
    EXPECT_THROW(clip_chain(a, b, chains[0], 5), Error);
    Chain bogus = chains[0];
    std::swap(bogus.taxa[0], bogus.taxa[1]);
    EXPECT_THROW(clip_chain(a, b, bogus, 2), Error);
}

TEST(Chain, GridAndSeparation) {
    std::mt19937_64 rng(31);
    int seps = 0, checked = 0;
    for (int i = 0; i < 50; ++i) {
        TreePair p = random_chain_pair(4 + rng() % 3, 3 + rng() % 3, rng(), i % 2);
        if (is_compatible(p.first, p.second)) continue;
        DisplayGraph d = build_display_graph(p.first, p.second);
        for (const auto& c : find_common_chains(p.first, p.second)) {
            VertexSet grid = chain_grid(d, c);
            EXPECT_EQ(grid.size(), 2 * c.length());
            // component count after deleting the grid and chain taxa, by hand
            UGraph rest = d.graph;
            for (VertexId v : grid) rest.remove_vertex(v);
            for (const auto& x : c.taxa) rest.remove_vertex(rest.vertex_of(x));
            std::vector<int> comp(d.graph.id_bound(), -1);
            int count = 0;
            for (VertexId s : rest.vertices()) {
                if (comp[s] >= 0) continue;
                std::vector<VertexId> stack{s};
                comp[s] = count;
                while (!stack.empty()) {
                    VertexId v = stack.back();
                    stack.pop_back();
                    for (VertexId w : rest.neighbors(v))
                        if (comp[w] < 0) {
                            comp[w] = count;
                            stack.push_back(w);
                        }
                }
                ++count;
            }
            EXPECT_EQ(chain_is_separator(d, c), count > 1);
            if (chain_separates_ends(d, c)) {
                EXPECT_TRUE(chain_is_separator(d, c));
            }
            EXPECT_TRUE(is_separator(d.graph, grid));  // the chain taxa alone fall off
            seps += count > 1;
            ++checked;
        }
    }
    EXPECT_GT(checked, 30);
    EXPECT_GT(seps, 5);
    DisplayGraph other = build_display_graph(T("((a,b),(c,d));"), T("((a,c),(b,d));"));
    Chain fake{{"a", "b", "c"}, {9990, 9991, 9992}, {9993, 9994, 9995}};
    EXPECT_THROW(chain_grid(other, fake), Error);
}

TEST(Chain, CrossedSeparatorCanLoseWidth) {
    // the grid separates, but each remaining piece touches one end of each
    // tree's path, so clipping still lowers the treewidth
    PhyloTree a = chain_tree("(x2,x3)", taxon_names(4, "c"), "(x1,x4)");
    PhyloTree b = chain_tree("(x1,x4)", taxon_names(4, "c"), "(x2,x3)");
    DisplayGraph d = build_display_graph(a, b);
    auto chains = find_common_chains(a, b);
    ASSERT_EQ(chains.size(), 1u);
    EXPECT_TRUE(chain_is_separator(d, chains[0]));
    EXPECT_FALSE(chain_separates_ends(d, chains[0]));
    auto [x, y] = clip_chain(a, b, chains[0], 2);
    EXPECT_EQ(tw_of(a, b), 4);
    EXPECT_EQ(tw_of(x, y), 3);
}

TEST(Chain, ClipBounds) {
    std::mt19937_64 rng(41);
    int aligned = 0;
    for (int i = 0; i < 100; ++i) {
        TreePair p = random_chain_pair(4 + rng() % 2, 3 + rng() % 2, rng(), i % 3 == 0);
        if (is_compatible(p.first, p.second)) continue;
        DisplayGraph d = build_display_graph(p.first, p.second);
        int before = treewidth(d.graph);
        for (const auto& c : find_common_chains(p.first, p.second)) {
            auto [x, y] = clip_chain(p.first, p.second, c, 2);
            int after = tw_of(x, y);
            EXPECT_LE(after, before);
            EXPECT_LE(before, after + 1);
            if (chain_separates_ends(d, c)) {
                ++aligned;
                EXPECT_EQ(after, before);
            }
        }
    }
    EXPECT_GT(aligned, 10);
}

TEST(Chain, SevenTaxaHaveNoDropWitness) {
    EXPECT_FALSE(find_chain_clip_witness(4, 3).has_value());
}

TEST(Chain, EightTaxonDropWitness) {
    auto w = find_chain_clip_witness(5, 3);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->first.size(), 8u);
    EXPECT_EQ(w->tw_before, 4);
    EXPECT_EQ(w->tw_after, 3);
    EXPECT_FALSE(w->separator);
    DisplayGraph nd = normalize(build_display_graph(w->first, w->second));
    EXPECT_EQ(treewidth(nd.graph), 4);
    EXPECT_FALSE(chain_is_separator(build_display_graph(w->first, w->second), w->chain));
}

TEST(Chain, TwistedLadderIsMobius) {
    // the twisted length-4 chain normalizes to the 8-vertex Mobius ladder
    PhyloTree a = chain_tree("(x1,x2)", taxon_names(4, "c"), "(x3,x4)");
    std::vector<std::string> rev{"c4", "c3", "c2", "c1"};
    PhyloTree b = chain_tree("(x1,x2)", rev, "(x3,x4)");
    DisplayGraph nd = normalize(build_display_graph(a, b));
    UGraph mobius;
    for (int i = 0; i < 8; ++i) mobius.add_vertex();
    for (VertexId i = 0; i < 8; ++i) {
        mobius.add_edge(i, (i + 1) % 8);
        if (i < 4) mobius.add_edge(i, i + 4);
    }
    EXPECT_TRUE(isomorphic(nd.graph, mobius));
    EXPECT_EQ(brute_force_oracle(nd.graph), 4);
}

TEST(Cluster, Parts) {
    PhyloTree a = T("(((a,b),c),((d,e),f));"), b = T("(((a,c),b),((d,f),e));");
    ClusterParts r = cluster_decompose(a, b, parse_split("a,b,c|d,e,f"));
    EXPECT_EQ(r.G_star.vertex_count() + r.G_starstar.vertex_count(), build_display_graph(a, b).graph.vertex_count());
    EXPECT_EQ(r.G_star.degree(r.u1), 2u);
    EXPECT_EQ(r.G_star.degree(r.u2), 2u);
    EXPECT_EQ(r.G_starstar.degree(r.v1), 2u);
    EXPECT_EQ(r.bracket_star.edge_count(), r.G_star.edge_count() + 1);
    EXPECT_EQ(r.p, 2);
    EXPECT_EQ(r.q, 2);
    EXPECT_THROW(cluster_decompose(a, b, parse_split("a,d|b,c,e,f")), Error);
    EXPECT_THROW(cluster_decompose(a, a, parse_split("a,b,c|d,e,f")), Error);
}

TEST(Cluster, BoundsAndConditions) {
    std::mt19937_64 rng(53);
    int done = 0, tight = 0, loose = 0;
    for (int i = 0; i < 400 && done < 100; ++i) {
        TreePair p = random_common_split_pair(5 + rng() % 4, rng());
        if (is_compatible(p.first, p.second)) continue;
        auto cs = common_splits(p.first, p.second);
        const Split& s = cs[rng() % cs.size()].split;
        ClusterParts r = cluster_decompose(p.first, p.second, s);
        ++done;
        int m = std::max(r.p, r.q);
        EXPECT_LE(m, r.tw_display);
        EXPECT_LE(r.tw_display, m + 1);
        EXPECT_LE(r.tw_star, r.tw_bracket_star);
        EXPECT_LE(r.tw_bracket_star, r.tw_display);
        EXPECT_LE(r.tw_starstar, r.tw_bracket_starstar);
        EXPECT_LE(r.tw_bracket_starstar, r.tw_display);
        EXPECT_EQ(r.predicts_tight(), r.tw_display == m) << write_tree(p.first) << " " << write_tree(p.second) << " " << s.str();
        (r.tw_display == m ? tight : loose)++;
    }
    EXPECT_EQ(done, 100);
    EXPECT_GT(tight, 0);
}
