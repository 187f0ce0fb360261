#include <gtest/gtest.h>

#include <deque>
#include <functional>
#include <random>

#include "twdist/distances.hpp"
#include "twdist/instances.hpp"

using namespace twdist;

namespace {

PhyloTree T(const char* s) { return parse_tree(s); }

// Breadth-first distance in tree space under TBR moves.
int tbr_bfs(const PhyloTree& from, const PhyloTree& to) {
    std::string goal = to.canonical();
    std::map<std::string, int> dist{{from.canonical(), 0}};
    std::deque<PhyloTree> queue{from};
    while (!queue.empty()) {
        PhyloTree t = queue.front();
        queue.pop_front();
        int d = dist[t.canonical()];
        if (t.canonical() == goal) return d;
        for (auto& u : tbr_unit_ball(t))
            if (dist.emplace(u.canonical(), d + 1).second) queue.push_back(u);
    }
    return -1;
}

// Minimum forest size over every set partition.
int maf_by_partitions(const PhyloTree& a, const PhyloTree& b) {
    const TaxonSet& x = a.taxa();
    std::vector<TaxonSet> blocks;
    int best = static_cast<int>(x.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (static_cast<int>(blocks.size()) >= best) return;
        if (i == x.size()) {
            if (is_agreement_forest(a, b, blocks)) best = static_cast<int>(blocks.size());
            return;
        }
        for (std::size_t j = 0; j < blocks.size(); ++j) {  // recursion may reallocate
            blocks[j].push_back(x[i]);
            rec(i + 1);
            blocks[j].pop_back();
        }
        blocks.push_back({x[i]});
        rec(i + 1);
        blocks.pop_back();
    };
    rec(0);
    return best;
}

// Minimum changes over all assignments of states to internal vertices.
int parsimony_by_enumeration(const PhyloTree& t, const Character& f) {
    const UGraph& g = t.graph();
    std::vector<VertexId> inner;
    for (VertexId v : g.vertices())
        if (!g.is_labelled(v)) inner.push_back(v);
    std::vector<std::string> states;
    for (const auto& [x, s] : f.assignment) states.push_back(s);
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    std::map<VertexId, std::string> st;
    for (const auto& x : t.taxa()) st[t.leaf(x)] = f.assignment.at(x);
    int best = 1 << 30;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == inner.size()) {
            int c = 0;
            for (Edge e : g.edges()) c += st[e.u] != st[e.v];
            best = std::min(best, c);
            return;
        }
        for (const auto& s : states) {
            st[inner[i]] = s;
            rec(i + 1);
        }
    };
    rec(0);
    return best;
}

}  // namespace

TEST(Dtw, Examples) {
    EXPECT_EQ(d_tw(T("((a,b),(c,d));"), T("((a,b),c,d);")).value, 0);
    DtwResult q = d_tw(T("((a,b),(c,d));"), T("((a,c),(b,d));"));
    EXPECT_EQ(q.value, 1);
    EXPECT_FALSE(q.compatible);
    EXPECT_TRUE(q.tw.exact);
    EXPECT_THROW(d_tw(T("(a,b);"), T("(a,b);")), Error);
    auto w = find_chain_clip_witness(5, 3);
    ASSERT_TRUE(w);
    EXPECT_EQ(d_tw(w->first, w->second).value, 2);
}

TEST(Dtw, MetricBasicsExhaustive) {
    for (std::size_t n : {4u, 5u, 6u}) {
        auto trees = all_trees(taxon_names(n));
        for (std::size_t i = 0; i < trees.size(); ++i)
            for (std::size_t j = i; j < trees.size(); ++j) {
                int d = d_tw(trees[i], trees[j]).value;
                EXPECT_EQ(d == 0, i == j);
                if (n == 5) {
                    EXPECT_EQ(d, d_tw(trees[j], trees[i]).value);
                }
            }
    }
}

TEST(Dtw, UnitBall) {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 12; ++i) {
        PhyloTree t = random_tree(taxon_names(4 + i % 4), rng());
        for (const auto& u : tbr_unit_ball(t)) EXPECT_EQ(d_tw(t, u).value, 1);
    }
}

TEST(Maf, AgreementForestChecks) {
    PhyloTree a = T("((a,b),(c,d));"), b = T("((a,c),(b,d));");
    EXPECT_TRUE(is_agreement_forest(a, a, {{"a", "b", "c", "d"}}));
    EXPECT_TRUE(is_agreement_forest(a, b, {{"a"}, {"b"}, {"c"}, {"d"}}));
    EXPECT_FALSE(is_agreement_forest(a, b, {{"a", "b"}, {"c", "d"}}));
    EXPECT_TRUE(is_agreement_forest(a, b, {{"a", "b", "c"}, {"d"}}));
    EXPECT_FALSE(is_agreement_forest(a, b, {{"a", "b", "c", "d"}}));
    EXPECT_THROW(is_agreement_forest(a, b, {{"a", "b"}, {"c"}}), Error);
    EXPECT_THROW(is_agreement_forest(a, b, {{"a", "b"}, {"b", "c", "d"}}), Error);
}

TEST(Maf, Examples) {
    PhyloTree a = T("((a,b),(c,d));"), b = T("((a,c),(b,d));");
    EXPECT_EQ(d_maf(a, a), 1);
    EXPECT_EQ(d_tbr(a, a), 0);
    EXPECT_EQ(d_maf(a, b), 2);
    EXPECT_EQ(d_tbr(a, b), 1);
    MafResult r = maximum_agreement_forest(a, b);
    EXPECT_TRUE(is_agreement_forest(a, b, r.blocks));
    EXPECT_THROW(d_maf(random_tree(taxon_names(11), 1), random_tree(taxon_names(11), 2)), SizeLimitExceeded);
}

TEST(Maf, MatchesPartitionOracle) {
    std::mt19937_64 rng(67);
    for (int i = 0; i < 60; ++i) {
        auto names = taxon_names(4 + rng() % 4);
        PhyloTree a = random_tree(names, rng()), b = random_tree(names, rng());
        MafResult r = maximum_agreement_forest(a, b);
        EXPECT_TRUE(is_agreement_forest(a, b, r.blocks));
        EXPECT_EQ(r.size, maf_by_partitions(a, b));
        EXPECT_EQ(r.size, d_maf(b, a));
    }
}

TEST(Maf, TbrMatchesMoveDistance) {
    std::mt19937_64 rng(71);
    for (int i = 0; i < 50; ++i) {
        auto names = taxon_names(4 + rng() % 3);
        PhyloTree a = random_tree(names, rng()), b = random_tree(names, rng());
        EXPECT_EQ(d_tbr(a, b), tbr_bfs(a, b));
    }
}

TEST(Maf, DiameterBound) {
    EXPECT_EQ(tbr_diameter_upper(4), 1);
    EXPECT_EQ(tbr_diameter_upper(6), 3);
    EXPECT_EQ(tbr_diameter_upper(11), 7);  // sqrt 9 = 3, floor(1) = 1
    EXPECT_THROW(tbr_diameter_upper(3), Error);
    for (std::size_t n : {4u, 5u, 6u}) {
        auto trees = all_trees(taxon_names(n));
        int worst = 0;
        for (std::size_t i = 0; i < trees.size(); ++i)
            for (std::size_t j = i + 1; j < trees.size(); ++j) worst = std::max(worst, d_tbr(trees[i], trees[j]));
        EXPECT_LE(worst, tbr_diameter_upper(static_cast<int>(n)));
    }
}

TEST(Fitch, Examples) {
    PhyloTree q = T("((a,b),(c,d));"), r = T("((a,c),(b,d));");
    Character f{{{"a", "0"}, {"b", "0"}, {"c", "1"}, {"d", "1"}}};
    EXPECT_EQ(fitch_score(q, Character{{{"a", "0"}, {"b", "0"}, {"c", "0"}, {"d", "0"}}}), 0);
    EXPECT_EQ(fitch_score(q, f), 1);
    EXPECT_EQ(fitch_score(r, f), 2);
    EXPECT_EQ(f.arity(), 2u);
    EXPECT_THROW(fitch_score(q, Character{{{"a", "0"}, {"b", "0"}, {"c", "1"}}}), Error);
    EXPECT_THROW(fitch_score(q, Character{{{"a", "0"}, {"b", "0"}, {"c", "1"}, {"d", "1"}, {"e", "1"}}}), Error);
}

TEST(Fitch, MatchesEnumeration) {
    std::mt19937_64 rng(73);
    for (int i = 0; i < 150; ++i) {
        auto names = taxon_names(3 + rng() % 5);
        PhyloTree t = random_tree(names, rng());
        Character f;
        std::size_t k = 2 + rng() % 3;
        for (const auto& x : names) f.assignment[x] = std::string(1, static_cast<char>('A' + rng() % k));
        EXPECT_EQ(fitch_score(t, f), parsimony_by_enumeration(t, f));
    }
}

TEST(Mp, TwoState) {
    PhyloTree q = T("((a,b),(c,d));"), r = T("((a,c),(b,d));");
    EXPECT_EQ(d_mp_2state(q, q).value, 0);
    MpResult m = d_mp_2state(q, r);
    EXPECT_EQ(m.value, 1);
    EXPECT_EQ(std::abs(fitch_score(q, m.witness) - fitch_score(r, m.witness)), 1);
    std::mt19937_64 rng(79);
    for (int i = 0; i < 60; ++i) {
        auto names = taxon_names(4 + rng() % 4);
        PhyloTree a = random_tree(names, rng()), b = random_tree(names, rng());
        MpResult ab = d_mp_2state(a, b);
        EXPECT_EQ(ab.value, d_mp_2state(b, a).value);
        EXPECT_EQ(ab.value == 0, is_compatible(a, b));
        EXPECT_LE(ab.value, d_tbr(a, b));
        EXPECT_EQ(ab.witness.arity(), 2u);
        EXPECT_EQ(std::abs(fitch_score(a, ab.witness) - fitch_score(b, ab.witness)), ab.value);
    }
}

TEST(Mp, ZeroExactlyOnCompatibleExhaustive) {
    auto trees = all_trees(taxon_names(5));
    for (std::size_t i = 0; i < trees.size(); ++i)
        for (std::size_t j = 0; j < trees.size(); ++j) {
            EXPECT_EQ(d_mp_2state(trees[i], trees[j]).value == 0, i == j);
            EXPECT_EQ(d_tbr(trees[i], trees[j]) == 0, i == j);
        }
}

TEST(Distances, TwAtMostTbr) {
    std::mt19937_64 rng(83);
    for (int i = 0; i < 150; ++i) {
        auto names = taxon_names(4 + rng() % 4);
        PhyloTree a = random_tree(names, rng()), b = random_tree(names, rng());
        EXPECT_LE(d_tw(a, b).value, d_tbr(a, b));
    }
}

TEST(Distances, TriangleSearchReportsConsistentTriples) {
    auto v = find_triangle_violation(7, 30, 5);
    if (v) {
        EXPECT_GT(v->ac, v->ab + v->bc);
        EXPECT_EQ(d_tw(v->a, v->c).value, v->ac);
    }
}
