#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "twdist/display_graph.hpp"
#include "twdist/newick.hpp"
#include "twdist/phylo.hpp"

using namespace twdist;

namespace {

PhyloTree T(const char* s) { return parse_tree(s); }

// Quartet of a 4-taxon tree via restriction and its single internal split.
Quartet quartet_by_restriction(const PhyloTree& t, std::vector<std::string> four) {
    PhyloTree r = restrict(t, four);
    for (const auto& s : splits(r)) return Quartet::make(s.left[0], s.left[1], s.right[0], s.right[1]);
    throw Error("no internal split");
}

}  // namespace

TEST(Newick, Parse) {
    PhyloTree q = T("((a,b),(c,d));");
    EXPECT_EQ(q.graph().vertex_count(), 6u);
    EXPECT_TRUE(is_compatible(q, T("((a,b),c,d);")));
    EXPECT_FALSE(is_compatible(q, T("((a,c),b,d);")));
    PhyloTree five = T("((a,b),(c,d),e);");
    EXPECT_EQ(five.size(), 5u);
    EXPECT_EQ(splits(five).size(), 2u);
    EXPECT_TRUE(is_compatible(T("((a:1.5,b:2)x:0.1,[note]c,'d');"), T("((a,b),c,d);")));
    EXPECT_EQ(T("('it''s',b,c);").taxa().back(), "it's");
    EXPECT_EQ(T("a;").size(), 1u);
    EXPECT_EQ(T("(a,b);").graph().edge_count(), 1u);
}

TEST(Newick, Errors) {
    for (const char* bad : {"((a,b),(c,d);", "((a,b),c,d));", "((a,a),c,d);", "((a,b,c),d,e);", "(((a,b)),c,d);", "((a,b),c,d)", "((a,),c,d);",
                            "((a,b),c,d);x", "((a:xyz,b),c,d);", "((a b,c),d,e);", "", "((a,b)[oops,c,d);"}) {
        EXPECT_THROW(parse_tree(bad), Error) << bad;
    }
    try {
        parse_tree("((a,b,c),d,e);");
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("not unrooted binary"), std::string::npos);
    }
    try {
        parse_tree("((a,b),(a,d));");
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("duplicate leaf label"), std::string::npos);
    }
}

TEST(Newick, WriteAndRoundTrip) {
    EXPECT_EQ(write_tree(T("((a,b),(c,d));")), "(a,b,(c,d));");
    EXPECT_EQ(write_tree(T("(e,(c,a),(d,b));")), "(a,((b,d),e),c);");
    EXPECT_EQ(write_tree(T("(a,b);")), "(a,b);");
    EXPECT_TRUE(is_compatible(parse_tree(write_tree(T("((a,b),(c,d));"))), T("((a,b),c,d);")));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        std::size_t n = 2 + rng() % 19;
        auto names = taxon_names(n, i % 3 ? "t" : "odd name ");
        PhyloTree t = random_tree(names, rng());
        PhyloTree back = parse_tree(write_tree(t));
        EXPECT_TRUE(is_compatible(t, back));
        EXPECT_TRUE(isomorphic(t.graph(), back.graph()));
    }
}

TEST(Newick, MutationFuzz) {
    std::mt19937_64 rng(5);
    int parsed = 0, rejected = 0;
    for (int i = 0; i < 3000; ++i) {
        std::string s = write_tree(random_tree(taxon_names(3 + rng() % 6), rng()));
        int edits = 1 + static_cast<int>(rng() % 3);
        for (int k = 0; k < edits && !s.empty(); ++k) {
            std::size_t at = rng() % s.size();
            if (rng() % 2)
                s.erase(at, 1);
            else
                s.insert(at, 1, s[at]);
        }
        try {
            PhyloTree t = parse_tree(s);
            PhyloTree again(t.graph());  // re-validate
            ++parsed;
        } catch (const Error&) {
            ++rejected;
        }
    }
    EXPECT_GT(rejected, 0);
    EXPECT_EQ(parsed + rejected, 3000);
}

TEST(Newick, Documents) {
    auto ts = parse_trees("((a,b),c,d);\n['x;y'] ((a,c),b,d);\n");
    ASSERT_EQ(ts.size(), 2u);
    EXPECT_FALSE(is_compatible(ts[0], ts[1]));
    EXPECT_THROW(parse_trees("((a,b),c,d); (a,b"), Error);
}

TEST(Network, JsonRoundTrip) {
    PhyloTree t = T("((a,b),(c,d));");
    PhyloNetwork n = parse_network(write_graph(t.graph()));
    EXPECT_EQ(reticulation_number(n), 0u);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        PhyloNetwork r = random_network(taxon_names(6), seed % 5, seed);
        PhyloNetwork back = parse_network(write_network(r));
        EXPECT_TRUE(isomorphic(r.graph(), back.graph()));
    }
    UGraph bad = t.graph();
    VertexId extra = bad.add_vertex("e");
    bad.add_edge(bad.neighbors(bad.vertex_of("a"))[0], extra);
    EXPECT_THROW(PhyloNetwork{bad}, Error);
    EXPECT_THROW(parse_network("{\"vertices\":[{\"id\":0,\"label\":\"a\"},{\"id\":1,\"label\":null},{\"id\":2,\"label\":\"b\"}],\"edges\":[[0,1],[1,2]]}"), Error);
    EXPECT_THROW(parse_network("{\"vertices\":[{\"id\":0,\"label\":\"a\"},{\"id\":1,\"label\":\"b\"}],\"edges\":[]}"), Error);
}

TEST(Network, ReticulationAndLevel) {
    PhyloTree t = random_tree(taxon_names(7), 3);
    PhyloNetwork n0(t);
    EXPECT_EQ(reticulation_number(n0), 0u);
    EXPECT_EQ(level(n0), 0u);
    PhyloNetwork n1 = random_network_over(t, 1, 4);
    EXPECT_EQ(reticulation_number(n1), 1u);
    EXPECT_EQ(level(n1), 1u);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::size_t r = seed % 6;
        PhyloNetwork n = random_network(taxon_names(8), r, seed);
        EXPECT_EQ(reticulation_number(n), r);
        EXPECT_LE(level(n), r);
        // direct check: level is the largest cycle rank of a block
        std::size_t direct = 0;
        for (const UGraph& b : biconnected_components(n.graph())) direct = std::max(direct, cycle_rank(b));
        EXPECT_EQ(level(n), direct);
    }
    EXPECT_EQ(reticulation_number(random_network(taxon_names(5), 0, 9)), 0u);
}

TEST(Restrict, Basics) {
    PhyloTree cat = caterpillar({"a", "b", "c", "d", "e"});
    EXPECT_TRUE(is_compatible(restrict(cat, cat.taxa()), cat));
    EXPECT_TRUE(is_compatible(restrict(cat, {"a", "b", "d", "e"}), T("((a,b),(d,e));")));
    EXPECT_THROW(restrict(cat, {}), Error);
    EXPECT_THROW(restrict(cat, {"z"}), Error);
    EXPECT_EQ(restrict(cat, {"c"}).graph().vertex_count(), 1u);
    EXPECT_EQ(restrict(cat, {"a", "e"}).graph().edge_count(), 1u);
    // nested restriction
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        PhyloTree t = random_tree(taxon_names(10), rng());
        std::vector<std::string> y, z;
        for (const auto& x : t.taxa())
            if (rng() % 3) y.push_back(x);
        for (const auto& x : y)
            if (rng() % 2) z.push_back(x);
        if (z.empty()) continue;
        EXPECT_TRUE(is_compatible(restrict(restrict(t, y), z), restrict(t, z)));
    }
}

TEST(Restrict, UnrootedEqualityIgnoresAttachment) {
    PhyloTree t1 = T("(((a,b),(c,d)),(e,f));");
    PhyloTree t2 = T("((((c,d),b),a),(e,f));");
    EXPECT_TRUE(is_compatible(restrict(t1, {"a", "b", "c", "d"}), restrict(t2, {"a", "b", "c", "d"})));
    EXPECT_FALSE(is_compatible(t1, t2));
}

TEST(Quartets, MatchRestrictionOracle) {
    EXPECT_EQ(quartets(T("((a,b),(c,d));")).size(), 1u);
    EXPECT_EQ(quartets(T("((a,b),(c,d));"))[0].str(), "a,b|c,d");
    auto q5 = quartets(caterpillar({"a", "b", "c", "d", "e"}));
    EXPECT_EQ(q5.size(), 5u);
    EXPECT_TRUE(std::binary_search(q5.begin(), q5.end(), Quartet::make("a", "b", "c", "d")));
    EXPECT_TRUE(std::binary_search(q5.begin(), q5.end(), Quartet::make("a", "b", "c", "e")));
    EXPECT_THROW(quartets(T("(a,b,c);")), Error);
    std::mt19937_64 rng(8);
    for (int i = 0; i < 40; ++i) {
        PhyloTree t = random_tree(taxon_names(4 + rng() % 5), rng());
        auto qs = quartets(t);
        std::vector<Quartet> oracle;
        const auto& x = t.taxa();
        for (std::size_t a = 0; a < x.size(); ++a)
            for (std::size_t b = a + 1; b < x.size(); ++b)
                for (std::size_t c = b + 1; c < x.size(); ++c)
                    for (std::size_t d = c + 1; d < x.size(); ++d) oracle.push_back(quartet_by_restriction(t, {x[a], x[b], x[c], x[d]}));
        std::sort(oracle.begin(), oracle.end());
        EXPECT_EQ(qs, oracle);
    }
}

TEST(Compatibility, QuartetEquivalence) {
    EXPECT_TRUE(is_compatible(T("((a,b),(c,d));"), T("((a,b),(c,d));")));
    EXPECT_FALSE(is_compatible(T("((a,b),(c,d));"), T("((a,c),(b,d));")));
    EXPECT_THROW(is_compatible(T("((a,b),(c,d));"), T("((a,b),(c,e));")), Error);
    std::mt19937_64 rng(12);
    int same = 0;
    for (int i = 0; i < 400; ++i) {
        auto names = taxon_names(4 + rng() % 5);
        PhyloTree a = random_tree(names, rng()), b = random_tree(names, rng());
        bool c = is_compatible(a, b);
        same += c;
        EXPECT_EQ(c, quartets(a) == quartets(b));
    }
    EXPECT_GT(same, 0);
}

TEST(Splits, CommonSplits) {
    PhyloTree t = random_tree(taxon_names(9), 2);
    EXPECT_EQ(common_splits(t, t).size(), 6u);
    EXPECT_TRUE(common_splits(T("((a,b),(c,d));"), T("((a,c),(b,d));")).empty());
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        auto names = taxon_names(5 + rng() % 6);
        PhyloTree a = random_tree(names, rng()), b = random_tree(names, rng());
        auto sa = splits(a), sb = splits(b);
        std::vector<Split> both;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(both));
        auto cs = common_splits(a, b);
        ASSERT_EQ(cs.size(), both.size());
        for (std::size_t k = 0; k < cs.size(); ++k) {
            EXPECT_EQ(cs[k].split, both[k]);
            // re-derive each side from the witnessing edges
            for (auto [tree, e] : {std::pair{&a, cs[k].first}, std::pair{&b, cs[k].second}}) {
                UGraph g = tree->graph();
                g.remove_edge(e);
                for (const auto& comp : connected_components(g)) {
                    TaxonSet side;
                    for (VertexId v : comp)
                        if (g.label(v)) side.push_back(*g.label(v));
                    side = make_taxon_set(side);
                    EXPECT_TRUE(side == cs[k].split.left || side == cs[k].split.right);
                }
            }
        }
    }
    EXPECT_EQ(parse_split("c,a|b,d").str(), "a,c|b,d");
    EXPECT_THROW(parse_split("a,b"), Error);
}

TEST(Chains, Caterpillars) {
    for (std::size_t n = 7; n <= 11; ++n) {
        PhyloTree c = caterpillar(taxon_names(n));
        auto chains = find_common_chains(c, c);
        ASSERT_EQ(chains.size(), 1u);
        EXPECT_EQ(chains[0].length(), n - 4);
    }
    EXPECT_TRUE(find_common_chains(T("((a,b),(c,d));"), T("((a,c),(b,d));")).empty());
}

TEST(Chains, ValidAndMaximal) {
    std::mt19937_64 rng(21);
    int found = 0;
    for (int i = 0; i < 400; ++i) {
        auto names = taxon_names(8 + rng() % 5);
        PhyloTree a = caterpillar(names);
        PhyloTree b = random_tree(names, rng());
        if (i % 2) b = caterpillar(std::vector<std::string>(names.rbegin(), names.rend()));
        for (const auto& ch : find_common_chains(a, b)) {
            ++found;
            EXPECT_TRUE(is_common_chain(a, b, ch.taxa));
            EXPECT_LE(ch.taxa.front(), ch.taxa.back());
            for (const auto& x : names) {
                if (std::find(ch.taxa.begin(), ch.taxa.end(), x) != ch.taxa.end()) continue;
                auto front = ch.taxa, back = ch.taxa;
                front.insert(front.begin(), x);
                back.push_back(x);
                EXPECT_FALSE(is_common_chain(a, b, front));
                EXPECT_FALSE(is_common_chain(a, b, back));
            }
        }
    }
    EXPECT_GT(found, 50);
}

TEST(Tbr, Moves) {
    PhyloTree q = T("((a,b),(c,d));");
    VertexId pa = q.parent("a"), pc = q.parent("c");
    VertexId a = q.leaf("a"), b = q.leaf("b"), c = q.leaf("c"), d = q.leaf("d");
    // cutting the middle edge leaves edges a-b and c-d; reattaching there restores q
    EXPECT_TRUE(is_compatible(tbr_move(q, Edge{pa, pc}, Edge{a, b}, Edge{c, d}), q));
    EXPECT_TRUE(is_compatible(tbr_move(q, Edge{pc, pa}, Edge{c, d}, Edge{a, b}), q));
    // prune b and regraft it next to c
    EXPECT_TRUE(is_compatible(tbr_move(q, Edge{b, pa}, std::nullopt, Edge{c, pc}), T("((a,d),(b,c));")));
    EXPECT_THROW(tbr_move(q, Edge{b, pa}, std::nullopt, Edge{a, b}), Error);
    EXPECT_THROW(tbr_move(q, Edge{b, pa}, Edge{c, pc}, std::nullopt), Error);
    EXPECT_THROW(tbr_move(q, Edge{a, b}, std::nullopt, std::nullopt), Error);
}

TEST(Tbr, UnitBall) {
    auto ball = tbr_unit_ball(T("((a,b),(c,d));"));
    ASSERT_EQ(ball.size(), 2u);
    std::set<std::string> want{T("((a,c),(b,d));").canonical(), T("((a,d),(b,c));").canonical()};
    std::set<std::string> got{ball[0].canonical(), ball[1].canonical()};
    EXPECT_EQ(got, want);
    PhyloTree t = random_tree(taxon_names(7), 5);
    for (const auto& u : tbr_unit_ball(t)) {
        EXPECT_FALSE(is_compatible(t, u));
        EXPECT_EQ(u.size(), 7u);
    }
}

TEST(Generators, Basics) {
    std::set<std::string> shapes;
    for (std::uint64_t s = 0; s < 60; ++s) shapes.insert(random_tree({"a", "b", "c", "d"}, s).canonical());
    EXPECT_EQ(shapes.size(), 3u);
    EXPECT_EQ(random_tree(taxon_names(9), 4).canonical(), random_tree(taxon_names(9), 4).canonical());
    EXPECT_EQ(all_trees(taxon_names(6)).size(), 105u);
    std::set<std::string> distinct;
    for (const auto& t : all_trees(taxon_names(6))) distinct.insert(t.canonical());
    EXPECT_EQ(distinct.size(), 105u);
}
