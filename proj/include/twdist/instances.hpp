#pragma once

// Seeded generators for tree pairs with prescribed common structure.

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "twdist/display_graph.hpp"
#include "twdist/newick.hpp"
#include "twdist/phylo.hpp"
#include "twdist/reductions.hpp"
#include "twdist/treewidth.hpp"

namespace twdist {

using TreePair = std::pair<PhyloTree, PhyloTree>;

// Every rooted binary topology on xs as a Newick fragment.
inline std::vector<std::string> rooted_shapes(const std::vector<std::string>& xs) {
    if (xs.empty()) throw Error("rooted_shapes needs at least one taxon");
    if (xs.size() == 1) return {quote_label(xs[0])};
    if (xs.size() > 8) throw SizeLimitExceeded("rooted_shapes is limited to 8 taxa");
    std::vector<std::string> out;
    std::size_t m = xs.size() - 1;
    for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << m); ++mask) {
        std::vector<std::string> a{xs[0]}, b;
        for (std::size_t i = 0; i < m; ++i) ((mask >> i) & 1 ? a : b).push_back(xs[i + 1]);
        for (const auto& l : rooted_shapes(a))
            for (const auto& r : rooted_shapes(b)) out.push_back("(" + l + "," + r + ")");
    }
    return out;
}

inline std::string random_rooted_newick(std::vector<std::string> xs, std::mt19937_64& rng) {
    if (xs.size() == 1) return quote_label(xs[0]);
    std::shuffle(xs.begin(), xs.end(), rng);
    std::size_t cut = 1 + rng() % (xs.size() - 1);
    std::vector<std::string> a(xs.begin(), xs.begin() + cut), b(xs.begin() + cut, xs.end());
    return "(" + random_rooted_newick(a, rng) + "," + random_rooted_newick(b, rng) + ")";
}

// Tree made of a rooted subtree `left`, the chain taxa in order, then `right`.
inline PhyloTree chain_tree(const std::string& left, const std::vector<std::string>& chain, const std::string& right) {
    std::string tail = right;
    for (std::size_t i = chain.size(); i-- > 1;) tail = "(" + quote_label(chain[i]) + "," + tail + ")";
    return parse_tree("(" + left + "," + quote_label(chain[0]) + "," + tail + ");");
}

// Each tree carries the chain c1..ct between two subtrees of at least two
// taxa; the split of the remaining taxa between the ends is drawn per tree
// unless `same_sides`, in which case the chain separates the display graph.
inline TreePair random_chain_pair(std::size_t others, std::size_t t, std::uint64_t seed, bool same_sides = false) {
    if (others < 4 || t < 3) throw Error("need at least 4 other taxa and a chain of 3");
    std::mt19937_64 rng(seed);
    auto rest = taxon_names(others, "x");
    auto chain = taxon_names(t, "c");
    auto draw_sides = [&] {
        auto xs = rest;
        std::shuffle(xs.begin(), xs.end(), rng);
        std::size_t cut = 2 + rng() % (others - 3);
        return std::pair{std::vector<std::string>(xs.begin(), xs.begin() + cut), std::vector<std::string>(xs.begin() + cut, xs.end())};
    };
    auto s1 = draw_sides();
    auto s2 = same_sides ? s1 : draw_sides();
    auto build = [&](const auto& s) { return chain_tree(random_rooted_newick(s.first, rng), chain, random_rooted_newick(s.second, rng)); };
    PhyloTree a = build(s1);
    PhyloTree b = build(s2);
    return {std::move(a), std::move(b)};
}

// Two trees sharing the split left|right, each side drawn independently.
inline TreePair random_common_split_pair(std::size_t n, std::uint64_t seed) {
    if (n < 4) throw Error("need at least 4 taxa");
    std::mt19937_64 rng(seed);
    auto xs = taxon_names(n, "t");
    std::shuffle(xs.begin(), xs.end(), rng);
    std::size_t cut = 2 + rng() % (n - 3);
    std::vector<std::string> l(xs.begin(), xs.begin() + cut), r(xs.begin() + cut, xs.end());
    auto build = [&] { return parse_tree("(" + random_rooted_newick(l, rng) + "," + random_rooted_newick(r, rng) + ");"); };
    PhyloTree a = build();
    PhyloTree b = build();
    return {std::move(a), std::move(b)};
}

// Replaces leaf x by a cherry {x+"a", x+"b"} in both trees.
inline TreePair graft_common_cherry(const TreePair& p, const std::string& x) {
    auto graft = [&](const PhyloTree& t) {
        UGraph g = strip_roots(t).graph();
        VertexId v = g.vertex_of(x);
        g.clear_label(v);
        g.add_edge(v, g.add_vertex(x + "a"));
        g.add_edge(v, g.add_vertex(x + "b"));
        return PhyloTree(std::move(g));
    };
    return {graft(p.first), graft(p.second)};
}

// Random incompatible pair on `base` taxa with `grafts` cherry grafts applied
// to random leaves, so common pendant subtrees of various sizes appear.
inline TreePair random_cherry_injected_pair(std::size_t base, std::size_t grafts, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto names = taxon_names(base, "t");
    TreePair p{random_tree(names, rng()), random_tree(names, rng())};
    while (is_compatible(p.first, p.second)) p.second = random_tree(names, rng());
    for (std::size_t i = 0; i < grafts; ++i) {
        auto taxa = p.first.taxa();
        p = graft_common_cherry(p, taxa[rng() % taxa.size()]);
    }
    return p;
}

struct ChainWitness {
    PhyloTree first;
    PhyloTree second;
    Chain chain;
    int tw_before = 0;
    int tw_after = 0;
    bool separator = false;
};

// Exhaustive scan of chain pairs with `others` non-chain taxa and a chain of
// length t for one whose display treewidth drops from 4 to 3 under 2-cc while
// the chain grid does not separate. Stops at the first hit.
inline std::optional<ChainWitness> find_chain_clip_witness(std::size_t others, std::size_t t) {
    auto rest = taxon_names(others, "x");
    auto chain = taxon_names(t, "c");
    std::vector<PhyloTree> trees;
    for (std::size_t mask = 0; mask < (std::size_t{1} << others); ++mask) {
        std::vector<std::string> l, r;
        for (std::size_t i = 0; i < others; ++i) ((mask >> i) & 1 ? l : r).push_back(rest[i]);
        if (l.size() < 2 || r.size() < 2) continue;
        for (const auto& ls : rooted_shapes(l))
            for (const auto& rs : rooted_shapes(r)) trees.push_back(chain_tree(ls, chain, rs));
    }
    for (const auto& a : trees)
        for (const auto& b : trees) {
            if (is_compatible(a, b)) continue;
            DisplayGraph d = build_display_graph(a, b);
            int before = treewidth(d.graph);
            if (before != 4) continue;
            for (const auto& c : find_common_chains(a, b)) {
                if (c.length() != t) continue;
                bool sep = chain_is_separator(d, c);
                if (sep) continue;
                auto [x, y] = clip_chain(a, b, c, 2);
                int after = treewidth(build_display_graph(x, y).graph);
                if (after == 3) return ChainWitness{a, b, c, before, after, sep};
            }
        }
    return std::nullopt;
}

}  // namespace twdist
