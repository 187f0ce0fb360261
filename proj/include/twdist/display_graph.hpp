#pragma once

#include <map>
#include <optional>
#include <string>

#include "twdist/error.hpp"
#include "twdist/graph.hpp"
#include "twdist/phylo.hpp"

namespace twdist {

enum class Side : std::uint8_t { first, second, shared };

inline const char* side_name(Side s) {
    switch (s) {
        case Side::first: return "first";
        case Side::second: return "second";
        default: return "shared";
    }
}

struct DisplayGraph {
    UGraph graph;
    std::map<VertexId, Side> side;           // every current vertex
    std::map<Edge, Side> edge_side;          // merged edges become shared
    std::map<VertexId, VertexId> from_first;   // input vertex -> display vertex, while it survives
    std::map<VertexId, VertexId> from_second;
    TaxonSet taxa;
    std::optional<bool> compatible;          // known when both inputs are trees
    bool normalized = false;

    Side side_of(VertexId v) const {
        auto it = side.find(v);
        if (it == side.end()) throw Error("vertex " + std::to_string(v) + " not in display graph");
        return it->second;
    }
};

// Disjoint union with same-labelled leaves identified. Trees keep any
// designated roots.
inline DisplayGraph build_display_graph(const UGraph& a, const UGraph& b) {
    TaxonSet ta = a.labels(), tb = b.labels();
    require_same_taxa(ta, tb);
    DisplayGraph d;
    d.taxa = ta;
    for (VertexId v : a.vertices()) {
        VertexId w = a.label(v) ? d.graph.add_vertex(*a.label(v)) : d.graph.add_vertex();
        d.from_first[v] = w;
        d.side[w] = a.label(v) ? Side::shared : Side::first;
    }
    for (VertexId v : b.vertices()) {
        VertexId w = b.label(v) ? d.graph.vertex_of(*b.label(v)) : d.graph.add_vertex();
        d.from_second[v] = w;
        if (!b.label(v)) d.side[w] = Side::second;
    }
    for (Edge e : a.edges()) {
        d.graph.add_edge(d.from_first[e.u], d.from_first[e.v]);
        d.edge_side[make_edge(d.from_first[e.u], d.from_first[e.v])] = Side::first;
    }
    for (Edge e : b.edges()) {
        Edge de = make_edge(d.from_second[e.u], d.from_second[e.v]);
        d.graph.add_edge(de);
        auto it = d.edge_side.find(de);
        d.edge_side[de] = it == d.edge_side.end() ? Side::second : Side::shared;
    }
    return d;
}

inline DisplayGraph build_display_graph(const PhyloTree& a, const PhyloTree& b) {
    DisplayGraph d = build_display_graph(a.graph(), b.graph());
    d.compatible = is_compatible(a, b);
    return d;
}

inline DisplayGraph build_display_graph(const PhyloNetwork& a, const PhyloTree& b) { return build_display_graph(a.graph(), b.graph()); }
inline DisplayGraph build_display_graph(const PhyloTree& a, const PhyloNetwork& b) { return build_display_graph(a.graph(), b.graph()); }
inline DisplayGraph build_display_graph(const PhyloNetwork& a, const PhyloNetwork& b) { return build_display_graph(a.graph(), b.graph()); }

// Suppresses degree-2 vertices (taxa included) and collapses parallel edges
// until neither remains. Only sound for incompatible tree pairs.
inline DisplayGraph normalize(const DisplayGraph& in) {
    if (in.compatible != std::optional<bool>(false)) throw Error("normalization requires incompatibility");
    DisplayGraph d = in;
    auto drop_maps = [&](VertexId v) {
        for (auto* m : {&d.from_first, &d.from_second})
            for (auto it = m->begin(); it != m->end();)
                it = it->second == v ? m->erase(it) : std::next(it);
        d.side.erase(v);
    };
    for (;;) {
        bool changed = false;
        for (Edge e : d.graph.edges())
            while (d.graph.multiplicity(e.u, e.v) > 1) {
                d.graph.remove_edge(e);
                changed = true;
            }
        for (VertexId v : d.graph.vertices()) {
            if (d.graph.degree(v) != 2) continue;
            VertexId a = d.graph.neighbors(v)[0], b = d.graph.neighbors(v)[1];
            if (a == b) continue;
            Side s1 = d.edge_side[make_edge(a, v)], s2 = d.edge_side[make_edge(b, v)];
            d.edge_side.erase(make_edge(a, v));
            d.edge_side.erase(make_edge(b, v));
            d.graph.suppress(v);
            Edge ne = make_edge(a, b);
            auto it = d.edge_side.find(ne);
            Side merged = s1 == s2 ? s1 : Side::shared;
            d.edge_side[ne] = (it != d.edge_side.end() && it->second != merged) ? Side::shared : merged;
            drop_maps(v);
            changed = true;
            break;
        }
        if (!changed) break;
    }
    d.taxa.clear();
    for (const auto& l : d.graph.labels()) d.taxa.push_back(l);
    d.normalized = true;
    return d;
}

inline std::string display_to_dot(const DisplayGraph& d) {
    return to_dot(d.graph, [&](VertexId v) -> std::string {
        switch (d.side_of(v)) {
            case Side::first: return "blue";
            case Side::second: return "red";
            default: return "black";
        }
    });
}

}  // namespace twdist
