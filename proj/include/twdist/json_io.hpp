#pragma once

#include <string>

#include <json.hpp>

#include "twdist/error.hpp"
#include "twdist/graph.hpp"
#include "twdist/treewidth.hpp"

namespace twdist {

using nlohmann::json;

inline json graph_to_json(const UGraph& g) {
    json vs = json::array();
    for (VertexId v : g.vertices()) {
        json label = g.label(v) ? json(*g.label(v)) : json(nullptr);
        vs.push_back({{"id", v}, {"label", label}});
    }
    json es = json::array();
    for (Edge e : g.edges()) es.push_back({e.u, e.v});
    return {{"vertices", vs}, {"edges", es}};
}

inline UGraph graph_from_json(const json& j) {
    try {
        if (!j.is_object() || !j.contains("vertices") || !j.contains("edges")) throw Error("graph JSON needs \"vertices\" and \"edges\"");
        UGraph g;
        for (const auto& v : j.at("vertices")) {
            std::optional<std::string> label;
            if (v.contains("label") && !v.at("label").is_null()) label = v.at("label").get<std::string>();
            g.add_vertex_with_id(v.at("id").get<VertexId>(), label);
        }
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw Error("edge entries must be [u, v]");
            VertexId a = e.at(0).get<VertexId>(), b = e.at(1).get<VertexId>();
            if (!g.contains(a) || !g.contains(b)) throw Error("edge references unknown vertex");
            g.add_edge(a, b);
        }
        return g;
    } catch (const json::exception& ex) {
        throw Error(std::string("malformed graph JSON: ") + ex.what());
    }
}

inline UGraph parse_graph(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& ex) {
        throw Error(std::string("invalid JSON: ") + ex.what());
    }
    return graph_from_json(j);
}

inline std::string write_graph(const UGraph& g) { return graph_to_json(g).dump(); }

inline json decomposition_to_json(const TreeDecomposition& d) {
    json bags = json::array();
    for (const auto& b : d.bags) bags.push_back(b);
    json tree = json::array();
    for (auto [i, k] : d.tree) tree.push_back({i, k});
    return {{"bags", bags}, {"tree", tree}, {"width", d.width()}};
}

inline TreeDecomposition decomposition_from_json(const json& j) {
    try {
        TreeDecomposition d;
        for (const auto& b : j.at("bags")) d.bags.push_back(make_vertex_set(b.get<std::vector<VertexId>>()));
        for (const auto& e : j.at("tree")) d.tree.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
        return d;
    } catch (const json::exception& ex) {
        throw Error(std::string("malformed decomposition JSON: ") + ex.what());
    }
}

}  // namespace twdist
