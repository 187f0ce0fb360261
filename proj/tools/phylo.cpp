// phylo: command-line front end for the twdist library.
//
// Exit codes: 0 ok, 1 claim or validation failure, 2 usage or input error,
// 3 size limit exceeded.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "twdist/twdist.hpp"

using namespace twdist;
namespace fs = std::filesystem;

namespace {

struct Globals {
    std::uint64_t seed = 1;
    bool json_out = false;
    bool quiet = false;
};

Globals G;

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

bool has_ext(const std::string& path, const char* ext) { return fs::path(path).extension() == ext; }

// A Newick file, a graph JSON file, or an inline Newick string.
PhyloTree load_tree(const std::string& arg) {
    if (!fs::exists(arg) && arg.find('(') != std::string::npos) return parse_tree(arg);
    std::string text = read_text(arg);
    if (has_ext(arg, ".json")) return PhyloTree(graph_from_json(json::parse(text)));
    return parse_tree(text);
}

UGraph load_graph(const std::string& arg) {
    if (has_ext(arg, ".json")) return graph_from_json(json::parse(read_text(arg)));
    return load_tree(arg).graph();
}

// JSON is printed when asked for or when there is no human form.
void emit(const json& j, const std::string& human = "") {
    if (G.quiet) return;
    if (G.json_out || human.empty())
        std::cout << j.dump(2) << "\n";
    else
        std::cout << human << (human.back() == '\n' ? "" : "\n");
}

json chain_json(const Chain& c) { return {{"taxa", c.taxa}}; }

json tree_pair_json(const PhyloTree& a, const PhyloTree& b) { return {{"first", write_tree(a)}, {"second", write_tree(b)}}; }

json certificate_json(const PhyloNetwork& n, const PhyloTree& t, const DisplayCertificate& c) {
    json del = json::array();
    for (const Edge& e : c.deleted) del.push_back({e.u, e.v});
    auto emb = extract_embedding(t, c);
    json f = json::object();
    for (auto [x, y] : emb.f) f[std::to_string(x)] = y;
    auto b = check_display_bounds(n, t, c);
    return {{"deleted_edges", del},
            {"spanning_tree", graph_to_json(c.spanning_tree)},
            {"pruned", graph_to_json(c.pruned)},
            {"embedding", {{"map", f}, {"ok", emb.ok()}}},
            {"bounds",
             {{"tw_display", b.tw_display},
              {"tw_network", b.tw_network},
              {"reticulations", b.r},
              {"reticulation_bound_ok", b.reticulation_bound()},
              {"network_bound_ok", b.network_bound()}}}};
}

void write_construction(const std::string& prefix, const PhyloTree& a, const PhyloTree& b, const json& extra) {
    write_text(prefix + ".nwk", write_tree(a) + "\n" + write_tree(b));
    write_text(prefix + ".json", extra.dump(2));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Treewidth distance toolkit for unrooted phylogenetic trees"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", G.seed, "Master seed for randomized routines");
    app.add_flag("--json", G.json_out, "Print machine-readable JSON");
    app.add_flag("--quiet", G.quiet, "Print nothing; rely on exit status");

    // convert
    std::string conv_in, conv_out;
    auto* convert = app.add_subcommand("convert", "Convert a tree between Newick and graph JSON");
    convert->add_option("--in", conv_in, "Input .nwk or .json")->required();
    convert->add_option("--out", conv_out, "Output .nwk or .json (stdout when omitted)");
    convert->callback([&] {
        std::string text;
        bool to_json = conv_out.empty() ? !has_ext(conv_in, ".json") : has_ext(conv_out, ".json");
        if (has_ext(conv_in, ".json")) {
            UGraph g = graph_from_json(json::parse(read_text(conv_in)));
            text = to_json ? graph_to_json(g).dump(2) : write_tree(PhyloTree(g));
        } else {
            PhyloTree t = load_tree(conv_in);
            text = to_json ? graph_to_json(t.graph()).dump(2) : write_tree(t);
        }
        if (conv_out.empty())
            std::cout << text << "\n";
        else
            write_text(conv_out, text);
    });

    // quartets
    std::string q_tree;
    auto* quarts = app.add_subcommand("quartets", "List the quartets of a tree");
    quarts->add_option("tree", q_tree)->required();
    quarts->callback([&] {
        json out = json::array();
        for (const auto& q : quartets(load_tree(q_tree))) out.push_back(q.str());
        emit(out);
    });

    // chains, splits
    std::string p1, p2;
    auto* chains = app.add_subcommand("chains", "List maximal common chains of two trees");
    chains->add_option("t1", p1)->required();
    chains->add_option("t2", p2)->required();
    chains->callback([&] {
        json out = json::array();
        for (const auto& c : find_common_chains(load_tree(p1), load_tree(p2))) out.push_back(chain_json(c));
        emit(out);
    });
    auto* splits_cmd = app.add_subcommand("splits", "List the common splits of two trees");
    splits_cmd->add_option("t1", p1)->required();
    splits_cmd->add_option("t2", p2)->required();
    splits_cmd->callback([&] {
        json out = json::array();
        for (const auto& s : common_splits(load_tree(p1), load_tree(p2))) out.push_back(s.split.str());
        emit(out);
    });

    // display
    bool disp_normalize = false;
    std::string disp_out;
    auto* display = app.add_subcommand("display", "Build the display graph of two trees or networks");
    display->add_option("t1", p1, "Tree (.nwk) or network (.json)")->required();
    display->add_option("t2", p2)->required();
    display->add_flag("--normalize", disp_normalize, "Suppress degree-2 vertices");
    display->add_option("--out", disp_out, "Write .json or .dot instead of printing JSON");
    display->callback([&] {
        bool trees = !has_ext(p1, ".json") && !has_ext(p2, ".json");
        DisplayGraph d = trees ? build_display_graph(load_tree(p1), load_tree(p2)) : build_display_graph(load_graph(p1), load_graph(p2));
        if (disp_normalize) d = normalize(d);
        json sides = json::object();
        for (auto [v, s] : d.side) sides[std::to_string(v)] = side_name(s);
        json j = graph_to_json(d.graph);
        j["sides"] = sides;
        if (d.compatible) j["compatible"] = *d.compatible;
        if (disp_out.empty())
            emit(j);
        else
            write_text(disp_out, has_ext(disp_out, ".dot") ? display_to_dot(d) : j.dump(2));
    });

    // tw
    std::string tw_graph, tw_emit;
    TwOptions tw_opt;
    double tw_budget = 0;
    auto* tw = app.add_subcommand("tw", "Treewidth of a graph");
    tw->add_option("graph", tw_graph, "Graph JSON (or a tree)")->required();
    tw->add_option("--exact-limit", tw_opt.exact_limit, "Largest reduced component solved exactly");
    tw->add_option("--budget", tw_budget, "Seconds for the bounded search; reports bounds instead of failing");
    tw->add_option("--emit-decomposition", tw_emit, "Write the decomposition JSON here");
    tw->callback([&] {
        UGraph g = load_graph(tw_graph);
        TwResult r;
        if (tw_budget > 0) {
            tw_opt.budget_seconds = tw_budget;
            r = bounded_treewidth(g, tw_opt);
        } else {
            r = exact_treewidth(g, tw_opt);
        }
        if (!tw_emit.empty()) write_text(tw_emit, decomposition_to_json(r.decomposition).dump(2));
        json j{{"lower", r.lower}, {"upper", r.upper}, {"exact", r.exact}};
        emit(j, r.exact ? "treewidth " + std::to_string(r.upper)
                        : "treewidth between " + std::to_string(r.lower) + " and " + std::to_string(r.upper));
    });

    // dist
    std::string dist_kind;
    auto* dist = app.add_subcommand("dist", "Distance between two trees");
    dist->add_option("kind", dist_kind, "tw, tbr or mp2")->required()->check(CLI::IsMember({"tw", "tbr", "mp2"}));
    dist->add_option("t1", p1)->required();
    dist->add_option("t2", p2)->required();
    dist->callback([&] {
        PhyloTree a = load_tree(p1), b = load_tree(p2);
        json j;
        if (dist_kind == "tw") {
            auto r = d_tw(a, b);
            j = {{"value", r.value}, {"certificate", r.compatible ? json{{"compatible", true}} : decomposition_to_json(r.tw.decomposition)}};
        } else if (dist_kind == "tbr") {
            auto m = maximum_agreement_forest(a, b);
            j = {{"value", m.size - 1}, {"certificate", {{"forest", m.blocks}}}};
        } else {
            auto m = d_mp_2state(a, b);
            j = {{"value", m.value}, {"certificate", {{"character", m.witness.assignment}}}};
        }
        emit(j, std::to_string(j["value"].get<int>()));
    });

    // reduce
    std::string red_kind, red_split, red_report;
    std::size_t red_chain = 0;
    int red_d = 2;
    auto* reduce = app.add_subcommand("reduce", "Apply a reduction rule and report treewidth before and after");
    reduce->add_option("rule", red_kind, "cps, chain or cluster")->required()->check(CLI::IsMember({"cps", "chain", "cluster"}));
    reduce->add_option("t1", p1)->required();
    reduce->add_option("t2", p2)->required();
    reduce->add_option("--chain-index", red_chain, "Which common chain to clip");
    reduce->add_option("--d", red_d, "Length to clip the chain to");
    reduce->add_option("--split", red_split, "Common split 'a,b|c,d' for the cluster rule");
    reduce->add_option("--report", red_report, "Write the report JSON here");
    reduce->callback([&] {
        PhyloTree a = load_tree(p1), b = load_tree(p2);
        json j;
        if (red_kind == "cps") {
            auto r = apply_cps(a, b, true);
            json groups = json::array();
            for (const auto& g : r.groups) groups.push_back({{"label", g.label}, {"taxa", g.taxa}});
            j = {{"rule", "cps"}, {"reduced", tree_pair_json(r.first, r.second)}, {"groups", groups}, {"tw_before", *r.tw_before}, {"tw_after", *r.tw_after}};
        } else if (red_kind == "chain") {
            auto cs = find_common_chains(a, b);
            if (red_chain >= cs.size()) throw Error("no common chain with index " + std::to_string(red_chain) + " (" + std::to_string(cs.size()) + " found)");
            const Chain& c = cs[red_chain];
            auto [x, y] = clip_chain(a, b, c, red_d);
            DisplayGraph d = build_display_graph(a, b);
            j = {{"rule", "chain"},
                 {"chain", chain_json(c)},
                 {"d", red_d},
                 {"reduced", tree_pair_json(x, y)},
                 {"tw_before", treewidth(d.graph)},
                 {"tw_after", treewidth(build_display_graph(x, y).graph)},
                 {"separator", chain_is_separator(d, c)},
                 {"separates_ends", chain_separates_ends(d, c)}};
        } else {
            Split s;
            if (!red_split.empty()) {
                s = parse_split(red_split);
            } else {
                bool found = false;
                for (const auto& w : common_splits(a, b))
                    if (w.split.nontrivial()) {
                        s = w.split;
                        found = true;
                        break;
                    }
                if (!found) throw Error("no nontrivial common split");
            }
            auto cp = cluster_decompose(a, b, s);
            j = {{"rule", "cluster"},
                 {"split", cp.split.str()},
                 {"p", cp.p},
                 {"q", cp.q},
                 {"tw_star", cp.tw_star},
                 {"tw_starstar", cp.tw_starstar},
                 {"tw_bracket_star", cp.tw_bracket_star},
                 {"tw_bracket_starstar", cp.tw_bracket_starstar},
                 {"tw_display", cp.tw_display},
                 {"predicts_tight", cp.predicts_tight()}};
        }
        if (!red_report.empty()) write_text(red_report, j.dump(2));
        emit(j);
    });

    // construct
    int con_i = 0;
    std::size_t con_k = 3;
    std::string con_graph, con_out;
    auto* construct = app.add_subcommand("construct", "Build the doubling, embedding or grid tree pairs");
    construct->require_subcommand(1);
    auto* dbl = construct->add_subcommand("double", "Doubling stage i");
    dbl->add_option("--i", con_i)->required();
    dbl->add_option("--out", con_out, "Write <prefix>.nwk and <prefix>.json");
    auto* emb = construct->add_subcommand("embed", "Trees whose display graph has the given graph as a minor");
    emb->add_option("graph", con_graph)->required();
    emb->add_option("--out", con_out, "Write <prefix>.nwk and <prefix>.json");
    auto* grid = construct->add_subcommand("grid", "Trees whose display graph has a k x k grid minor");
    grid->add_option("--k", con_k)->required();
    grid->add_option("--out", con_out, "Write <prefix>.nwk and <prefix>.json");
    auto finish = [&](const PhyloTree& a, const PhyloTree& b, json extra) {
        if (!con_out.empty()) write_construction(con_out, a, b, extra);
        extra["trees"] = tree_pair_json(a, b);
        emit(extra, write_tree(a) + "\n" + write_tree(b));
    };
    dbl->callback([&] {
        auto f = doubling_family(con_i);
        finish(f.first, f.second, {{"stage", con_i}, {"decomposition", decomposition_to_json(f.decomposition)}, {"display", graph_to_json(f.display.graph)}});
    });
    emb->callback([&] {
        auto e = embed_graph_as_display_minor(load_graph(con_graph));
        const auto& a = e.audit;
        json audit{{"n", a.n}, {"d", a.d}, {"taxa", a.taxa}, {"taxa_bound", a.taxa_bound()}, {"internal_first", a.internal_first},
                   {"internal_second", a.internal_second}, {"internal_bound", a.internal_bound()}, {"display_vertices", a.display_vertices},
                   {"display_vertex_bound", a.display_vertex_bound()}, {"display_edges", a.display_edges}, {"display_edge_bound", a.display_edge_bound()},
                   {"ok", a.all_ok()}};
        finish(e.first, e.second, {{"model", minor_model_to_json(e.model)}, {"audit", audit}, {"verified", !minor_model_problem(e.model)}});
    });
    grid->callback([&] {
        auto g = grid_display_pair(con_k);
        finish(g.first, g.second, {{"k", con_k}, {"model", minor_model_to_json(g.model)}, {"verified", !minor_model_problem(g.model)}});
    });

    // displays
    std::string dn_net, dn_tree, dn_cert;
    std::size_t dn_max_r = 12;
    auto* disp = app.add_subcommand("displays", "Decide whether a network displays a tree");
    disp->add_option("network", dn_net, "Network graph JSON")->required();
    disp->add_option("tree", dn_tree)->required();
    disp->add_option("--max-r", dn_max_r, "Refuse networks with more reticulations");
    disp->add_option("--certificate", dn_cert, "Write the certificate JSON here");
    disp->callback([&] {
        PhyloNetwork n(graph_from_json(json::parse(read_text(dn_net))));
        PhyloTree t = load_tree(dn_tree);
        auto c = displays(n, t, dn_max_r);
        json j{{"displays", c.has_value()}, {"reticulations", reticulation_number(n)}};
        if (c) {
            json cj = certificate_json(n, t, *c);
            if (!dn_cert.empty()) write_text(dn_cert, cj.dump(2));
            j["certificate"] = cj;
        }
        emit(j, c ? "yes" : "no");
    });

    // verify
    std::string v_profile = "desk", v_report;
    std::vector<std::string> v_only;
    bool v_mutate = false, v_serial = false;
    auto* verify = app.add_subcommand("verify", "Replay the claim suites");
    verify->add_option("--profile", v_profile, "smoke, desk or extended");
    verify->add_option("--claim", v_only, "Run only these claims");
    verify->add_option("--report", v_report, "Write the JSON report here");
    verify->add_flag("--mutate-cps", v_mutate, "Negative control: corrupt the pendant-subtree reduction");
    verify->add_flag("--serial", v_serial, "Run claims one after another");
    verify->add_flag("--list", [&](std::int64_t) {
        for (const auto& id : claim_ids()) std::cout << id << "\n";
        throw CLI::Success();
    }, "List claim ids");
    int verify_status = 0;
    verify->callback([&] {
        Profile p = parse_profile(v_profile);
        VerifyOptions o;
        o.only = v_only;
        o.corrupt_cps = v_mutate;
        o.parallel = !v_serial;
        auto rs = verify_all(G.seed, p, o);
        json j = reports_to_json(rs, G.seed, p);
        if (!v_report.empty()) write_text(v_report, j.dump(2));
        emit(j, reports_to_table(rs));
        if (!j["passed"].get<bool>()) verify_status = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const SizeLimitExceeded& e) {
        std::cerr << "size limit exceeded: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: bad JSON: " << e.what() << "\n";
        return 2;
    }
    return verify_status;
}
