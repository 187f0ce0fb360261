#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "twdist/twdist.hpp"

using namespace twdist;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
};

Run phylo(const std::string& args) {
    std::string cmd = std::string(PHYLO_BIN) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

fs::path scratch() {
    fs::path d = fs::temp_directory_path() / ("twdist_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

std::string put(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text << "\n";
    return p.string();
}

}  // namespace

TEST(Cli, ConvertRoundTrip) {
    auto d = scratch();
    std::string nwk = put(d / "t.nwk", "((a,b),(c,(d,e)));");
    std::string js = (d / "t.json").string(), back = (d / "back.nwk").string();
    ASSERT_EQ(phylo("convert --in " + nwk + " --out " + js).status, 0);
    ASSERT_EQ(phylo("convert --in " + js + " --out " + back).status, 0);
    std::ifstream in(back);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(parse_tree(line).canonical(), parse_tree("((a,b),(c,(d,e)));").canonical());
}

TEST(Cli, QuartetsAndSplitsAreJsonLists) {
    auto q = phylo("quartets '((a,b),(c,d));'");
    ASSERT_EQ(q.status, 0);
    EXPECT_EQ(json::parse(q.out), json::array({"a,b|c,d"}));
    auto s = phylo("splits '((a,b),(c,(d,e)));' '((a,b),(d,(c,e)));'");
    ASSERT_EQ(s.status, 0);
    auto j = json::parse(s.out);
    EXPECT_NE(std::find(j.begin(), j.end(), "a,b|c,d,e"), j.end());
}

TEST(Cli, ChainsMatchLibrary) {
    TreePair p = random_chain_pair(4, 4, 3);
    auto r = phylo("chains '" + write_tree(p.first) + "' '" + write_tree(p.second) + "'");
    ASSERT_EQ(r.status, 0);
    auto j = json::parse(r.out);
    auto lib = find_common_chains(p.first, p.second);
    ASSERT_EQ(j.size(), lib.size());
    for (std::size_t i = 0; i < lib.size(); ++i) EXPECT_EQ(j[i]["taxa"].get<std::vector<std::string>>(), lib[i].taxa);
}

TEST(Cli, DistancesOnQuartetPair) {
    const std::string a = "'((a,b),(c,d));'", b = "'((a,c),(b,d));'";
    auto tw = phylo("dist tw " + a + " " + b + " --json");
    ASSERT_EQ(tw.status, 0);
    auto j = json::parse(tw.out);
    EXPECT_EQ(j["value"], 1);
    EXPECT_EQ(j["certificate"]["width"], 3);
    EXPECT_EQ(json::parse(phylo("dist tbr " + a + " " + b + " --json").out)["value"], 1);
    auto mp = json::parse(phylo("dist mp2 " + a + " " + b + " --json").out);
    EXPECT_EQ(mp["value"], 1);
    Character f{mp["certificate"]["character"].get<std::map<std::string, std::string>>()};
    EXPECT_EQ(std::abs(fitch_score(parse_tree("((a,b),(c,d));"), f) - fitch_score(parse_tree("((a,c),(b,d));"), f)), 1);
}

TEST(Cli, DisplayAndTreewidth) {
    auto d = scratch();
    std::string g = (d / "d.json").string(), dot = (d / "d.dot").string(), dec = (d / "dec.json").string();
    ASSERT_EQ(phylo("display '((a,b),(c,d));' '((a,c),(b,d));' --out " + g).status, 0);
    ASSERT_EQ(phylo("display '((a,b),(c,d));' '((a,c),(b,d));' --normalize --out " + dot).status, 0);
    EXPECT_TRUE(fs::file_size(dot) > 0);
    auto r = phylo("tw " + g + " --json --emit-decomposition " + dec);
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(json::parse(r.out)["upper"], 3);
    std::ifstream in(g), din(dec);
    UGraph graph = graph_from_json(json::parse(in));
    EXPECT_TRUE(validate(decomposition_from_json(json::parse(din)), graph).ok);
}

TEST(Cli, TreewidthSizeLimit) {
    auto d = scratch();
    std::string g = put(d / "k.json", graph_to_json(complete_graph(30)).dump());
    // K30 has no reduction; exceeding the exact limit is exit code 3
    EXPECT_EQ(phylo("tw " + g + " --exact-limit 10").status, 3);
    auto b = phylo("tw " + g + " --exact-limit 10 --budget 1 --json");
    EXPECT_EQ(b.status, 0);
    EXPECT_EQ(json::parse(b.out)["upper"], 29);
}

TEST(Cli, Reduce) {
    auto d = scratch();
    std::string rep = (d / "r.json").string();
    auto r = phylo("reduce cps '(((a,b),c),(d,(e,f)));' '(((a,b),d),(c,(e,f)));' --report " + rep);
    ASSERT_EQ(r.status, 0);
    auto j = json::parse(std::ifstream(rep));
    EXPECT_EQ(j["tw_before"], j["tw_after"]);
    EXPECT_EQ(j["groups"].size(), 2u);
    auto c = phylo("reduce cluster '(((a,b),c),(d,(e,f)));' '(((a,c),b),(d,(f,e)));' --split 'a,b,c|d,e,f'");
    ASSERT_EQ(c.status, 0);
    auto cj = json::parse(c.out);
    EXPECT_EQ(cj["predicts_tight"], cj["tw_display"] == std::max(cj["p"].get<int>(), cj["q"].get<int>()));
    // nothing to reduce
    EXPECT_EQ(phylo("reduce cps '((a,b),(c,d));' '((a,c),(b,d));'").status, 2);
    EXPECT_EQ(phylo("reduce chain '((a,b),(c,d));' '((a,c),(b,d));'").status, 2);
}

TEST(Cli, ReduceChain) {
    auto w = find_chain_clip_witness(5, 3);
    ASSERT_TRUE(w);
    auto r = phylo("reduce chain '" + write_tree(w->first) + "' '" + write_tree(w->second) + "' --d 2");
    ASSERT_EQ(r.status, 0);
    auto j = json::parse(r.out);
    EXPECT_LE(j["tw_after"].get<int>(), j["tw_before"].get<int>());
}

TEST(Cli, Construct) {
    auto d = scratch();
    std::string prefix = (d / "grid").string();
    ASSERT_EQ(phylo("construct grid --k 3 --out " + prefix).status, 0);
    auto trees = parse_trees(std::string(std::istreambuf_iterator<char>(std::ifstream(prefix + ".nwk").rdbuf()), {}));
    ASSERT_EQ(trees.size(), 2u);
    EXPECT_EQ(trees[0].size(), 7u);
    auto j = json::parse(std::ifstream(prefix + ".json"));
    EXPECT_TRUE(j["verified"].get<bool>());
    EXPECT_FALSE(minor_model_problem(minor_model_from_json(j["model"])));

    std::string g = put(d / "k4.json", graph_to_json(complete_graph(4)).dump());
    auto e = json::parse(phylo("construct embed " + g + " --json").out);
    EXPECT_TRUE(e["audit"]["ok"].get<bool>());
    EXPECT_TRUE(e["verified"].get<bool>());

    auto dbl = json::parse(phylo("construct double --i 1 --json").out);
    EXPECT_EQ(dbl["decomposition"]["width"], 3);
    EXPECT_EQ(phylo("construct double --i 99").status, 3);
    EXPECT_EQ(phylo("construct double --i -1").status, 2);
    EXPECT_EQ(phylo("construct grid --k 100").status, 3);
}

TEST(Cli, Displays) {
    auto d = scratch();
    // ab|cd with an extra edge between the pendant edges of a and b
    std::string net = put(d / "n.json",
                          R"({"edges":[[1,7],[7,2],[1,8],[8,3],[7,8],[1,4],[4,5],[4,6]],"vertices":[{"id":1,"label":null},{"id":2,"label":"a"},)"
                          R"({"id":3,"label":"b"},{"id":4,"label":null},{"id":5,"label":"c"},{"id":6,"label":"d"},{"id":7,"label":null},{"id":8,"label":null}]})");
    std::string cert = (d / "c.json").string();
    auto yes = phylo("displays " + net + " '((a,b),(c,d));' --certificate " + cert);
    ASSERT_EQ(yes.status, 0);
    EXPECT_EQ(yes.out, "yes\n");
    auto c = json::parse(std::ifstream(cert));
    EXPECT_TRUE(c["embedding"]["ok"].get<bool>());
    EXPECT_EQ(c["deleted_edges"].size(), 1u);
    EXPECT_EQ(phylo("displays " + net + " '((a,c),(b,d));'").out, "no\n");
    EXPECT_EQ(phylo("displays " + net + " '((a,b),(c,d));' --max-r 0").status, 3);
}

TEST(Cli, VerifyAndExitCodes) {
    auto ok = phylo("verify --profile smoke --claim tbr-diameter --claim compat-iff-tw2 --json --seed 5");
    ASSERT_EQ(ok.status, 0);
    auto j = json::parse(ok.out);
    EXPECT_EQ(j["seed"], 5);
    EXPECT_EQ(j["claims"].size(), 2u);
    EXPECT_EQ(phylo("verify --profile smoke --claim cps-invariance --mutate-cps --quiet").status, 1);
    EXPECT_EQ(phylo("verify --profile galaxy").status, 2);
    EXPECT_EQ(phylo("verify --claim nonsense").status, 2);
    EXPECT_EQ(phylo("").status, 2);
    EXPECT_EQ(phylo("dist foo a b").status, 2);
    EXPECT_EQ(phylo("quartets /no/such/file.nwk").status, 2);
    EXPECT_EQ(phylo("--help").status, 0);
}
