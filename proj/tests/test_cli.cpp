#include <doctest.h>

#include "hovelkit/cli.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using hovelkit::run;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string drop_config(const std::string& s) { return s.substr(s.find('\n') + 1); }

}  // namespace

TEST_CASE("every run echoes its resolved config") {
    auto r = call({"classify", "--matrix", "[[2,-1],[-1,2]]"});
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    auto cfg = nlohmann::json::parse(ls[0]);
    CHECK(cfg["config"]["subcommand"] == "classify");
    CHECK(cfg["config"]["matrix"] == "[[2,-1],[-1,2]]");
    CHECK(cfg["config"].contains("seed"));
    CHECK(nlohmann::json::parse(ls[1])["classification"] == "finite (A2-shape block)");
}

TEST_CASE("classify in text form") {
    auto r = call({"classify", "--matrix", "[[2,-1],[-1,2]]", "--format", "text"});
    CHECK(r.code == 0);
    CHECK(lines(r.out).back() == "finite (A2-shape block)");
    auto aff = call({"classify", "--matrix", "aff_a1", "--format", "text"});
    CHECK(lines(aff.out).back().rfind("affine", 0) == 0);
}

TEST_CASE("roots of affine A1 up to height 5") {
    auto r = call({"roots", "--matrix", "aff_a1", "--cap", "5", "--kind", "real"});
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    auto sum = nlohmann::json::parse(ls.back());
    // +-(a0 + n delta) and +-(a1 + n delta) with height <= 5: 2 * (3 + 3) = 12
    CHECK(sum["real"] == 12);
    CHECK(sum["imaginary"] == 0);
    CHECK(ls.size() == 1 + 12 + 1);
    for (std::size_t i = 1; i + 1 < ls.size(); ++i) {
        auto j = nlohmann::json::parse(ls[i]);
        CHECK(j["height"].get<int>() <= 5);
        CHECK(j["tag"] == "real");
    }
    auto im = call({"roots", "--matrix", "aff_a1", "--cap", "5", "--kind", "imaginary"});
    CHECK(nlohmann::json::parse(lines(im.out).back())["imaginary"] == 4);
}

TEST_CASE("enclosure of a point in rank one") {
    auto r = call({"enclose", "--model", "a1,Z", "--spec", "cl_phi", "--shape", "point:0.3", "--format", "text"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out).back() == "[0,1]");
    auto j = call({"enclose", "--model", "a1,Z", "--spec", "cl_phi", "--shape", "point:0.3"});
    auto e = nlohmann::json::parse(lines(j.out).back());
    CHECK(e["region"] == "[0,1]");
    CHECK(e["certificates"].size() == 2);
}

TEST_CASE("weyl, facet, preorder, facade, project, residue") {
    auto w = call({"weyl", "--matrix", "b2", "--length", "8"});
    CHECK(nlohmann::json::parse(lines(w.out).back())["order"] == 8);
    auto f = call({"facet", "--matrix", "a2", "--J", "0"});
    auto fj = nlohmann::json::parse(lines(f.out).back());
    CHECK(fj["spherical"] == true);
    CHECK(fj["chamber"] == false);
    auto p = call({"preorder", "--model", "a2,Z", "--x", "0,0", "--y", "1,1"});
    CHECK(nlohmann::json::parse(lines(p.out).back())["leq"] == "yes");
    // the finite Tits cone is all of V, so use the affine model for a strict comparison
    auto p2 = call({"preorder", "--model", "aff_a1,Z", "--x", "1,1", "--y", "0,0"});
    CHECK(nlohmann::json::parse(lines(p2.out).back())["leq"] == "no");
    auto fa = call({"facade", "--model", "a2,Z", "--J", "0", "--x", "1,2"});
    CHECK(fa.code == 0);
    auto pr = call({"project", "--model", "a2,Z", "--J", "0", "--x", "1,2", "--to-J", "0", "--to-word", "0"});
    CHECK(pr.code == 0);
    auto rs = call({"residue", "--model", "a2,Z", "--x", "0,1/2"});
    auto rj = nlohmann::json::parse(lines(rs.out).back());
    CHECK(rj["count"] == 2);
    CHECK(rj["special"] == false);
    CHECK(rj["closed"] == true);
    auto sp = call({"residue", "--model", "aff_a1,Z", "--x", "1,2"});
    CHECK(nlohmann::json::parse(lines(sp.out).back())["special"] == true);
}

TEST_CASE("tree with DOT export") {
    std::string path = "test_cli_tree.dot";
    auto r = call({"tree", "--p", "2", "--depth", "4", "--dot", path});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(lines(r.out).back())["sphere_sizes"] == nlohmann::json({1, 3, 6, 12, 24}));
    std::ifstream in(path);
    std::string dot((std::istreambuf_iterator<char>(in)), {});
    CHECK(dot.rfind("graph tree {", 0) == 0);
    CHECK(dot.find("style=bold") != std::string::npos);
    std::remove(path.c_str());
    auto big = call({"tree", "--p", "7", "--depth", "2"});
    CHECK(big.code == 2);
    CHECK(big.err.find("BudgetExceeded") != std::string::npos);
}

TEST_CASE("check subcommands: exit codes and stable output") {
    auto a = call({"check-valuation", "--instance", "all", "--samples", "20"});
    auto b = call({"check-valuation", "--instance", "all", "--samples", "20"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    auto ls = lines(a.out);
    CHECK(nlohmann::json::parse(ls.back())["result"] == "pass");
    // sorted by (instance, axiom)
    std::vector<std::pair<std::string, std::string>> keys;
    for (std::size_t i = 1; i + 1 < ls.size(); ++i) {
        auto j = nlohmann::json::parse(ls[i]);
        keys.emplace_back(j["instance"], j["axiom"]);
    }
    CHECK(std::is_sorted(keys.begin(), keys.end()));

    // with zero samples V0 cannot see three values and fails with a witness
    auto fail = call({"check-valuation", "--instance", "sl2", "--samples", "0"});
    CHECK(fail.code == 1);
    CHECK(fail.out.find("\"status\":\"fail\"") != std::string::npos);

    auto rd = call({"check-rd", "--instance", "sl3", "--samples", "10"});
    CHECK(rd.code == 0);
    auto ph = call({"check-parahoric", "--instance", "sl2", "--samples", "3", "--points", "3"});
    CHECK(ph.code == 0);
    auto mao = call({"check-mao", "--instance", "sl3", "--trials", "5"});
    CHECK(mao.code == 0);
}

TEST_CASE("thread count does not change the report stream") {
    setenv("HOVELKIT_THREADS", "1", 1);
    auto one = call({"check-rd", "--instance", "all", "--samples", "15"});
    setenv("HOVELKIT_THREADS", "3", 1);
    auto three = call({"check-rd", "--instance", "all", "--samples", "15"});
    unsetenv("HOVELKIT_THREADS");
    CHECK(one.code == 0);
    CHECK(nlohmann::json::parse(lines(three.out)[0])["config"]["threads"] == 3);
    CHECK(drop_config(one.out) == drop_config(three.out));
}

TEST_CASE("usage errors") {
    CHECK(call({}).code == 2);
    CHECK(call({"frobnicate"}).code == 2);
    CHECK(call({"roots", "--kind", "complex"}).code == 2);
    CHECK(call({"classify", "--matrix", "[[2,1],[-1,2]]"}).code == 2);
    CHECK(call({"classify", "--matrix", "nonsense"}).code == 2);
    CHECK(call({"enclose", "--shape", "blob:1"}).code == 2);
    CHECK(call({"check-mao", "--instance", "loop_sl2"}).code == 2);
    CHECK(call({"check-valuation", "--p", "4"}).code == 2);
    auto h = call({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("check-parahoric") != std::string::npos);
}
