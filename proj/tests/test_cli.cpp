#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(DRINFELD_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("golden outputs") {
    auto s = run("slopes --q 3 --k 8 --prec 20");
    CHECK(s.code == 0);
    CHECK(s.out == slurp(data("golden_slopes_q3_k8.tsv")));
    auto c = run("strata-census --q 2 --r 2 --ext 3");
    CHECK(c.code == 0);
    CHECK(c.out == slurp(data("golden_census_q2_r2_e3.tsv")));
    // counts (2^3 - 1)^2 and 2^3 - 1
    auto j = nlohmann::json::parse(run("strata-census --q 2 --r 2 --ext 3 --format json").out);
    CHECK(j["rows"][0]["count"] == 49);
    CHECK(j["rows"][1]["count"] == 7);
}

TEST_CASE("exit codes") {
    CHECK(run("").code == 1);
    CHECK(run("bogus").code == 1);
    CHECK(run("slopes --q 3 --k 8 --frobnicate").code == 1);
    CHECK(run("slopes --q 3 --k 8 --format xml").code == 1);
    CHECK(run("--help").code == 0);
    CHECK(run("--version").code == 0);
    CHECK(run("slopes --q 3 --k 1").code == 2);
    CHECK(run("slopes --q 6 --k 4").code == 2);
    CHECK(run("slopes --k 4").code == 2);
    CHECK(run("gm --q 3 --k 6 --kprime 7").code == 2);
    CHECK(run("vn --q 3 --kmin 4 --kmax 3 --cut 1").code == 2);
    CHECK(run("vn --q 3 --kmin 4 --kmax 6 --cut 1/0").code == 2);
    CHECK(run("slopes --matrix " + data("malformed_matrix.txt")).code == 2);
    CHECK(run("slopes --matrix /nonexistent/file").code == 2);
    CHECK(run("canonical --module /nonexistent/file").code == 2);
    CHECK(run("degree-dynamics --module " + data("local_rank2.json")).code == 2);
    CHECK(run("degree-dynamics --module " + data("ordinary_split.json") + " --H 9").code == 2);
    CHECK(run("kassaei --graph " + data("decreasing.json") + " --k 5").code == 2);
    CHECK(run("weights lambda-plus --expr " + data("one_plus_pi.json") + " --div -1").code == 2);
    CHECK(run("weights").code == 1);
    CHECK(run("canonical --module " + data("local_rank2.json") + " --prec 1").code == 2);
    // the only entry vanishes to precision 5 but has valuation 30
    CHECK(run("slopes --matrix " + data("precision_matrix.txt") + " --prec 5").code == 3);
    auto ok = run("slopes --matrix " + data("precision_matrix.txt") + " --prec 40");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("30\t1") != std::string::npos);
}

TEST_CASE("canonical and dynamics") {
    auto c = run("canonical --module " + data("local_rank2.json") + " --prec 10");
    REQUIRE(c.code == 0);
    auto j = nlohmann::json::parse(c.out);
    CHECK(j["exists"] == true);
    CHECK(j["v_hasse"] == "2/3");
    CHECK(j["htt_w"] == "1/3");
    CHECK(j["deg"] == "1/3");
    auto n = nlohmann::json::parse(run("canonical --module " + data("no_break.json") + " --prec 10").out);
    CHECK(n["exists"] == false);
    CHECK(n["kernel_coeffs"].is_null());
    auto d = run("degree-dynamics --module " + data("ordinary_split.json") + " --format json");
    REQUIRE(d.code == 0);
    auto dj = nlohmann::json::parse(d.out);
    CHECK(dj["deg_y"] == "1");
    CHECK(dj["monotone"] == true);
    CHECK(dj["rows"].size() == 3);
    for (auto& row : dj["rows"]) CHECK(row["deg"] == "1");
    auto m = nlohmann::json::parse(run("degree-dynamics --module " + data("middle_split.json") + " --format json --jobs 3").out);
    CHECK(m["monotone"] == true);
    CHECK(m["classification_ok"] == true);
}

TEST_CASE("weights and kassaei") {
    auto a = nlohmann::json::parse(run("weights lambda-plus --expr " + data("one_plus_pi.json") + " --div 1").out);
    CHECK(a["member"] == true);
    auto b = nlohmann::json::parse(run("weights lambda-plus --expr " + data("one_plus_pi.json") + " --div 2").out);
    CHECK(b["member"] == false);
    auto m = run("weights mahler --expr " + data("one_plus_pi.json") + " --terms 4");
    CHECK(m.code == 0);
    CHECK(m.out.find("pi^4") != std::string::npos);
    auto k = nlohmann::json::parse(run("kassaei --graph " + data("bad_chain.json") + " --k 5 --slope 1 --terms 6 --format json").out);
    CHECK(k["certified"] == true);
    CHECK(k["margin"] == "3");
    CHECK(k["measured_ratio"] == "3");
    auto e = nlohmann::json::parse(run("kassaei --graph " + data("bad_chain.json") + " --k 5 --slope 4 --terms 6 --format json").out);
    CHECK(e["certified"] == false);
    CHECK(e["decay_certified"] == false);
}

TEST_CASE("manifest and determinism") {
    const std::string tmp = std::string(BUILD_DIR) + "/manifest_test.json";
    auto a = run("--manifest " + tmp + " vn --q 3 --kmin 4 --kmax 12 --cut 5 --operator T --jobs 1");
    auto b = run("vn --q 3 --kmin 4 --kmax 12 --cut 5 --operator T --jobs 4");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    auto m = nlohmann::json::parse(slurp(tmp));
    CHECK(m["command"] == "vn");
    CHECK(m["params"]["kmax"] == "12");
    CHECK(m["exit_code"] == 0);
    CHECK(m.contains("version"));
    CHECK(m.contains("elapsed_ms"));
    auto c1 = run("strata-census --q 3 --r 2 --ext 2 --jobs 1");
    auto c4 = run("strata-census --q 3 --r 2 --ext 2 --jobs 4");
    CHECK(c1.out == c4.out);
}

TEST_CASE("selftest") {
    auto s = run("selftest");
    CHECK(s.code == 0);
    CHECK(s.out.find("FAIL") == std::string::npos);
}
