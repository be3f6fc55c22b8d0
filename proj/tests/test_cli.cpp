#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nlohmann/json.hpp"
#include "ssdpp/cli.hpp"
#include "support.hpp"

using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "ssdpp");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = ssdpp::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string iris() { return testing::data_dir() + "/iris.csv"; }
std::string autos() { return testing::data_dir() + "/automobile.csv"; }

std::string temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / ("ssdpp_test_" + name);
    std::ofstream(path, std::ios::binary) << content;
    return path.string();
}

}  // namespace

TEST_CASE("discover json report") {
    const auto r = run({"discover", "-i", iris(), "--targets", "species", "--task", "nominal", "-f", "json"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    for (const char* key : {"params", "subgroups", "default", "summary"}) CHECK(j.contains(key));
    for (const char* key : {"swkl", "n_subgroups", "avg_conditions", "compression_ratio", "total_bits"})
        CHECK(j["summary"].contains(key));
    REQUIRE_FALSE(j["subgroups"].empty());
    const auto& sg = j["subgroups"][0];
    for (const char* key : {"description", "text", "n", "stats", "wkl", "gain_at_insertion"}) CHECK(sg.contains(key));
    CHECK(sg["stats"][0]["kind"] == "nominal");
    CHECK(sg["stats"][0]["categories"].size() == 3);
    CHECK(j["default"]["n"] == 150);
    CHECK(j["summary"]["n_subgroups"] == j["subgroups"].size());
}

TEST_CASE("evaluate reproduces a discovered list") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"-i", iris(), "--targets", "species", "--task", "nominal"},
             {"-i", autos(), "--targets", "price", "--task", "numeric", "--nominal", "symbol", "--beta", "0.5"}}) {
        auto discover = args;
        discover.insert(discover.begin(), "discover");
        discover.insert(discover.end(), {"-f", "json"});
        const auto d = run(discover);
        REQUIRE(d.code == 0);
        const auto list = temp_file("list.json", d.out);
        auto evaluate = args;
        evaluate.insert(evaluate.begin(), "evaluate");
        evaluate.insert(evaluate.end(), {"-f", "json", "--list", list});
        const auto e = run(evaluate);
        REQUIRE(e.code == 0);
        const auto a = json::parse(d.out), b = json::parse(e.out);
        CHECK(std::abs(a["summary"]["swkl"].get<double>() - b["summary"]["swkl"].get<double>()) <= 1e-9);
        CHECK(std::abs(a["summary"]["total_bits"].get<double>() - b["summary"]["total_bits"].get<double>()) <= 1e-9);
        REQUIRE(a["subgroups"].size() == b["subgroups"].size());
        for (std::size_t i = 0; i < a["subgroups"].size(); ++i) {
            CHECK(a["subgroups"][i]["text"] == b["subgroups"][i]["text"]);
            CHECK(std::abs(a["subgroups"][i]["gain_at_insertion"].get<double>() -
                           b["subgroups"][i]["gain_at_insertion"].get<double>()) <= 1e-9);
        }
    }
}

TEST_CASE("output does not depend on thread count") {
    const std::vector<std::string> base{"discover", "-i", autos(), "--targets", "price", "--task", "numeric", "--nominal", "symbol"};
    for (const char* fmt : {"json", "text"}) {
        auto one = base, many = base;
        one.insert(one.end(), {"--threads", "1", "-f", fmt});
        many.insert(many.end(), {"--threads", "8", "-f", fmt});
        const auto a = run(one), b = run(many);
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("exit codes") {
    CHECK(run({"discover", "-i", iris(), "--targets", "species", "--task", "nominal", "--bogus"}).code == 2);
    CHECK(run({"discover", "-i", iris(), "--targets", "species"}).code == 2);
    CHECK(run({"discover", "-i", iris(), "--targets", "species", "--task", "nominal", "--beta", "2"}).code == 2);
    CHECK(run({"discover", "-i", iris(), "--targets", "species", "--task", "nominal", "--beam-width", "0"}).code == 2);
    CHECK(run({"discover", "-i", iris(), "--targets", "nope", "--task", "nominal"}).code == 2);
    CHECK(run({"discover", "-i", iris(), "--targets", "species", "--task", "numeric"}).code == 2);
    CHECK(run({"discover", "-i", iris(), "--targets", "species", "--task", "nominal", "--schema", "{not json"}).code == 2);
    CHECK(run({"discover", "-i", "/nonexistent/data.csv", "--targets", "y", "--task", "nominal"}).code == 3);
    CHECK(run({"evaluate", "-i", iris(), "--targets", "species", "--task", "nominal", "--list", "/nonexistent/list.json"}).code == 3);
    CHECK(run({"discover", "-i", iris(), "--targets", "species", "--task", "nominal", "-o", "/nonexistent/dir/out.json"}).code == 3);

    const auto csv = temp_file("missing.csv", "a,b,y\n1,x,p\n2,,q\n3,x,p\n");
    const auto r = run({"discover", "-i", csv, "--targets", "y", "--task", "nominal"});
    CHECK(r.code == 2);
    CHECK(r.err.find("row 2") != std::string::npos);
    CHECK(r.err.find("'b'") != std::string::npos);
}

TEST_CASE("an uninformative dataset yields an empty list") {
    std::string csv = "x,y\n";
    for (int r = 0; r < 40; ++r) csv += std::string(r % 2 ? "a" : "b") + "," + (r % 4 < 2 ? "p" : "q") + "\n";
    const auto path = temp_file("flat.csv", csv);
    const auto r = run({"discover", "-i", path, "--targets", "y", "--task", "nominal", "-f", "json"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["subgroups"].empty());
    CHECK(j["summary"]["swkl"] == 0.0);
    CHECK(j["summary"]["n_subgroups"] == 0);
    CHECK(j["summary"]["compression_ratio"] == 1.0);
}

TEST_CASE("tables") {
    const auto md = run({"discover", "-i", iris(), "--targets", "species", "--task", "nominal", "-f", "markdown"});
    REQUIRE(md.code == 0);
    CHECK(md.out.find("| dataset distribution") != std::string::npos);
    CHECK(md.out.find("P(species=setosa)") != std::string::npos);

    const auto text = run({"discover", "-i", autos(), "--targets", "price", "--task", "numeric", "--nominal", "symbol"});
    REQUIRE(text.code == 0);
    CHECK(text.out.find("dataset distribution") != std::string::npos);
    CHECK(text.out.find("mean") != std::string::npos);
    CHECK(text.out.find("std") != std::string::npos);
}

TEST_CASE("sweep and verify") {
    const auto s = run({"sweep", "-i", iris(), "--targets", "species", "--task", "nominal", "--betas", "0,1", "-f", "json"});
    REQUIRE(s.code == 0);
    const auto j = json::parse(s.out);
    CHECK(j.dump().find("swkl") != std::string::npos);

    const auto v = run({"verify", "--verify-budget", R"({"quadrature":{"mu_points":801,"sigma_points":801}})"});
    INFO(v.out << v.err);
    CHECK(v.code == 0);
}

TEST_CASE("environment overrides") {
    ::setenv("SSDPP_BEAM_WIDTH", "7", 1);
    ::setenv("SSDPP_DEPTH", "2", 1);
    const auto r = run({"discover", "-i", iris(), "--targets", "species", "--task", "nominal", "-f", "json"});
    ::unsetenv("SSDPP_BEAM_WIDTH");
    ::unsetenv("SSDPP_DEPTH");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["params"]["beam_width"] == 7);
    CHECK(j["params"]["max_depth"] == 2);
    for (const auto& sg : j["subgroups"]) CHECK(sg["description"]["conditions"].size() <= 2);

    const auto flag = run({"discover", "-i", iris(), "--targets", "species", "--task", "nominal", "-f", "json", "--beam-width", "3"});
    CHECK(json::parse(flag.out)["params"]["beam_width"] == 3);
}
