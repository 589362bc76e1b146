#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <mzvlab/cli.hpp>

using namespace mzvlab;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args, std::map<std::string, std::string> env = {}) {
    args.insert(args.begin(), "mzvlab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    auto lookup = [&](const char* name) -> const char* {
        auto it = env.find(name);
        return it == env.end() ? nullptr : it->second.c_str();
    };
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err, lookup);
    return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> lines(const std::string& text) {
    std::vector<nlohmann::json> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(nlohmann::json::parse(line));
    return out;
}

} // namespace

TEST_CASE("eval prints exact rationals and polynomials") {
    CHECK(run({"eval", "finite", "--index", "1,2", "--interval", "(0,4)"}).out == "5/12\n");
    CHECK(run({"eval", "finite", "--index", "1,1", "--interval", "(0,2]", "--star"}).out == "7/4\n");
    CHECK(run({"eval", "finite", "--index", "2", "--interval", "(0,3)", "--shift", "1/2"}).out == "136/225\n");
    Result reg = run({"eval", "reg", "--kind", "stuffle", "--index", "1,1"});
    CHECK(reg.code == 0);
    CHECK(reg.out.rfind("(1/2)·T^2 - 0.8224670334", 0) == 0);
    CHECK(run({"eval", "reg", "--kind", "shuffle", "--index", "1,1"}).out == "(1/2)·T^2\n");
    CHECK(run({"eval", "mzv", "--index", "3", "--eps", "1e-12"}).out.rfind("1.202056903159", 0) == 0);
    CHECK(run({"eval", "alt", "--index", "1"}).out.rfind("0.693147180559", 0) == 0);
    CHECK(run({"eval", "decompose", "--word", "y:1,1"}).out == "-1/2·y2; 0; 1/2·1\n");
}

TEST_CASE("eval json output") {
    auto j = nlohmann::json::parse(run({"eval", "finite", "--index", "1,2", "--interval", "(0,4)", "--format", "json"}).out);
    CHECK(j.at("value") == "5/12");
    CHECK(j.at("interval") == "(0,4)");
}

TEST_CASE("usage and domain errors exit with 2") {
    Result bad = run({"eval", "finite", "--index", "1,2", "--interval", "(0,4"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("position") != std::string::npos);
    CHECK(run({"eval", "finite", "--index", "1,x", "--interval", "(0,4)"}).code == 2);
    CHECK(run({"eval", "mzv", "--index", "2,1"}).code == 2);
    CHECK(run({"eval", "finite", "--index", "3", "--interval", "(-2,4)"}).code == 2);
    CHECK(run({"eval", "mzv", "--index", "2", "--eps", "1e-20"}).code == 2);
    CHECK(run({"verify", "nothing"}).code == 2);
    CHECK(run({"verify", "depthcert", "--index", "2,2"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"eval", "finite", "--bogus", "1"}).code == 2);
}

TEST_CASE("verify streams one report per line and closes with a summary") {
    Result r = run({"verify", "parity", "--kind", "shuffle", "--index", "2,1", "--q", "3"});
    CHECK(r.code == 0);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0].at("theorem") == "shuffle_parity");
    CHECK(ls[0].at("pass") == true);
    CHECK(ls[1].at("summary") == true);
    CHECK(ls[1].at("reports") == 1);

    Result b = run({"verify", "bounds", "--lemma", "star-log", "--n-max", "10000"});
    CHECK(b.code == 0);
    CHECK(lines(b.out).back().at("pass") == true);
}

TEST_CASE("a failing check exits with 1") {
    Result r = run({"verify", "cyclotomic", "--index", "2,1", "--colors", "1,2@4", "--kind", "stuffle", "--printed-colors"});
    CHECK(r.code == 1);
    CHECK(lines(r.out).back().at("failed") == 1);
}

TEST_CASE("sweeps are byte-identical across runs and thread counts") {
    std::vector<std::string> args{"verify", "prop23", "--max-weight", "3", "--max-depth", "2", "--window", "4", "--seed", "9"};
    Result a = run(args);
    auto with_threads = args;
    with_threads.insert(with_threads.end(), {"--threads", "4"});
    Result b = run(with_threads);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    Result c = run({"verify", "prop23", "--max-weight", "3", "--max-depth", "2", "--window", "4", "--seed", "10"});
    CHECK(c.out != a.out);
}

TEST_CASE("table format") {
    Result r = run({"verify", "depthcert", "--index", "1,2", "--format", "table"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("PASS depth_reduction", 0) == 0);
}

TEST_CASE("settings: flags beat environment beat config file") {
    std::string path = "test_cli_settings.cfg";
    {
        std::ofstream f(path);
        f << "# defaults for this run\nindex = 2\ninterval=(0,3)\n";
    }
    CHECK(run({"eval", "finite", "--config", path}).out == "5/4\n");
    CHECK(run({"eval", "finite"}, {{"MZVLAB_CONFIG", path}}).out == "5/4\n");
    CHECK(run({"eval", "finite", "--config", path}, {{"MZVLAB_INDEX", "1,2"}, {"MZVLAB_INTERVAL", "(0,4)"}}).out == "5/12\n");
    CHECK(run({"eval", "finite", "--config", path, "--index", "1"}, {{"MZVLAB_INDEX", "1,2"}}).out == "3/2\n");
    {
        std::ofstream f(path);
        f << "index = 2\nnonsense = 1\n";
    }
    Result bad = run({"eval", "finite", "--config", path});
    CHECK(bad.code == 2);
    CHECK(bad.err.find(":2:") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("precision beyond working digits is refused") {
    CHECK(run({"eval", "mzv", "--index", "2", "--precision", "80"}).code == 2);
    CHECK(run({"eval", "mzv", "--index", "2", "--precision", "12"}).out.rfind("1.64493406685±", 0) == 0);
}
