#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "flhodge/cli.hpp"
#include "flhodge/io.hpp"

using namespace flh;
using flh::io::Json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(FLH_DATA_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& body) {
    const fs::path dir = fs::temp_directory_path() / "flhodge_cli_test";
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream(path) << body;
    return path.string();
}

std::string rank_one_json(int p, int N, int level, const std::string& u) {
    return R"({"p":)" + std::to_string(p) + R"(,"precision":)" + std::to_string(N) +
           R"(,"elementary_divisors":["inf"],"filtration":[{"jump":)" + std::to_string(level) +
           R"(,"generators":[["1"]]}],"phi_low":{"level":)" + std::to_string(level) + R"(,"matrix":[[")" + u + R"("]]}})";
}

}  // namespace

TEST_CASE("measure on the bundled unramified instance") {
    const Result r = run({"measure", "--input", data("unramified_1p.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"identity_holds\":true") != std::string::npos);
    const Json j = Json::parse(r.out);
    CHECK(j["v_P_at_1"] == 1);
    CHECK(j["log_p_mu"] == 1);
    CHECK(j["h1"]["torsion_exponents"] == Json::array({1}));
    CHECK(j["h1"]["free_rank"] == 0);
    CHECK(j["expectations"]["met"] == true);
}

TEST_CASE("missing input is a usage error") {
    CHECK(run({"cohomology", "--input", "missing.json"}).code == 2);
    CHECK(run({"cohomology"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("lemma-unit certifies the unit") {
    const Result r = run({"lemma-unit", "--p", "3", "--prec", "10", "--xdeg", "20"});
    CHECK(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["unit_certified"] == true);
    CHECK(j["v"].size() == 21);
    CHECK(run({"lemma-unit", "--p", "4", "--prec", "10", "--xdeg", "5"}).code == 2);
}

TEST_CASE("witt-table") {
    const Result r = run({"witt-table", "--p", "3", "--n", "2"});
    CHECK(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["ring_isomorphism"] == true);
    CHECK(j["exhaustive"] == true);
    CHECK(j["entries"].size() == 9);
    CHECK(run({"witt-table", "--p", "2", "--n", "2", "--f", "2"}).code == 0);
}

TEST_CASE("exit codes for negatives and precision") {
    CHECK(run({"measure", "--input", write_temp("trivial.json", rank_one_json(3, 6, 0, "1"))}).code == 1);
    CHECK(run({"cohomology", "--input", write_temp("deep.json", rank_one_json(3, 6, 0, "244"))}).code == 3);
    CHECK(run({"strong-div", "--input", write_temp("notsd.json", rank_one_json(3, 6, 0, "3"))}).code == 1);
    CHECK(run({"cohomology", "--input", write_temp("bad_p.json", rank_one_json(4, 6, 0, "1"))}).code == 2);
    CHECK(run({"cohomology", "--input", write_temp("garbage.json", "{ not json")}).code == 2);

    const std::string chain = R"({"p":3,"precision":6,"elementary_divisors":["inf"],
        "filtration":[{"jump":0,"generators":[["1"]]}],"phi_low":{"level":1,"matrix":[["1"]]}})";
    const Result v = run({"validate", "--input", write_temp("chain.json", chain)});
    CHECK(v.code == 1);
    CHECK(Json::parse(v.out)["violation"]["kind"] == "chain");
    CHECK(run({"cohomology", "--input", write_temp("chain2.json", chain)}).code == 2);
}

TEST_CASE("failed expectations give exit code 1") {
    Json j = Json::parse(rank_one_json(3, 8, 0, "4"));
    j["expect"] = {{"v_P_at_1", 2}};
    const Result r = run({"measure", "--input", write_temp("wrong.json", j.dump())});
    CHECK(r.code == 1);
    CHECK(Json::parse(r.out)["expectations"]["failures"] == Json::array({"v_P_at_1"}));
}

TEST_CASE("other subcommands") {
    const Json a = Json::parse(run({"admissible", "--input", data("nonsplit_ordinary.json")}).out);
    CHECK(a["verdict"] == "admissible");
    CHECK(a["t_H"] == a["t_N"]);
    CHECK(run({"strong-div", "--input", data("split_rank2.json")}).code == 0);
    const Result l = run({"lfunction", "--input", data("tate_m1.json")});
    CHECK(l.code == 0);
    const Json lj = Json::parse(l.out);
    CHECK(lj["v_P_at_1"] == -1);
    CHECK(lj["euler_factor"]["x_scale"] == -1);
    CHECK(lj["euler_factor"]["q"] == Json::array({"1", "59048"}));
    const Json c = Json::parse(run({"cohomology", "--input", data("f2_norm_1p.json")}).out);
    CHECK(c["h1"]["torsion_exponents"] == Json::array({1}));
}

TEST_CASE("every bundled instance meets its expectations") {
    const Result r = run({"measure", "--input-dir", FLH_DATA_DIR});
    CHECK(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j.size() >= 15);
    for (const auto& [name, rep] : j.items()) {
        INFO(name);
        CHECK(rep["exit_code"] == 0);
        CHECK(rep["identity_holds"] == true);
        CHECK(rep["expectations"]["met"] == true);
    }
}

TEST_CASE("output is deterministic") {
    const auto a = run({"cohomology", "--input-dir", FLH_DATA_DIR, "--pretty"});
    const auto b = run({"cohomology", "--input-dir", FLH_DATA_DIR, "--pretty"});
    CHECK(a.out == b.out);
    CHECK(a.code == 0);
}

TEST_CASE("instance round trip and scalar parsing") {
    for (const auto& entry : fs::directory_iterator(FLH_DATA_DIR)) {
        const io::Instance inst = io::load_instance(entry.path());
        const Json j = io::module_to_json(inst.module);
        CHECK(io::module_to_json(io::parse_instance(j).module) == j);
    }
    auto ctx = Context::make(3, 4, 2);
    CHECK(io::scalar_from_json(ctx, Json(Json::array({"-1", "82"}))) == UnramifiedScalar(ctx, {80, 1}));
    CHECK(io::scalar_from_json(ctx, Json(5)) == UnramifiedScalar::from_int(ctx, 5));
    CHECK_THROWS_AS(io::scalar_from_json(ctx, Json(Json::array({"1"}))), Error);
    CHECK_THROWS_AS(io::scalar_from_json(ctx, Json("1.5")), Error);
}
