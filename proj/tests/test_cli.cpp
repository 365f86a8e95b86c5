#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using gstruct::cli::run;

namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, {out, err});
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("gstruct_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const auto p = dir / "config.json";
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST(Cli, InvariantsVolumeFormOnSo3) {
    const auto dir = scratch("inv");
    const auto r = call({"invariants", "--group", "so3", "--p", "0", "--q", "3", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(dir / "invariants_so3_p0_q3.json"));
    EXPECT_EQ(j["dimension"], 1);
    EXPECT_EQ(j["basis"].size(), 1u);
}

TEST(Cli, DimensionTableCsv) {
    const auto dir = scratch("table");
    const auto r = call({"invariants", "--group", "so2", "--table", "--max-p", "1", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto csv = slurp(dir / "dimensions_so2.csv");
    EXPECT_NE(csv.find("so2,0,2,1"), std::string::npos);
    EXPECT_NE(csv.find("so2,1,0,1"), std::string::npos);
}

TEST(Cli, SphereEulerClass) {
    const auto dir = scratch("classes");
    const auto r = call({"classes", "--geometry", "round_sphere_2", "--invariant", "euler", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(dir / "classes_round_sphere_2_euler.json"));
    EXPECT_NEAR(j["periods"][0]["normalized"].get<double>(), 2.0, 1e-3);
    EXPECT_EQ(j["closedness"]["status"], "PASS");
    EXPECT_EQ(j["seed"], gstruct::cli::kDefaultSeed);
}

TEST(Cli, TorsionfulVerifyFails) {
    const auto dir = scratch("verify");
    const auto r = call({"verify", "--geometry", "torsionful_demo", "--invariant", "area", "--out", dir.string()});
    EXPECT_EQ(r.code, 1);
    const auto j = nlohmann::json::parse(slurp(dir / "verify_torsionful_demo_area.json"));
    EXPECT_EQ(j["status"], "FAIL");
    EXPECT_GT(j["closedness_residual"].get<double>(), 1e-3);
    EXPECT_TRUE(fs::exists(dir / "verify_torsionful_demo_area.csv"));
}

TEST(Cli, SameSeedGivesIdenticalArtifacts) {
    const auto a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
    for (const auto& d : {a, b})
        ASSERT_EQ(call({"classes", "--geometry", "kaehler_u2_chart", "--invariant", "ricci", "--seed", "9", "--points", "5", "--out", d.string()}).code, 0);
    ASSERT_EQ(call({"classes", "--geometry", "kaehler_u2_chart", "--invariant", "ricci", "--seed", "10", "--points", "5", "--out", c.string()}).code, 0);
    const std::string name = "classes_kaehler_u2_chart_ricci.json";
    EXPECT_EQ(slurp(a / name), slurp(b / name));
    EXPECT_NE(slurp(a / name), slurp(c / name));
}

TEST(Cli, ConfigFileDrivesRun) {
    const auto dir = scratch("config");
    const auto cfg = write_config(dir, R"({"geometry": "round_sphere_2", "invariant": {"group": "so2", "p": 1, "q": 0},
                                           "seed": 4, "points": 3, "options": {"sphere_margin": 0.01}})");
    const auto r = call({"classes", "--config", cfg.string(), "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(dir / "classes_round_sphere_2_so2_p1_q0_0.json"));
    EXPECT_EQ(j["seed"], 4);
    EXPECT_EQ(j["pointwise"].size(), 3u);
}

TEST(Cli, MalformedConfigReportsLine) {
    const auto dir = scratch("bad");
    const auto cfg = write_config(dir, "{\n  \"geometry\": \"round_sphere_2\",\n  \"points\": ,\n}\n");
    const auto r = call({"classes", "--config", cfg.string(), "--out", dir.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("config.json:3"), std::string::npos) << r.err;
}

TEST(Cli, ConfigFieldErrors) {
    const auto dir = scratch("fields");
    const auto wrong_type = write_config(dir, R"({"geometry": "round_sphere_2", "points": "many"})");
    auto r = call({"verify", "--config", wrong_type.string(), "--out", dir.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("'points'"), std::string::npos) << r.err;
    const auto unknown = write_config(dir, R"({"geometry": "round_sphere_2", "colour": 1})");
    r = call({"verify", "--config", unknown.string(), "--out", dir.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("'colour'"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrorsExitTwo) {
    const auto dir = scratch("usage");
    EXPECT_EQ(call({}).code, 2);
    EXPECT_EQ(call({"frobnicate"}).code, 2);
    EXPECT_EQ(call({"classes", "--geometry", "klein_bottle", "--invariant", "euler", "--out", dir.string()}).code, 2);
    EXPECT_EQ(call({"classes", "--geometry", "round_sphere_2", "--out", dir.string()}).code, 2);
    EXPECT_EQ(call({"integrate", "--geometry", "kaehler_u2_chart", "--invariant", "ricci", "--out", dir.string()}).code, 2);
    EXPECT_EQ(call({"transgress", "--pair", "nope", "--out", dir.string()}).code, 2);
}

TEST(Cli, NonInvariantInputWarns) {
    const auto dir = scratch("noninv");
    const auto r = call({"classes", "--geometry", "flat_torus_4", "--invariant", "area12", "--points", "2", "--out", dir.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("not invariant"), std::string::npos);
    const auto j = nlohmann::json::parse(slurp(dir / "classes_flat_torus_4_area12.json"));
    EXPECT_TRUE(j["closedness"].is_null());
}

TEST(Cli, OutputDirectoryFromEnvironment) {
    const auto dir = scratch("env");
    ::setenv("GSTRUCT_OUT", dir.string().c_str(), 1);
    const auto r = call({"catalog", "list"});
    ::unsetenv("GSTRUCT_OUT");
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(fs::exists(dir / "catalog.json"));
    EXPECT_NE(r.out.find("torsionful_demo"), std::string::npos);
}

TEST(Cli, TransgressTable) {
    const auto dir = scratch("trans");
    const auto r = call({"transgress", "--pair", "flat_torus_4/shear", "--points", "5", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto csv = slurp(dir / "transgress.csv");
    EXPECT_NE(csv.find("flat_torus_4/shear,n_dual_area34,1,2,4"), std::string::npos);
}
