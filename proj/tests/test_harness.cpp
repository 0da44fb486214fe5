#include "mtm/core/error.hpp"
#include "mtm/harness/commands.hpp"
#include "mtm/harness/config.hpp"

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace mtm;
using namespace mtm::harness;
namespace fs = std::filesystem;

namespace {

const fs::path kFixture = fs::path(MTM_DATA_DIR) / "fixture";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "mtm");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("mtm_test_harness_" + name);
    fs::remove_all(p);
    return p;
}

std::vector<std::string> fixture_args(const std::string& cmd, const fs::path& run_dir) {
    std::vector<std::string> a{cmd, "--config", (kFixture / "config.json").string(), "--data",
                               (kFixture / "data.csv").string(), "--run-dir", run_dir.string()};
    if (cmd == "predict" || cmd == "evaluate") {
        a.push_back("--rankings");
        a.push_back((kFixture / "rankings.csv").string());
    }
    return a;
}

} // namespace

TEST_CASE("config parsing is strict", "[config]") {
    CHECK_THROWS_AS(parse_config(R"({"sed": 3})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": {"windw": 3}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"model": {"window": "big"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"train": {"optimizer": "adam"}})"), ConfigError);
    CHECK_NOTHROW(parse_config("{}"));
}

TEST_CASE("seed and window propagate to every section", "[config]") {
    const auto c = parse_config(R"({"seed": 42, "model": {"window": 48}})");
    CHECK(c.seed == 42);
    CHECK(c.train.seed == 42);
    CHECK(c.eval.split_seed == 42);
    CHECK(c.synth.seed == 42);
    CHECK(c.train.window == 48);
    CHECK(c.model.window == 48);
}

TEST_CASE("resolved config round trips", "[config]") {
    auto c = parse_config(slurp(kFixture / "config.json"));
    c.data = kFixture / "data.csv";
    const auto text = config_json(c);
    CHECK(config_json(parse_config(text)) == text);
    c.validate();
    c.pressure = kFixture / "missing.csv";
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("synth is reproducible", "[cli]") {
    const auto a = scratch("synth_a"), b = scratch("synth_b");
    REQUIRE(cli({"synth", "--seed", "7", "--points", "500", "--matches", "3", "--run-dir", a.string()}) == 0);
    REQUIRE(cli({"synth", "--seed", "7", "--points", "500", "--matches", "3", "--run-dir", b.string()}) == 0);
    for (const char* f : {"data.csv", "rankings.csv", "planted.csv", "config.json"}) {
        CHECK(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    const auto c = scratch("synth_c");
    REQUIRE(cli({"synth", "--seed", "8", "--points", "500", "--matches", "3", "--run-dir", c.string()}) == 0);
    CHECK(slurp(a / "data.csv") != slurp(c / "data.csv"));
}

TEST_CASE("usage errors exit nonzero", "[cli]") {
    CHECK(cli({"evaluate", "--run-dir", scratch("nodata").string()}) != 0);
    CHECK(cli({"frobnicate"}) != 0);
    CHECK(cli({}) != 0);
    CHECK(cli({"synth", "--no-such-flag"}) != 0);
    CHECK(cli({"ingest", "--data", (kFixture / "nope.csv").string(), "--run-dir", scratch("missing").string()}) != 0);
}

TEST_CASE("environment variable supplies the default config", "[cli]") {
    const auto dir = scratch("env");
    fs::create_directories(dir);
    {
        std::ofstream(dir / "cfg.json") << R"({"seed": 5, "synth": {"matches": 2, "points": 60, "min_gap": 10}})";
    }
    ::setenv(kConfigEnv, (dir / "cfg.json").string().c_str(), 1);
    const int rc = cli({"synth", "--run-dir", (dir / "run").string()});
    ::unsetenv(kConfigEnv);
    REQUIRE(rc == 0);
    CHECK(slurp(dir / "run" / "config.json").find("\"seed\": 5") != std::string::npos);
}

TEST_CASE("full pipeline on the shipped fixture", "[cli][smoke]") {
    const auto root = scratch("pipeline");
    REQUIRE(cli(fixture_args("ingest", root / "ingest")) == 0);
    CHECK(fs::exists(root / "ingest" / "records.csv"));
    REQUIRE(cli(fixture_args("detect", root / "detect")) == 0);
    CHECK(fs::exists(root / "detect" / "regions.json"));
    REQUIRE(cli(fixture_args("momentum", root / "momentum")) == 0);
    CHECK(fs::exists(root / "momentum" / "momentum.csv"));
    REQUIRE(cli(fixture_args("train", root / "train")) == 0);
    REQUIRE(fs::exists(root / "train" / "model.bin"));
    auto predict = fixture_args("predict", root / "predict");
    predict.push_back("--model");
    predict.push_back((root / "train" / "model.bin").string());
    REQUIRE(cli(predict) == 0);
    CHECK(fs::exists(root / "predict" / "predictions.json"));
    CHECK(fs::exists(root / "predict" / "decisions" / "M001.csv"));
    REQUIRE(cli(fixture_args("evaluate", root / "evaluate")) == 0);
    const auto report = slurp(root / "evaluate" / "report.json");
    for (const char* key : {"\"tm2\"", "\"elo\"", "\"logistic\"", "\"accuracy\"", "\"mse\"", "\"f1\""})
        CHECK(report.find(key) != std::string::npos);
    CHECK(fs::exists(root / "evaluate" / "config.json"));
}

TEST_CASE("evaluate is byte-identical across runs", "[cli][determinism]") {
    const auto a = scratch("eval_a"), b = scratch("eval_b");
    REQUIRE(cli(fixture_args("evaluate", a)) == 0);
    REQUIRE(cli(fixture_args("evaluate", b)) == 0);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "repetitions.csv") == slurp(b / "repetitions.csv"));
}

TEST_CASE("gradcheck command", "[cli]") {
    const auto dir = scratch("gradcheck");
    CHECK(cli({"gradcheck", "--models", "3", "--run-dir", dir.string()}) == 0);
    CHECK(fs::exists(dir / "gradcheck.json"));
}

TEST_CASE("timestamped run directories do not collide", "[cli]") {
    auto c = parse_config("{}");
    c.output_dir = scratch("runs");
    const auto a = prepare_run_dir(c, "synth", std::nullopt);
    const auto b = prepare_run_dir(c, "synth", std::nullopt);
    CHECK(a != b);
    CHECK(fs::exists(a / "config.json"));
    CHECK(a.filename().string().rfind("synth-", 0) == 0);
}
