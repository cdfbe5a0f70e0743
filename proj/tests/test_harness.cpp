#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "gse/harness.hpp"

using namespace gse;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(bool(f));
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Wall-clock timing is the one field that cannot be bitwise-reproducible;
// everything else in the tables must be. Blank the time column before diffing.
std::string mask_times(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    int timeCol = -1;
    bool header = true;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string field, rebuilt;
        int col = 0;
        while (std::getline(ls, field, ',')) {
            if (header && field == "time_ms") timeCol = col;
            if (!header && col == timeCol) field = "T";
            rebuilt += (col ? "," : "") + field;
            ++col;
        }
        out += rebuilt + "\n";
        header = false;
    }
    return out;
}

}  // namespace

TEST_CASE("harness: config parsing") {
    const std::string text = R"(
# comparison setup
benchmark = vdp:0.1
methods = FRad-A, ESO-E
seeds = 3, 9
steps = 20
cutoff = 10
out = somewhere
direction_seed = 4
jobs = 2
step_timeout_s = 30

[FRad-A]
max_order = 12
reduction = girard
)";
    RunConfig cfg = parse_config_text(text);
    CHECK(cfg.benchmark == "vdp:0.1");
    CHECK(cfg.methods == std::vector<std::string>{"FRad-A", "ESO-E"});
    CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 9});
    CHECK(cfg.steps == 20);
    CHECK(cfg.cutoff == 10);
    CHECK(cfg.outDir == "somewhere");
    CHECK(cfg.directionSeed == 4);
    CHECK(cfg.jobs == 2);
    CHECK(cfg.stepTimeoutS == 30.0);
    REQUIRE(cfg.overrides.count("FRad-A") == 1);
    CHECK(cfg.overrides.at("FRad-A").maxOrder == 12.0);
    CHECK(cfg.overrides.at("FRad-A").reduction == ReductionMethod::Girard);
    validate_config(cfg);

    // "all" expands to the full method list
    CHECK(parse_config_text("benchmark = vdp:0.1\nmethods = all\n").methods.size() == 14);
    // defaults: 5 seeds
    CHECK(parse_config_text("benchmark = vdp:0.1\nmethods = all\n").seeds.size() == 5);

    CHECK_THROWS_AS(parse_config_text("bogus_key = 1\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("steps = soon\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("[NoSuchMethod]\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("benchmark = vdp:0.1\n[FRad-A]\nweird = 1\n"),
                    config_error);
}

TEST_CASE("harness: config validation messages") {
    RunConfig cfg = parse_config_text("benchmark = vdp:0.1\nmethods = pDTDI\n");
    cfg.overrides["pDTDI"].partitions = 0;
    try {
        validate_config(cfg);
        FAIL("expected a config error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("partitions") != std::string::npos);
    }

    RunConfig bad = parse_config_text("benchmark = pendulum:3\nmethods = FRad-A\n");
    CHECK_THROWS_AS(validate_config(bad), config_error);

    RunConfig unk = parse_config_text("benchmark = vdp:0.1\nmethods = FRod-A\n");
    try {
        validate_config(unk);
        FAIL("expected a config error");
    } catch (const config_error& e) {
        // unknown names come with the list of available methods
        CHECK(std::string(e.what()).find("FRad-A") != std::string::npos);
    }

    RunConfig cut = parse_config_text("benchmark = vdp:0.1\nmethods = FRad-A\ncutoff = 500\n");
    CHECK_THROWS_AS(validate_config(cut), config_error);
}

TEST_CASE("harness: overrides reach the observer config") {
    RunConfig cfg =
        parse_config_text("benchmark = vdp:0.1\nmethods = FRad-A\n[FRad-A]\nmax_order = 7\n");
    auto bench = make_benchmark("vdp:0.1");
    auto oc = resolve_observer_config(ObserverMethod::FRadA, bench, cfg);
    CHECK(oc.maxOrder == 7.0);
    // untouched methods keep benchmark defaults
    auto oc2 = resolve_observer_config(ObserverMethod::VolMinA, bench, cfg);
    CHECK(oc2.maxOrder == 30.0);
}

TEST_CASE("harness: content hash") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("ab") != fnv1a64("ba"));
}

TEST_CASE("harness: comparison run emits tables, hulls, and a manifest") {
    const fs::path dir1 = fs::temp_directory_path() / "gse_harness_t1";
    const fs::path dir2 = fs::temp_directory_path() / "gse_harness_t2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    RunConfig cfg = parse_config_text(
        "benchmark = vdp:0.1\nmethods = FRad-A, ESO-E\nseeds = 1, 2\nsteps = 6\ncutoff = 3\n"
        "jobs = 2\n");
    cfg.outDir = dir1.string();
    RunOutcome out = run_comparison(cfg);
    CHECK(out.anyFinite);
    CHECK(out.cells.size() == 4);
    for (const auto& c : out.cells) {
        CHECK_FALSE(c.report.diverged);
        CHECK(c.report.completedSteps == 6);
        CHECK(std::isfinite(c.report.vTilde));
    }
    // 4 hull files + summary + cutoff summary + per-seed + manifest
    REQUIRE(out.files.size() == 8);
    for (const auto& f : out.files) CHECK(fs::exists(f));

    const std::string summary = slurp((dir1 / "vdp_0_1_summary.csv").string());
    CHECK(summary.rfind("method,time_ms,v_hat,w_hat\n", 0) == 0);
    CHECK(summary.find("FRad-A,") != std::string::npos);
    CHECK(summary.find("ESO-E,") != std::string::npos);
    CHECK(fs::exists(dir1 / "vdp_0_1_summary_cutoff3.csv"));

    const std::string hulls = slurp((dir1 / "vdp_0_1_FRad_A_seed1_steps.csv").string());
    CHECK(std::count(hulls.begin(), hulls.end(), '\n') == 8);  // header + k=0..6
    CHECK(hulls.rfind("k,lo1,hi1,lo2,hi2\n", 0) == 0);

    auto man = nlohmann::json::parse(slurp((dir1 / "vdp_0_1_manifest.json").string()));
    CHECK(man["benchmark"] == "vdp:0.1");
    CHECK(man["files"].size() == 7);  // everything but the manifest itself
    CHECK(man["protocol"].contains("seed_1"));
    CHECK(man["protocol"].contains("directions"));

    // byte-identical rerun
    cfg.outDir = dir2.string();
    RunOutcome out2 = run_comparison(cfg);
    REQUIRE(out2.files.size() == out.files.size());
    for (std::size_t i = 0; i < out.files.size(); ++i) {
        if (out.files[i].find("manifest") != std::string::npos) continue;
        const std::string a = slurp(out.files[i]);
        const std::string b = slurp(out2.files[i]);
        if (out.files[i].find("steps.csv") != std::string::npos)
            CHECK(a == b);  // hull data is fully byte-exact
        else
            CHECK(mask_times(a) == mask_times(b));
    }
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("harness: all-diverged grid still produces a table") {
    const fs::path dir = fs::temp_directory_path() / "gse_harness_t3";
    fs::remove_all(dir);
    RunConfig cfg =
        parse_config_text("benchmark = tank:30\nmethods = ZDC\nseeds = 1\nsteps = 1\n");
    cfg.outDir = dir.string();
    RunOutcome out = run_comparison(cfg);
    CHECK_FALSE(out.anyFinite);
    REQUIRE(out.cells.size() == 1);
    CHECK(out.cells[0].report.diverged);
    CHECK_FALSE(out.cells[0].divergenceReason.empty());
    const std::string summary = slurp((dir / "tank_30_summary.csv").string());
    CHECK(summary.find("ZDC,") != std::string::npos);
    CHECK(summary.find("inf") != std::string::npos);
    fs::remove_all(dir);
}
