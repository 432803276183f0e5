#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "carenet/report.hpp"
#include "carenet/synth.hpp"
#include "helpers.hpp"

using namespace carenet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("carenet_report_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Every regular file under root, keyed by relative path.
std::map<std::string, std::string> tree_bytes(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) {
            out[fs::relative(entry.path(), root).string()] = slurp(entry.path());
        }
    }
    return out;
}

RunConfig synth_config(const TempDir& dir, std::uint64_t seed) {
    SynthSpec spec;
    spec.grid_width = 12;
    spec.grid_height = 12;
    spec.n_facilities = 8;
    spec.n_blockgroups = 24;
    spec.total_visits = 300;
    RunConfig cfg;
    cfg.files = {(dir.path / "network.csv").string(), (dir.path / "facilities.csv").string(),
                 (dir.path / "blockgroups.csv").string(), (dir.path / "visits.csv").string()};
    generate_synthetic_instance(seed, spec, cfg.files);
    cfg.deltas = {0.1, 0.3};
    cfg.cases_per_delta = 2;
    cfg.master_seed = 99;
    return cfg;
}

} // namespace

TEST_CASE("parse_config") {
    TempDir dir;
    const auto cfg_path = (dir.path / "run.cfg").string();
    auto write_cfg = [&](const std::string& body) {
        std::ofstream out(cfg_path);
        out << body;
    };

    SUBCASE("minimal config applies defaults") {
        write_cfg("network = net.csv\nfacilities = fac.csv\n"
                  "blockgroups = bg.csv\nvisits = v.csv\n");
        const auto cfg = parse_config(cfg_path);
        CHECK(cfg.params.capacity_utilization == doctest::Approx(0.9));
        CHECK(!cfg.params.poverty_line.value);
        CHECK(cfg.params.poverty_line.quantile == doctest::Approx(0.25));
        CHECK(!cfg.params.travel_threshold.value);
        CHECK(cfg.params.travel_threshold.quantile == doctest::Approx(0.5));
        CHECK(cfg.params.dummy_cost_s == doctest::Approx(1e6));
        CHECK(cfg.deltas == std::vector<double>{0.05, 0.1, 0.15});
        CHECK(cfg.cases_per_delta == 10);
        CHECK(cfg.equity);
        CHECK(!cfg.equity_rank_ordering);
    }
    SUBCASE("out-of-range delta names the key") {
        write_cfg("network = n\nfacilities = f\nblockgroups = b\nvisits = v\n"
                  "deltas = 0.05, 1.5\n");
        CHECK_THROWS_WITH_AS(parse_config(cfg_path), doctest::Contains("deltas"),
                             ValidationError);
    }
    SUBCASE("explicit poverty line is honored") {
        write_cfg("network = n\nfacilities = f\nblockgroups = b\nvisits = v\n"
                  "poverty_line = 33956.75\n");
        const auto cfg = parse_config(cfg_path);
        REQUIRE(cfg.params.poverty_line.value);
        CHECK(*cfg.params.poverty_line.value == doctest::Approx(33956.75));
    }
    SUBCASE("unknown key is rejected") {
        write_cfg("network = n\nfacilities = f\nblockgroups = b\nvisits = v\nbogus = 1\n");
        CHECK_THROWS_WITH_AS(parse_config(cfg_path), doctest::Contains("unknown key 'bogus'"),
                             ValidationError);
    }
    SUBCASE("missing required path is rejected") {
        write_cfg("network = n\nfacilities = f\nvisits = v\n");
        CHECK_THROWS_WITH_AS(parse_config(cfg_path), doctest::Contains("blockgroups"),
                             ValidationError);
    }
}

TEST_CASE("run_batch writes a deterministic artifact tree") {
    TempDir dir;
    auto cfg = synth_config(dir, 7);

    cfg.out_dir = (dir.path / "out1").string();
    const auto report1 = run_batch(cfg);
    cfg.out_dir = (dir.path / "out2").string();
    const auto report2 = run_batch(cfg);

    CHECK(report1.results.size() ==
          cfg.deltas.size() * static_cast<std::size_t>(cfg.cases_per_delta) * cfg.modes.size());
    CHECK(tree_bytes(dir.path / "out1") == tree_bytes(dir.path / "out2"));

    // One directory per (mode, delta, case).
    CHECK(fs::exists(dir.path / "out1/random/delta_0.1/case_0/plan.csv"));
    CHECK(fs::exists(dir.path / "out1/random/delta_0.3/case_1/metrics.json"));
    CHECK(fs::exists(dir.path / "out1/rank_ordering/delta_0.1/case_0/scenario.json"));
    CHECK(fs::exists(dir.path / "out1/summary.json"));
    CHECK(fs::exists(dir.path / "out1/distributions.csv"));
    // Equity runs only in random mode by default.
    CHECK(fs::exists(dir.path / "out1/random/delta_0.1/case_0/siting.csv"));
    CHECK(!fs::exists(dir.path / "out1/rank_ordering/delta_0.1/case_0/siting.csv"));
}

TEST_CASE("accounting closure per scenario") {
    TempDir dir;
    auto cfg = synth_config(dir, 11);
    cfg.out_dir = (dir.path / "out").string();
    const auto report = run_batch(cfg);
    for (const auto& r : report.results) {
        // lost = re-allocated to real facilities + unserved
        const long long reallocated = r.base.lost_access - r.base.unserved;
        CHECK(reallocated >= 0);
        CHECK(r.base.lost_access == reallocated + r.base.unserved);
        if (r.equity) {
            // after siting, unserved = covered by a site + uncovered
            CHECK(r.equity->unserved == *r.siting_covered + *r.siting_uncovered);
        }
    }
}

TEST_CASE("empty batch emits headers-only report tables") {
    TempDir dir;
    const auto instance = generate_synthetic_instance(7, SynthSpec{});
    BatchReport empty;
    RunConfig cfg;
    cfg.modes = {};
    emit_report(empty, instance, cfg, (dir.path / "out").string());
    CHECK(slurp(dir.path / "out/equity_comparison.csv") ==
          "mode,delta,case_index,base_vulnerable_avg_s,equity_vulnerable_avg_s,"
          "travel_threshold_s\n");
    const auto dist = slurp(dir.path / "out/distributions.csv");
    CHECK(dist.find("mode,delta,case_index,metric,value\n") == 0);
}

TEST_CASE("distribution table keys blocks by delta") {
    TempDir dir;
    auto cfg = synth_config(dir, 13);
    cfg.modes = {FailureMode::random};
    cfg.out_dir = (dir.path / "out").string();
    run_batch(cfg);
    const auto dist = slurp(dir.path / "out/distributions.csv");
    CHECK(dist.find("random,0.1,") != std::string::npos);
    CHECK(dist.find("random,0.3,") != std::string::npos);
    CHECK(dist.find("baseline,0,-1,avg_travel_s,") != std::string::npos);
}
