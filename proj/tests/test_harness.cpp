#include <doctest.h>

#include <filesystem>
#include <set>

#include "ssradio/csv.hpp"
#include "ssradio/harness.hpp"

using namespace ssradio;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("ssradio_test_" + name);
    fs::remove_all(p);
    return p;
}

std::vector<std::vector<std::string>> read_rows(const fs::path& path) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(csv::read_file(path));
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') rows.push_back(csv::split(line));
    return rows;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("csv helpers") {
    CHECK(csv::fmt(0.1) == "0.1");
    CHECK(std::stod(csv::fmt(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(csv::header_comment("x", 7) == "# config=x seed=7 version=0.1.0\n");
    CHECK(csv::split("a,,b") == std::vector<std::string>{"a", "", "b"});
}

TEST_CASE("band table") {
    const auto rows = band_report();
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].low_mhz == 900);
    CHECK(rows[0].high_mhz == 930);
    CHECK(rows[0].delta_f_mhz == 30);
    CHECK(rows[0].lambda_cm == 33);
    CHECK(rows[0].space_diversity_verdict == "Not effective");
    CHECK(rows[1].low_mhz == 2400);
    CHECK(rows[1].high_mhz == 2480);
    CHECK(rows[1].delta_f_mhz == 80);
    CHECK(rows[1].lambda_cm == 12.5);
    CHECK(rows[1].space_diversity_verdict == "Effective");
    CHECK(rows[2].low_mhz == 5760);
    CHECK(rows[2].high_mhz == 5840);
    CHECK(rows[2].delta_f_mhz == 80);
    CHECK(rows[2].lambda_cm == 5.172);
    CHECK(rows[2].space_diversity_verdict == "More effective");
    for (const auto& r : rows) {
        CHECK(r.delta_f_mhz == r.high_mhz - r.low_mhz);
        CHECK(r.lambda_exact_cm == doctest::Approx(3e10 / r.nominal_hz));
    }
    CHECK(band_report_csv(rows).find("5760-5840,80,5.172,More effective") != std::string::npos);
}

TEST_CASE("prt sweep") {
    auto base = *find_bundled("fig6_prt");
    base.params.n_bursts = 3;
    const auto rows = prt_sweep({300e-6, 350e-6, 500e-6, 600e-6, 650e-6}, base, 1);
    REQUIRE(rows.size() == 5);
    CHECK_FALSE(rows[0].valid);
    CHECK(rows[1].valid);
    CHECK(rows[2].valid);
    CHECK(rows[3].valid);
    CHECK_FALSE(rows[4].valid);
    CHECK(rows[1].max_unambiguous_range_m / 1000.0 == doctest::Approx(52.46).epsilon(1e-4));
    for (const auto& r : rows) {
        CHECK(r.detection_rate == 1.0);
        CHECK(r.ranging_error_m <= delay_to_range(base.timing.sample_period_s()));
    }
    CHECK_THROWS_AS(prt_sweep({0.0}, base, 1), SimError);
}

TEST_CASE("config JSON round trip") {
    for (const auto& c : bundled_scenarios()) {
        CAPTURE(c.name);
        CHECK(validation_errors(c).empty());
        const auto text = to_json_text(c);
        CHECK(config_from_json_text(text) == c);
        CHECK(to_json_text(config_from_json_text(text)) == text);
    }
}

TEST_CASE("validation lists every violated field") {
    ScenarioConfig c;
    c.mode = Mode::region_demo;
    c.seeds.clear();
    c.carriers_hz = {12e9};
    c.params.fade_threshold_db = -1.0;
    const auto errors = validation_errors(c);
    CHECK(errors.size() == 5);
    try {
        validate(c);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.violations() == errors);
    }

    try {
        config_from_json_text(R"({"name": "bad", "mode": "radar", "seeds": "one", "timing": {"prt_s": "x"}})");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.scenario() == "bad");
        CHECK(e.violations().size() == 2);
    }
    CHECK_THROWS_AS(config_from_json_text("{"), ValidationError);
    CHECK_THROWS_AS(config_from_json_text(R"({"name": "m"})"), ValidationError);
    CHECK_THROWS_AS(config_from_json_text(R"({"name": "m", "mode": "warp"})"), ValidationError);
}

TEST_CASE("run_scenario refuses an invalid config before simulating") {
    ScenarioConfig c;
    c.name = "";
    c.output_path = scratch("never").string();
    CHECK_THROWS_AS(run_scenario(c), ValidationError);
    CHECK_FALSE(fs::exists(c.output_path));
}

TEST_CASE("fading scenario shows deep RSSI dips") {
    auto c = *find_bundled("fig2_fading");
    c.output_path = scratch("fig2").string();
    const auto run = run_scenario(c);
    CHECK(run.metric("rssi_span_db") >= 20.0);
    const auto rows = read_rows(fs::path(c.output_path) / "seed_1" / "rssi.csv");
    CHECK(rows.front() == std::vector<std::string>{"time_s", "rssi_a_db"});
    CHECK(rows.size() == 2001);
    CHECK(fs::exists(fs::path(c.output_path) / "seed_1" / "fade_trace.csv"));
    CHECK(csv::read_file(fs::path(c.output_path) / "summary.csv").starts_with("# config=fig2_fading seed=1"));
}

TEST_CASE("region scenario contains all three labels") {
    auto c = *find_bundled("fig4_regions");
    c.output_path = scratch("fig4").string();
    run_scenario(c);
    std::set<std::string> labels;
    for (const auto& row : read_rows(fs::path(c.output_path) / "seed_1" / "regions.csv")) labels.insert(row.back());
    CHECK(labels.count("I") == 1);
    CHECK(labels.count("II") == 1);
    CHECK(labels.count("III") == 1);
}

TEST_CASE("same config and seeds give identical bytes") {
    auto c = *find_bundled("radar_two_cars");
    c.seeds = {3, 4};
    c.output_path = scratch("det_a").string();
    const auto a = run_scenario(c);
    c.output_path = scratch("det_b").string();
    const auto b = run_scenario(c);
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i)
        CHECK(csv::read_file(a.files[i]) == csv::read_file(b.files[i]));
    CHECK(a.metric("detection_rate", 1) == b.metric("detection_rate", 1));
    CHECK_THROWS_AS(a.metric("detection_rate", 2), SimError);
    CHECK_THROWS_AS(a.metric("no_such_metric"), SimError);
}

TEST_CASE("run failures carry the scenario name") {
    auto c = *find_bundled("radar_two_cars");
    const auto blocker = scratch("blocker");
    csv::write_atomic(blocker, "not a directory\n");
    c.output_path = (blocker / "out").string();
    try {
        run_scenario(c);
        FAIL("expected a failure");
    } catch (const ValidationError&) {
        FAIL("unexpected validation error");
    } catch (const SimError& e) {
        CHECK(std::string(e.what()).find("radar_two_cars") != std::string::npos);
    }
    fs::remove(blocker);
}

}
