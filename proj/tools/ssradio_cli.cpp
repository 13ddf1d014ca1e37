#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "ssradio/csv.hpp"
#include "ssradio/harness.hpp"
#include "ssradio/scenario.hpp"

using namespace ssradio;
using nlohmann::json;

namespace {

struct Source {
    std::string config_path;
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string out;
};

void add_source_flags(CLI::App* cmd, Source& src) {
    auto* cfg = cmd->add_option("--config", src.config_path, "Scenario config file (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("--scenario", src.scenario, "Bundled scenario name")->excludes(cfg);
    cmd->add_option("--seed", src.seed, "Run with this single seed instead of the config's seed list");
    cmd->add_option("--out", src.out, "Output directory");
}

ScenarioConfig resolve(const Source& src, const std::string& fallback) {
    ScenarioConfig config;
    if (!src.config_path.empty()) {
        config = load_config(src.config_path);
    } else {
        const std::string name = src.scenario.empty() ? fallback : src.scenario;
        if (name.empty()) throw ValidationError("", {"either --config or --scenario is required"});
        auto found = find_bundled(name);
        if (!found) throw ValidationError(name, {"unknown bundled scenario '" + name + "'"});
        config = *found;
    }
    if (src.seed) config.seeds = {*src.seed};
    if (!src.out.empty()) config.output_path = src.out;
    return config;
}

void print_summary(const RunArtifacts& run) {
    std::cout << "seed,metric,value\n";
    for (const auto& [seed, metric, value] : run.summary)
        std::cout << seed << ',' << metric << ',' << csv::fmt(value) << '\n';
    for (const auto& f : run.files) std::cerr << "wrote " << f.string() << '\n';
}

int fail(const json& err, int code) {
    std::cerr << err.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spread-spectrum vehicular radar/communication radio simulator", "ssradio"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    Source run_src;
    auto* run = app.add_subcommand("run", "Run a single scenario");
    add_source_flags(run, run_src);

    Source sweep_src;
    std::vector<double> prt_us;
    auto* sweep = app.add_subcommand("sweep", "PRT sweep (defaults to the fig6_prt scenario)");
    add_source_flags(sweep, sweep_src);
    sweep->add_option("--prt-us", prt_us, "PRT values in microseconds");

    std::string bands_out;
    auto* bands = app.add_subcommand("bands", "Print the ISM band comparison table");
    bands->add_option("--out", bands_out, "Also write bands.csv into this directory");

    auto* list = app.add_subcommand("list", "List bundled scenarios");

    std::string show_name;
    auto* show = app.add_subcommand("show", "Print a bundled scenario's config");
    show->add_option("scenario", show_name, "Bundled scenario name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail({{"error", "usage"}, {"message", e.what()}}, e.get_exit_code() ? e.get_exit_code() : 2);
    }

    try {
        if (*run) {
            print_summary(run_scenario(resolve(run_src, "")));
        } else if (*sweep) {
            auto config = resolve(sweep_src, "fig6_prt");
            config.mode = Mode::prt_sweep;
            if (!prt_us.empty()) {
                config.params.prt_values_s.clear();
                for (double us : prt_us) config.params.prt_values_s.push_back(us * 1e-6);
            }
            print_summary(run_scenario(config));
        } else if (*bands) {
            const auto body = band_report_csv(band_report());
            std::cout << body;
            if (!bands_out.empty()) {
                const auto path = std::filesystem::path(bands_out) / "bands.csv";
                csv::write_atomic(path, csv::header_comment("bands", 0) + body);
                std::cerr << "wrote " << path.string() << '\n';
            }
        } else if (*list) {
            for (const auto& c : bundled_scenarios()) std::cout << c.name << '\t' << to_string(c.mode) << '\n';
        } else if (*show) {
            auto found = find_bundled(show_name);
            if (!found) throw ValidationError(show_name, {"unknown bundled scenario '" + show_name + "'"});
            std::cout << to_json_text(*found) << '\n';
        }
    } catch (const ValidationError& e) {
        return fail({{"error", "validation"}, {"scenario", e.scenario()}, {"violations", e.violations()}}, 2);
    } catch (const std::exception& e) {
        return fail({{"error", "simulation"}, {"message", e.what()}}, 1);
    }
    return 0;
}
