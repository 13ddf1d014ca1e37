#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ssradio/scenario.hpp"

namespace ssradio {

/// One row of the ISM band comparison table.
struct BandInfo {
    double low_mhz;
    double high_mhz;
    double delta_f_mhz;
    double nominal_hz;       ///< band name frequency used for the wavelength
    double lambda_exact_cm;  ///< 3e8 / nominal_hz, unrounded
    double lambda_cm;        ///< lambda_exact_cm at the table's printed precision
    std::string space_diversity_verdict;
    std::string remark;
};

/// The 900 MHz / 2.4 GHz / 5.8 GHz comparison. Wavelengths use c = 3e8 to
/// follow the table's own convention; verdicts and remarks are data.
std::vector<BandInfo> band_report();
std::string band_report_csv(const std::vector<BandInfo>& rows);

struct PrtRow {
    double prt_s;
    bool valid;
    double max_unambiguous_range_m;
    double ranging_error_m;  ///< mean absolute error; NaN when nothing was detected
    double detection_rate;
};

/// Validity, unambiguous range and Monte Carlo ranging error per PRT.
/// The receive window never extends past c * PRT / 2.
std::vector<PrtRow> prt_sweep(const std::vector<double>& prt_values_s, const ScenarioConfig& base_config,
                              std::uint64_t seed);
std::string prt_sweep_csv(const std::vector<PrtRow>& rows, const std::string& header = {});

struct RunArtifacts {
    std::vector<std::filesystem::path> files;
    /// Headline metrics in insertion order: (seed, metric, value).
    std::vector<std::tuple<std::uint64_t, std::string, double>> summary;

    double metric(const std::string& name, std::size_t seed_index = 0) const;
};

/// Validate, dispatch on mode and write every CSV under config.output_path.
/// Errors raised while simulating are rethrown with the scenario name.
RunArtifacts run_scenario(const ScenarioConfig& config);

}  // namespace ssradio
