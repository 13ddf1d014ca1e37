#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssradio/common.hpp"

namespace ssradio {

/// Levels in dB sampled on a strictly increasing time axis.
struct RssiTrace {
    std::vector<double> times_s;
    std::vector<double> levels_db;

    RssiTrace() = default;
    RssiTrace(std::vector<double> times, std::vector<double> levels);
    std::size_t size() const { return times_s.size(); }
};

/// I: both carriers normal. II: high carrier faded. III: low carrier faded.
/// both_faded is a diagnostic outside the three-region scheme.
enum class Region { I, II, III, both_faded };

std::string to_string(Region r);

struct AntennaChoice {
    int index = 0;
    bool blind = false;  ///< neither antenna had signal
};

/// Larger RSSI wins; ties go to antenna 0.
AntennaChoice select_antenna(double rssi_a_db, double rssi_b_db);

struct SeparationReport {
    double wavelengths = 0.0;
    bool effective = false;  ///< at least half a wavelength
};

SeparationReport spatial_separation_report(double separation_m, double carrier_hz);

struct RegionSample {
    double time_s;
    Region region;
};

/// Per-sample region labels. A carrier is faded when its level is more than
/// `fade_threshold_db` below the median of its own trace.
std::vector<RegionSample> classify_regions(const RssiTrace& trace_lo, const RssiTrace& trace_hi,
                                           double fade_threshold_db);

/// time_s,level_lo_db,level_hi_db,region
std::string regions_to_csv(const RssiTrace& lo, const RssiTrace& hi, const std::vector<RegionSample>& regions,
                           const std::string& header = {});

struct OutageResult {
    double p_single = 0.0;
    double p_selected = 0.0;
};

/// Monte Carlo over independent block fades on two branches (unit mean
/// power). Outage means |h|^2 below `fade_threshold_db` relative to the mean.
/// p_selected counts trials where the stronger branch is still in outage.
OutageResult selection_outage_probability(double fade_threshold_db, std::size_t n_trials, double decorrelation,
                                          std::uint64_t seed);

}  // namespace ssradio
