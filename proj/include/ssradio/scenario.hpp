#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssradio/channel.hpp"
#include "ssradio/pn_code.hpp"
#include "ssradio/radar.hpp"

namespace ssradio {

enum class Mode { radar, comm, fading_demo, region_demo, jamming_demo, prt_sweep };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

/// Which spreading code a scenario uses.
struct CodeSpec {
    std::string kind = "barker13";  ///< barker13 | msequence | chips
    int degree = 7;                 ///< msequence only
    std::uint32_t taps = 0;         ///< msequence only; 0 picks the tabulated primitive polynomial
    std::string chips;              ///< chips only, "+1,-1,..." text

    ChipSequence build() const;
    bool operator==(const CodeSpec&) const = default;
};

struct TargetSpec {
    double range_m = 30.0;
    double gain = 1.0;
    bool operator==(const TargetSpec&) const = default;
};

/// Mode-specific knobs. Only the fields of the selected mode are read.
struct ScenarioParams {
    // fading_demo
    double doppler_hz = 10.0;
    double duration_s = 20.0;
    double sample_interval_s = 1e-3;
    int rssi_window = 10;
    int antennas = 1;
    double outage_threshold_db = -10.0;
    std::size_t outage_trials = 100000;
    // region_demo
    double delta_tau_start_s = 0.46e-9;
    double delta_tau_end_s = 0.54e-9;
    double fade_threshold_db = 10.0;
    double measurement_noise_db = 0.3;
    // radar / prt_sweep
    std::vector<TargetSpec> targets{TargetSpec{}};
    double max_range_m = 300.0;
    std::size_t n_bursts = 20;
    double auth_threshold = kDefaultAuthThreshold;
    std::vector<double> prt_values_s;
    // comm / jamming_demo
    std::size_t n_bits = 20000;
    std::size_t burst_bits = 256;
    bool selection_diversity = true;
    int hop_channels = 0;
    std::vector<double> jammer_offsets_hz{0.0};
    std::string jammer_kind = "cochannel_tone";
    double ber_ceiling = 1e-2;

    bool operator==(const ScenarioParams&) const = default;
};

struct ScenarioConfig {
    std::string name;
    Mode mode = Mode::radar;
    CodeSpec code;
    ChannelModel channel;
    RadarTiming timing;
    std::vector<double> carriers_hz{5.8e9};
    std::vector<std::uint64_t> seeds{1};
    std::string output_path = "out";
    ScenarioParams params;
};

bool operator==(const ChannelModel& a, const ChannelModel& b);
bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

/// Config validation failure listing every violated field.
class ValidationError : public SimError {
public:
    ValidationError(std::string scenario, std::vector<std::string> violations);
    const std::string& scenario() const { return scenario_; }
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::string scenario_;
    std::vector<std::string> violations_;
};

/// Every violated field, empty when the config is runnable.
std::vector<std::string> validation_errors(const ScenarioConfig& config);
/// Throws ValidationError when validation_errors is nonempty.
void validate(const ScenarioConfig& config);

/// JSON text form (pretty-printed, stable key order).
std::string to_json_text(const ScenarioConfig& config);
/// Parse JSON text; missing keys take defaults. Malformed input throws ValidationError.
ScenarioConfig config_from_json_text(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Figure-reproduction and demo scenarios shipped with the tool.
std::vector<ScenarioConfig> bundled_scenarios();
std::optional<ScenarioConfig> find_bundled(const std::string& name);

}  // namespace ssradio
