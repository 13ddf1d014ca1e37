#include "ssradio/scenario.hpp"

#include <cmath>
#include <json.hpp>

#include "ssradio/csv.hpp"
#include "ssradio/signal.hpp"

namespace ssradio {

using nlohmann::json;

namespace {

// Reads `key` into `out` when present; type mismatches are recorded, not thrown.
template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& path, std::vector<std::string>& errors) {
    if (!obj.is_object() || !obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        errors.push_back(path + key + ": wrong type (" + obj.at(key).type_name() + ")");
    }
}

json taps_to_json(const std::vector<ChannelTap>& taps) {
    json arr = json::array();
    for (const auto& t : taps)
        arr.push_back({{"delay_s", t.delay_s},
                       {"gain_re", t.gain.real()},
                       {"gain_im", t.gain.imag()},
                       {"doppler_hz", t.doppler_hz}});
    return arr;
}

json channel_to_json(const ChannelModel& m) {
    json interferers = json::array();
    for (const auto& i : m.interferers) {
        interferers.push_back({{"kind", to_string(i.kind)},
                               {"freq_offset_hz", i.freq_offset_hz},
                               {"power_db", i.enabled() ? json(i.power_db) : json(nullptr)}});
    }
    return {{"taps", taps_to_json(m.taps)},
            {"noise_psd", m.noise_psd},
            {"interferers", interferers},
            {"antenna_decorrelation", m.antenna_decorrelation},
            {"rayleigh_block", m.rayleigh_block}};
}

ChannelModel channel_from_json(const json& j, std::vector<std::string>& errors) {
    ChannelModel m;
    if (!j.is_object()) {
        errors.push_back("channel: expected an object");
        return m;
    }
    if (j.contains("taps")) {
        if (!j["taps"].is_array()) {
            errors.push_back("channel.taps: expected an array");
        } else {
            m.taps.clear();
            for (std::size_t i = 0; i < j["taps"].size(); ++i) {
                const auto& t = j["taps"][i];
                const std::string p = "channel.taps[" + std::to_string(i) + "].";
                ChannelTap tap;
                double re = 1.0, im = 0.0;
                read(t, "delay_s", tap.delay_s, p, errors);
                read(t, "gain_re", re, p, errors);
                read(t, "gain_im", im, p, errors);
                read(t, "doppler_hz", tap.doppler_hz, p, errors);
                tap.gain = {re, im};
                m.taps.push_back(tap);
            }
        }
    }
    read(j, "noise_psd", m.noise_psd, "channel.", errors);
    read(j, "antenna_decorrelation", m.antenna_decorrelation, "channel.", errors);
    read(j, "rayleigh_block", m.rayleigh_block, "channel.", errors);
    if (j.contains("interferers")) {
        if (!j["interferers"].is_array()) {
            errors.push_back("channel.interferers: expected an array");
        } else {
            for (std::size_t i = 0; i < j["interferers"].size(); ++i) {
                const auto& o = j["interferers"][i];
                const std::string p = "channel.interferers[" + std::to_string(i) + "].";
                Interferer itf;
                std::string kind = "cochannel_tone";
                read(o, "kind", kind, p, errors);
                try {
                    itf.kind = interferer_kind_from_string(kind);
                } catch (const SimError& e) {
                    errors.push_back(p + "kind: " + e.what());
                }
                read(o, "freq_offset_hz", itf.freq_offset_hz, p, errors);
                if (o.contains("power_db") && !o["power_db"].is_null()) read(o, "power_db", itf.power_db, p, errors);
                m.interferers.push_back(itf);
            }
        }
    }
    return m;
}

json params_to_json(const ScenarioParams& p) {
    json targets = json::array();
    for (const auto& t : p.targets) targets.push_back({{"range_m", t.range_m}, {"gain", t.gain}});
    return {{"doppler_hz", p.doppler_hz},
            {"duration_s", p.duration_s},
            {"sample_interval_s", p.sample_interval_s},
            {"rssi_window", p.rssi_window},
            {"antennas", p.antennas},
            {"outage_threshold_db", p.outage_threshold_db},
            {"outage_trials", p.outage_trials},
            {"delta_tau_start_s", p.delta_tau_start_s},
            {"delta_tau_end_s", p.delta_tau_end_s},
            {"fade_threshold_db", p.fade_threshold_db},
            {"measurement_noise_db", p.measurement_noise_db},
            {"targets", targets},
            {"max_range_m", p.max_range_m},
            {"n_bursts", p.n_bursts},
            {"auth_threshold", p.auth_threshold},
            {"prt_values_s", p.prt_values_s},
            {"n_bits", p.n_bits},
            {"burst_bits", p.burst_bits},
            {"selection_diversity", p.selection_diversity},
            {"hop_channels", p.hop_channels},
            {"jammer_offsets_hz", p.jammer_offsets_hz},
            {"jammer_kind", p.jammer_kind},
            {"ber_ceiling", p.ber_ceiling}};
}

ScenarioParams params_from_json(const json& j, std::vector<std::string>& errors) {
    ScenarioParams p;
    if (!j.is_object()) {
        errors.push_back("params: expected an object");
        return p;
    }
    const std::string path = "params.";
    read(j, "doppler_hz", p.doppler_hz, path, errors);
    read(j, "duration_s", p.duration_s, path, errors);
    read(j, "sample_interval_s", p.sample_interval_s, path, errors);
    read(j, "rssi_window", p.rssi_window, path, errors);
    read(j, "antennas", p.antennas, path, errors);
    read(j, "outage_threshold_db", p.outage_threshold_db, path, errors);
    read(j, "outage_trials", p.outage_trials, path, errors);
    read(j, "delta_tau_start_s", p.delta_tau_start_s, path, errors);
    read(j, "delta_tau_end_s", p.delta_tau_end_s, path, errors);
    read(j, "fade_threshold_db", p.fade_threshold_db, path, errors);
    read(j, "measurement_noise_db", p.measurement_noise_db, path, errors);
    if (j.contains("targets")) {
        if (!j["targets"].is_array()) {
            errors.push_back("params.targets: expected an array");
        } else {
            p.targets.clear();
            for (std::size_t i = 0; i < j["targets"].size(); ++i) {
                TargetSpec t;
                const std::string tp = "params.targets[" + std::to_string(i) + "].";
                read(j["targets"][i], "range_m", t.range_m, tp, errors);
                read(j["targets"][i], "gain", t.gain, tp, errors);
                p.targets.push_back(t);
            }
        }
    }
    read(j, "max_range_m", p.max_range_m, path, errors);
    read(j, "n_bursts", p.n_bursts, path, errors);
    read(j, "auth_threshold", p.auth_threshold, path, errors);
    read(j, "prt_values_s", p.prt_values_s, path, errors);
    read(j, "n_bits", p.n_bits, path, errors);
    read(j, "burst_bits", p.burst_bits, path, errors);
    read(j, "selection_diversity", p.selection_diversity, path, errors);
    read(j, "hop_channels", p.hop_channels, path, errors);
    read(j, "jammer_offsets_hz", p.jammer_offsets_hz, path, errors);
    read(j, "jammer_kind", p.jammer_kind, path, errors);
    read(j, "ber_ceiling", p.ber_ceiling, path, errors);
    return p;
}

void check(bool ok, std::vector<std::string>& errors, const std::string& message) {
    if (!ok) errors.push_back(message);
}

}  // namespace

std::string to_string(Mode m) {
    switch (m) {
        case Mode::radar: return "radar";
        case Mode::comm: return "comm";
        case Mode::fading_demo: return "fading_demo";
        case Mode::region_demo: return "region_demo";
        case Mode::jamming_demo: return "jamming_demo";
        case Mode::prt_sweep: return "prt_sweep";
    }
    return "?";
}

Mode mode_from_string(const std::string& s) {
    for (Mode m : {Mode::radar, Mode::comm, Mode::fading_demo, Mode::region_demo, Mode::jamming_demo,
                   Mode::prt_sweep})
        if (to_string(m) == s) return m;
    throw SimError("unknown mode '" + s + "'");
}

ChipSequence CodeSpec::build() const {
    if (kind == "barker13") return barker13();
    if (kind == "msequence") return msequence(degree, taps != 0 ? taps : primitive_taps(degree));
    if (kind == "chips") return ChipSequence::from_text(chips);
    throw SimError("unknown code kind '" + kind + "'");
}

bool operator==(const ChannelModel& a, const ChannelModel& b) {
    auto tap_eq = [](const ChannelTap& x, const ChannelTap& y) {
        return x.delay_s == y.delay_s && x.gain == y.gain && x.doppler_hz == y.doppler_hz;
    };
    auto itf_eq = [](const Interferer& x, const Interferer& y) {
        return x.kind == y.kind && x.freq_offset_hz == y.freq_offset_hz && x.power_db == y.power_db;
    };
    return std::equal(a.taps.begin(), a.taps.end(), b.taps.begin(), b.taps.end(), tap_eq) &&
           a.noise_psd == b.noise_psd &&
           std::equal(a.interferers.begin(), a.interferers.end(), b.interferers.begin(), b.interferers.end(),
                      itf_eq) &&
           a.antenna_decorrelation == b.antenna_decorrelation && a.rayleigh_block == b.rayleigh_block;
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
    return a.name == b.name && a.mode == b.mode && a.code == b.code && a.channel == b.channel &&
           a.timing.prt_s == b.timing.prt_s && a.timing.samples_per_chip == b.timing.samples_per_chip &&
           a.timing.chip_rate_hz == b.timing.chip_rate_hz && a.carriers_hz == b.carriers_hz && a.seeds == b.seeds &&
           a.output_path == b.output_path && a.params == b.params;
}

namespace {

std::string join_violations(const std::string& scenario, const std::vector<std::string>& v) {
    std::string msg = "scenario '" + scenario + "' is invalid:";
    for (const auto& s : v) msg += "\n  - " + s;
    return msg;
}

}  // namespace

ValidationError::ValidationError(std::string scenario, std::vector<std::string> violations)
    : SimError(join_violations(scenario, violations)),
      scenario_(std::move(scenario)),
      violations_(std::move(violations)) {}

std::vector<std::string> validation_errors(const ScenarioConfig& c) {
    std::vector<std::string> e;
    const auto& p = c.params;
    check(!c.name.empty(), e, "name: must be nonempty");
    check(!c.seeds.empty(), e, "seeds: need at least one seed");
    check(!c.output_path.empty(), e, "output_path: must be nonempty");
    try {
        c.code.build();
    } catch (const SimError& err) {
        e.push_back(std::string("code: ") + err.what());
    }
    try {
        c.channel.validate();
    } catch (const SimError& err) {
        e.push_back(std::string("channel: ") + err.what());
    }
    try {
        c.timing.validate();
    } catch (const SimError& err) {
        e.push_back(std::string("timing: ") + err.what());
    }
    for (std::size_t i = 0; i < c.carriers_hz.size(); ++i)
        check(c.carriers_hz[i] > 0.0 && std::isfinite(c.carriers_hz[i]), e,
              "carriers_hz[" + std::to_string(i) + "]: must be positive");

    switch (c.mode) {
        case Mode::fading_demo:
            check(p.doppler_hz > 0.0, e, "params.doppler_hz: must be positive");
            check(p.duration_s > 0.0, e, "params.duration_s: must be positive");
            check(p.sample_interval_s > 0.0, e, "params.sample_interval_s: must be positive");
            check(p.sample_interval_s <= p.duration_s, e, "params.sample_interval_s: must not exceed duration_s");
            check(p.rssi_window >= 1, e, "params.rssi_window: must be >= 1");
            check(p.rssi_window * p.sample_interval_s <= p.duration_s, e,
                  "params.rssi_window: window longer than the trace");
            check(p.antennas == 1 || p.antennas == 2, e, "params.antennas: must be 1 or 2");
            check(p.outage_trials >= 1000, e, "params.outage_trials: must be >= 1000");
            break;
        case Mode::region_demo:
            check(c.carriers_hz.size() == 2, e, "carriers_hz: region_demo needs exactly two carriers (low, high)");
            if (c.carriers_hz.size() == 2)
                check(c.carriers_hz[0] < c.carriers_hz[1], e, "carriers_hz: low carrier must come first");
            check(c.channel.taps.size() == 2, e, "channel.taps: region_demo needs exactly two paths");
            check(p.duration_s > 0.0, e, "params.duration_s: must be positive");
            check(p.sample_interval_s > 0.0 && p.sample_interval_s <= p.duration_s, e,
                  "params.sample_interval_s: must be positive and not exceed duration_s");
            check(p.fade_threshold_db > 0.0, e, "params.fade_threshold_db: must be positive");
            check(p.delta_tau_start_s >= 0.0 && p.delta_tau_end_s >= 0.0, e,
                  "params.delta_tau_*: path delay difference must be >= 0");
            check(p.measurement_noise_db >= 0.0, e, "params.measurement_noise_db: must be >= 0");
            break;
        case Mode::radar:
        case Mode::prt_sweep:
            check(!c.carriers_hz.empty(), e, "carriers_hz: need a carrier");
            check(p.max_range_m > 0.0, e, "params.max_range_m: must be positive");
            check(p.n_bursts >= 1, e, "params.n_bursts: must be >= 1");
            check(p.auth_threshold > 0.0 && p.auth_threshold < 1.0, e, "params.auth_threshold: must lie in (0, 1)");
            for (std::size_t i = 0; i < p.targets.size(); ++i) {
                check(p.targets[i].range_m >= 0.0 && p.targets[i].range_m <= p.max_range_m, e,
                      "params.targets[" + std::to_string(i) + "].range_m: must lie in [0, max_range_m]");
                check(std::isfinite(p.targets[i].gain), e,
                      "params.targets[" + std::to_string(i) + "].gain: must be finite");
            }
            if (c.mode == Mode::prt_sweep) {
                check(!p.prt_values_s.empty(), e, "params.prt_values_s: need at least one PRT");
                check(!p.targets.empty(), e, "params.targets: prt_sweep needs a target");
                for (std::size_t i = 0; i < p.prt_values_s.size(); ++i)
                    check(p.prt_values_s[i] > 0.0, e, "params.prt_values_s[" + std::to_string(i) + "]: must be > 0");
            }
            break;
        case Mode::comm:
            check(!c.carriers_hz.empty(), e, "carriers_hz: need a carrier");
            check(p.n_bits >= 1, e, "params.n_bits: must be >= 1");
            check(p.burst_bits >= 1, e, "params.burst_bits: must be >= 1");
            check(p.hop_channels >= 0 && p.hop_channels <= 80, e, "params.hop_channels: must lie in [0, 80]");
            break;
        case Mode::jamming_demo:
            check(!p.jammer_offsets_hz.empty(), e, "params.jammer_offsets_hz: need at least one offset");
            check(p.ber_ceiling > 0.0 && p.ber_ceiling < 0.5, e, "params.ber_ceiling: must lie in (0, 0.5)");
            check(p.n_bits >= 1 && p.burst_bits >= 1, e, "params.n_bits/burst_bits: must be >= 1");
            check(p.hop_channels >= 0 && p.hop_channels <= 80, e, "params.hop_channels: must lie in [0, 80]");
            try {
                interferer_kind_from_string(p.jammer_kind);
            } catch (const SimError& err) {
                e.push_back(std::string("params.jammer_kind: ") + err.what());
            }
            break;
    }
    return e;
}

void validate(const ScenarioConfig& config) {
    auto errors = validation_errors(config);
    if (!errors.empty()) throw ValidationError(config.name, std::move(errors));
}

std::string to_json_text(const ScenarioConfig& c) {
    json code = {{"kind", c.code.kind}, {"degree", c.code.degree}, {"taps", c.code.taps}, {"chips", c.code.chips}};
    json j = {{"name", c.name},
              {"mode", to_string(c.mode)},
              {"code", code},
              {"channel", channel_to_json(c.channel)},
              {"timing",
               {{"prt_s", c.timing.prt_s},
                {"samples_per_chip", c.timing.samples_per_chip},
                {"chip_rate_hz", c.timing.chip_rate_hz}}},
              {"carriers_hz", c.carriers_hz},
              {"seeds", c.seeds},
              {"output_path", c.output_path},
              {"params", params_to_json(c.params)}};
    return j.dump(2) + "\n";
}

ScenarioConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("<unparsed>", {std::string("syntax: ") + e.what()});
    }
    std::vector<std::string> errors;
    ScenarioConfig c;
    if (!j.is_object()) throw ValidationError("<unparsed>", {"top level: expected an object"});
    read(j, "name", c.name, "", errors);
    if (j.contains("mode")) {
        std::string mode;
        read(j, "mode", mode, "", errors);
        try {
            c.mode = mode_from_string(mode);
        } catch (const SimError& e) {
            errors.push_back(std::string("mode: ") + e.what());
        }
    } else {
        errors.push_back("mode: required");
    }
    if (j.contains("code")) {
        const auto& cj = j["code"];
        read(cj, "kind", c.code.kind, "code.", errors);
        read(cj, "degree", c.code.degree, "code.", errors);
        read(cj, "taps", c.code.taps, "code.", errors);
        read(cj, "chips", c.code.chips, "code.", errors);
    }
    if (j.contains("channel")) c.channel = channel_from_json(j["channel"], errors);
    if (j.contains("timing")) {
        const auto& tj = j["timing"];
        read(tj, "prt_s", c.timing.prt_s, "timing.", errors);
        read(tj, "samples_per_chip", c.timing.samples_per_chip, "timing.", errors);
        read(tj, "chip_rate_hz", c.timing.chip_rate_hz, "timing.", errors);
    }
    read(j, "carriers_hz", c.carriers_hz, "", errors);
    read(j, "seeds", c.seeds, "", errors);
    read(j, "output_path", c.output_path, "", errors);
    if (j.contains("params")) c.params = params_from_json(j["params"], errors);

    if (!errors.empty()) throw ValidationError(c.name.empty() ? "<unnamed>" : c.name, std::move(errors));
    return c;
}

ScenarioConfig load_config(const std::string& path) { return config_from_json_text(csv::read_file(path)); }

std::vector<ScenarioConfig> bundled_scenarios() {
    std::vector<ScenarioConfig> out;

    {
        ScenarioConfig c;
        c.name = "fig2_fading";
        c.mode = Mode::fading_demo;
        c.params.doppler_hz = 10.0;
        c.params.duration_s = 20.0;
        c.params.sample_interval_s = 1e-3;
        c.params.rssi_window = 10;
        c.params.antennas = 1;
        c.params.outage_trials = 10000;
        out.push_back(c);
    }
    {
        ScenarioConfig c;
        c.name = "fig3_selection";
        c.mode = Mode::fading_demo;
        c.channel.antenna_decorrelation = 1.0;
        c.params.doppler_hz = 10.0;
        c.params.duration_s = 20.0;
        c.params.sample_interval_s = 1e-3;
        c.params.rssi_window = 10;
        c.params.antennas = 2;
        c.params.outage_threshold_db = -9.7732;  // single-branch outage 0.1
        c.params.outage_trials = 100000;
        out.push_back(c);
    }
    {
        ScenarioConfig c;
        c.name = "fig4_regions";
        c.mode = Mode::region_demo;
        c.carriers_hz = {11.5e9, 12.5e9};
        c.channel.taps = {ChannelTap{0.0, {1.0, 0.0}, 0.0}, ChannelTap{0.5e-9, {0.97, 0.0}, 0.0}};
        c.params.duration_s = 3600.0;
        c.params.sample_interval_s = 1.0;
        c.params.delta_tau_start_s = 0.46e-9;
        c.params.delta_tau_end_s = 0.54e-9;
        c.params.fade_threshold_db = 10.0;
        c.params.measurement_noise_db = 0.3;
        out.push_back(c);
    }
    {
        ScenarioConfig c;
        c.name = "fig5_jamming";
        c.mode = Mode::jamming_demo;
        c.code = {"msequence", 5, 0, ""};
        c.timing.samples_per_chip = 4;
        c.channel.noise_psd = noise_psd_for_chip_snr(20.0, 4);
        c.params.jammer_kind = "cochannel_tone";
        c.params.jammer_offsets_hz = {0.0, 2.5e6, 5e6, 7.5e6, 10e6, 12.5e6, 15e6, 17.5e6, 20e6, 25e6, 30e6};
        c.params.n_bits = 5000;
        c.params.burst_bits = 250;
        c.params.ber_ceiling = 1e-2;
        out.push_back(c);
    }
    {
        ScenarioConfig c;
        c.name = "fig5_jamming_fh";
        c.mode = Mode::jamming_demo;
        c.code = {"msequence", 5, 0, ""};
        c.timing.samples_per_chip = 4;
        c.channel.noise_psd = noise_psd_for_chip_snr(20.0, 4);
        c.params.jammer_kind = "cochannel_tone";
        c.params.jammer_offsets_hz = {0.0, 5e6, 10e6, 20e6};
        c.params.n_bits = 8000;
        c.params.burst_bits = 250;
        c.params.hop_channels = 8;
        c.params.ber_ceiling = 1e-2;
        out.push_back(c);
    }
    {
        ScenarioConfig c;
        c.name = "fig6_prt";
        c.mode = Mode::prt_sweep;
        c.channel.noise_psd = noise_psd_for_chip_snr(10.0, 4);
        c.params.targets = {TargetSpec{30.0, 1.0}};
        c.params.prt_values_s = {300e-6, 350e-6, 400e-6, 450e-6, 500e-6, 550e-6, 600e-6, 650e-6};
        c.params.n_bursts = 10;
        out.push_back(c);
    }
    {
        ScenarioConfig c;
        c.name = "radar_two_cars";
        c.mode = Mode::radar;
        c.channel.noise_psd = noise_psd_for_chip_snr(10.0, 4);
        c.params.targets = {TargetSpec{30.0, 1.0}, TargetSpec{120.0, 1.0}};
        c.params.n_bursts = 20;
        out.push_back(c);
    }
    {
        ScenarioConfig c;
        c.name = "comm_link";
        c.mode = Mode::comm;
        c.channel.rayleigh_block = true;
        c.channel.antenna_decorrelation = 1.0;
        c.channel.noise_psd = noise_psd_for_ebn0(15.0, 13, 4);
        c.params.n_bits = 20000;
        c.params.burst_bits = 200;
        c.params.selection_diversity = true;
        out.push_back(c);
    }
    for (auto& c : out) c.output_path = "out/" + c.name;
    return out;
}

std::optional<ScenarioConfig> find_bundled(const std::string& name) {
    for (auto& c : bundled_scenarios())
        if (c.name == name) return c;
    return std::nullopt;
}

}  // namespace ssradio
