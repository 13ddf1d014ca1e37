#include "ssradio/radar.hpp"

#include <cmath>

#include "ssradio/csv.hpp"
#include "ssradio/diversity.hpp"
#include "ssradio/pn_code.hpp"

namespace ssradio {

void RadarTiming::validate() const {
    if (!(prt_s > 0.0) || !std::isfinite(prt_s)) throw SimError("prt_s must be positive");
    if (samples_per_chip < 1) throw SimError("samples_per_chip must be >= 1");
    if (!(chip_rate_hz > 0.0) || !std::isfinite(chip_rate_hz)) throw SimError("chip_rate_hz must be positive");
}

double delay_to_range(double delay_s) {
    if (!(delay_s >= 0.0)) throw SimError("delay must be >= 0");
    return kSpeedOfLight * delay_s / 2.0;
}

UnambiguousRange max_unambiguous_range(double prt_s) {
    if (!(prt_s > 0.0)) throw SimError("PRT must be positive");
    return {kSpeedOfLight * prt_s / 2.0, prt_s >= kPrtMinS && prt_s <= kPrtMaxS};
}

std::string to_string(AuthDiagnostic d) {
    switch (d) {
        case AuthDiagnostic::ok: return "ok";
        case AuthDiagnostic::no_marker: return "no_marker";
        case AuthDiagnostic::code_mismatch: return "code_mismatch";
    }
    return "?";
}

AuthScan authenticate_all(const IqBuffer& received, const Frame& frame, const RadarTiming& timing,
                          double threshold_fraction) {
    if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0))
        throw SimError("threshold_fraction must lie in (0, 1)");
    timing.validate();
    const int spc = timing.samples_per_chip;
    const auto marker = frame.marker_chips();
    const std::size_t marker_len = frame.marker_samples(spc);
    const std::size_t code_len = frame.code.length() * static_cast<std::size_t>(spc);

    const auto marker_trace = correlate_complex(received.samples(), marker, spc);
    const auto code_trace = correlate_complex(received.samples(), frame.code, spc);
    const double marker_cut = threshold_fraction * static_cast<double>(marker_len);
    const double code_cut = threshold_fraction * static_cast<double>(code_len);

    AuthScan scan;
    // Each contiguous run above the marker threshold yields one candidate.
    std::size_t k = 0;
    while (k < marker_trace.size()) {
        if (std::abs(marker_trace[k]) <= marker_cut) {
            ++k;
            continue;
        }
        std::size_t best = k;
        for (; k < marker_trace.size() && std::abs(marker_trace[k]) > marker_cut; ++k)
            if (std::abs(marker_trace[k]) > std::abs(marker_trace[best])) best = k;
        ++scan.markers_found;

        // The code period must follow the marker exactly, in phase with it.
        const cplx ref = marker_trace[best] / std::abs(marker_trace[best]);
        const std::size_t code_lag = best + marker_len;
        if (code_lag < code_trace.size()) {
            const double peak = (code_trace[code_lag] * std::conj(ref)).real();
            if (peak > code_cut)
                scan.echoes.push_back({best, static_cast<double>(best) / received.sample_rate_hz(), peak});
        }
    }
    if (scan.markers_found == 0)
        scan.diagnostic = AuthDiagnostic::no_marker;
    else if (scan.echoes.empty())
        scan.diagnostic = AuthDiagnostic::code_mismatch;
    else
        scan.diagnostic = AuthDiagnostic::ok;
    return scan;
}

AuthResult authenticate(const IqBuffer& received, const Frame& frame, const RadarTiming& timing,
                        double threshold_fraction) {
    const auto scan = authenticate_all(received, frame, timing, threshold_fraction);
    AuthResult r;
    r.diagnostic = scan.diagnostic;
    if (!scan.echoes.empty()) {
        r.authenticated = true;
        r.delay_s = scan.echoes.front().delay_s;
        r.peak = scan.echoes.front().peak;
    }
    return r;
}

RangeEstimate estimate_nearest(const IqBuffer& received_a, const IqBuffer& received_b, const Frame& frame,
                               const RadarTiming& timing, double threshold_fraction) {
    if (received_a.size() != received_b.size() || received_a.sample_rate_hz() != received_b.sample_rate_hz())
        throw SimError("antenna buffers must share length and sample rate");

    const auto choice = select_antenna(rssi(received_a), rssi(received_b));
    RangeEstimate est;
    est.blind_selection = choice.blind;
    est.antenna_used = choice.index;

    const IqBuffer* buffers[2] = {&received_a, &received_b};
    auto scan = authenticate_all(*buffers[choice.index], frame, timing, threshold_fraction);
    if (scan.echoes.empty()) {
        auto other = authenticate_all(*buffers[1 - choice.index], frame, timing, threshold_fraction);
        if (!other.echoes.empty()) {
            scan = std::move(other);
            est.antenna_used = 1 - choice.index;
        }
    }
    if (scan.echoes.empty()) return est;

    const auto& nearest = scan.echoes.front();  // echoes are ordered by lag
    est.target_found = true;
    est.authenticated = true;
    est.delay_s = nearest.delay_s;
    est.range_m = delay_to_range(nearest.delay_s);
    est.peak_magnitude = nearest.peak;
    est.rejected_peaks = scan.echoes.size() - 1;
    return est;
}

std::string range_estimate_columns() { return "t_s,range_m,peak,authenticated,antenna,rejected_peaks\n"; }

std::string range_estimate_row(double t_s, const RangeEstimate& est) {
    std::string row = csv::fmt(t_s) + ',';
    if (est.target_found) row += csv::fmt(est.range_m);
    row += ',' + csv::fmt(est.peak_magnitude) + ',' + (est.authenticated ? "true" : "false") + ',' +
           std::to_string(est.antenna_used) + ',' + std::to_string(est.rejected_peaks) + '\n';
    return row;
}

IqBuffer radar_burst(const Frame& frame, const RadarTiming& timing, double max_range_m) {
    timing.validate();
    if (!(max_range_m >= 0.0)) throw SimError("max_range_m must be >= 0");
    const double fs = timing.sample_rate_hz();
    auto wave = frame.waveform(timing.samples_per_chip, fs);
    const auto listen = static_cast<std::size_t>(std::ceil(2.0 * max_range_m / kSpeedOfLight * fs)) + 1;
    auto samples = wave.mutable_samples();
    samples.resize(samples.size() + listen, cplx{});
    return IqBuffer(std::move(samples), fs);
}

std::pair<IqBuffer, IqBuffer> simulate_echoes(const IqBuffer& burst, const std::vector<Target>& targets,
                                              const ChannelModel& environment, double carrier_hz,
                                              std::uint64_t seed) {
    ChannelModel model = environment;
    model.taps.clear();
    for (const auto& t : targets) {
        if (!(t.range_m >= 0.0)) throw SimError("target range must be >= 0");
        model.taps.push_back({2.0 * t.range_m / kSpeedOfLight, t.gain, 0.0});
    }
    if (model.taps.empty()) model.taps.push_back({0.0, cplx{}, 0.0});
    return {apply_channel(burst, model, carrier_hz, 0, seed), apply_channel(burst, model, carrier_hz, 1, seed)};
}

}  // namespace ssradio
