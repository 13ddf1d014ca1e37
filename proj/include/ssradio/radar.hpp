#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssradio/channel.hpp"
#include "ssradio/common.hpp"
#include "ssradio/signal.hpp"

namespace ssradio {

inline constexpr double kPrtMinS = 350e-6;
inline constexpr double kPrtMaxS = 600e-6;
inline constexpr double kDefaultAuthThreshold = 0.6;

struct RadarTiming {
    double prt_s = 500e-6;
    int samples_per_chip = kDefaultSamplesPerChip;
    double chip_rate_hz = 20e6;

    double sample_rate_hz() const { return chip_rate_hz * samples_per_chip; }
    double sample_period_s() const { return 1.0 / sample_rate_hz(); }
    /// Inside the usable 350..600 us window.
    bool prt_valid() const { return prt_s >= kPrtMinS && prt_s <= kPrtMaxS; }
    void validate() const;
};

/// c * delay / 2
double delay_to_range(double delay_s);

struct UnambiguousRange {
    double range_m;
    bool valid;  ///< PRT inside the usable window
};

UnambiguousRange max_unambiguous_range(double prt_s);

enum class AuthDiagnostic { ok, no_marker, code_mismatch };

std::string to_string(AuthDiagnostic d);

/// One echo whose start marker and code both passed the threshold.
struct Echo {
    std::size_t lag_samples;  ///< frame start within the receive buffer
    double delay_s;
    double peak;  ///< code correlation projected on the marker phase
};

struct AuthResult {
    bool authenticated = false;
    std::optional<double> delay_s;
    double peak = 0.0;
    AuthDiagnostic diagnostic = AuthDiagnostic::no_marker;
};

struct AuthScan {
    std::vector<Echo> echoes;  ///< ordered by lag
    std::size_t markers_found = 0;
    AuthDiagnostic diagnostic = AuthDiagnostic::no_marker;
};

/// Find every start marker above threshold and test the code correlation at
/// the lag right after it, projected on the marker phase, against
/// threshold_fraction * code_length * samples_per_chip.
AuthScan authenticate_all(const IqBuffer& received, const Frame& frame, const RadarTiming& timing,
                          double threshold_fraction = kDefaultAuthThreshold);

/// Earliest authenticated echo, or a diagnostic when there is none.
AuthResult authenticate(const IqBuffer& received, const Frame& frame, const RadarTiming& timing,
                        double threshold_fraction = kDefaultAuthThreshold);

struct RangeEstimate {
    bool target_found = false;  ///< false is "no target", never range 0
    double delay_s = 0.0;
    double range_m = 0.0;
    double peak_magnitude = 0.0;
    bool authenticated = false;
    int antenna_used = 0;
    std::size_t rejected_peaks = 0;  ///< later (more distant) authenticated echoes
    bool blind_selection = false;
};

/// Antenna chosen by receive-window RSSI; the earliest authenticated echo on
/// that antenna gives the range. Falls back to the other antenna when the
/// selected one has no authenticated echo.
RangeEstimate estimate_nearest(const IqBuffer& received_a, const IqBuffer& received_b, const Frame& frame,
                               const RadarTiming& timing, double threshold_fraction = kDefaultAuthThreshold);

/// CSV header matching range_estimate_row.
std::string range_estimate_columns();
/// t_s,range_m,peak,authenticated,antenna,rejected_peaks (range empty when no target)
std::string range_estimate_row(double t_s, const RangeEstimate& est);

/// A reflecting car: two-way delay from range, cross-section folded into gain.
struct Target {
    double range_m = 0.0;
    cplx gain{1.0, 0.0};
};

/// Frame followed by silence long enough to hear echoes out to max_range_m.
IqBuffer radar_burst(const Frame& frame, const RadarTiming& timing, double max_range_m);

/// Echo of `burst` from `targets` on both antennas. `environment` supplies
/// noise, interferers, decorrelation and fading; its taps are replaced by
/// one tap per target.
std::pair<IqBuffer, IqBuffer> simulate_echoes(const IqBuffer& burst, const std::vector<Target>& targets,
                                              const ChannelModel& environment, double carrier_hz,
                                              std::uint64_t seed);

}  // namespace ssradio
