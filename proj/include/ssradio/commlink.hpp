#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssradio/channel.hpp"
#include "ssradio/radar.hpp"
#include "ssradio/signal.hpp"

namespace ssradio {

struct LinkResult {
    std::size_t bits_sent = 0;
    std::size_t bit_errors = 0;
    double ber = 0.0;
    double snr_db = 0.0;  ///< Eb/N0 implied by the channel noise
    std::optional<double> jammer_power_db;
};

struct LinkOptions {
    double carrier_hz = 5.8e9;
    std::size_t burst_bits = 256;
    /// Pick the antenna with the stronger preamble each burst; false uses antenna 0 only.
    bool selection_diversity = true;
    /// Hop channels (0 or 1 disables hopping). Tone interferers sit in the
    /// lowest channel of the band and only hit bursts hopped onto it.
    int hop_channels = 0;
    std::vector<int> start_marker = Frame::default_marker();
};

/// Spread in bursts (start marker + one code period + payload), pass each
/// burst through the channel, select an antenna by preamble RSSI, estimate
/// the channel phase from the preamble (refined once with decisions) and
/// despread.
LinkResult run_link(const std::vector<int>& bits, const ChipSequence& code, const ChannelModel& model,
                    const RadarTiming& timing, std::uint64_t seed, const LinkOptions& options = {});

/// Random bits from a seed (used by scenarios and tests).
std::vector<int> random_bits(std::size_t n, std::uint64_t seed);

/// 10 log10(code_length)
double processing_gain_db(long code_length);

struct MarginOptions {
    InterfererKind kind = InterfererKind::cochannel_tone;
    int samples_per_chip = 1;
    double chip_rate_hz = 20e6;
    double noise_psd = 1e-3;
    std::size_t n_bits = 20000;
    std::size_t burst_bits = 500;
    double search_low_db = -20.0;
    double search_high_db = 60.0;
    double resolution_db = 0.5;
    int max_iterations = 12;
    int hop_channels = 0;
};

/// BER of a coherent link (identity channel) with one interferer at the given
/// power. Noise, bits and interferer draws depend only on `seed`, so calls
/// that differ only in power use common random numbers.
double jammed_ber(const ChipSequence& code, const Interferer& jammer,
                  std::uint64_t seed, const MarginOptions& options);

struct MarginPoint {
    double offset_hz;
    double max_jammer_db;
};

/// Largest jammer power per offset keeping BER <= ber_ceiling (bisection).
/// A value at search_low_db means even the weakest tested jammer breaks the
/// ceiling; search_high_db means the strongest tested one did not.
std::vector<MarginPoint> jamming_margin_curve(const ChipSequence& code, const std::vector<double>& offsets_hz,
                                              double ber_ceiling, std::uint64_t seed,
                                              const MarginOptions& options = {});

std::string margin_curve_csv(const std::vector<MarginPoint>& curve, const std::string& header = {});

}  // namespace ssradio
