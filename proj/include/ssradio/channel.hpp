#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ssradio/common.hpp"
#include "ssradio/signal.hpp"

namespace ssradio {

/// One propagation path of a tap-delay line.
struct ChannelTap {
    double delay_s = 0.0;
    cplx gain{1.0, 0.0};
    double doppler_hz = 0.0;

    void validate() const;
};

enum class InterfererKind { cochannel_tone, adjacent_tone, broadband_jammer };

std::string to_string(InterfererKind kind);
InterfererKind interferer_kind_from_string(const std::string& name);

/// Active interference source. power_db is relative to a unit-power signal;
/// kNoSignalDb disables it.
struct Interferer {
    InterfererKind kind = InterfererKind::cochannel_tone;
    double freq_offset_hz = 0.0;
    double power_db = kNoSignalDb;

    void validate() const;
    bool enabled() const { return power_db > kNoSignalDb; }
};

struct ChannelModel {
    std::vector<ChannelTap> taps{ChannelTap{}};
    /// Complex noise variance per sample.
    double noise_psd = 0.0;
    std::vector<Interferer> interferers;
    /// 0: antenna 1 sees exactly antenna 0's paths; 1: fully independent.
    double antenna_decorrelation = 1.0;
    /// Multiply every tap by a block Rayleigh coefficient drawn per burst.
    bool rayleigh_block = false;

    void validate() const;
};

/// |g1 e^{-j2 pi f tau1} + g2 e^{-j2 pi f tau2}|
double two_path_gain(double freq_hz, const ChannelTap& tap1, const ChannelTap& tap2);

struct FadeTrace {
    std::vector<double> times_s;
    std::vector<cplx> gains;

    std::vector<double> envelope_db() const;
    /// time_s,gain_real,gain_imag,envelope_db preceded by `header` (may be empty).
    std::string to_csv(const std::string& header = {}) const;
};

/// Rayleigh-fading complex gain sampled every `sample_interval_s`.
///
/// Built as complex white Gaussian noise shaped in the frequency domain by
/// the classical (Jakes) Doppler spectrum, including spectral folding when
/// the Doppler spread exceeds the sampling rate. The realisation is scaled
/// so its mean power over the trace is exactly one.
FadeTrace rayleigh_fade_trace(double doppler_hz, double duration_s, double sample_interval_s,
                              std::uint64_t seed);

/// Block-fading coefficients for two antennas. Antenna 1 mixes antenna 0's
/// coefficient with an independent one: h1 = r h0 + sqrt(1 - r^2) n,
/// r = 1 - decorrelation. Both are CN(0, 1).
std::pair<cplx, cplx> draw_branch_pair(Rng& rng, double decorrelation);

/// Pass `tx` through the channel as seen by one receive antenna.
///
/// Each tap contributes gain * e^{-j2 pi carrier tau} * tx delayed by
/// round(tau * fs) samples, rotated by its Doppler. Antenna 1 redraws tap
/// phases with weight antenna_decorrelation (block Rayleigh coefficients
/// are mixed with draw_branch_pair instead). Interferers are common to
/// both antennas; receiver noise is independent per antenna.
IqBuffer apply_channel(const IqBuffer& tx, const ChannelModel& model, double carrier_hz,
                       int antenna_index, std::uint64_t seed);

/// Add one interferer. Tones get a seed-dependent starting phase;
/// the broadband jammer is white complex Gaussian noise.
IqBuffer add_interference(const IqBuffer& buffer, const Interferer& interferer, std::uint64_t seed);
void add_interference_in_place(std::vector<cplx>& samples, double sample_rate_hz,
                               const Interferer& interferer, std::uint64_t seed);

/// Add complex white noise of the given per-sample variance.
void add_noise_in_place(std::vector<cplx>& samples, double variance, Rng& rng);

/// Per-sample noise variance giving the requested Ec/N0 for unit-amplitude chips.
double noise_psd_for_chip_snr(double chip_snr_db, int samples_per_chip);
/// Per-sample noise variance giving the requested Eb/N0 after despreading.
double noise_psd_for_ebn0(double ebn0_db, std::size_t code_length, int samples_per_chip);

}  // namespace ssradio
