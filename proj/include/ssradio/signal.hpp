#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ssradio/common.hpp"
#include "ssradio/pn_code.hpp"

namespace ssradio {

/// Complex baseband samples at a fixed sample rate. Construction rejects a
/// nonpositive rate and any non-finite sample.
class IqBuffer {
public:
    IqBuffer(std::vector<cplx> samples, double sample_rate_hz);

    std::span<const cplx> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    double sample_rate_hz() const { return sample_rate_hz_; }
    double duration_s() const { return static_cast<double>(samples_.size()) / sample_rate_hz_; }
    const cplx& operator[](std::size_t i) const { return samples_[i]; }

    /// Mutable access for in-place processing; callers must keep samples finite.
    std::vector<cplx>& mutable_samples() { return samples_; }

    IqBuffer scaled(cplx factor) const;

    /// CSV with a "# sample_rate_hz=<rate>" first line, then index,real,imag.
    void write_csv(const std::filesystem::path& path) const;
    std::string to_csv() const;
    static IqBuffer read_csv(const std::filesystem::path& path);
    static IqBuffer from_csv(const std::string& text);

    bool operator==(const IqBuffer&) const = default;

private:
    std::vector<cplx> samples_;
    double sample_rate_hz_;
};

/// Start marker (bits), ranging/spreading code, and optional payload.
struct Frame {
    std::vector<int> start_marker;
    ChipSequence code;
    std::vector<int> payload_bits;

    Frame(std::vector<int> marker, ChipSequence code, std::vector<int> payload = {});

    /// Default start marker 1,1,1,0,1.
    static std::vector<int> default_marker();

    /// Chips of the marker: each marker bit antipodally modulates the code.
    ChipSequence marker_chips() const;
    /// Number of samples occupied by the marker at the given oversampling.
    std::size_t marker_samples(int samples_per_chip) const;

    /// Marker, then one code period, then the spread payload.
    IqBuffer waveform(int samples_per_chip, double sample_rate_hz) const;
};

/// Frequency-hopping carrier schedule inside one band.
struct HopPlan {
    std::vector<double> carriers_hz;
    double dwell_s = 0.0;
    double band_low_hz = 5.76e9;
    double band_high_hz = 5.84e9;

    double channel_spacing_hz() const;
    /// Carrier for hop number `hop_index`; the order repeats every cycle.
    double carrier_at(std::size_t hop_index) const { return carriers_hz[hop_index % carriers_hz.size()]; }
};

inline constexpr int kDefaultSamplesPerChip = 4;
inline constexpr double kIsmBandLowHz = 5.76e9;
inline constexpr double kIsmBandHighHz = 5.84e9;

/// Bit b emits code * (2b - 1), each chip held for samples_per_chip samples.
IqBuffer spread(std::span<const int> bits, const ChipSequence& code, int samples_per_chip,
                double sample_rate_hz = 1.0);

/// Sign of the real correlation with the code, one decision per bit period.
std::vector<int> despread(const IqBuffer& buffer, const ChipSequence& code, int samples_per_chip);

/// Real part of the per-bit correlation (the soft decision variable).
std::vector<double> despread_soft(std::span<const cplx> samples, const ChipSequence& code,
                                  int samples_per_chip);

HopPlan make_hop_plan(int n_channels, double dwell_s, std::uint64_t seed,
                      double band_low_hz = kIsmBandLowHz, double band_high_hz = kIsmBandHighHz);

/// 10 log10(mean |x|^2); kNoSignalDb for an all-zero buffer.
double rssi(const IqBuffer& buffer);
double rssi(std::span<const cplx> samples);

double wavelength(double freq_hz);

}  // namespace ssradio
