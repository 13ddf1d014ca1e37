#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssradio/common.hpp"

namespace ssradio {

class IqBuffer;

/// Bipolar spreading code. Chips are stored as +1/-1; an empty sequence
/// cannot be constructed.
class ChipSequence {
public:
    explicit ChipSequence(std::vector<int> chips);

    std::size_t length() const { return chips_.size(); }
    int operator[](std::size_t i) const { return chips_[i]; }
    std::span<const int> chips() const { return chips_; }

    /// Zero-padded (aperiodic) autocorrelation at `shift`; |shift| < length.
    long aperiodic_autocorr(long shift) const;
    /// Circular autocorrelation at `shift` (taken modulo length).
    long periodic_autocorr(long shift) const;

    /// Bit image of the code: +1 -> 1, -1 -> 0.
    std::vector<int> bit_image() const;

    /// Text form "+1,-1,...".
    std::string to_text() const;
    static ChipSequence from_text(std::string_view line);

    bool operator==(const ChipSequence&) const = default;

private:
    std::vector<int> chips_;
};

/// +1 +1 +1 +1 +1 -1 -1 +1 +1 -1 +1 -1 +1
ChipSequence barker13();

/// Maximal-length LFSR sequence.
///
/// `taps` holds the feedback polynomial x^degree + sum_i c_i x^i with bit i
/// of the mask equal to c_i (i = 0 .. degree-1). x^3 + x + 1 is 0b011.
/// LFSR output bit 0 maps to chip +1 and bit 1 to chip -1, which gives a
/// periodic autocorrelation of -1 at every nonzero shift.
ChipSequence msequence(int degree, std::uint32_t taps);

/// Tap mask of a known primitive polynomial for degree 2..16.
std::uint32_t primitive_taps(int degree);

/// Sliding matched filter: trace[k] = |sum_i template[i] * received[k + i]|
/// where the template holds each chip for `samples_per_chip` samples.
/// One entry per full-overlap lag.
std::vector<double> correlate(const IqBuffer& received, const ChipSequence& code,
                              int samples_per_chip);

/// Complex-valued variant of `correlate` (no magnitude taken).
std::vector<cplx> correlate_complex(std::span<const cplx> received, const ChipSequence& code,
                                    int samples_per_chip);

}  // namespace ssradio
