#include "ssradio/pn_code.hpp"

#include <bit>
#include <sstream>

#include "ssradio/signal.hpp"

namespace ssradio {

ChipSequence::ChipSequence(std::vector<int> chips) : chips_(std::move(chips)) {
    if (chips_.empty()) throw SimError("chip sequence must have at least one chip");
    for (int c : chips_) {
        if (c != 1 && c != -1) throw SimError("chip values must be +1 or -1");
    }
}

long ChipSequence::aperiodic_autocorr(long shift) const {
    const long n = static_cast<long>(chips_.size());
    if (shift < 0) shift = -shift;
    if (shift >= n) return 0;
    long acc = 0;
    for (long i = 0; i + shift < n; ++i) acc += chips_[i] * chips_[i + shift];
    return acc;
}

long ChipSequence::periodic_autocorr(long shift) const {
    const long n = static_cast<long>(chips_.size());
    shift = ((shift % n) + n) % n;
    long acc = 0;
    for (long i = 0; i < n; ++i) acc += chips_[i] * chips_[(i + shift) % n];
    return acc;
}

std::vector<int> ChipSequence::bit_image() const {
    std::vector<int> bits;
    bits.reserve(chips_.size());
    for (int c : chips_) bits.push_back(c > 0 ? 1 : 0);
    return bits;
}

std::string ChipSequence::to_text() const {
    std::string out;
    for (std::size_t i = 0; i < chips_.size(); ++i) {
        if (i) out += ',';
        out += chips_[i] > 0 ? "+1" : "-1";
    }
    return out;
}

ChipSequence ChipSequence::from_text(std::string_view line) {
    std::vector<int> chips;
    std::string field;
    std::istringstream in{std::string(line)};
    while (std::getline(in, field, ',')) {
        // trim whitespace and CR
        const auto b = field.find_first_not_of(" \t\r\n");
        const auto e = field.find_last_not_of(" \t\r\n");
        if (b == std::string::npos) throw SimError("empty chip field in code text");
        field = field.substr(b, e - b + 1);
        if (field == "+1" || field == "1")
            chips.push_back(1);
        else if (field == "-1")
            chips.push_back(-1);
        else
            throw SimError("invalid chip value '" + field + "'");
    }
    return ChipSequence(std::move(chips));
}

ChipSequence barker13() {
    return ChipSequence({+1, +1, +1, +1, +1, -1, -1, +1, +1, -1, +1, -1, +1});
}

std::uint32_t primitive_taps(int degree) {
    switch (degree) {
        case 2: return 0x3;
        case 3: return 0x3;
        case 4: return 0x3;
        case 5: return 0x5;
        case 6: return 0x3;
        case 7: return 0x3;
        case 8: return 0x1D;
        case 9: return 0x11;
        case 10: return 0x9;
        case 11: return 0x5;
        case 12: return 0x53;
        case 13: return 0x1B;
        case 14: return 0x443;
        case 15: return 0x3;
        case 16: return 0x100B;
        default: throw SimError("no primitive polynomial tabulated for degree " + std::to_string(degree));
    }
}

ChipSequence msequence(int degree, std::uint32_t taps) {
    if (degree < 2 || degree > 16) throw SimError("m-sequence degree must be in [2, 16]");
    const std::uint32_t mask = (1u << degree) - 1u;
    taps &= mask;
    const std::size_t full_period = (std::size_t{1} << degree) - 1;

    const std::uint32_t start = 1u;
    std::uint32_t state = start;
    std::vector<int> chips;
    chips.reserve(full_period);
    for (std::size_t k = 0; k < full_period; ++k) {
        chips.push_back((state & 1u) ? -1 : +1);
        const std::uint32_t fb = static_cast<std::uint32_t>(std::popcount(state & taps) & 1);
        state = (state >> 1) | (fb << (degree - 1));
        if (state == start && k + 1 < full_period) throw SimError("non-primitive feedback polynomial");
    }
    if (state != start) throw SimError("non-primitive feedback polynomial");
    return ChipSequence(std::move(chips));
}

std::vector<cplx> correlate_complex(std::span<const cplx> received, const ChipSequence& code,
                                    int samples_per_chip) {
    if (samples_per_chip < 1) throw SimError("samples_per_chip must be >= 1");
    const std::size_t spc = static_cast<std::size_t>(samples_per_chip);
    const std::size_t span_len = code.length() * spc;
    if (received.size() < span_len) throw SimError("insufficient samples");

    // Moving sum over one chip; the held-chip template then reduces to a
    // chip-rate dot product.
    const std::size_t n_window = received.size() - spc + 1;
    std::vector<cplx> chip_sum(n_window);
    for (std::size_t i = 0; i < n_window; ++i) {
        cplx acc{};
        for (std::size_t s = 0; s < spc; ++s) acc += received[i + s];
        chip_sum[i] = acc;
    }

    const std::size_t n_lags = received.size() - span_len + 1;
    std::vector<cplx> trace(n_lags);
    const auto chips = code.chips();
    for (std::size_t k = 0; k < n_lags; ++k) {
        cplx sum{};
        for (std::size_t c = 0; c < chips.size(); ++c) {
            const cplx& w = chip_sum[k + c * spc];
            if (chips[c] > 0)
                sum += w;
            else
                sum -= w;
        }
        trace[k] = sum;
    }
    return trace;
}

std::vector<double> correlate(const IqBuffer& received, const ChipSequence& code, int samples_per_chip) {
    const auto complex_trace = correlate_complex(received.samples(), code, samples_per_chip);
    std::vector<double> trace(complex_trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k) trace[k] = std::abs(complex_trace[k]);
    return trace;
}

}  // namespace ssradio
