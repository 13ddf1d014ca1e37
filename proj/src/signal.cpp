#include "ssradio/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ssradio/csv.hpp"

namespace ssradio {

// ---------------------------------------------------------------- IqBuffer

IqBuffer::IqBuffer(std::vector<cplx> samples, double sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
    if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_))
        throw SimError("sample_rate_hz must be positive and finite");
    for (const auto& s : samples_) {
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw SimError("IQ buffer contains a non-finite sample");
    }
}

IqBuffer IqBuffer::scaled(cplx factor) const {
    std::vector<cplx> out(samples_);
    for (auto& s : out) s *= factor;
    return IqBuffer(std::move(out), sample_rate_hz_);
}

std::string IqBuffer::to_csv() const {
    std::string out = "# sample_rate_hz=" + csv::fmt(sample_rate_hz_) + "\n";
    out += "index,real,imag\n";
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += csv::fmt(samples_[i].real());
        out += ',';
        out += csv::fmt(samples_[i].imag());
        out += '\n';
    }
    return out;
}

void IqBuffer::write_csv(const std::filesystem::path& path) const { csv::write_atomic(path, to_csv()); }

IqBuffer IqBuffer::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    double rate = 0.0;
    bool have_rate = false;
    bool have_columns = false;
    std::vector<cplx> samples;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("sample_rate_hz=");
            if (pos != std::string::npos) {
                rate = std::stod(line.substr(pos + 15));
                have_rate = true;
            }
            continue;
        }
        if (!have_columns) {
            if (line != "index,real,imag") throw SimError("IQ CSV: expected header 'index,real,imag'");
            have_columns = true;
            continue;
        }
        const auto f = csv::split(line);
        if (f.size() != 3) throw SimError("IQ CSV: expected 3 fields, got " + std::to_string(f.size()));
        if (std::stoull(f[0]) != samples.size()) throw SimError("IQ CSV: indices must be consecutive from 0");
        samples.emplace_back(std::stod(f[1]), std::stod(f[2]));
    }
    if (!have_rate) throw SimError("IQ CSV: missing sample_rate_hz header");
    return IqBuffer(std::move(samples), rate);
}

IqBuffer IqBuffer::read_csv(const std::filesystem::path& path) { return from_csv(csv::read_file(path)); }

// ------------------------------------------------------------------- Frame

Frame::Frame(std::vector<int> marker, ChipSequence code_, std::vector<int> payload)
    : start_marker(std::move(marker)), code(std::move(code_)), payload_bits(std::move(payload)) {
    if (start_marker.empty()) throw SimError("start marker must be nonempty");
    for (int b : start_marker)
        if (b != 0 && b != 1) throw SimError("start marker bits must be 0 or 1");
    for (int b : payload_bits)
        if (b != 0 && b != 1) throw SimError("payload bits must be 0 or 1");
    const auto image = code.bit_image();
    if (start_marker.size() <= image.size() &&
        std::equal(start_marker.begin(), start_marker.end(), image.begin()))
        throw SimError("start marker must differ from the leading bits of the code");
}

std::vector<int> Frame::default_marker() { return {1, 1, 1, 0, 1}; }

ChipSequence Frame::marker_chips() const {
    std::vector<int> chips;
    chips.reserve(start_marker.size() * code.length());
    for (int b : start_marker) {
        const int sign = 2 * b - 1;
        for (int c : code.chips()) chips.push_back(sign * c);
    }
    return ChipSequence(std::move(chips));
}

std::size_t Frame::marker_samples(int samples_per_chip) const {
    return start_marker.size() * code.length() * static_cast<std::size_t>(samples_per_chip);
}

IqBuffer Frame::waveform(int samples_per_chip, double sample_rate_hz) const {
    std::vector<int> bits(start_marker);
    bits.push_back(1);  // one period of the code itself
    bits.insert(bits.end(), payload_bits.begin(), payload_bits.end());
    return spread(bits, code, samples_per_chip, sample_rate_hz);
}

// ----------------------------------------------------------------- HopPlan

double HopPlan::channel_spacing_hz() const {
    return (band_high_hz - band_low_hz) / static_cast<double>(carriers_hz.size());
}

HopPlan make_hop_plan(int n_channels, double dwell_s, std::uint64_t seed, double band_low_hz,
                      double band_high_hz) {
    if (n_channels < 1) throw SimError("n_channels must be >= 1");
    if (!(dwell_s > 0.0)) throw SimError("dwell_s must be positive");
    if (!(band_high_hz > band_low_hz)) throw SimError("band edges out of order");
    const double spacing = (band_high_hz - band_low_hz) / n_channels;
    if (spacing < 1e6) throw SimError("channel spacing below 1 MHz");

    std::vector<int> order(static_cast<std::size_t>(n_channels));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, 0x484f50));
    std::shuffle(order.begin(), order.end(), rng);

    HopPlan plan;
    plan.dwell_s = dwell_s;
    plan.band_low_hz = band_low_hz;
    plan.band_high_hz = band_high_hz;
    for (int ch : order) plan.carriers_hz.push_back(band_low_hz + spacing * (ch + 0.5));
    return plan;
}

// ------------------------------------------------------- spread / despread

IqBuffer spread(std::span<const int> bits, const ChipSequence& code, int samples_per_chip,
                double sample_rate_hz) {
    if (bits.empty()) throw SimError("cannot spread an empty bit list");
    if (samples_per_chip < 1) throw SimError("samples_per_chip must be >= 1");
    std::vector<cplx> out;
    out.reserve(bits.size() * code.length() * static_cast<std::size_t>(samples_per_chip));
    for (int b : bits) {
        if (b != 0 && b != 1) throw SimError("bits must be 0 or 1");
        const double sign = 2.0 * b - 1.0;
        for (int c : code.chips())
            for (int s = 0; s < samples_per_chip; ++s) out.emplace_back(sign * c, 0.0);
    }
    return IqBuffer(std::move(out), sample_rate_hz);
}

std::vector<double> despread_soft(std::span<const cplx> samples, const ChipSequence& code,
                                  int samples_per_chip) {
    if (samples_per_chip < 1) throw SimError("samples_per_chip must be >= 1");
    const std::size_t spc = static_cast<std::size_t>(samples_per_chip);
    const std::size_t period = code.length() * spc;
    if (samples.size() % period != 0) throw SimError("frame misalignment");
    const auto chips = code.chips();
    std::vector<double> soft(samples.size() / period);
    for (std::size_t b = 0; b < soft.size(); ++b) {
        const cplx* p = samples.data() + b * period;
        double acc = 0.0;
        for (std::size_t c = 0; c < chips.size(); ++c) {
            double chip_acc = 0.0;
            for (std::size_t s = 0; s < spc; ++s) chip_acc += p[c * spc + s].real();
            acc += chips[c] * chip_acc;
        }
        soft[b] = acc;
    }
    return soft;
}

std::vector<int> despread(const IqBuffer& buffer, const ChipSequence& code, int samples_per_chip) {
    const auto soft = despread_soft(buffer.samples(), code, samples_per_chip);
    std::vector<int> bits(soft.size());
    for (std::size_t i = 0; i < soft.size(); ++i) bits[i] = soft[i] > 0.0 ? 1 : 0;
    return bits;
}

// --------------------------------------------------------------- measures

double rssi(std::span<const cplx> samples) {
    if (samples.empty()) throw SimError("rssi of an empty buffer");
    double power = 0.0;
    for (const auto& s : samples) power += std::norm(s);
    power /= static_cast<double>(samples.size());
    if (power == 0.0) return kNoSignalDb;
    return 10.0 * std::log10(power);
}

double rssi(const IqBuffer& buffer) { return rssi(buffer.samples()); }

double wavelength(double freq_hz) {
    if (!(freq_hz > 0.0)) throw SimError("frequency must be positive");
    return kSpeedOfLight / freq_hz;
}

}  // namespace ssradio
