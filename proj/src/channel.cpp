#include "ssradio/channel.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>

#include "ssradio/csv.hpp"

namespace ssradio {

namespace {

constexpr std::uint64_t kTapStream = 0x7461700000ULL;
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;
constexpr std::uint64_t kInterfererStream = 0x6a616dULL;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Spectral CDF of the classical Doppler spectrum (f = fd cos(alpha), alpha uniform).
double jakes_cdf(double f, double fd) {
    if (f <= -fd) return 0.0;
    if (f >= fd) return 1.0;
    return 1.0 - std::acos(f / fd) / kPi;
}

}  // namespace

void ChannelTap::validate() const {
    if (!(delay_s >= 0.0) || !std::isfinite(delay_s)) throw SimError("tap delay_s must be finite and >= 0");
    if (!finite(gain)) throw SimError("tap gain must be finite");
    if (!std::isfinite(doppler_hz)) throw SimError("tap doppler_hz must be finite");
}

std::string to_string(InterfererKind kind) {
    switch (kind) {
        case InterfererKind::cochannel_tone: return "cochannel_tone";
        case InterfererKind::adjacent_tone: return "adjacent_tone";
        case InterfererKind::broadband_jammer: return "broadband_jammer";
    }
    return "unknown";
}

InterfererKind interferer_kind_from_string(const std::string& name) {
    if (name == "cochannel_tone") return InterfererKind::cochannel_tone;
    if (name == "adjacent_tone") return InterfererKind::adjacent_tone;
    if (name == "broadband_jammer") return InterfererKind::broadband_jammer;
    throw SimError("unknown interferer kind '" + name + "'");
}

void Interferer::validate() const {
    if (std::isnan(power_db) || power_db == std::numeric_limits<double>::infinity())
        throw SimError("interferer power_db must be finite or the disabled sentinel");
    if (!std::isfinite(freq_offset_hz)) throw SimError("interferer freq_offset_hz must be finite");
    if (kind == InterfererKind::cochannel_tone && freq_offset_hz != 0.0)
        throw SimError("cochannel_tone requires freq_offset_hz = 0");
    if (kind == InterfererKind::adjacent_tone && freq_offset_hz == 0.0)
        throw SimError("adjacent_tone requires a nonzero freq_offset_hz");
}

void ChannelModel::validate() const {
    if (taps.empty()) throw SimError("channel model needs at least one tap");
    for (const auto& t : taps) t.validate();
    if (!(noise_psd >= 0.0) || !std::isfinite(noise_psd)) throw SimError("noise_psd must be finite and >= 0");
    if (!(antenna_decorrelation >= 0.0 && antenna_decorrelation <= 1.0))
        throw SimError("antenna_decorrelation must lie in [0, 1]");
    for (const auto& i : interferers) i.validate();
}

double two_path_gain(double freq_hz, const ChannelTap& tap1, const ChannelTap& tap2) {
    if (!finite(tap1.gain) || !finite(tap2.gain)) throw SimError("tap gains must be finite");
    const cplx p1 = std::polar(1.0, -2.0 * kPi * freq_hz * tap1.delay_s);
    const cplx p2 = std::polar(1.0, -2.0 * kPi * freq_hz * tap2.delay_s);
    return std::abs(tap1.gain * p1 + tap2.gain * p2);
}

// ------------------------------------------------------------ fade traces

std::vector<double> FadeTrace::envelope_db() const {
    std::vector<double> out(gains.size());
    for (std::size_t i = 0; i < gains.size(); ++i) {
        const double p = std::norm(gains[i]);
        out[i] = p > 0.0 ? 10.0 * std::log10(p) : kNoSignalDb;
    }
    return out;
}

std::string FadeTrace::to_csv(const std::string& header) const {
    std::string out = header;
    out += "time_s,gain_real,gain_imag,envelope_db\n";
    const auto env = envelope_db();
    for (std::size_t i = 0; i < gains.size(); ++i) {
        out += csv::fmt(times_s[i]) + ',' + csv::fmt(gains[i].real()) + ',' + csv::fmt(gains[i].imag()) + ',' +
               csv::fmt(env[i]) + '\n';
    }
    return out;
}

FadeTrace rayleigh_fade_trace(double doppler_hz, double duration_s, double sample_interval_s,
                              std::uint64_t seed) {
    if (!(doppler_hz > 0.0) || !std::isfinite(doppler_hz)) throw SimError("doppler_hz must be positive");
    if (!(duration_s > 0.0) || !std::isfinite(duration_s)) throw SimError("duration_s must be positive");
    if (!(sample_interval_s > 0.0) || !std::isfinite(sample_interval_s))
        throw SimError("sample_interval_s must be positive");

    const auto n = static_cast<std::size_t>(std::max(1.0, std::floor(duration_s / sample_interval_s)));
    const double fs = 1.0 / sample_interval_s;
    const double df = fs / static_cast<double>(n);

    // Power per DFT bin: integral of the folded Doppler spectrum over the bin.
    std::vector<double> bin_power(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double centre = (k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - n) * df;
        const double lo = centre - df / 2.0;
        const double hi = centre + df / 2.0;
        const auto m_lo = static_cast<long>(std::floor((-doppler_hz - hi) / fs));
        const auto m_hi = static_cast<long>(std::ceil((doppler_hz - lo) / fs));
        double p = 0.0;
        for (long m = m_lo; m <= m_hi; ++m)
            p += jakes_cdf(hi + m * fs, doppler_hz) - jakes_cdf(lo + m * fs, doppler_hz);
        bin_power[k] = p;
    }

    Rng rng(derive_seed(seed, 0x6661646500ULL));
    auto* spectrum = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    std::unique_ptr<fftw_complex, decltype(&fftw_free)> guard(spectrum, &fftw_free);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx z = complex_normal(rng) * std::sqrt(bin_power[k]);
        spectrum[k][0] = z.real();
        spectrum[k][1] = z.imag();
    }
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), spectrum, spectrum, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    FadeTrace trace;
    trace.times_s.resize(n);
    trace.gains.resize(n);
    double power = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        trace.times_s[i] = static_cast<double>(i) * sample_interval_s;
        trace.gains[i] = {spectrum[i][0], spectrum[i][1]};
        power += std::norm(trace.gains[i]);
    }
    power /= static_cast<double>(n);
    if (power > 0.0) {
        const double scale = 1.0 / std::sqrt(power);
        for (auto& g : trace.gains) g *= scale;
    }
    return trace;
}

std::pair<cplx, cplx> draw_branch_pair(Rng& rng, double decorrelation) {
    if (!(decorrelation >= 0.0 && decorrelation <= 1.0)) throw SimError("decorrelation must lie in [0, 1]");
    const cplx h0 = complex_normal(rng);
    const cplx n = complex_normal(rng);
    const double r = 1.0 - decorrelation;
    return {h0, r * h0 + std::sqrt(1.0 - r * r) * n};
}

// ----------------------------------------------------------- apply_channel

void add_noise_in_place(std::vector<cplx>& samples, double variance, Rng& rng) {
    if (variance <= 0.0) return;
    std::normal_distribution<double> nd(0.0, std::sqrt(variance / 2.0));
    for (auto& s : samples) {
        const double re = nd(rng);
        const double im = nd(rng);
        s += cplx(re, im);
    }
}

void add_interference_in_place(std::vector<cplx>& samples, double sample_rate_hz, const Interferer& interferer,
                               std::uint64_t seed) {
    interferer.validate();
    if (!interferer.enabled()) return;
    const double power = db_to_linear_power(interferer.power_db);
    Rng rng(derive_seed(seed, kInterfererStream));
    if (interferer.kind == InterfererKind::broadband_jammer) {
        add_noise_in_place(samples, power, rng);
        return;
    }
    std::uniform_real_distribution<double> u(-kPi, kPi);
    const double phase0 = u(rng);
    const double amp = std::sqrt(power);
    const double step = 2.0 * kPi * interferer.freq_offset_hz / sample_rate_hz;
    for (std::size_t i = 0; i < samples.size(); ++i)
        samples[i] += std::polar(amp, phase0 + step * static_cast<double>(i));
}

IqBuffer add_interference(const IqBuffer& buffer, const Interferer& interferer, std::uint64_t seed) {
    if (buffer.empty()) throw SimError("cannot add interference to an empty buffer");
    std::vector<cplx> out(buffer.samples().begin(), buffer.samples().end());
    add_interference_in_place(out, buffer.sample_rate_hz(), interferer, seed);
    return IqBuffer(std::move(out), buffer.sample_rate_hz());
}

IqBuffer apply_channel(const IqBuffer& tx, const ChannelModel& model, double carrier_hz, int antenna_index,
                       std::uint64_t seed) {
    if (tx.empty()) throw SimError("cannot apply a channel to an empty buffer");
    if (antenna_index != 0 && antenna_index != 1) throw SimError("antenna_index must be 0 or 1");
    model.validate();

    const double fs = tx.sample_rate_hz();
    const std::size_t n = tx.size();
    const auto in = tx.samples();
    std::vector<cplx> out(n, cplx{});

    for (std::size_t t = 0; t < model.taps.size(); ++t) {
        const auto& tap = model.taps[t];
        const double delay_samples = std::round(tap.delay_s * fs);
        if (delay_samples >= static_cast<double>(n)) throw SimError("delay beyond buffer");
        const auto d = static_cast<std::size_t>(delay_samples);

        // Per-tap draws depend on (seed, tap) only so both antennas share them.
        Rng rng(derive_seed(seed, kTapStream + t));
        cplx coeff{1.0, 0.0};
        if (model.rayleigh_block) {
            const auto [h0, h1] = draw_branch_pair(rng, model.antenna_decorrelation);
            coeff = antenna_index == 0 ? h0 : h1;
        } else if (antenna_index == 1) {
            std::uniform_real_distribution<double> u(-kPi, kPi);
            coeff = std::polar(1.0, model.antenna_decorrelation * u(rng));
        }

        const cplx g = tap.gain * coeff * std::polar(1.0, -2.0 * kPi * std::fmod(carrier_hz * tap.delay_s, 1.0));
        if (tap.doppler_hz == 0.0) {
            for (std::size_t i = d; i < n; ++i) out[i] += g * in[i - d];
        } else {
            const double step = 2.0 * kPi * tap.doppler_hz / fs;
            for (std::size_t i = d; i < n; ++i)
                out[i] += g * std::polar(1.0, step * static_cast<double>(i)) * in[i - d];
        }
    }

    for (std::size_t k = 0; k < model.interferers.size(); ++k)
        add_interference_in_place(out, fs, model.interferers[k], derive_seed(seed, kInterfererStream + k));

    if (model.noise_psd > 0.0) {
        Rng rng(derive_seed(seed, kNoiseStream + static_cast<std::uint64_t>(antenna_index)));
        add_noise_in_place(out, model.noise_psd, rng);
    }
    return IqBuffer(std::move(out), fs);
}

double noise_psd_for_chip_snr(double chip_snr_db, int samples_per_chip) {
    return static_cast<double>(samples_per_chip) / db_to_linear_power(chip_snr_db);
}

double noise_psd_for_ebn0(double ebn0_db, std::size_t code_length, int samples_per_chip) {
    return static_cast<double>(code_length) * samples_per_chip / db_to_linear_power(ebn0_db);
}

}  // namespace ssradio
