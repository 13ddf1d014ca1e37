#include "ssradio/commlink.hpp"

#include <algorithm>
#include <cmath>

#include "ssradio/csv.hpp"
#include "ssradio/diversity.hpp"

namespace ssradio {

namespace {

// Complex correlation of each bit period with the code.
std::vector<cplx> bit_correlations(std::span<const cplx> samples, const ChipSequence& code, int spc) {
    const std::size_t period = code.length() * static_cast<std::size_t>(spc);
    std::vector<cplx> out(samples.size() / period);
    const auto chips = code.chips();
    for (std::size_t b = 0; b < out.size(); ++b) {
        const cplx* p = samples.data() + b * period;
        cplx acc{};
        for (std::size_t c = 0; c < chips.size(); ++c) {
            cplx chip_acc{};
            for (int s = 0; s < spc; ++s) chip_acc += p[c * spc + s];
            acc += static_cast<double>(chips[c]) * chip_acc;
        }
        out[b] = acc;
    }
    return out;
}

bool is_tone(InterfererKind k) { return k != InterfererKind::broadband_jammer; }

double lowest_channel_hz(const HopPlan& plan) { return plan.band_low_hz + plan.channel_spacing_hz() / 2.0; }

}  // namespace

std::vector<int> random_bits(std::size_t n, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x62697473ULL));
    std::vector<int> bits(n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) word = rng();
        bits[i] = static_cast<int>((word >> (i % 64)) & 1u);
    }
    return bits;
}

double processing_gain_db(long code_length) {
    if (code_length < 1) throw SimError("code length must be >= 1");
    return 10.0 * std::log10(static_cast<double>(code_length));
}

LinkResult run_link(const std::vector<int>& bits, const ChipSequence& code, const ChannelModel& model,
                    const RadarTiming& timing, std::uint64_t seed, const LinkOptions& options) {
    if (bits.empty()) throw SimError("run_link needs at least one bit");
    if (options.burst_bits < 1) throw SimError("burst_bits must be >= 1");
    model.validate();
    timing.validate();

    const int spc = timing.samples_per_chip;
    const double fs = timing.sample_rate_hz();
    const std::size_t period = code.length() * static_cast<std::size_t>(spc);

    std::vector<int> preamble(options.start_marker);
    preamble.push_back(1);
    const Frame frame_check(options.start_marker, code);  // validates the marker
    (void)frame_check;

    double min_delay = model.taps.front().delay_s;
    for (const auto& t : model.taps) min_delay = std::min(min_delay, t.delay_s);
    const auto sync = static_cast<std::size_t>(std::round(min_delay * fs));

    std::optional<HopPlan> plan;
    if (options.hop_channels > 1) {
        const double burst_s = static_cast<double>((preamble.size() + options.burst_bits) * period) / fs;
        plan = make_hop_plan(options.hop_channels, burst_s, seed);
    }

    LinkResult result;
    result.bits_sent = bits.size();
    const std::size_t n_bursts = (bits.size() + options.burst_bits - 1) / options.burst_bits;
    for (std::size_t b = 0; b < n_bursts; ++b) {
        const std::size_t first = b * options.burst_bits;
        const std::size_t count = std::min(options.burst_bits, bits.size() - first);

        std::vector<int> frame_bits(preamble);
        frame_bits.insert(frame_bits.end(), bits.begin() + first, bits.begin() + first + count);
        auto tx = spread(frame_bits, code, spc, fs);
        tx.mutable_samples().resize(tx.size() + sync, cplx{});

        double carrier = options.carrier_hz;
        ChannelModel burst_model = model;
        if (plan) {
            carrier = plan->carrier_at(b);
            if (carrier != lowest_channel_hz(*plan)) {
                std::erase_if(burst_model.interferers, [](const Interferer& i) { return is_tone(i.kind); });
            }
        }

        const std::uint64_t burst_seed = derive_seed(seed, b);
        const std::size_t pre_samples = preamble.size() * period;
        const std::size_t frame_samples = frame_bits.size() * period;

        IqBuffer rx0 = apply_channel(tx, burst_model, carrier, 0, burst_seed);
        std::span<const cplx> view = rx0.samples().subspan(sync, frame_samples);
        std::optional<IqBuffer> rx1;
        if (options.selection_diversity) {
            rx1 = apply_channel(tx, burst_model, carrier, 1, burst_seed);
            std::span<const cplx> view1 = rx1->samples().subspan(sync, frame_samples);
            const auto choice = select_antenna(rssi(view.first(pre_samples)), rssi(view1.first(pre_samples)));
            if (choice.index == 1) view = view1;
        }

        const auto y = bit_correlations(view, code, spc);
        cplx h{};
        for (std::size_t i = 0; i < preamble.size(); ++i) h += (2.0 * preamble[i] - 1.0) * y[i];
        // One decision-directed refinement over the payload.
        cplx refined = h;
        for (std::size_t k = preamble.size(); k < y.size(); ++k)
            refined += ((y[k] * std::conj(h)).real() >= 0.0 ? 1.0 : -1.0) * y[k];
        const cplx derotate = std::abs(refined) > 0.0 ? std::conj(refined) / std::abs(refined) : cplx{1.0, 0.0};

        std::vector<cplx> payload(view.begin() + static_cast<long>(pre_samples), view.end());
        for (auto& s : payload) s *= derotate;
        const auto decided = despread(IqBuffer(std::move(payload), fs), code, spc);
        for (std::size_t k = 0; k < count; ++k)
            if (decided[k] != bits[first + k]) ++result.bit_errors;
    }

    result.ber = static_cast<double>(result.bit_errors) / static_cast<double>(result.bits_sent);
    result.snr_db = model.noise_psd > 0.0 ? 10.0 * std::log10(static_cast<double>(period) / model.noise_psd)
                                          : std::numeric_limits<double>::infinity();
    for (const auto& i : model.interferers)
        if (i.enabled()) result.jammer_power_db = std::max(result.jammer_power_db.value_or(kNoSignalDb), i.power_db);
    return result;
}

double jammed_ber(const ChipSequence& code, const Interferer& jammer, std::uint64_t seed,
                  const MarginOptions& options) {
    if (options.burst_bits < 1 || options.n_bits < 1) throw SimError("margin bit counts must be >= 1");
    const int spc = options.samples_per_chip;
    const double fs = options.chip_rate_hz * spc;
    const std::size_t period = code.length() * static_cast<std::size_t>(spc);

    std::optional<HopPlan> plan;
    if (options.hop_channels > 1)
        plan = make_hop_plan(options.hop_channels, static_cast<double>(options.burst_bits * period) / fs, seed);

    std::size_t errors = 0;
    std::size_t sent = 0;
    for (std::size_t b = 0; sent < options.n_bits; ++b) {
        const std::size_t count = std::min(options.burst_bits, options.n_bits - sent);
        const std::uint64_t burst_seed = derive_seed(seed, b);
        const auto bits = random_bits(count, derive_seed(burst_seed, 1));
        auto tx = spread(bits, code, spc, fs);
        auto& samples = tx.mutable_samples();
        Rng noise_rng(derive_seed(burst_seed, 2));
        add_noise_in_place(samples, options.noise_psd, noise_rng);
        const bool hit = !plan || !is_tone(jammer.kind) || plan->carrier_at(b) == lowest_channel_hz(*plan);
        if (hit) add_interference_in_place(samples, fs, jammer, derive_seed(burst_seed, 3));
        const auto soft = despread_soft(samples, code, spc);
        for (std::size_t k = 0; k < count; ++k)
            if ((soft[k] > 0.0 ? 1 : 0) != bits[k]) ++errors;
        sent += count;
    }
    return static_cast<double>(errors) / static_cast<double>(sent);
}

std::vector<MarginPoint> jamming_margin_curve(const ChipSequence& code, const std::vector<double>& offsets_hz,
                                              double ber_ceiling, std::uint64_t seed,
                                              const MarginOptions& options) {
    if (!(ber_ceiling > 0.0 && ber_ceiling < 0.5)) throw SimError("ber_ceiling must lie in (0, 0.5)");
    if (!(options.search_high_db > options.search_low_db)) throw SimError("empty jammer power search range");

    std::vector<MarginPoint> curve;
    curve.reserve(offsets_hz.size());
    for (double offset : offsets_hz) {
        Interferer jammer;
        if (options.kind == InterfererKind::broadband_jammer) {
            jammer.kind = InterfererKind::broadband_jammer;
            jammer.freq_offset_hz = offset;
        } else {
            jammer.kind = offset == 0.0 ? InterfererKind::cochannel_tone : InterfererKind::adjacent_tone;
            jammer.freq_offset_hz = offset;
        }
        auto ber_at = [&](double power_db) {
            jammer.power_db = power_db;
            return jammed_ber(code, jammer, seed, options);
        };

        double lo = options.search_low_db;
        double hi = options.search_high_db;
        double answer;
        if (ber_at(lo) > ber_ceiling) {
            answer = lo;
        } else if (ber_at(hi) <= ber_ceiling) {
            answer = hi;
        } else {
            for (int it = 0; it < options.max_iterations && hi - lo > options.resolution_db; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (ber_at(mid) <= ber_ceiling)
                    lo = mid;
                else
                    hi = mid;
            }
            answer = lo;
        }
        curve.push_back({offset, answer});
    }
    return curve;
}

std::string margin_curve_csv(const std::vector<MarginPoint>& curve, const std::string& header) {
    std::string out = header;
    out += "offset_hz,max_jammer_db\n";
    for (const auto& p : curve) out += csv::fmt(p.offset_hz) + ',' + csv::fmt(p.max_jammer_db) + '\n';
    return out;
}

}  // namespace ssradio
