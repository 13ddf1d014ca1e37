#include "ssradio/harness.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ssradio/channel.hpp"
#include "ssradio/commlink.hpp"
#include "ssradio/csv.hpp"
#include "ssradio/diversity.hpp"
#include "ssradio/radar.hpp"

namespace ssradio {

namespace fs = std::filesystem;

namespace {

constexpr double kTableSpeedOfLight = 3e8;

double round_significant(double v, int digits) {
    if (v == 0.0) return 0.0;
    const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::fabs(v)))));
    return std::round(v * scale) / scale;
}

struct Context {
    const ScenarioConfig& config;
    std::uint64_t seed;
    fs::path dir;
    RunArtifacts& artifacts;

    std::string header() const { return csv::header_comment(config.name, seed); }
    void write(const std::string& file, const std::string& body) {
        const auto path = dir / file;
        csv::write_atomic(path, header() + body);
        artifacts.files.push_back(path);
    }
    void metric(const std::string& name, double value) { artifacts.summary.emplace_back(seed, name, value); }
};

std::vector<Target> targets_within(const std::vector<TargetSpec>& specs, double max_range_m) {
    std::vector<Target> out;
    for (const auto& t : specs)
        if (t.range_m <= max_range_m) out.push_back({t.range_m, {t.gain, 0.0}});
    return out;
}

struct RangingStats {
    double detection_rate = 0.0;
    double mean_abs_error_m = std::numeric_limits<double>::quiet_NaN();
    double max_abs_error_m = std::numeric_limits<double>::quiet_NaN();
    double mean_rejected = 0.0;
    std::string rows;
};

RangingStats run_bursts(const ScenarioConfig& c, const RadarTiming& timing, double window_m, std::uint64_t seed) {
    const auto code = c.code.build();
    const Frame frame(Frame::default_marker(), code);
    const auto burst = radar_burst(frame, timing, window_m);
    const auto targets = targets_within(c.params.targets, window_m);
    double truth = std::numeric_limits<double>::quiet_NaN();
    for (const auto& t : targets)
        if (std::isnan(truth) || t.range_m < truth) truth = t.range_m;

    RangingStats stats;
    std::size_t detected = 0;
    double err_sum = 0.0;
    double err_max = 0.0;
    std::size_t rejected = 0;
    for (std::size_t b = 0; b < c.params.n_bursts; ++b) {
        const auto [rx_a, rx_b] = simulate_echoes(burst, targets, c.channel, c.carriers_hz.front(), derive_seed(seed, b));
        const auto est = estimate_nearest(rx_a, rx_b, frame, timing, c.params.auth_threshold);
        stats.rows += range_estimate_row(static_cast<double>(b) * timing.prt_s, est);
        if (!est.target_found) continue;
        ++detected;
        rejected += est.rejected_peaks;
        if (!std::isnan(truth)) {
            const double err = std::fabs(est.range_m - truth);
            err_sum += err;
            err_max = std::max(err_max, err);
        }
    }
    stats.detection_rate = static_cast<double>(detected) / static_cast<double>(c.params.n_bursts);
    if (detected > 0) {
        stats.mean_rejected = static_cast<double>(rejected) / static_cast<double>(detected);
        if (!std::isnan(truth)) {
            stats.mean_abs_error_m = err_sum / static_cast<double>(detected);
            stats.max_abs_error_m = err_max;
        }
    }
    return stats;
}

void run_fading(Context& ctx) {
    const auto& c = ctx.config;
    const auto& p = c.params;
    const auto trace_a = rayleigh_fade_trace(p.doppler_hz, p.duration_s, p.sample_interval_s, derive_seed(ctx.seed, 0xA));
    ctx.write("fade_trace.csv", trace_a.to_csv());

    FadeTrace trace_b;
    if (p.antennas == 2) {
        const auto indep = rayleigh_fade_trace(p.doppler_hz, p.duration_s, p.sample_interval_s, derive_seed(ctx.seed, 0xB));
        const double r = 1.0 - c.channel.antenna_decorrelation;
        trace_b.times_s = trace_a.times_s;
        trace_b.gains.resize(trace_a.gains.size());
        for (std::size_t i = 0; i < trace_a.gains.size(); ++i)
            trace_b.gains[i] = r * trace_a.gains[i] + std::sqrt(1.0 - r * r) * indep.gains[i];
        ctx.write("fade_trace_b.csv", trace_b.to_csv());
    }

    // RSSI of an unmodulated carrier through the fade, measured per window.
    Rng rng(derive_seed(ctx.seed, 0xC));
    auto received = [&](const FadeTrace& t) {
        std::vector<cplx> s(t.gains);
        add_noise_in_place(s, c.channel.noise_psd, rng);
        return s;
    };
    const auto rx_a = received(trace_a);
    const auto rx_b = p.antennas == 2 ? received(trace_b) : std::vector<cplx>{};
    const auto w = static_cast<std::size_t>(p.rssi_window);
    const std::size_t n_windows = rx_a.size() / w;

    std::string body = p.antennas == 2 ? "time_s,rssi_a_db,rssi_b_db,selected,selected_db\n" : "time_s,rssi_a_db\n";
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const double outage_cut = p.outage_threshold_db;
    std::size_t outage_a = 0, outage_sel = 0;
    for (std::size_t k = 0; k < n_windows; ++k) {
        const double a = rssi(std::span<const cplx>(rx_a).subspan(k * w, w));
        if (std::isfinite(a)) {
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
        if (a < outage_cut) ++outage_a;
        body += csv::fmt(trace_a.times_s[k * w]) + ',' + csv::fmt(a);
        if (p.antennas == 2) {
            const double b = rssi(std::span<const cplx>(rx_b).subspan(k * w, w));
            const auto choice = select_antenna(a, b);
            const double sel = choice.index == 0 ? a : b;
            if (sel < outage_cut) ++outage_sel;
            body += ',' + csv::fmt(b) + ',' + std::to_string(choice.index) + ',' + csv::fmt(sel);
        }
        body += '\n';
    }
    ctx.write("rssi.csv", body);

    ctx.metric("rssi_span_db", hi - lo);
    ctx.metric("rssi_windows", static_cast<double>(n_windows));
    ctx.metric("trace_outage_a", n_windows ? static_cast<double>(outage_a) / n_windows : 0.0);
    if (p.antennas == 2) ctx.metric("trace_outage_selected", n_windows ? static_cast<double>(outage_sel) / n_windows : 0.0);
    const auto outage = selection_outage_probability(p.outage_threshold_db, p.outage_trials,
                                                     c.channel.antenna_decorrelation, derive_seed(ctx.seed, 0xD));
    ctx.metric("p_single", outage.p_single);
    ctx.metric("p_selected", outage.p_selected);
}

void run_regions(Context& ctx) {
    const auto& c = ctx.config;
    const auto& p = c.params;
    const auto n = static_cast<std::size_t>(std::max(2.0, std::floor(p.duration_s / p.sample_interval_s)));
    std::normal_distribution<double> jitter(0.0, p.measurement_noise_db);
    Rng rng(derive_seed(ctx.seed, 0xE));

    std::vector<double> times(n), lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(n - 1);
        ChannelTap direct = c.channel.taps[0];
        ChannelTap reflected = c.channel.taps[1];
        reflected.delay_s = direct.delay_s + p.delta_tau_start_s + frac * (p.delta_tau_end_s - p.delta_tau_start_s);
        times[i] = static_cast<double>(i) * p.sample_interval_s;
        auto level = [&](double f) {
            const double g = two_path_gain(f, direct, reflected);
            const double db = g > 0.0 ? 20.0 * std::log10(g) : -400.0;
            return p.measurement_noise_db > 0.0 ? db + jitter(rng) : db;
        };
        lo[i] = level(c.carriers_hz[0]);
        hi[i] = level(c.carriers_hz[1]);
    }
    const RssiTrace trace_lo(times, lo);
    const RssiTrace trace_hi(times, hi);
    const auto regions = classify_regions(trace_lo, trace_hi, p.fade_threshold_db);
    ctx.write("regions.csv", regions_to_csv(trace_lo, trace_hi, regions));

    std::size_t count[4] = {0, 0, 0, 0};
    std::size_t runs[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const auto r = static_cast<std::size_t>(regions[i].region);
        ++count[r];
        if (i == 0 || regions[i - 1].region != regions[i].region) ++runs[r];
    }
    ctx.metric("region_I_s", count[0] * p.sample_interval_s);
    ctx.metric("region_II_s", count[1] * p.sample_interval_s);
    ctx.metric("region_III_s", count[2] * p.sample_interval_s);
    ctx.metric("both_faded_s", count[3] * p.sample_interval_s);
    ctx.metric("region_II_intervals", static_cast<double>(runs[1]));
    ctx.metric("region_III_intervals", static_cast<double>(runs[2]));
    ctx.metric("min_level_lo_db", *std::min_element(lo.begin(), lo.end()));
    ctx.metric("min_level_hi_db", *std::min_element(hi.begin(), hi.end()));
}

void run_radar(Context& ctx) {
    const auto& c = ctx.config;
    const auto stats = run_bursts(c, c.timing, c.params.max_range_m, ctx.seed);
    ctx.write("ranges.csv", range_estimate_columns() + stats.rows);
    ctx.metric("prt_valid", c.timing.prt_valid() ? 1.0 : 0.0);
    ctx.metric("detection_rate", stats.detection_rate);
    ctx.metric("mean_abs_range_error_m", stats.mean_abs_error_m);
    ctx.metric("max_abs_range_error_m", stats.max_abs_error_m);
    ctx.metric("mean_rejected_peaks", stats.mean_rejected);
    ctx.metric("range_resolution_m", delay_to_range(c.timing.sample_period_s()));
}

std::string link_row(std::uint64_t seed, const LinkResult& r) {
    return std::to_string(seed) + ',' + std::to_string(r.bits_sent) + ',' + std::to_string(r.bit_errors) + ',' +
           csv::fmt(r.ber) + ',' + csv::fmt(r.snr_db) + ',' +
           (r.jammer_power_db ? csv::fmt(*r.jammer_power_db) : std::string()) + '\n';
}

void run_comm(Context& ctx) {
    const auto& c = ctx.config;
    const auto code = c.code.build();
    const auto bits = random_bits(c.params.n_bits, derive_seed(ctx.seed, 0xB1));
    LinkOptions opts;
    opts.carrier_hz = c.carriers_hz.front();
    opts.burst_bits = c.params.burst_bits;
    opts.hop_channels = c.params.hop_channels;
    opts.selection_diversity = c.params.selection_diversity;
    const auto result = run_link(bits, code, c.channel, c.timing, ctx.seed, opts);

    opts.selection_diversity = false;
    const auto single = run_link(bits, code, c.channel, c.timing, ctx.seed, opts);

    ctx.write("link.csv", "seed,bits_sent,bit_errors,ber,snr_db,jammer_power_db\n" + link_row(ctx.seed, result));
    ctx.metric("ber", result.ber);
    ctx.metric("bit_errors", static_cast<double>(result.bit_errors));
    ctx.metric("ber_single_antenna", single.ber);
    ctx.metric("ebn0_db", result.snr_db);
    ctx.metric("processing_gain_db", processing_gain_db(static_cast<long>(code.length())));
}

void run_jamming(Context& ctx) {
    const auto& c = ctx.config;
    const auto code = c.code.build();
    MarginOptions opts;
    opts.kind = interferer_kind_from_string(c.params.jammer_kind);
    opts.samples_per_chip = c.timing.samples_per_chip;
    opts.chip_rate_hz = c.timing.chip_rate_hz;
    opts.noise_psd = c.channel.noise_psd;
    opts.n_bits = c.params.n_bits;
    opts.burst_bits = c.params.burst_bits;
    opts.hop_channels = c.params.hop_channels;
    const auto curve = jamming_margin_curve(code, c.params.jammer_offsets_hz, c.params.ber_ceiling, ctx.seed, opts);
    ctx.write("curve.csv", margin_curve_csv(curve));

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& pt : curve) {
        lo = std::min(lo, pt.max_jammer_db);
        hi = std::max(hi, pt.max_jammer_db);
    }
    ctx.metric("processing_gain_db", processing_gain_db(static_cast<long>(code.length())));
    ctx.metric("min_tolerable_jammer_db", lo);
    ctx.metric("max_tolerable_jammer_db", hi);
    ctx.metric("cochannel_tolerable_jammer_db", curve.front().max_jammer_db);
}

void run_prt(Context& ctx) {
    const auto rows = prt_sweep(ctx.config.params.prt_values_s, ctx.config, ctx.seed);
    ctx.write("prt.csv", prt_sweep_csv(rows));
    std::size_t valid = 0;
    for (const auto& r : rows) valid += r.valid ? 1 : 0;
    ctx.metric("valid_prt_count", static_cast<double>(valid));
    ctx.metric("max_unambiguous_range_first_m", rows.front().max_unambiguous_range_m);
}

}  // namespace

std::vector<BandInfo> band_report() {
    struct Row {
        double low, high, nominal;
        int digits;
        const char* verdict;
        const char* remark;
    };
    // digits: precision at which the table prints each wavelength
    const Row rows[] = {
        {900, 930, 900e6, 2, "Not effective", "Δf less, λ more."},
        {2400, 2480, 2.4e9, 3, "Effective", "Δf more, λ less"},
        {5760, 5840, 5.8e9, 4, "More effective", "Δf more, λ least"},
    };
    std::vector<BandInfo> out;
    for (const auto& r : rows) {
        const double exact = kTableSpeedOfLight / r.nominal * 100.0;
        out.push_back({r.low, r.high, r.high - r.low, r.nominal, exact, round_significant(exact, r.digits), r.verdict,
                       r.remark});
    }
    return out;
}

std::string band_report_csv(const std::vector<BandInfo>& rows) {
    std::string out = "span_mhz,delta_f_mhz,lambda_cm,space_diversity,remark,lambda_exact_cm\n";
    for (const auto& r : rows) {
        out += csv::fmt(r.low_mhz) + '-' + csv::fmt(r.high_mhz) + ',' + csv::fmt(r.delta_f_mhz) + ',' +
               csv::fmt(r.lambda_cm) + ',' + r.space_diversity_verdict + ",\"" + r.remark + "\"," +
               csv::fmt(r.lambda_exact_cm) + '\n';
    }
    return out;
}

std::vector<PrtRow> prt_sweep(const std::vector<double>& prt_values_s, const ScenarioConfig& base_config,
                              std::uint64_t seed) {
    for (double prt : prt_values_s)
        if (!(prt > 0.0)) throw SimError("PRT values must be positive");
    std::vector<PrtRow> rows;
    for (std::size_t i = 0; i < prt_values_s.size(); ++i) {
        RadarTiming timing = base_config.timing;
        timing.prt_s = prt_values_s[i];
        const auto unamb = max_unambiguous_range(timing.prt_s);
        const double window = std::min(base_config.params.max_range_m, unamb.range_m);
        const auto stats = run_bursts(base_config, timing, window, derive_seed(seed, i));
        rows.push_back({timing.prt_s, unamb.valid, unamb.range_m, stats.mean_abs_error_m, stats.detection_rate});
    }
    return rows;
}

std::string prt_sweep_csv(const std::vector<PrtRow>& rows, const std::string& header) {
    std::string out = header + "prt_s,valid,max_unambiguous_range_m,ranging_error_m,detection_rate\n";
    for (const auto& r : rows)
        out += csv::fmt(r.prt_s) + ',' + (r.valid ? "true" : "false") + ',' + csv::fmt(r.max_unambiguous_range_m) +
               ',' + csv::fmt(r.ranging_error_m) + ',' + csv::fmt(r.detection_rate) + '\n';
    return out;
}

double RunArtifacts::metric(const std::string& name, std::size_t seed_index) const {
    std::vector<std::uint64_t> seeds;
    for (const auto& [s, m, v] : summary)
        if (std::find(seeds.begin(), seeds.end(), s) == seeds.end()) seeds.push_back(s);
    if (seed_index >= seeds.size()) throw SimError("no metrics for seed index " + std::to_string(seed_index));
    for (const auto& [s, m, v] : summary)
        if (s == seeds[seed_index] && m == name) return v;
    throw SimError("no metric named '" + name + "'");
}

RunArtifacts run_scenario(const ScenarioConfig& config) {
    validate(config);
    RunArtifacts artifacts;
    const fs::path root(config.output_path);
    try {
        for (std::uint64_t seed : config.seeds) {
            Context ctx{config, seed, root / ("seed_" + std::to_string(seed)), artifacts};
            switch (config.mode) {
                case Mode::fading_demo: run_fading(ctx); break;
                case Mode::region_demo: run_regions(ctx); break;
                case Mode::radar: run_radar(ctx); break;
                case Mode::comm: run_comm(ctx); break;
                case Mode::jamming_demo: run_jamming(ctx); break;
                case Mode::prt_sweep: run_prt(ctx); break;
            }
        }
        std::string summary = csv::header_comment(config.name, config.seeds.front()) + "seed,metric,value\n";
        for (const auto& [s, m, v] : artifacts.summary) summary += std::to_string(s) + ',' + m + ',' + csv::fmt(v) + '\n';
        csv::write_atomic(root / "summary.csv", summary);
        artifacts.files.push_back(root / "summary.csv");
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception& e) {
        throw SimError("scenario '" + config.name + "' (mode " + to_string(config.mode) + "): " + e.what());
    }
    return artifacts;
}

}  // namespace ssradio
