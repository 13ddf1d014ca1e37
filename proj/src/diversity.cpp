#include "ssradio/diversity.hpp"

#include <algorithm>
#include <cmath>

#include "ssradio/channel.hpp"
#include "ssradio/csv.hpp"
#include "ssradio/signal.hpp"

namespace ssradio {

namespace {

double median(std::vector<double> v) {
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + n / 2, v.end());
    const double upper = v[n / 2];
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + n / 2);
    return 0.5 * (lower + upper);
}

constexpr std::size_t kShardTrials = 1 << 14;

}  // namespace

RssiTrace::RssiTrace(std::vector<double> times, std::vector<double> levels)
    : times_s(std::move(times)), levels_db(std::move(levels)) {
    if (times_s.size() != levels_db.size()) throw SimError("RSSI trace: times and levels differ in length");
    for (std::size_t i = 1; i < times_s.size(); ++i)
        if (!(times_s[i] > times_s[i - 1])) throw SimError("RSSI trace: times must be strictly increasing");
}

std::string to_string(Region r) {
    switch (r) {
        case Region::I: return "I";
        case Region::II: return "II";
        case Region::III: return "III";
        case Region::both_faded: return "both_faded";
    }
    return "?";
}

AntennaChoice select_antenna(double rssi_a_db, double rssi_b_db) {
    for (double v : {rssi_a_db, rssi_b_db})
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
            throw SimError("RSSI must be finite or the no-signal sentinel");
    if (rssi_a_db == kNoSignalDb && rssi_b_db == kNoSignalDb) return {0, true};
    return {rssi_b_db > rssi_a_db ? 1 : 0, false};
}

SeparationReport spatial_separation_report(double separation_m, double carrier_hz) {
    if (!(separation_m > 0.0)) throw SimError("antenna separation must be positive");
    const double ratio = separation_m / wavelength(carrier_hz);
    return {ratio, ratio >= 0.5};
}

std::vector<RegionSample> classify_regions(const RssiTrace& trace_lo, const RssiTrace& trace_hi,
                                           double fade_threshold_db) {
    if (!(fade_threshold_db > 0.0)) throw SimError("fade threshold must be positive");
    if (trace_lo.times_s != trace_hi.times_s) throw SimError("region traces must share one time axis");
    if (trace_lo.size() == 0) return {};

    const double cut_lo = median(trace_lo.levels_db) - fade_threshold_db;
    const double cut_hi = median(trace_hi.levels_db) - fade_threshold_db;
    std::vector<RegionSample> out;
    out.reserve(trace_lo.size());
    for (std::size_t i = 0; i < trace_lo.size(); ++i) {
        const bool lo_faded = trace_lo.levels_db[i] < cut_lo;
        const bool hi_faded = trace_hi.levels_db[i] < cut_hi;
        Region r = Region::I;
        if (lo_faded && hi_faded)
            r = Region::both_faded;
        else if (hi_faded)
            r = Region::II;
        else if (lo_faded)
            r = Region::III;
        out.push_back({trace_lo.times_s[i], r});
    }
    return out;
}

std::string regions_to_csv(const RssiTrace& lo, const RssiTrace& hi, const std::vector<RegionSample>& regions,
                           const std::string& header) {
    std::string out = header;
    out += "time_s,level_lo_db,level_hi_db,region\n";
    for (std::size_t i = 0; i < regions.size(); ++i) {
        out += csv::fmt(regions[i].time_s) + ',' + csv::fmt(lo.levels_db[i]) + ',' + csv::fmt(hi.levels_db[i]) +
               ',' + to_string(regions[i].region) + '\n';
    }
    return out;
}

OutageResult selection_outage_probability(double fade_threshold_db, std::size_t n_trials, double decorrelation,
                                          std::uint64_t seed) {
    if (n_trials < 1000) throw SimError("selection outage needs at least 1000 trials");
    if (std::isnan(fade_threshold_db)) throw SimError("fade threshold must not be NaN");
    const double threshold = db_to_linear_power(fade_threshold_db);

    std::size_t single = 0;
    std::size_t selected = 0;
    for (std::size_t shard = 0, done = 0; done < n_trials; ++shard) {
        const std::size_t count = std::min(kShardTrials, n_trials - done);
        Rng rng(derive_seed(seed, shard));
        for (std::size_t t = 0; t < count; ++t) {
            const auto [h0, h1] = draw_branch_pair(rng, decorrelation);
            const double p0 = std::norm(h0);
            const double p1 = std::norm(h1);
            if (p0 < threshold) ++single;
            if (std::max(p0, p1) < threshold) ++selected;
        }
        done += count;
    }
    return {static_cast<double>(single) / n_trials, static_cast<double>(selected) / n_trials};
}

}  // namespace ssradio
