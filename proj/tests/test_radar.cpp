#include <doctest.h>

#include "oracles.hpp"
#include "ssradio/channel.hpp"
#include "ssradio/radar.hpp"

using namespace ssradio;

namespace {

const RadarTiming kTiming{};

IqBuffer echo_of(const IqBuffer& burst, double range_m, cplx gain, double noise_psd, std::uint64_t seed) {
    ChannelModel env;
    env.noise_psd = noise_psd;
    return simulate_echoes(burst, {Target{range_m, gain}}, env, 5.8e9, seed).first;
}

}  // namespace

TEST_SUITE("radar") {

TEST_CASE("delay and range") {
    CHECK(delay_to_range(0.0) == 0.0);
    CHECK(delay_to_range(2e-6) == doctest::Approx(299.792458));
    CHECK(delay_to_range(200e-9) == doctest::Approx(29.98).epsilon(1e-4));
    CHECK(delay_to_range(1e-6) == doctest::Approx(oracle::range_from_delay(1e-6)));
    CHECK_THROWS_AS(delay_to_range(-1.0), SimError);
}

TEST_CASE("unambiguous range and PRT window") {
    CHECK(max_unambiguous_range(350e-6).range_m == doctest::Approx(52463.68).epsilon(1e-6));
    CHECK(max_unambiguous_range(600e-6).range_m == doctest::Approx(89937.74).epsilon(1e-6));
    CHECK(max_unambiguous_range(350e-6).valid);
    CHECK(max_unambiguous_range(600e-6).valid);
    CHECK(max_unambiguous_range(500e-6).valid);
    CHECK_FALSE(max_unambiguous_range(300e-6).valid);
    CHECK_FALSE(max_unambiguous_range(601e-6).valid);
    CHECK_THROWS_AS(max_unambiguous_range(0.0), SimError);
    RadarTiming t;
    t.prt_s = 200e-6;
    CHECK_FALSE(t.prt_valid());
    t.samples_per_chip = 0;
    CHECK_THROWS_AS(t.validate(), SimError);
}

TEST_CASE("burst layout") {
    const Frame frame(Frame::default_marker(), barker13());
    const auto burst = radar_burst(frame, kTiming, 300.0);
    const auto listen = static_cast<std::size_t>(std::ceil(2.0 * 300.0 / kSpeedOfLight * 80e6)) + 1;
    CHECK(burst.size() == 6 * 52 + listen);
    CHECK(burst.sample_rate_hz() == 80e6);
    CHECK_THROWS_AS(radar_burst(frame, kTiming, -1.0), SimError);
}

TEST_CASE("clean echo at 30 m") {
    const Frame frame(Frame::default_marker(), barker13());
    const auto burst = radar_burst(frame, kTiming, 300.0);
    const auto rx = echo_of(burst, 30.0, {1.0, 0.0}, 0.0, 1);
    const auto r = authenticate(rx, frame, kTiming);
    REQUIRE(r.authenticated);
    CHECK(r.diagnostic == AuthDiagnostic::ok);
    const double truth = 2.0 * 30.0 / kSpeedOfLight;
    CHECK(std::fabs(*r.delay_s - truth) <= 0.5 / kTiming.chip_rate_hz);
    CHECK(r.peak == doctest::Approx(52.0));
}

TEST_CASE("pure noise is not authenticated") {
    const Frame frame(Frame::default_marker(), barker13());
    Rng rng(3);
    std::vector<cplx> x(3000);
    for (auto& v : x) v = complex_normal(rng);
    const auto r = authenticate(IqBuffer(x, 80e6), frame, kTiming);
    CHECK_FALSE(r.authenticated);
    CHECK(r.diagnostic == AuthDiagnostic::no_marker);
    CHECK_FALSE(r.delay_s.has_value());
    CHECK_THROWS_AS(authenticate(IqBuffer(x, 80e6), frame, kTiming, 1.0), SimError);
}

TEST_CASE("exhaustive wrong-code enumeration matches the Hamming-distance count") {
    // Valid marker followed by each of the 8191 other 13-chip codes, clean.
    const auto barker = barker13();
    const Frame frame(Frame::default_marker(), barker);
    const int spc = kTiming.samples_per_chip;
    const auto marker = frame.marker_chips();
    long accepted = 0;
    std::size_t mismatch_diagnostics = 0;
    for (int word = 0; word < (1 << 13); ++word) {
        std::vector<int> chips(13);
        for (int i = 0; i < 13; ++i) chips[i] = (word >> (12 - i)) & 1 ? 1 : -1;
        if (chips == oracle::kBarker13) continue;
        std::vector<cplx> x(40, cplx{});
        for (int c : marker.chips())
            for (int s = 0; s < spc; ++s) x.emplace_back(c, 0.0);
        for (int c : chips)
            for (int s = 0; s < spc; ++s) x.emplace_back(c, 0.0);
        x.resize(x.size() + 40, cplx{});
        const auto r = authenticate(IqBuffer(x, 80e6), frame, kTiming, 0.6);
        if (r.authenticated)
            ++accepted;
        else
            mismatch_diagnostics += r.diagnostic == AuthDiagnostic::code_mismatch;
    }
    CHECK(oracle::codes_passing_threshold(0.6) == 91);
    CHECK(accepted == oracle::codes_passing_threshold(0.6));
    CHECK(mismatch_diagnostics == 8191 - static_cast<std::size_t>(accepted));
}

TEST_CASE("nearest of two cars") {
    const Frame frame(Frame::default_marker(), barker13());
    const auto burst = radar_burst(frame, kTiming, 300.0);
    ChannelModel env;
    env.noise_psd = 1e-3;
    const auto [a, b] = simulate_echoes(burst, {Target{30.0, {1.0, 0.0}}, Target{120.0, {0.8, 0.0}}}, env, 5.8e9, 4);
    const auto est = estimate_nearest(a, b, frame, kTiming);
    REQUIRE(est.target_found);
    CHECK(est.authenticated);
    CHECK(std::fabs(est.range_m - 30.0) <= delay_to_range(kTiming.sample_period_s()));
    CHECK(est.rejected_peaks == 1);
}

TEST_CASE("faded antenna falls back to the clean one") {
    const Frame frame(Frame::default_marker(), barker13());
    const auto burst = radar_burst(frame, kTiming, 300.0);
    const auto faded = echo_of(burst, 75.0, {1e-3, 0.0}, 1e-4, 7);
    const auto clean = echo_of(burst, 75.0, {1.0, 0.0}, 1e-4, 8);
    const auto est = estimate_nearest(faded, clean, frame, kTiming);
    REQUIRE(est.target_found);
    CHECK(est.antenna_used == 1);
    CHECK(std::fabs(est.range_m - 75.0) <= delay_to_range(kTiming.sample_period_s()));
}

TEST_CASE("empty channel reports no target") {
    const Frame frame(Frame::default_marker(), barker13());
    const auto burst = radar_burst(frame, kTiming, 300.0);
    ChannelModel env;
    env.noise_psd = 0.1;
    const auto [a, b] = simulate_echoes(burst, {}, env, 5.8e9, 2);
    const auto est = estimate_nearest(a, b, frame, kTiming);
    CHECK_FALSE(est.target_found);
    CHECK_FALSE(est.authenticated);
    const auto row = range_estimate_row(0.5, est);
    CHECK(row == "0.5,,0,false," + std::to_string(est.antenna_used) + ",0\n");

    const auto silent = IqBuffer(std::vector<cplx>(burst.size()), burst.sample_rate_hz());
    const auto blind = estimate_nearest(silent, silent, frame, kTiming);
    CHECK(blind.blind_selection);
    CHECK_FALSE(blind.target_found);
    CHECK_THROWS_AS(estimate_nearest(silent, IqBuffer(std::vector<cplx>(10), 80e6), frame, kTiming), SimError);
}

}
