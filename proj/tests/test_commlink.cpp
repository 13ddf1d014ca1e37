#include <doctest.h>

#include "oracles.hpp"
#include "ssradio/channel.hpp"
#include "ssradio/commlink.hpp"

using namespace ssradio;

TEST_SUITE("commlink") {

TEST_CASE("processing gain") {
    CHECK(processing_gain_db(1) == 0.0);
    CHECK(processing_gain_db(13) == doctest::Approx(11.14).epsilon(1e-3));
    CHECK(processing_gain_db(127) == doctest::Approx(21.04).epsilon(1e-3));
    CHECK_THROWS_AS(processing_gain_db(0), SimError);
}

TEST_CASE("random bits are balanced and reproducible") {
    const auto a = random_bits(10000, 5);
    CHECK(a == random_bits(10000, 5));
    CHECK(a != random_bits(10000, 6));
    long ones = 0;
    for (int b : a) ones += b;
    CHECK(std::labs(ones - 5000) < 300);
}

TEST_CASE("noiseless link is error free") {
    const auto bits = random_bits(2000, 1);
    ChannelModel m;
    m.taps = {ChannelTap{3.0 / 80e6, {0.3, -0.9}, 0.0}};
    for (bool sel : {false, true}) {
        LinkOptions opts;
        opts.selection_diversity = sel;
        const auto r = run_link(bits, barker13(), m, RadarTiming{}, 2, opts);
        CHECK(r.bit_errors == 0);
        CHECK(r.ber == 0.0);
        CHECK(r.bits_sent == 2000);
        CHECK_FALSE(r.jammer_power_db.has_value());
    }
    LinkOptions hop;
    hop.hop_channels = 8;
    CHECK(run_link(bits, barker13(), m, RadarTiming{}, 2, hop).bit_errors == 0);
    CHECK_THROWS_AS(run_link({}, barker13(), m, RadarTiming{}, 2), SimError);
}

TEST_CASE("AWGN link tracks coherent BPSK") {
    // Eb/N0 = 6 dB: the oracle predicts 2.39e-3
    const double ebn0 = 6.0;
    RadarTiming timing;
    timing.samples_per_chip = 1;
    ChannelModel m;
    m.noise_psd = noise_psd_for_ebn0(ebn0, 13, 1);
    LinkOptions opts;
    opts.selection_diversity = false;
    opts.burst_bits = 1000;
    const auto r = run_link(random_bits(400000, 3), barker13(), m, timing, 3, opts);
    CHECK(r.snr_db == doctest::Approx(ebn0));
    const double expected = oracle::bpsk_ber(ebn0);
    CHECK(r.ber == doctest::Approx(expected).epsilon(0.15));
}

TEST_CASE("selection never loses to a single antenna on the same fades") {
    ChannelModel m;
    m.rayleigh_block = true;
    m.noise_psd = noise_psd_for_ebn0(12.0, 13, 4);
    const auto bits = random_bits(50000, 9);
    LinkOptions one;
    one.selection_diversity = false;
    LinkOptions two;
    const auto single = run_link(bits, barker13(), m, RadarTiming{}, 9, one);
    const auto selected = run_link(bits, barker13(), m, RadarTiming{}, 9, two);
    CHECK(selected.ber <= single.ber);
    CHECK(single.ber > 0.0);
}

TEST_CASE("disabled jammer leaves the baseline") {
    MarginOptions opts;
    opts.n_bits = 5000;
    Interferer off;
    const double ber = jammed_ber(barker13(), off, 1, opts);
    CHECK(ber == 0.0);
}

TEST_CASE("common random numbers make the BER monotone in jammer power") {
    MarginOptions opts;
    opts.kind = InterfererKind::broadband_jammer;
    opts.n_bits = 4000;
    Interferer j;
    j.kind = InterfererKind::broadband_jammer;
    double prev = 0.0;
    for (double p = -5.0; p <= 15.0; p += 2.5) {
        j.power_db = p;
        const double ber = jammed_ber(barker13(), j, 4, opts);
        CHECK(ber >= prev);
        prev = ber;
    }
    CHECK(prev > 0.01);
}

TEST_CASE("margin curve is a function and the region below it is jam free") {
    MarginOptions opts;
    opts.kind = InterfererKind::broadband_jammer;
    opts.n_bits = 10000;
    const std::vector<double> offsets{0.0, 5e6};
    const auto curve = jamming_margin_curve(barker13(), offsets, 1e-2, 21, opts);
    REQUIRE(curve.size() == 2);
    CHECK(curve[0].offset_hz == 0.0);
    CHECK(curve[1].offset_hz == 5e6);
    for (const auto& pt : curve) {
        Interferer j;
        j.kind = InterfererKind::broadband_jammer;
        j.freq_offset_hz = pt.offset_hz;
        j.power_db = pt.max_jammer_db - 3.0;
        CHECK(jammed_ber(barker13(), j, 21, opts) <= 1e-2);
    }
    // broadband jamming: BER ceiling 1e-2 needs L/J ~ 2.7, so J ~ 6.8 dB for L = 13
    CHECK(curve[0].max_jammer_db == doctest::Approx(10.0 * std::log10(13.0 / 2.706)).epsilon(0.15));
    CHECK(margin_curve_csv(curve).starts_with("offset_hz,max_jammer_db\n0,"));
    CHECK_THROWS_AS(jamming_margin_curve(barker13(), offsets, 0.7, 1, opts), SimError);
}

TEST_CASE("frequency hopping dodges a parked tone") {
    MarginOptions opts;
    opts.samples_per_chip = 4;
    opts.n_bits = 4000;
    opts.burst_bits = 100;
    Interferer tone;
    tone.kind = InterfererKind::adjacent_tone;
    tone.freq_offset_hz = 2.5e6;
    tone.power_db = 30.0;
    const double fixed = jammed_ber(barker13(), tone, 2, opts);
    opts.hop_channels = 8;
    const double hopped = jammed_ber(barker13(), tone, 2, opts);
    CHECK(hopped < fixed);
}

}
