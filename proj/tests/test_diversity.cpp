#include <doctest.h>

#include <cmath>

#include "ssradio/diversity.hpp"
#include "ssradio/signal.hpp"

using namespace ssradio;

namespace {

std::vector<double> seconds(std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i);
    return t;
}

}  // namespace

TEST_SUITE("diversity") {

TEST_CASE("antenna selection") {
    CHECK(select_antenna(-60, -75).index == 0);
    CHECK(select_antenna(-75, -60).index == 1);
    CHECK(select_antenna(-60, -60).index == 0);
    CHECK(select_antenna(kNoSignalDb, -90).index == 1);
    const auto blind = select_antenna(kNoSignalDb, kNoSignalDb);
    CHECK(blind.blind);
    CHECK(blind.index == 0);
    CHECK_FALSE(select_antenna(-60, -60).blind);
    CHECK_THROWS_AS(select_antenna(std::nan(""), -60), SimError);
    CHECK_THROWS_AS(select_antenna(-60, INFINITY), SimError);
}

TEST_CASE("spatial separation") {
    const auto r58 = spatial_separation_report(0.25, 5.8e9);
    CHECK(r58.wavelengths == doctest::Approx(0.25 / (kSpeedOfLight / 5.8e9)));
    CHECK(r58.wavelengths == doctest::Approx(4.83).epsilon(0.005));
    CHECK(r58.effective);
    const auto r900 = spatial_separation_report(0.25, 900e6);
    CHECK(r900.wavelengths == doctest::Approx(0.75).epsilon(0.005));
    CHECK(r900.effective);
    const double half = wavelength(2.4e9) / 2.0;
    CHECK(spatial_separation_report(half, 2.4e9).wavelengths == doctest::Approx(0.5));
    CHECK(spatial_separation_report(half, 2.4e9).effective);
    CHECK_FALSE(spatial_separation_report(0.4 * wavelength(2.4e9), 2.4e9).effective);
    CHECK_THROWS_AS(spatial_separation_report(0.0, 2.4e9), SimError);
}

TEST_CASE("region classification") {
    const std::size_t n = 100;
    std::vector<double> flat(n, -50.0);
    std::vector<double> dip(flat);
    for (std::size_t i = 40; i < 60; ++i) dip[i] = -80.0;

    const RssiTrace lo_flat(seconds(n), flat);
    const RssiTrace hi_dip(seconds(n), dip);
    const RssiTrace lo_dip(seconds(n), dip);
    const RssiTrace hi_flat(seconds(n), flat);

    for (const auto& s : classify_regions(lo_flat, hi_flat, 10.0)) CHECK(s.region == Region::I);

    const auto two = classify_regions(lo_flat, hi_dip, 10.0);
    for (std::size_t i = 0; i < n; ++i) CHECK(two[i].region == (i >= 40 && i < 60 ? Region::II : Region::I));

    const auto three = classify_regions(lo_dip, hi_flat, 10.0);
    for (std::size_t i = 0; i < n; ++i) CHECK(three[i].region == (i >= 40 && i < 60 ? Region::III : Region::I));

    CHECK(classify_regions(lo_dip, hi_dip, 10.0)[50].region == Region::both_faded);

    CHECK_THROWS_AS(classify_regions(lo_flat, RssiTrace(seconds(n - 1), std::vector<double>(n - 1, 0.0)), 10.0),
                    SimError);
    CHECK_THROWS_AS(classify_regions(lo_flat, hi_flat, 0.0), SimError);
    CHECK_THROWS_AS(RssiTrace({0.0, 0.0}, {1.0, 1.0}), SimError);
    CHECK_THROWS_AS(RssiTrace({0.0, 1.0}, {1.0}), SimError);
    CHECK(regions_to_csv(lo_flat, hi_dip, two).find(",II\n") != std::string::npos);
}

TEST_CASE("selection outage") {
    // p_single = 1 - exp(-g) for unit-mean exponential power
    const double g = -std::log(0.9);
    const double threshold_db = 10.0 * std::log10(g);

    const auto same = selection_outage_probability(threshold_db, 20000, 0.0, 5);
    CHECK(same.p_selected == same.p_single);

    const auto indep = selection_outage_probability(threshold_db, 100000, 1.0, 5);
    CHECK(indep.p_single == doctest::Approx(0.1).epsilon(0.05));
    CHECK(std::fabs(indep.p_selected - 0.01) <= 0.003);
    CHECK(std::fabs(indep.p_selected - indep.p_single * indep.p_single) <= 0.003);

    const auto never = selection_outage_probability(kNoSignalDb, 1000, 1.0, 5);
    CHECK(never.p_single == 0.0);
    CHECK(never.p_selected == 0.0);

    CHECK_THROWS_AS(selection_outage_probability(-10.0, 999, 1.0, 5), SimError);
    CHECK(selection_outage_probability(-10.0, 50000, 1.0, 9).p_selected ==
          selection_outage_probability(-10.0, 50000, 1.0, 9).p_selected);
}

}
