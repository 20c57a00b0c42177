#include "isac/channel.hpp"
#include "isac/scenario.hpp"
#include "isac/units.hpp"

#include <doctest.h>

#include <cmath>

using namespace isac;
using namespace isac::channel;
using doctest::Approx;

namespace {

scenario::NetworkScenario sampled(std::uint64_t seed)
{
    const auto t = scenario::build_deployment(scenario::default_deployment(3));
    Rng rng = make_rng(seed);
    return scenario::sample_realization(t, rng);
}

}  // namespace

TEST_CASE("path loss reference identity and inverse-square law")
{
    const double lam = wavelength(3.5e9);
    const double ref = std::pow(lam / (4 * kPi), 2);
    CHECK(pathloss_power_gain(1.0, 2.5, lam, 1.0) == Approx(ref));
    CHECK(pathloss_power_gain(20.0, 2.0, lam, 1.0) / pathloss_power_gain(10.0, 2.0, lam, 1.0) == Approx(0.25));
}

TEST_CASE("path loss at 100 m with exponent 2.5 by hand")
{
    // lambda = c / 3.5 GHz = 0.085655 m, (lambda / 4pi)^2 = 4.6459e-5, times 1e-5
    const double g = pathloss_power_gain(100.0, 2.5, wavelength(3.5e9), 1.0);
    CHECK(g == Approx(4.6459e-10).epsilon(1e-3));
}

TEST_CASE("distances below the reference clamp and are counted")
{
    std::size_t clamps = 0;
    const double lam = wavelength(3.5e9);
    CHECK(pathloss_power_gain(0.2, 2.5, lam, 1.0, &clamps) == pathloss_power_gain(1.0, 2.5, lam, 1.0));
    CHECK(clamps == 1);
}

TEST_CASE("path loss decreases with distance")
{
    const double lam = wavelength(3.5e9);
    double prev = pathloss_power_gain(1.0, 2.5, lam, 1.0);
    for (double d = 2; d < 1000; d *= 1.3) {
        const double g = pathloss_power_gain(d, 2.5, lam, 1.0);
        CHECK(g < prev);
        prev = g;
    }
}

TEST_CASE("pure LoS limit gives the path loss exactly")
{
    ChannelParams p;
    Rng rng = make_rng(5);
    const auto h = rician_coefficient(137.0, 2.5, 1e6, p, rng);
    CHECK(std::norm(h) == Approx(pathloss_power_gain(137.0, 2.5, p.wavelength_m(), 1.0)).epsilon(1e-12));
    // LoS phase -2 pi d / lambda
    const double phi = -2 * kPi * 137.0 / p.wavelength_m();
    CHECK(std::arg(h) == Approx(std::remainder(phi, 2 * kPi)).epsilon(1e-6));
}

TEST_CASE("Rician draws: mean power equals the path loss, NLoS variance PL/(K+1)")
{
    ChannelParams p;
    Rng rng = make_rng(11);
    const double d = 80.0;
    const double pl = pathloss_power_gain(d, p.comm_pathloss_exponent, p.wavelength_m(), 1.0);
    const double kf = p.rician_k_factor;
    const std::complex<double> los =
        std::sqrt(pl * kf / (kf + 1)) * std::polar(1.0, -2 * kPi * d / p.wavelength_m());
    const int n = 100000;
    double sum = 0, var = 0;
    for (int i = 0; i < n; ++i) {
        const auto h = rician_coefficient(d, p, rng);
        sum += std::norm(h);
        var += std::norm(h - los);
    }
    CHECK(sum / n == Approx(pl).epsilon(0.01));
    CHECK(var / n == Approx(pl / (kf + 1)).epsilon(0.02));
}

TEST_CASE("fixed seed draws are bit-identical")
{
    ChannelParams p;
    Rng a = make_rng(99), b = make_rng(99);
    for (int i = 0; i < 100; ++i) CHECK(rician_coefficient(50.0 + i, p, a) == rician_coefficient(50.0 + i, p, b));
}

TEST_CASE("bistatic radar equation")
{
    ChannelParams p;
    // 0.085655^2 * 5.0119 / ((4 pi)^3 * 1e8) = 1.8497e-13
    CHECK(bistatic_radar_power_gain(100, 100, p) == Approx(1.8497e-13).epsilon(1e-3));
    CHECK(bistatic_radar_power_gain(50, 200, p) == Approx(bistatic_radar_power_gain(100, 100, p)));
    CHECK(bistatic_radar_power_gain(200, 200, p) == Approx(bistatic_radar_power_gain(100, 100, p) / 16));
    CHECK(bistatic_radar_power_gain(37, 81, p) == Approx(bistatic_radar_power_gain(81, 37, p)));
    p.antenna_gain_tx = 2.0;
    p.antenna_gain_rx = 3.0;
    CHECK(bistatic_radar_power_gain(100, 100, p) == Approx(6 * 1.8497e-13).epsilon(1e-3));
}

TEST_CASE("non-free-space echo exponent scales each leg")
{
    ChannelParams p;
    const double g2 = bistatic_radar_power_gain(100, 50, p);
    p.sensing_pathloss_exponent = 2.5;
    // (1/100)^0.5 * (1/50)^0.5 relative to the free-space value
    CHECK(bistatic_radar_power_gain(100, 50, p) == Approx(g2 / std::sqrt(100.0 * 50.0)));
}

TEST_CASE("self-interference levels")
{
    CHECK(self_interference_power_gain(-90, SiMode::attenuation, 0.2) == Approx(1e-9));
    const double pmax = dbm_to_watts(23);
    CHECK(pmax == Approx(0.19953).epsilon(1e-4));
    CHECK(self_interference_power_gain(-90, SiMode::absolute_at_pmax, pmax) == Approx(5.012e-12).epsilon(1e-3));
    // residual SI at P_max is exactly the configured level
    CHECK(watts_to_dbm(pmax * self_interference_power_gain(-67.5, SiMode::absolute_at_pmax, pmax)) ==
          Approx(-67.5));
    CHECK_THROWS_AS(self_interference_power_gain(0, SiMode::attenuation, 0.2), ChannelError);
    CHECK_THROWS_AS(self_interference_power_gain(30, SiMode::absolute_at_pmax, 0.2), ChannelError);
}

TEST_CASE("thermal noise")
{
    CHECK(watts_to_dbm(noise_power(100e6, 0)) == Approx(-94.0));
    CHECK(watts_to_dbm(noise_power(100e6, 8)) == Approx(-86.0));
    CHECK(noise_power(100e6, 8) == Approx(2.5119e-12).epsilon(1e-4));
    CHECK(noise_power(50e6, 8) == Approx(noise_power(100e6, 8) / 2));
}

TEST_CASE("propagation delays")
{
    const Position3D a{0, 0, 0}, x{150, 0, 0};
    CHECK(delay_via(a, x, a) == Approx(1.00069e-6).epsilon(1e-5));
    const auto s = sampled(4);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t n = 0; n < 3; ++n) {
            CHECK(propagation_delay(s, k, n, true) == Approx(propagation_delay(s, n, k, true)));
            CHECK(propagation_delay(s, k, n, true) >= propagation_delay(s, k, n, false));
        }
}

TEST_CASE("realization: structure and invariants")
{
    const auto s = sampled(21);
    ChannelParams p;
    Rng rng = make_rng(21);
    const auto ch = realize_channels(s, p, dbm_to_watts(23), rng);
    REQUIRE(ch.num_bs() == 3);
    for (Eigen::Index i = 0; i < 3; ++i) {
        CHECK(ch.h_bs_bs(i, i) == std::complex<double>(0, 0));
        CHECK(ch.beta_sq(i) == Approx(1e-9));
        CHECK(ch.noise_bs(i) == Approx(noise_power(100e6, 8)));
        CHECK(ch.bandwidth_hz(i) == 100e6);
        for (Eigen::Index j = 0; j < 3; ++j) {
            CHECK(ch.g_mono_bi(i, j) >= 0);
            CHECK(ch.g_ue_echo(i, j) >= 0);
            CHECK(std::isfinite(std::abs(ch.h_comm(i, j))));
            CHECK(ch.g_mono_bi(i, j) == Approx(ch.g_mono_bi(j, i)));
            CHECK(ch.tau_bs(i, j) * kSpeedOfLight >= distance(s.bs_positions[i], s.bs_positions[j]) - 1e-6);
        }
    }
    // target inside the hexagon is seen by every sector
    CHECK((ch.g_mono_bi.diagonal().array() > 0).all());
}

TEST_CASE("realization is bit-reproducible from the seed")
{
    const auto s = sampled(8);
    ChannelParams p;
    Rng a = make_rng(8), b = make_rng(8);
    const auto x = realize_channels(s, p, 0.2, a);
    const auto y = realize_channels(s, p, 0.2, b);
    CHECK(x.h_comm == y.h_comm);
    CHECK(x.h_bs_bs == y.h_bs_bs);
    CHECK(x.g_mono_bi == y.g_mono_bi);
}

TEST_CASE("target equidistant from all BSs: equal monostatic gains")
{
    auto s = sampled(3);
    s.target_position = {0, 0, 1};
    ChannelParams p;
    Rng rng = make_rng(3);
    const auto ch = realize_channels(s, p, 0.2, rng);
    CHECK(ch.g_mono_bi(0, 0) == Approx(ch.g_mono_bi(1, 1)));
    CHECK(ch.g_mono_bi(1, 1) == Approx(ch.g_mono_bi(2, 2)));
}

TEST_CASE("moving the target away lowers its echo gains")
{
    auto s = sampled(3);
    ChannelParams p;
    s.target_position = {0, 0, 1};
    Rng r1 = make_rng(1);
    const auto near = realize_channels(s, p, 0.2, r1);
    // stay inside sector 0 while moving away from BS 0 (at +y)
    s.target_position = {0, -60, 1};
    Rng r2 = make_rng(1);
    const auto far = realize_channels(s, p, 0.2, r2);
    CHECK(far.g_mono_bi(0, 0) < near.g_mono_bi(0, 0));
}

TEST_CASE("mean comm power gain matches the path loss over many draws")
{
    const auto s = sampled(17);
    ChannelParams p;
    Rng rng = make_rng(17);
    const int n = 100000;
    double acc = 0;
    for (int i = 0; i < n; ++i) acc += std::norm(rician_coefficient(distance(s.bs_positions[1], s.ue_positions[0]), p, rng));
    const double pl = pathloss_power_gain(distance(s.bs_positions[1], s.ue_positions[0]), 2.5, p.wavelength_m(), 1.0);
    CHECK(acc / n == Approx(pl).epsilon(0.01));
}

TEST_CASE("parameter validation")
{
    ChannelParams p;
    CHECK_NOTHROW(p.validate(3));
    p.comm_pathloss_exponent = 7;
    CHECK_THROWS_AS(p.validate(3), ChannelError);
    p = ChannelParams{};
    p.num_subcarriers = 4000;  // 120 MHz occupied > 100 MHz
    CHECK_THROWS_WITH_AS(p.validate(3), doctest::Contains("num_subcarriers"), ChannelError);
    p = ChannelParams{};
    CHECK_THROWS_AS(p.validate(4), ChannelError);  // bandwidth vector has 3 entries
}
