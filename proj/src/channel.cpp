#include "isac/channel.hpp"

#include "isac/units.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace isac::channel {

namespace {

void require(bool ok, const std::string& msg)
{
    if (!ok) throw ChannelError(msg);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

constexpr double kPureLosKFactor = 1e6;

}  // namespace

double ChannelParams::wavelength_m() const { return isac::wavelength(carrier_frequency_hz); }

void ChannelParams::validate(std::size_t num_bs) const
{
    require(positive(carrier_frequency_hz), "channel.carrier_frequency_hz: must be > 0");
    require(bandwidth_per_bs_hz.size() == num_bs,
            "channel.bandwidth_per_bs_hz: need exactly num_bs entries");
    for (double bw : bandwidth_per_bs_hz)
        require(positive(bw), "channel.bandwidth_per_bs_hz: entries must be > 0");
    require(positive(subcarrier_spacing_hz), "channel.subcarrier_spacing_hz: must be > 0");
    require(num_subcarriers > 0, "channel.num_subcarriers: must be > 0");
    require(num_symbols > 0, "channel.num_symbols: must be > 0");
    const double max_bw = *std::max_element(bandwidth_per_bs_hz.begin(), bandwidth_per_bs_hz.end());
    require(num_subcarriers * subcarrier_spacing_hz <= max_bw * (1 + 1e-12),
            "channel.num_subcarriers: occupied bandwidth exceeds the largest BS bandwidth");
    require(positive(rician_k_factor), "channel.rician_k_factor_db: must be finite");
    require(positive(bs_bs_k_factor), "channel.bs_bs_k_factor_db: must be finite");
    for (auto [name, e] : {std::pair{"comm_pathloss_exponent", comm_pathloss_exponent},
                           std::pair{"sensing_pathloss_exponent", sensing_pathloss_exponent},
                           std::pair{"bs_bs_pathloss_exponent", bs_bs_pathloss_exponent}})
        require(std::isfinite(e) && e >= 1.5 && e <= 6.0,
                std::string("channel.") + name + ": must lie in [1.5, 6]");
    require(positive(target_rcs_m2), "channel.target_rcs_dbsm: must be finite");
    require(positive(antenna_gain_tx), "channel.antenna_gain_tx_dbi: must be finite");
    require(positive(antenna_gain_rx), "channel.antenna_gain_rx_dbi: must be finite");
    require(std::isfinite(si_level), "channel.si_level: must be finite");
    require(std::isfinite(noise_figure_ue_db), "channel.noise_figure_ue_db: must be finite");
    require(std::isfinite(noise_figure_bs_db), "channel.noise_figure_bs_db: must be finite");
    require(positive(reference_distance_m), "channel.reference_distance_m: must be > 0");
    require(std::isfinite(saturation_limit_w), "channel.saturation_limit_w: must be finite");
}

double pathloss_power_gain(double d, double exponent, double wavelength, double d0,
                           std::size_t* clamp_counter)
{
    if (d < d0) {
        if (clamp_counter) ++*clamp_counter;
        d = d0;
    }
    const double ref = wavelength / (4.0 * kPi * d0);
    return ref * ref * std::pow(d0 / d, exponent);
}

std::complex<double> rician_coefficient(double d, double exponent, double k_factor,
                                        const ChannelParams& params, Rng& rng,
                                        std::size_t* clamp_counter)
{
    const double lambda = params.wavelength_m();
    const double pl = pathloss_power_gain(d, exponent, lambda, params.reference_distance_m, clamp_counter);
    const std::complex<double> los = std::polar(1.0, -2.0 * kPi * d / lambda);
    if (k_factor >= kPureLosKFactor) return std::sqrt(pl) * los;

    // CN(0, 1): real and imaginary parts each N(0, 1/2)
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    const double re = gauss(rng);
    const double im = gauss(rng);
    const std::complex<double> nlos{re, im};
    return std::sqrt(pl) * (std::sqrt(k_factor / (k_factor + 1.0)) * los +
                            std::sqrt(1.0 / (k_factor + 1.0)) * nlos);
}

std::complex<double> rician_coefficient(double d, const ChannelParams& params, Rng& rng)
{
    return rician_coefficient(d, params.comm_pathloss_exponent, params.rician_k_factor, params, rng);
}

double bistatic_radar_power_gain(double d_tx, double d_rx, const ChannelParams& params)
{
    const double lambda = params.wavelength_m();
    const double fourpi3 = std::pow(4.0 * kPi, 3);
    double g = params.antenna_gain_tx * params.antenna_gain_rx * lambda * lambda * params.target_rcs_m2 /
               (fourpi3 * d_tx * d_tx * d_rx * d_rx);
    const double extra = params.sensing_pathloss_exponent - 2.0;
    if (extra != 0.0) {
        const double d0 = params.reference_distance_m;
        g *= std::pow(d0 / d_tx, extra) * std::pow(d0 / d_rx, extra);
    }
    return g;
}

double self_interference_power_gain(double si_level, SiMode mode, double p_max_w)
{
    require(positive(p_max_w), "self-interference: p_max must be > 0");
    double beta_sq = 0.0;
    switch (mode) {
    case SiMode::attenuation:
        beta_sq = db_to_linear(si_level);
        break;
    case SiMode::absolute_at_pmax:
        beta_sq = dbm_to_watts(si_level) / p_max_w;
        break;
    }
    require(beta_sq < 1.0, "self-interference: |beta|^2 must be < 1 (SI above the transmit power)");
    return beta_sq;
}

double noise_power(double bandwidth_hz, double noise_figure_db)
{
    return dbm_to_watts(kThermalNoiseDbmPerHz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

double delay_via(const Position3D& from, const Position3D& via, const Position3D& to)
{
    return (distance(from, via) + distance(via, to)) / kSpeedOfLight;
}

double propagation_delay(const scenario::NetworkScenario& s, std::size_t k, std::size_t n, bool via_target)
{
    if (via_target) return delay_via(s.bs_positions.at(k), s.target_position, s.bs_positions.at(n));
    return distance(s.bs_positions.at(k), s.bs_positions.at(n)) / kSpeedOfLight;
}

ChannelRealization realize_channels(const scenario::NetworkScenario& s, const ChannelParams& params,
                                    double p_max_w, Rng& rng)
{
    const std::size_t K = s.num_bs();
    params.validate(K);
    require(s.ue_positions.size() == K, "scenario: need exactly one UE per BS");

    ChannelRealization ch;
    ch.h_comm.resize(K, K);
    ch.g_mono_bi.resize(K, K);
    ch.g_ue_echo.resize(K, K);
    ch.h_bs_bs = Eigen::MatrixXcd::Zero(K, K);
    ch.beta_sq.resize(K);
    ch.tau_bs.resize(K, K);
    ch.tau_ue.resize(K, K);
    ch.noise_ue.resize(K);
    ch.noise_bs.resize(K);
    ch.bandwidth_hz.resize(K);

    const auto& x = s.target_position;
    std::vector<bool> target_in_sector(K);
    std::vector<double> d_target(K);
    for (std::size_t k = 0; k < K; ++k) {
        target_in_sector[k] = scenario::in_sector(s.bs_positions[k], s.sectors[k], x);
        d_target[k] = distance(s.bs_positions[k], x);
    }

    // random draws in a fixed order: communication links row-major, then BS pairs
    for (std::size_t m = 0; m < K; ++m)
        for (std::size_t k = 0; k < K; ++k)
            ch.h_comm(m, k) = rician_coefficient(distance(s.bs_positions[k], s.ue_positions[m]),
                                                 params.comm_pathloss_exponent, params.rician_k_factor,
                                                 params, rng, &ch.pathloss_clamps);
    for (std::size_t n = 0; n < K; ++n)
        for (std::size_t k = n + 1; k < K; ++k) {
            const auto h = rician_coefficient(distance(s.bs_positions[k], s.bs_positions[n]),
                                              params.bs_bs_pathloss_exponent, params.bs_bs_k_factor,
                                              params, rng, &ch.pathloss_clamps);
            ch.h_bs_bs(n, k) = h;
            ch.h_bs_bs(k, n) = h;  // reciprocal link
        }

    for (std::size_t n = 0; n < K; ++n) {
        for (std::size_t k = 0; k < K; ++k) {
            const bool lit = target_in_sector[k];
            ch.g_mono_bi(n, k) = (lit && target_in_sector[n])
                                     ? bistatic_radar_power_gain(d_target[k], d_target[n], params)
                                     : 0.0;
            ch.tau_bs(n, k) = delay_via(s.bs_positions[k], x, s.bs_positions[n]);

            const double d_ue = distance(x, s.ue_positions[n]);
            if (lit) {
                // UE receives omnidirectionally: undo the BS receive gain
                ch.g_ue_echo(n, k) = bistatic_radar_power_gain(d_target[k], d_ue, params) /
                                     params.antenna_gain_rx;
            } else {
                ch.g_ue_echo(n, k) = 0.0;
            }
            ch.tau_ue(n, k) = delay_via(s.bs_positions[k], x, s.ue_positions[n]);
        }
        ch.beta_sq(n) = self_interference_power_gain(params.si_level, params.si_mode, p_max_w);
        ch.bandwidth_hz(n) = params.bandwidth_per_bs_hz[n];
        ch.noise_bs(n) = noise_power(params.bandwidth_per_bs_hz[n], params.noise_figure_bs_db);
        ch.noise_ue(n) = noise_power(params.bandwidth_per_bs_hz[n], params.noise_figure_ue_db);
    }
    return ch;
}

}  // namespace isac::channel
