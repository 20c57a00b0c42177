#pragma once

#include "isac/rng.hpp"
#include "isac/scenario.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace isac::channel {

class ChannelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class SiMode {
    /// si_level is an attenuation in dB relative to the transmit power
    attenuation,
    /// si_level is the residual SI power in dBm reached when transmitting at P_max
    absolute_at_pmax,
};

struct ChannelParams {
    double carrier_frequency_hz = 3.5e9;
    std::vector<double> bandwidth_per_bs_hz{100e6, 100e6, 100e6};
    double subcarrier_spacing_hz = 30e3;
    int num_subcarriers = 3264;
    int num_symbols = 28;
    double rician_k_factor = 3.1622776601683795;  // linear (5 dB)
    double comm_pathloss_exponent = 2.5;
    double sensing_pathloss_exponent = 2.0;
    double bs_bs_pathloss_exponent = 2.5;
    double bs_bs_k_factor = 3.1622776601683795;  // linear
    double target_rcs_m2 = 5.011872336272722;   // 7 dBsm
    double antenna_gain_tx = 1.0;               // linear, applied inside the sector
    double antenna_gain_rx = 1.0;
    double si_level = -90.0;  // dB or dBm, see si_mode
    SiMode si_mode = SiMode::attenuation;
    double noise_figure_ue_db = 8.0;
    double noise_figure_bs_db = 8.0;
    double reference_distance_m = 1.0;
    double saturation_limit_w = 0.0;  // <= 0 disables the ADC check

    double wavelength_m() const;
    void validate(std::size_t num_bs) const;
};

/// All power gains for one Monte-Carlo draw. Index convention: (receiver, transmitter).
struct ChannelRealization {
    Eigen::MatrixXcd h_comm;     // (m, k): BS k -> UE m
    Eigen::MatrixXd g_mono_bi;   // (n, k): BS k -> target -> BS n, |gamma|^2
    Eigen::MatrixXd g_ue_echo;   // (m, k): BS k -> target -> UE m, |gamma|^2
    Eigen::MatrixXcd h_bs_bs;    // (n, k): BS k -> BS n, zero diagonal
    Eigen::VectorXd beta_sq;     // |beta_n|^2
    Eigen::MatrixXd tau_bs;      // (n, k) via target, s
    Eigen::MatrixXd tau_ue;      // (m, k) via target, s
    Eigen::VectorXd noise_ue;    // W
    Eigen::VectorXd noise_bs;    // W
    Eigen::VectorXd bandwidth_hz;
    std::size_t pathloss_clamps = 0;

    std::size_t num_bs() const { return static_cast<std::size_t>(beta_sq.size()); }
    Eigen::MatrixXd comm_power_gain() const { return h_comm.cwiseAbs2(); }
    Eigen::MatrixXd bs_bs_power_gain() const { return h_bs_bs.cwiseAbs2(); }
};

/// (lambda / (4 pi d0))^2 * (d0 / d)^exponent. Distances below d0 are clamped
/// to d0 and counted in `clamp_counter`.
double pathloss_power_gain(double d, double exponent, double wavelength, double d0,
                           std::size_t* clamp_counter = nullptr);

/// Rician coefficient with deterministic LoS phase -2 pi d / lambda and unit
/// CSCG diffuse part. A K-factor >= 1e6 is treated as pure LoS.
std::complex<double> rician_coefficient(double d, double exponent, double k_factor,
                                        const ChannelParams& params, Rng& rng,
                                        std::size_t* clamp_counter = nullptr);

/// BS-to-UE coefficient using the communication exponent and K-factor.
std::complex<double> rician_coefficient(double d, const ChannelParams& params, Rng& rng);

/// Bistatic radar equation G_tx G_rx lambda^2 sigma / ((4pi)^3 d_tx^2 d_rx^2),
/// each leg scaled by (d0/d)^(exponent-2) when the sensing exponent is not 2.
double bistatic_radar_power_gain(double d_tx, double d_rx, const ChannelParams& params);

/// |beta|^2 from the configured SI level. Throws ChannelError if >= 1.
double self_interference_power_gain(double si_level, SiMode mode, double p_max_w);

/// Thermal noise over `bandwidth_hz` with the given noise figure, in W.
double noise_power(double bandwidth_hz, double noise_figure_db);

/// (|a - x| + |x - b|) / c
double delay_via(const Position3D& from, const Position3D& via, const Position3D& to);

/// Delay from BS k to BS n, either through the target or along the direct path.
double propagation_delay(const scenario::NetworkScenario& s, std::size_t k, std::size_t n,
                         bool via_target);

ChannelRealization realize_channels(const scenario::NetworkScenario& s, const ChannelParams& params,
                                    double p_max_w, Rng& rng);

}  // namespace isac::channel
