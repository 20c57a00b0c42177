#pragma once

#include "isac/channel.hpp"

#include <random>

namespace testing {

/// Channel with every gain zero, unit bandwidth vector of 100 MHz and the given noise.
inline isac::channel::ChannelRealization blank_channel(Eigen::Index K, double noise = 1e-12)
{
    isac::channel::ChannelRealization ch;
    ch.h_comm = Eigen::MatrixXcd::Zero(K, K);
    ch.g_mono_bi = Eigen::MatrixXd::Zero(K, K);
    ch.g_ue_echo = Eigen::MatrixXd::Zero(K, K);
    ch.h_bs_bs = Eigen::MatrixXcd::Zero(K, K);
    ch.beta_sq = Eigen::VectorXd::Zero(K);
    ch.tau_bs = Eigen::MatrixXd::Zero(K, K);
    ch.tau_ue = Eigen::MatrixXd::Zero(K, K);
    ch.noise_ue = Eigen::VectorXd::Constant(K, noise);
    ch.noise_bs = Eigen::VectorXd::Constant(K, noise);
    ch.bandwidth_hz = Eigen::VectorXd::Constant(K, 100e6);
    return ch;
}

/// Random gains on a log scale around typical magnitudes of the default setup.
inline isac::channel::ChannelRealization random_channel(Eigen::Index K, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto logu = [&](double lo, double hi) { return std::pow(10.0, lo + (hi - lo) * u(rng)); };
    auto ch = blank_channel(K, 2.5e-12);
    for (Eigen::Index i = 0; i < K; ++i) {
        for (Eigen::Index j = 0; j < K; ++j) {
            ch.h_comm(i, j) = std::polar(std::sqrt(logu(i == j ? -10 : -12, i == j ? -8 : -10)), 6.28 * u(rng));
            ch.g_mono_bi(i, j) = logu(-14, -12);
            ch.g_ue_echo(i, j) = logu(-15, -13);
            if (i != j) ch.h_bs_bs(i, j) = std::polar(std::sqrt(logu(-12, -10)), 6.28 * u(rng));
        }
        ch.beta_sq(i) = logu(-11, -9);
    }
    return ch;
}

}  // namespace testing
