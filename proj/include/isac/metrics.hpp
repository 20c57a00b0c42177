#pragma once

#include "isac/channel.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace isac::metrics {

/// Transmit powers in watts, one per BS.
struct PowerVector {
    Eigen::VectorXd rho;

    PowerVector() = default;
    explicit PowerVector(Eigen::VectorXd watts) : rho(std::move(watts)) {}

    static PowerVector constant(std::size_t num_bs, double watts)
    {
        return PowerVector(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(num_bs), watts));
    }

    std::size_t size() const { return static_cast<std::size_t>(rho.size()); }
    double operator[](std::size_t k) const { return rho(static_cast<Eigen::Index>(k)); }

    /// 0 <= rho_k <= p_max (1 + rel_tol) for every k.
    bool within_box(double p_max, double rel_tol = 0.0) const;
};

/// Linear SINRs and range STDs for every BS/UE index.
struct SinrReport {
    Eigen::VectorXd comm_standalone;
    Eigen::VectorXd sensing_standalone;
    Eigen::VectorXd comm_overall;
    Eigen::VectorXd sensing_overall;
    Eigen::VectorXd range_std_m;

    double min_sensing_overall() const { return sensing_overall.minCoeff(); }
    double max_range_std() const { return range_std_m.maxCoeff(); }
    double mean_range_std() const { return range_std_m.mean(); }
};

double comm_sinr_standalone(const PowerVector& p, const channel::ChannelRealization& ch, std::size_t m);
double sensing_sinr_standalone(const PowerVector& p, const channel::ChannelRealization& ch, std::size_t n);
double comm_sinr_overall(const PowerVector& p, const channel::ChannelRealization& ch, std::size_t m);
double sensing_sinr_overall(const PowerVector& p, const channel::ChannelRealization& ch, std::size_t n);

/// Denominator of the overall sensing SINR of BS n (interference + SI + noise), W.
double sensing_interference_overall(const PowerVector& p, const channel::ChannelRealization& ch,
                                    std::size_t n);

/// c / (2 BW sqrt(2 sinr)); +infinity when sinr <= 0.
double range_std(double sinr_overall, double bandwidth_hz);

SinrReport evaluate_all(const PowerVector& p, const channel::ChannelRealization& ch);

}  // namespace isac::metrics
