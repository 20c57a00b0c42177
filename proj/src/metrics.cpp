#include "isac/metrics.hpp"

#include "isac/units.hpp"

#include <cmath>
#include <limits>

namespace isac::metrics {

using channel::ChannelRealization;
using Eigen::Index;

bool PowerVector::within_box(double p_max, double rel_tol) const
{
    return (rho.array() >= 0.0).all() && (rho.array() <= p_max * (1.0 + rel_tol)).all();
}

double comm_sinr_standalone(const PowerVector& p, const ChannelRealization& ch, std::size_t m)
{
    const Index mi = static_cast<Index>(m);
    double interference = 0.0;
    for (Index k = 0; k < p.rho.size(); ++k)
        if (k != mi) interference += p.rho(k) * std::norm(ch.h_comm(mi, k));
    return p.rho(mi) * std::norm(ch.h_comm(mi, mi)) / (interference + ch.noise_ue(mi));
}

double sensing_sinr_standalone(const PowerVector& p, const ChannelRealization& ch, std::size_t n)
{
    const Index ni = static_cast<Index>(n);
    double interference = 0.0;
    for (Index k = 0; k < p.rho.size(); ++k)
        if (k != ni) interference += p.rho(k) * ch.g_mono_bi(ni, k);
    const double si = p.rho(ni) * ch.beta_sq(ni);
    return p.rho(ni) * ch.g_mono_bi(ni, ni) / (interference + si + ch.noise_bs(ni));
}

double comm_sinr_overall(const PowerVector& p, const ChannelRealization& ch, std::size_t m)
{
    const Index mi = static_cast<Index>(m);
    double interference = 0.0;
    for (Index k = 0; k < p.rho.size(); ++k)
        if (k != mi) interference += p.rho(k) * (std::norm(ch.h_comm(mi, k)) + ch.g_ue_echo(mi, k));
    const double desired = p.rho(mi) * std::norm(ch.h_comm(mi, mi)) + p.rho(mi) * ch.g_ue_echo(mi, mi);
    return desired / (interference + ch.noise_ue(mi));
}

double sensing_interference_overall(const PowerVector& p, const ChannelRealization& ch, std::size_t n)
{
    const Index ni = static_cast<Index>(n);
    double interference = 0.0;
    for (Index k = 0; k < p.rho.size(); ++k)
        if (k != ni) interference += p.rho(k) * (ch.g_mono_bi(ni, k) + std::norm(ch.h_bs_bs(ni, k)));
    return interference + p.rho(ni) * ch.beta_sq(ni) + ch.noise_bs(ni);
}

double sensing_sinr_overall(const PowerVector& p, const ChannelRealization& ch, std::size_t n)
{
    const Index ni = static_cast<Index>(n);
    return p.rho(ni) * ch.g_mono_bi(ni, ni) / sensing_interference_overall(p, ch, n);
}

double range_std(double sinr_overall, double bandwidth_hz)
{
    if (!(sinr_overall > 0.0)) return std::numeric_limits<double>::infinity();
    return kSpeedOfLight / (2.0 * bandwidth_hz * std::sqrt(2.0 * sinr_overall));
}

SinrReport evaluate_all(const PowerVector& p, const ChannelRealization& ch)
{
    const Index K = p.rho.size();
    SinrReport r;
    r.comm_standalone.resize(K);
    r.sensing_standalone.resize(K);
    r.comm_overall.resize(K);
    r.sensing_overall.resize(K);
    r.range_std_m.resize(K);
    for (Index i = 0; i < K; ++i) {
        const auto u = static_cast<std::size_t>(i);
        r.comm_standalone(i) = comm_sinr_standalone(p, ch, u);
        r.sensing_standalone(i) = sensing_sinr_standalone(p, ch, u);
        r.comm_overall(i) = comm_sinr_overall(p, ch, u);
        r.sensing_overall(i) = sensing_sinr_overall(p, ch, u);
        r.range_std_m(i) = range_std(r.sensing_overall(i), ch.bandwidth_hz(i));
    }
    return r;
}

}  // namespace isac::metrics
