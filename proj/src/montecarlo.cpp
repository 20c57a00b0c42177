#include "isac/montecarlo.hpp"

#include "isac/rng.hpp"
#include "isac/units.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace isac::mc {

const char* to_string(SweepAxis a)
{
    switch (a) {
    case SweepAxis::none: return "none";
    case SweepAxis::si_level: return "si_level";
    case SweepAxis::gamma_comm: return "gamma_comm";
    }
    return "?";
}

const char* to_string(Policy p) { return p == Policy::ic ? "ic" : "optimized"; }

void CampaignConfig::validate() const
{
    deployment.validate();
    channel.validate(static_cast<std::size_t>(deployment.num_bs));
    constraints.validate(static_cast<std::size_t>(deployment.num_bs));
    if (num_realizations < 1) throw std::invalid_argument("campaign.num_realizations: must be >= 1");
    if (workers < 1) throw std::invalid_argument("campaign.workers: must be >= 1");
    if (sweep.axis != SweepAxis::none && sweep.values.empty())
        throw std::invalid_argument("campaign.sweep.values: must not be empty");
    for (double v : sweep.values)
        if (!std::isfinite(v)) throw std::invalid_argument("campaign.sweep.values: entries must be finite");
}

std::size_t CampaignConfig::num_sweep_points() const
{
    return sweep.axis == SweepAxis::none ? 1 : sweep.values.size();
}

double CampaignConfig::sweep_value(std::size_t i) const
{
    return sweep.axis == SweepAxis::none ? std::numeric_limits<double>::quiet_NaN() : sweep.values.at(i);
}

std::uint64_t task_seed(std::uint64_t master_seed, std::size_t sweep_index, std::size_t realization_id)
{
    return child_seed(master_seed, {sweep_index, realization_id});
}

namespace {

PolicyMetrics evaluate_policy(const metrics::PowerVector& rho, const channel::ChannelRealization& ch,
                              double saturation_limit_w)
{
    const auto rep = metrics::evaluate_all(rho, ch);
    PolicyMetrics m;
    m.rho_w = rho.rho;
    m.sinr_comm_overall = rep.comm_overall;
    m.sinr_sensing_overall = rep.sensing_overall;
    m.range_std_m = rep.range_std_m;
    m.mean_range_std_m = rep.mean_range_std();
    if (saturation_limit_w > 0.0) m.adc_saturated = (rho.rho.array() * ch.beta_sq.array() > saturation_limit_w).any();
    return m;
}

}  // namespace

Instance draw_instance(const CampaignConfig& cfg, const scenario::DeploymentTemplate& tmpl, std::size_t sweep_index,
                       std::size_t realization_id)
{
    Instance in;
    in.params = cfg.channel;
    in.constraints = cfg.constraints;
    switch (cfg.sweep.axis) {
    case SweepAxis::none: break;
    case SweepAxis::si_level: in.params.si_level = cfg.sweep.values.at(sweep_index); break;
    case SweepAxis::gamma_comm:
        in.constraints.gamma_comm.setConstant(db_to_linear(cfg.sweep.values.at(sweep_index)));
        break;
    }
    Rng rng = make_rng(task_seed(cfg.master_seed, sweep_index, realization_id));
    in.scenario = scenario::sample_realization(tmpl, rng);
    in.channel = channel::realize_channels(in.scenario, in.params, in.constraints.p_max_w, rng);
    return in;
}

CampaignRecord run_realization(const CampaignConfig& cfg, const scenario::DeploymentTemplate& tmpl,
                               std::size_t sweep_index, std::size_t realization_id)
{
    const auto in = draw_instance(cfg, tmpl, sweep_index, realization_id);
    const auto& ch = in.channel;
    const auto& chp = in.params;
    const auto& cons = in.constraints;

    CampaignRecord rec;
    rec.realization_id = realization_id;
    rec.sweep_index = sweep_index;
    rec.sweep_value = cfg.sweep_value(sweep_index);

    const auto full = metrics::PowerVector::constant(ch.num_bs(), cons.p_max_w);
    rec.ic = evaluate_policy(full, ch, chp.saturation_limit_w);
    rec.ic_infeasible = ((rec.ic.sinr_comm_overall - cons.gamma_comm).array() < 0.0).any();

    const auto res = opt::sca_solve(ch, cons, std::nullopt, cfg.sca);
    rec.status = res.status;
    rec.iterations = res.iterations;
    rec.censored = res.status == opt::SolverStatus::infeasible ||
                   res.status == opt::SolverStatus::sensing_infeasible ||
                   res.status == opt::SolverStatus::solver_failure;
    if (!rec.censored) rec.optimized = evaluate_policy(res.rho_opt, ch, chp.saturation_limit_w);
    return rec;
}

void run_campaign(const CampaignConfig& cfg, const RecordSink& sink)
{
    cfg.validate();
    const auto tmpl = scenario::build_deployment(cfg.deployment);
    const std::size_t n_real = static_cast<std::size_t>(cfg.num_realizations);
    const std::size_t total = cfg.num_sweep_points() * n_real;
    const std::size_t workers = static_cast<std::size_t>(cfg.workers);
    const std::size_t block = std::max<std::size_t>(64, 16 * workers);

    std::vector<CampaignRecord> buf;
    for (std::size_t begin = 0; begin < total; begin += block) {
        const std::size_t end = std::min(total, begin + block);
        buf.assign(end - begin, CampaignRecord{});
        auto task = [&](std::size_t t) { buf[t - begin] = run_realization(cfg, tmpl, t / n_real, t % n_real); };
        if (workers == 1) {
            for (std::size_t t = begin; t < end; ++t) task(t);
        } else {
            std::atomic<std::size_t> next{begin};
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < std::min(workers, end - begin); ++w)
                pool.emplace_back([&] {
                    for (std::size_t t = next++; t < end; t = next++) task(t);
                });
        }
        for (const auto& r : buf) sink(r);
    }
}

std::vector<CampaignRecord> run_campaign(const CampaignConfig& cfg)
{
    std::vector<CampaignRecord> out;
    run_campaign(cfg, [&](const CampaignRecord& r) { out.push_back(r); });
    return out;
}

EmpiricalCdf empirical_cdf(std::vector<double> samples)
{
    EmpiricalCdf cdf;
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
        cdf.value.push_back(samples[i]);
        cdf.cum_prob.push_back(static_cast<double>(i + 1) / n);
    }
    return cdf;
}

namespace {

double field_value(const PolicyMetrics& m, CdfField f)
{
    switch (f) {
    case CdfField::mean_range_std: return m.mean_range_std_m;
    case CdfField::max_range_std: return m.range_std_m.maxCoeff();
    case CdfField::min_sensing_sinr: return m.sinr_sensing_overall.minCoeff();
    }
    return 0.0;
}

}  // namespace

EmpiricalCdf aggregate_cdf(std::span<const CampaignRecord> records, Policy policy, CdfField field)
{
    std::vector<double> samples;
    std::size_t censored = 0;
    for (const auto& r : records) {
        if (r.censored) {
            ++censored;
            continue;
        }
        samples.push_back(field_value(r.policy(policy), field));
    }
    if (samples.empty()) throw EmptyCdfError("aggregate_cdf: every record is censored");
    auto cdf = empirical_cdf(std::move(samples));
    cdf.censored = censored;
    return cdf;
}

void SweepAccumulator::add(const CampaignRecord& r)
{
    if (r.censored) return;
    if (by_sweep_.size() <= r.sweep_index) by_sweep_.resize(r.sweep_index + 1);
    for (Policy p : {Policy::ic, Policy::optimized}) {
        auto& cell = by_sweep_[r.sweep_index][static_cast<std::size_t>(p)];
        const auto& m = r.policy(p);
        const auto K = static_cast<std::size_t>(m.rho_w.size());
        if (cell.sum_std.empty()) {
            cell.sum_std.assign(K, 0.0);
            cell.sum_power.assign(K, 0.0);
        }
        cell.value = r.sweep_value;
        for (std::size_t k = 0; k < K; ++k) {
            cell.sum_std[k] += m.range_std_m(static_cast<Eigen::Index>(k));
            cell.sum_power[k] += m.rho_w(static_cast<Eigen::Index>(k));
        }
        ++cell.count;
    }
}

std::vector<SweepRow> SweepAccumulator::rows() const
{
    std::vector<SweepRow> out;
    for (std::size_t s = 0; s < by_sweep_.size(); ++s)
        for (Policy p : {Policy::ic, Policy::optimized}) {
            const auto& cell = by_sweep_[s][static_cast<std::size_t>(p)];
            if (cell.count == 0) continue;
            const double n = static_cast<double>(cell.count);
            for (std::size_t k = 0; k < cell.sum_std.size(); ++k)
                out.push_back({s, cell.value, p, k, cell.sum_std[k] / n, watts_to_dbm(cell.sum_power[k] / n),
                               cell.count});
        }
    return out;
}

std::vector<SweepRow> aggregate_sweep(std::span<const CampaignRecord> records)
{
    SweepAccumulator acc;
    for (const auto& r : records) acc.add(r);
    return acc.rows();
}

std::vector<CensorCount> censor_counts(std::span<const CampaignRecord> records, std::size_t num_sweep_points)
{
    std::vector<CensorCount> out(num_sweep_points);
    for (const auto& r : records) (r.censored ? out.at(r.sweep_index).censored : out.at(r.sweep_index).kept)++;
    return out;
}

}  // namespace isac::mc
