#pragma once

#include "isac/channel.hpp"
#include "isac/metrics.hpp"
#include "isac/optimizer.hpp"
#include "isac/scenario.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace isac::mc {

enum class SweepAxis { none, si_level, gamma_comm };

const char* to_string(SweepAxis a);

struct Sweep {
    SweepAxis axis = SweepAxis::none;
    std::vector<double> values;  // dB (si_level per si_mode, gamma in dB)
};

struct CampaignConfig {
    scenario::DeploymentConfig deployment = scenario::default_deployment(3);
    channel::ChannelParams channel;
    opt::OptConstraints constraints;
    opt::ScaOptions sca;
    int num_realizations = 500;
    std::uint64_t master_seed = 1;
    Sweep sweep;
    int workers = 1;

    void validate() const;
    /// Number of sweep points (1 without a sweep).
    std::size_t num_sweep_points() const;
    /// NaN without a sweep.
    double sweep_value(std::size_t sweep_index) const;
};

enum class Policy { ic, optimized };

const char* to_string(Policy p);

struct PolicyMetrics {
    Eigen::VectorXd rho_w;
    Eigen::VectorXd sinr_comm_overall;
    Eigen::VectorXd sinr_sensing_overall;
    Eigen::VectorXd range_std_m;
    double mean_range_std_m = 0.0;
    bool adc_saturated = false;

    bool empty() const { return rho_w.size() == 0; }
};

struct CampaignRecord {
    std::size_t realization_id = 0;
    std::size_t sweep_index = 0;
    double sweep_value = 0.0;
    PolicyMetrics ic;
    PolicyMetrics optimized;  // empty when censored
    int iterations = 0;
    opt::SolverStatus status = opt::SolverStatus::solver_failure;
    bool censored = false;
    bool ic_infeasible = false;  // full power violates a communication threshold

    const PolicyMetrics& policy(Policy p) const { return p == Policy::ic ? ic : optimized; }
};

/// Seed of one (sweep point, realization) task.
std::uint64_t task_seed(std::uint64_t master_seed, std::size_t sweep_index, std::size_t realization_id);

/// One drawn realization with the sweep override applied.
struct Instance {
    scenario::NetworkScenario scenario;
    channel::ChannelParams params;
    opt::OptConstraints constraints;
    channel::ChannelRealization channel;
};

Instance draw_instance(const CampaignConfig& cfg, const scenario::DeploymentTemplate& tmpl, std::size_t sweep_index,
                       std::size_t realization_id);

/// Evaluates one realization: scenario draw, channels, IC policy, SCA.
CampaignRecord run_realization(const CampaignConfig& cfg, const scenario::DeploymentTemplate& tmpl,
                               std::size_t sweep_index, std::size_t realization_id);

using RecordSink = std::function<void(const CampaignRecord&)>;

/// Emits records ordered by (sweep index, realization id) regardless of the
/// worker count.
void run_campaign(const CampaignConfig& cfg, const RecordSink& sink);

std::vector<CampaignRecord> run_campaign(const CampaignConfig& cfg);

enum class CdfField { mean_range_std, max_range_std, min_sensing_sinr };

struct EmpiricalCdf {
    std::vector<double> value;
    std::vector<double> cum_prob;
    std::size_t censored = 0;
};

class EmptyCdfError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Step CDF over the non-censored records; ties collapse to one step.
EmpiricalCdf aggregate_cdf(std::span<const CampaignRecord> records, Policy policy,
                           CdfField field = CdfField::mean_range_std);

/// Same, over raw samples.
EmpiricalCdf empirical_cdf(std::vector<double> samples);

struct SweepRow {
    std::size_t sweep_index = 0;
    double sweep_value = 0.0;
    Policy policy = Policy::ic;
    std::size_t bs_index = 0;
    double mean_range_std_m = 0.0;
    double mean_power_dbm = 0.0;  // dBm of the mean linear power
    std::size_t count = 0;
};

/// Per sweep point, policy and BS: means over non-censored records.
class SweepAccumulator {
public:
    void add(const CampaignRecord& r);
    std::vector<SweepRow> rows() const;

private:
    struct Cell {
        double value = 0.0;
        std::vector<double> sum_std;
        std::vector<double> sum_power;
        std::size_t count = 0;
    };
    std::vector<std::array<Cell, 2>> by_sweep_;
};

std::vector<SweepRow> aggregate_sweep(std::span<const CampaignRecord> records);

struct CensorCount {
    std::size_t censored = 0;
    std::size_t kept = 0;
};

std::vector<CensorCount> censor_counts(std::span<const CampaignRecord> records, std::size_t num_sweep_points);

}  // namespace isac::mc
