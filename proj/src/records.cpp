#include "isac/records.hpp"

#include "isac/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

namespace isac::io {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector_json(const Eigen::VectorXd& v, double (*f)(double))
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(finite_or_null(f(v(i))));
    return a;
}

double identity(double v) { return v; }

}  // namespace

json record_json(const mc::CampaignRecord& r, mc::Policy p)
{
    const auto& m = r.policy(p);
    json j;
    j["realization_id"] = r.realization_id;
    j["sweep_value"] = finite_or_null(r.sweep_value);
    j["policy"] = mc::to_string(p);
    j["rho_dbm"] = vector_json(m.rho_w, watts_to_dbm);
    j["sinr_comm_db"] = vector_json(m.sinr_comm_overall, linear_to_db);
    j["sinr_sensing_db"] = vector_json(m.sinr_sensing_overall, linear_to_db);
    j["range_std_m"] = vector_json(m.range_std_m, identity);
    j["mean_range_std_m"] = m.empty() ? json(nullptr) : finite_or_null(m.mean_range_std_m);
    if (p == mc::Policy::ic) {
        j["iterations"] = 0;
        j["status"] = r.ic_infeasible ? "ic_infeasible" : "feasible";
    } else {
        j["iterations"] = r.iterations;
        j["status"] = opt::to_string(r.status);
    }
    j["censored"] = r.censored;
    j["adc_saturated"] = m.adc_saturated;
    return j;
}

void write_record_lines(std::ostream& os, const mc::CampaignRecord& r)
{
    os << record_json(r, mc::Policy::ic).dump() << '\n';
    os << record_json(r, mc::Policy::optimized).dump() << '\n';
}

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_cdf_header(std::ostream& os) { os << "sweep_value,policy,value_m,cum_prob\n"; }

void write_cdf_rows(std::ostream& os, double sweep_value, mc::Policy p, const mc::EmpiricalCdf& cdf)
{
    const std::string sv = std::isnan(sweep_value) ? "" : format_double(sweep_value);
    for (std::size_t i = 0; i < cdf.value.size(); ++i)
        os << sv << ',' << mc::to_string(p) << ',' << format_double(cdf.value[i]) << ','
           << format_double(cdf.cum_prob[i]) << '\n';
}

void write_sweep_csv(std::ostream& os, std::span<const mc::SweepRow> rows)
{
    os << "sweep_value,policy,bs_index,mean_range_std_m,mean_power_dbm\n";
    for (const auto& r : rows) {
        const std::string sv = std::isnan(r.sweep_value) ? "" : format_double(r.sweep_value);
        os << sv << ',' << mc::to_string(r.policy) << ',' << r.bs_index << ',' << format_double(r.mean_range_std_m)
           << ',' << format_double(r.mean_power_dbm) << '\n';
    }
}

CampaignSummary write_campaign(const mc::CampaignConfig& cc, std::ostream& jsonl, std::ostream& cdf,
                               std::ostream& sweep, const std::function<void(std::size_t)>& progress)
{
    const std::size_t points = cc.num_sweep_points();
    CampaignSummary summary;
    summary.counts.assign(points, {});
    std::vector<std::array<std::vector<double>, 2>> samples(points);
    mc::SweepAccumulator acc;
    mc::run_campaign(cc, [&](const mc::CampaignRecord& r) {
        write_record_lines(jsonl, r);
        acc.add(r);
        auto& c = summary.counts[r.sweep_index];
        if (r.censored) {
            ++c.censored;
        } else {
            ++c.kept;
            samples[r.sweep_index][0].push_back(r.ic.mean_range_std_m);
            samples[r.sweep_index][1].push_back(r.optimized.mean_range_std_m);
        }
        ++summary.records;
        if (progress) progress(summary.records);
    });

    write_cdf_header(cdf);
    for (std::size_t s = 0; s < points; ++s) {
        if (samples[s][0].empty()) {
            summary.empty_points.push_back(s);
            continue;
        }
        write_cdf_rows(cdf, cc.sweep_value(s), mc::Policy::ic, mc::empirical_cdf(std::move(samples[s][0])));
        write_cdf_rows(cdf, cc.sweep_value(s), mc::Policy::optimized, mc::empirical_cdf(std::move(samples[s][1])));
    }
    const auto rows = acc.rows();
    write_sweep_csv(sweep, rows);
    return summary;
}

}  // namespace isac::io
