#pragma once

#include <functional>
#include <vector>

#include "isac/montecarlo.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <string>

namespace isac::io {

/// One JSON object per (record, policy). Infinite or undefined values are null.
nlohmann::json record_json(const mc::CampaignRecord& r, mc::Policy p);

/// Writes the IC line then the optimized line.
void write_record_lines(std::ostream& os, const mc::CampaignRecord& r);

/// Shortest text that parses back to the same double; "nan"/"inf" spelled out.
std::string format_double(double v);

void write_cdf_header(std::ostream& os);
/// Rows of one (sweep point, policy) CDF.
void write_cdf_rows(std::ostream& os, double sweep_value, mc::Policy p, const mc::EmpiricalCdf& cdf);

void write_sweep_csv(std::ostream& os, std::span<const mc::SweepRow> rows);

struct CampaignSummary {
    std::size_t records = 0;
    std::vector<mc::CensorCount> counts;
    std::vector<std::size_t> empty_points;  // sweep points without an uncensored record
};

/// Runs the campaign, streaming records.jsonl; only the per-record CDF samples
/// stay in memory. `progress` is called after each record.
CampaignSummary write_campaign(const mc::CampaignConfig& cc, std::ostream& jsonl, std::ostream& cdf,
                               std::ostream& sweep, const std::function<void(std::size_t)>& progress = {});

}  // namespace isac::io
