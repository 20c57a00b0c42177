// isacpa: power allocation for networked ISAC, single instances and campaigns.

#include "isac/config.hpp"
#include "isac/montecarlo.hpp"
#include "isac/optimizer.hpp"
#include "isac/records.hpp"
#include "isac/units.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace isac;
namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, usage = 1, infeasible = 2, validation = 3 };

void print_policy_table(const channel::ChannelRealization& ch, const metrics::PowerVector& ic,
                        const metrics::PowerVector* optp)
{
    const auto a = metrics::evaluate_all(ic, ch);
    fmt::print("{:>3} {:>10} {:>10} {:>11} {:>11} {:>12} {:>12} {:>11} {:>11}\n", "bs", "P_ic_dBm", "P_opt_dBm",
               "comm_ic_dB", "comm_opt_dB", "sens_ic_dB", "sens_opt_dB", "std_ic_m", "std_opt_m");
    metrics::SinrReport b;
    if (optp) b = metrics::evaluate_all(*optp, ch);
    for (std::size_t n = 0; n < ch.num_bs(); ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        if (optp)
            fmt::print("{:>3} {:>10.3f} {:>10.3f} {:>11.3f} {:>11.3f} {:>12.3f} {:>12.3f} {:>11.4g} {:>11.4g}\n", n,
                       watts_to_dbm(ic[n]), watts_to_dbm((*optp)[n]), linear_to_db(a.comm_overall(i)),
                       linear_to_db(b.comm_overall(i)), linear_to_db(a.sensing_overall(i)),
                       linear_to_db(b.sensing_overall(i)), a.range_std_m(i), b.range_std_m(i));
        else
            fmt::print("{:>3} {:>10.3f} {:>10} {:>11.3f} {:>11} {:>12.3f} {:>12} {:>11.4g} {:>11}\n", n,
                       watts_to_dbm(ic[n]), "-", linear_to_db(a.comm_overall(i)), "-",
                       linear_to_db(a.sensing_overall(i)), "-", a.range_std_m(i), "-");
    }
}

int cmd_preview(const config::RunConfig& rc, std::size_t realization)
{
    const auto& cc = rc.campaign;
    const auto tmpl = scenario::build_deployment(cc.deployment);
    fmt::print("base stations\n");
    for (std::size_t n = 0; n < tmpl.num_bs(); ++n) {
        const auto& p = tmpl.bs_positions[n];
        fmt::print("  bs {}: ({:.2f}, {:.2f}, {:.2f}) m, boresight {:.1f} deg, width {:.1f} deg\n", n, p.x, p.y, p.z,
                   tmpl.sectors[n].boresight_deg, tmpl.sectors[n].width_deg);
    }
    fmt::print("sensing region: {} vertices, area {:.1f} m^2\n", tmpl.sensing_region.vertices().size(),
               tmpl.sensing_region.area());
    for (const auto& v : tmpl.sensing_region.vertices()) fmt::print("  ({:.2f}, {:.2f})\n", v.x, v.y);
    for (std::size_t n = 0; n < tmpl.comm_regions.size(); ++n)
        fmt::print("comm disk {}: center ({:.2f}, {:.2f}), radius {:.1f} m\n", n, tmpl.comm_regions[n].center.x,
                   tmpl.comm_regions[n].center.y, tmpl.comm_regions[n].radius);

    const auto in = mc::draw_instance(cc, tmpl, 0, realization);
    fmt::print("realization {} (seed {:#018x})\n", realization, mc::task_seed(cc.master_seed, 0, realization));
    for (std::size_t m = 0; m < in.scenario.ue_positions.size(); ++m) {
        const auto& u = in.scenario.ue_positions[m];
        fmt::print("  ue {}: ({:.2f}, {:.2f}, {:.2f}) m\n", m, u.x, u.y, u.z);
    }
    const auto& t = in.scenario.target_position;
    fmt::print("  target: ({:.2f}, {:.2f}, {:.2f}) m\n", t.x, t.y, t.z);
    print_policy_table(in.channel, metrics::PowerVector::constant(in.channel.num_bs(), in.constraints.p_max_w),
                       nullptr);
    return ok;
}

void print_certificate(const opt::CommFeasibility& f)
{
    fmt::print("communication constraints infeasible in the power box\n");
    fmt::print("Farkas certificate y (y >= 0, A'y >= 0, b'y < 0):\n");
    for (Eigen::Index i = 0; i < f.certificate.size(); ++i) fmt::print("  y[{}] = {:.6e}\n", i, f.certificate(i));
    if (f.rows_A.rows() == f.certificate.size()) {
        const Eigen::VectorXd aty = f.rows_A.transpose() * f.certificate;
        fmt::print("  min(A'y) = {:.3e}, b'y = {:.3e}\n", aty.minCoeff(), f.rows_b.dot(f.certificate));
    }
}

int cmd_solve(const config::RunConfig& rc, std::size_t sweep_index, std::size_t realization, bool oracle,
              const std::string& dump_dir)
{
    auto cc = rc.campaign;
    if (sweep_index >= cc.num_sweep_points()) {
        fmt::print(std::cerr, "error: --sweep-index {} out of range ({} points)\n", sweep_index,
                   cc.num_sweep_points());
        return usage;
    }
    if (!dump_dir.empty()) {
        std::error_code ec;
        fs::create_directories(dump_dir, ec);
        if (ec) {
            fmt::print(std::cerr, "error: cannot create {}: {}\n", dump_dir, ec.message());
            return usage;
        }
        cc.sca.dump_dir = dump_dir;
    }
    const auto tmpl = scenario::build_deployment(cc.deployment);
    const auto in = mc::draw_instance(cc, tmpl, sweep_index, realization);
    const auto& ch = in.channel;
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = opt::sca_solve(ch, in.constraints, std::nullopt, cc.sca);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    if (!std::isnan(cc.sweep_value(sweep_index)))
        fmt::print("sweep {} = {}\n", mc::to_string(cc.sweep.axis), cc.sweep_value(sweep_index));
    fmt::print("status {}, {} iterations, {} Newton steps, {:.1f} ms\n", opt::to_string(res.status), res.iterations,
               res.newton_steps, ms);
    if (res.status == opt::SolverStatus::infeasible) {
        print_certificate(res.feasibility);
        return infeasible;
    }
    const auto full = metrics::PowerVector::constant(ch.num_bs(), in.constraints.p_max_w);
    if (res.status == opt::SolverStatus::sensing_infeasible || res.status == opt::SolverStatus::solver_failure) {
        print_policy_table(ch, full, nullptr);
        return res.status == opt::SolverStatus::sensing_infeasible ? infeasible : validation;
    }
    fmt::print("eta trace (dB):");
    for (double e : res.eta_trace) fmt::print(" {:.4f}", linear_to_db(e));
    fmt::print("\nmin sensing SINR {:.6f} dB, relaxation gap {:.2e}, max KKT residual {:.2e}\n",
               linear_to_db(res.eta_opt), res.relaxation_gap, res.max_kkt_residual);
    print_policy_table(ch, full, &res.rho_opt);
    if (oracle) {
        const auto o = opt::bisection_oracle(ch, in.constraints);
        fmt::print("oracle: eta* {:.6f} dB ({} bisection steps), SCA / oracle = {:.9f}\n", linear_to_db(o.eta_star),
                   o.iterations, res.eta_opt / o.eta_star);
    }
    return ok;
}

bool write_outputs(const fs::path& dir, const mc::CampaignConfig& cc, int verbosity, io::CampaignSummary& summary)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        fmt::print(std::cerr, "error: cannot create {}: {}\n", dir.string(), ec.message());
        return false;
    }
    std::ofstream jsonl(dir / "records.jsonl", std::ios::binary);
    std::ofstream cdf(dir / "cdf.csv", std::ios::binary);
    std::ofstream sweep(dir / "sweep.csv", std::ios::binary);
    if (!jsonl || !cdf || !sweep) {
        fmt::print(std::cerr, "error: cannot write output files in {}\n", dir.string());
        return false;
    }
    const std::size_t total = cc.num_sweep_points() * static_cast<std::size_t>(cc.num_realizations);
    summary = io::write_campaign(cc, jsonl, cdf, sweep, [&](std::size_t done) {
        if (verbosity > 0 && (done % 100 == 0 || done == total)) fmt::print(std::cerr, "\r{}/{}", done, total);
    });
    if (verbosity > 0) fmt::print(std::cerr, "\n");
    for (auto s : summary.empty_points)
        fmt::print(std::cerr, "warning: sweep point {} has no uncensored record\n", s);
    jsonl.flush();
    return jsonl.good() && cdf.good() && sweep.good();
}

int cmd_campaign(const config::RunConfig& rc, const std::string& out)
{
    const auto& cc = rc.campaign;
    io::CampaignSummary summary;
    const auto t0 = std::chrono::steady_clock::now();
    if (!write_outputs(out.empty() ? rc.output_dir : out, cc, rc.verbosity, summary)) return usage;
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (rc.verbosity > 0) {
        fmt::print("{} records in {:.1f} s\n", summary.records, s);
        for (std::size_t i = 0; i < summary.counts.size(); ++i)
            fmt::print("  point {} ({}): {} kept, {} censored\n", i, cc.sweep_value(i), summary.counts[i].kept,
                       summary.counts[i].censored);
    }
    return ok;
}

/// Largest relative violation of the power box and the communication thresholds.
double constraint_violation(const metrics::PowerVector& rho, const channel::ChannelRealization& ch,
                            const opt::OptConstraints& cons)
{
    double v = 0.0;
    for (std::size_t n = 0; n < ch.num_bs(); ++n) {
        v = std::max(v, (rho[n] - cons.p_max_w) / cons.p_max_w);
        v = std::max(v, -rho[n] / cons.p_max_w);
        const double g = cons.gamma_comm(static_cast<Eigen::Index>(n));
        v = std::max(v, (g - metrics::comm_sinr_overall(rho, ch, n)) / g);
    }
    return v;
}

int cmd_validate(const config::RunConfig& rc, std::size_t instances)
{
    constexpr double kSoundTol = 1e-6;
    constexpr double kFeasTol = 1e-6;
    const auto& cc = rc.campaign;
    const auto tmpl = scenario::build_deployment(cc.deployment);
    std::size_t checked = 0, above = 0, violations = 0, mismatch = 0, other = 0;
    double max_gap = 0.0;
    for (std::size_t i = 0; i < instances; ++i) {
        const auto in = mc::draw_instance(cc, tmpl, 0, i);
        const auto res = opt::sca_solve(in.channel, in.constraints, std::nullopt, cc.sca);
        const auto o = opt::bisection_oracle(in.channel, in.constraints);
        const bool sca_ok = res.status == opt::SolverStatus::converged || res.status == opt::SolverStatus::max_iter;
        if (!sca_ok) {
            if (o.feasible && res.status == opt::SolverStatus::infeasible) {
                ++mismatch;
                fmt::print("instance {}: SCA reports infeasible, oracle found eta {:.6e}\n", i, o.eta_star);
            } else if (res.status != opt::SolverStatus::infeasible) {
                ++other;
                fmt::print("instance {}: status {}\n", i, opt::to_string(res.status));
            }
            continue;
        }
        if (!o.feasible) {
            ++mismatch;
            fmt::print("instance {}: SCA returned a point, oracle found none\n", i);
            continue;
        }
        ++checked;
        const double ratio = res.eta_opt / o.eta_star;
        max_gap = std::max(max_gap, std::abs(1.0 - ratio));
        if (ratio > 1.0 + kSoundTol) {
            ++above;
            fmt::print("instance {}: SCA {:.9e} above oracle {:.9e}\n", i, res.eta_opt, o.eta_star);
        }
        const double viol = constraint_violation(res.rho_opt, in.channel, in.constraints);
        if (viol > kFeasTol) {
            ++violations;
            fmt::print("instance {}: constraint violation {:.3e}\n", i, viol);
        }
    }
    fmt::print("{} instances, {} compared, max relative gap {:.3e}, {} above oracle, {} feasibility violations, "
               "{} status mismatches, {} other statuses\n",
               instances, checked, max_gap, above, violations, mismatch, other);
    return above == 0 && violations == 0 && mismatch == 0 ? ok : validation;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Transmit power allocation for networked ISAC"};
    app.require_subcommand(0, 1);
    app.fallthrough();  // global options may follow the subcommand
    app.footer(config::reference());
    std::string config_path;
    app.add_option("-c,--config", config_path, "JSON configuration (defaults when omitted)");
    bool show_keys = false;
    app.add_flag("--config-keys", show_keys, "List the configuration keys and exit");
    std::uint64_t seed = 0;
    auto* seed_opt = app.add_option("--seed", seed, "Override campaign.master_seed");
    int workers = 0;
    auto* workers_opt = app.add_option("-j,--workers", workers, "Override campaign.workers")->check(CLI::PositiveNumber);

    auto* preview = app.add_subcommand("preview", "Print the deployment and one drawn realization");
    std::size_t realization = 0;
    preview->add_option("-r,--realization", realization, "Realization index");

    auto* solve = app.add_subcommand("solve", "Solve one realization with SCA");
    std::size_t sweep_index = 0;
    bool oracle = false;
    std::string dump_dir;
    solve->add_option("-r,--realization", realization, "Realization index");
    solve->add_option("-s,--sweep-index", sweep_index, "Sweep point index");
    solve->add_flag("--oracle", oracle, "Also run the bisection oracle");
    solve->add_option("--dump-cbf", dump_dir, "Write every subproblem as CBF into this directory");

    auto* campaign = app.add_subcommand("campaign", "Run the Monte-Carlo campaign");
    std::string out;
    campaign->add_option("-o,--out", out, "Output directory (overrides output.dir)");

    auto* validate = app.add_subcommand("validate", "Compare SCA with the bisection oracle");
    std::size_t instances = 1000;
    validate->add_option("-n,--instances", instances, "Number of realizations")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }
    if (show_keys) {
        std::cout << config::reference();
        return ok;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return usage;
    }

    config::RunConfig rc;
    try {
        rc = config_path.empty() ? config::parse(nlohmann::json::object()) : config::load(config_path);
        if (*seed_opt) rc.campaign.master_seed = seed;
        if (*workers_opt) rc.campaign.workers = workers;
    } catch (const config::ConfigError& e) {
        fmt::print(std::cerr, "config error: {}\n", e.what());
        return usage;
    }

    try {
        if (*preview) return cmd_preview(rc, realization);
        if (*solve) return cmd_solve(rc, sweep_index, realization, oracle, dump_dir);
        if (*campaign) return cmd_campaign(rc, out);
        if (*validate) return cmd_validate(rc, instances);
    } catch (const std::invalid_argument& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return usage;
    }
    return usage;
}
