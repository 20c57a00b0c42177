#include "isac/montecarlo.hpp"
#include "isac/records.hpp"
#include "isac/units.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace isac;
using namespace isac::mc;
using doctest::Approx;

namespace {

CampaignConfig small(int n, int workers = 1)
{
    CampaignConfig cfg;
    cfg.num_realizations = n;
    cfg.workers = workers;
    cfg.master_seed = 42;
    cfg.constraints.gamma_comm = Eigen::VectorXd::Ones(3);
    return cfg;
}

bool same(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    return a.size() == b.size() && (a.array() == b.array()).all();
}

}  // namespace

TEST_CASE("task seeds differ across sweep points and realizations")
{
    std::vector<std::uint64_t> seeds;
    for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t r = 0; r < 100; ++r) seeds.push_back(task_seed(1, s, r));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
    CHECK(task_seed(1, 0, 0) != task_seed(2, 0, 0));
    CHECK(task_seed(9, 3, 7) == task_seed(9, 3, 7));
}

TEST_CASE("results do not depend on the worker count")
{
    auto cfg = small(24);
    cfg.sweep = {SweepAxis::si_level, {-100.0, -80.0}};
    const auto a = run_campaign(cfg);
    cfg.workers = 8;
    const auto b = run_campaign(cfg);
    REQUIRE(a.size() == 48);
    REQUIRE(b.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].sweep_index == i / 24);
        CHECK(a[i].realization_id == i % 24);
        CHECK(b[i].realization_id == a[i].realization_id);
        CHECK(b[i].status == a[i].status);
        CHECK(same(a[i].ic.rho_w, b[i].ic.rho_w));
        CHECK(same(a[i].optimized.rho_w, b[i].optimized.rho_w));
        CHECK(same(a[i].optimized.range_std_m, b[i].optimized.range_std_m));
    }
    // and a single realization is reproducible on its own
    const auto tmpl = scenario::build_deployment(cfg.deployment);
    const auto one = run_realization(cfg, tmpl, 1, 5);
    CHECK(same(one.optimized.rho_w, a[24 + 5].optimized.rho_w));
}

TEST_CASE("optimized policy never loses on the max-min objective when IC is feasible")
{
    const auto recs = run_campaign(small(60));
    int checked = 0;
    for (const auto& r : recs) {
        if (r.censored || r.ic_infeasible) continue;
        const double ic = r.ic.sinr_sensing_overall.minCoeff();
        const double op = r.optimized.sinr_sensing_overall.minCoeff();
        CHECK(op >= ic * (1 - 1e-6));
        CHECK(r.optimized.range_std_m.maxCoeff() <= r.ic.range_std_m.maxCoeff() * (1 + 1e-6));
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("IC record is full power and censoring follows solver status")
{
    const auto cfg = small(40);
    const auto recs = run_campaign(cfg);
    for (const auto& r : recs) {
        CHECK((r.ic.rho_w.array() == cfg.constraints.p_max_w).all());
        const bool bad = r.status == opt::SolverStatus::infeasible ||
                         r.status == opt::SolverStatus::sensing_infeasible ||
                         r.status == opt::SolverStatus::solver_failure;
        CHECK(r.censored == bad);
        CHECK(r.optimized.empty() == r.censored);
        CHECK(r.ic.mean_range_std_m == Approx(r.ic.range_std_m.mean()).epsilon(1e-14));
        if (r.status == opt::SolverStatus::infeasible) CHECK(r.ic_infeasible);
    }
    const auto counts = censor_counts(recs, 1);
    REQUIRE(counts.size() == 1);
    CHECK(counts[0].censored + counts[0].kept == 40);
}

TEST_CASE("censor accounting under a threshold sweep")
{
    auto cfg = small(20);
    cfg.sweep = {SweepAxis::gamma_comm, {-10.0, 15.0, 90.0}};
    const auto recs = run_campaign(cfg);
    const auto counts = censor_counts(recs, 3);
    for (const auto& c : counts) CHECK(c.censored + c.kept == 20);
    CHECK(counts[0].censored <= counts[1].censored);
    CHECK(counts[2].kept == 0);
    std::vector<CampaignRecord> last(recs.begin() + 40, recs.end());
    CHECK_THROWS_AS(aggregate_cdf(last, Policy::optimized), EmptyCdfError);
}

TEST_CASE("empirical CDF against a sorting reference")
{
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> u(0, 3000);  // plenty of ties
    std::vector<double> xs(10000);
    for (auto& x : xs) x = u(rng) * 0.25;
    const auto cdf = empirical_cdf(xs);

    auto sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(!cdf.value.empty());
    CHECK(cdf.cum_prob.back() == 1.0);
    CHECK(cdf.value.front() == sorted.front());
    CHECK(cdf.value.back() == sorted.back());
    for (std::size_t i = 0; i < cdf.value.size(); ++i) {
        if (i > 0) {
            CHECK(cdf.value[i] > cdf.value[i - 1]);
            CHECK(cdf.cum_prob[i] > cdf.cum_prob[i - 1]);
        }
        const auto count = std::upper_bound(sorted.begin(), sorted.end(), cdf.value[i]) - sorted.begin();
        CHECK(cdf.cum_prob[i] == Approx(static_cast<double>(count) / 10000.0).epsilon(1e-15));
    }
    const auto uniq = std::unique(sorted.begin(), sorted.end()) - sorted.begin();
    CHECK(static_cast<std::ptrdiff_t>(cdf.value.size()) == uniq);
    CHECK(empirical_cdf({}).value.empty());
}

TEST_CASE("sweep accumulator averages per BS, in linear power")
{
    CampaignRecord r;
    r.sweep_value = -90.0;
    r.status = opt::SolverStatus::converged;
    auto fill = [](PolicyMetrics& m, double p, double s) {
        m.rho_w = Eigen::VectorXd::Constant(3, p);
        m.range_std_m = Eigen::VectorXd::Constant(3, s);
        m.range_std_m(2) = 2 * s;
        m.sinr_sensing_overall = Eigen::VectorXd::Ones(3);
        m.sinr_comm_overall = Eigen::VectorXd::Ones(3);
        m.mean_range_std_m = m.range_std_m.mean();
    };
    SweepAccumulator acc;
    fill(r.ic, 0.1, 10.0);
    fill(r.optimized, 0.01, 5.0);
    acc.add(r);
    fill(r.optimized, 0.03, 7.0);
    r.realization_id = 1;
    acc.add(r);
    CampaignRecord c = r;
    c.censored = true;
    c.optimized = {};
    acc.add(c);  // ignored

    const auto rows = acc.rows();
    REQUIRE(rows.size() == 6);
    for (const auto& row : rows) {
        CHECK(row.sweep_value == -90.0);
        CHECK(row.count == 2);
        const double s = row.policy == Policy::ic ? 10.0 : 6.0;
        CHECK(row.mean_range_std_m == Approx(row.bs_index == 2 ? 2 * s : s));
        // mean of 10 and 30 mW is 20 mW, not the dB midpoint
        CHECK(row.mean_power_dbm == Approx(row.policy == Policy::ic ? 20.0 : watts_to_dbm(0.02)));
    }
}

TEST_CASE("symmetric deployment gives statistically symmetric BSs")
{
    const auto recs = run_campaign(small(1000));
    const auto rows = aggregate_sweep(recs);
    for (auto p : {Policy::ic, Policy::optimized}) {
        std::vector<double> std_m, pw;
        for (const auto& row : rows)
            if (row.policy == p) {
                std_m.push_back(row.mean_range_std_m);
                pw.push_back(row.mean_power_dbm);
            }
        REQUIRE(std_m.size() == 3);
        const auto [lo, hi] = std::minmax_element(std_m.begin(), std_m.end());
        CHECK(*hi / *lo < 1.05);
        const auto [plo, phi] = std::minmax_element(pw.begin(), pw.end());
        CHECK(*phi - *plo < 0.25);  // about 6% in linear power
    }
}

TEST_CASE("campaign writer is byte-stable")
{
    auto cfg = small(6);
    cfg.sweep = {SweepAxis::si_level, {-100.0, -80.0}};
    auto run = [&](int workers) {
        cfg.workers = workers;
        std::ostringstream j, c, s;
        const auto sum = io::write_campaign(cfg, j, c, s);
        CHECK(sum.records == 12);
        return j.str() + c.str() + s.str();
    };
    const auto a = run(1);
    CHECK(a == run(1));
    CHECK(a == run(4));
}
