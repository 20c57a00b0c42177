#include "isac/config.hpp"

#include "isac/units.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace isac::config {

using nlohmann::json;

namespace {

class Section {
public:
    Section(const json& node, std::string path, std::set<std::string> allowed)
        : node_(node), path_(std::move(path))
    {
        if (!node_.is_object()) fail(path_, "expected an object");
        for (auto it = node_.begin(); it != node_.end(); ++it)
            if (!allowed.count(it.key())) fail(field(it.key()), "unknown key");
    }

    [[noreturn]] static void fail(const std::string& path, const std::string& msg)
    {
        throw ConfigError(path + ": " + msg);
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const { return node_.contains(key); }
    const json& raw(const std::string& key) const { return node_.at(key); }

    void number(const std::string& key, double& out) const
    {
        if (!has(key)) return;
        const auto& v = raw(key);
        if (!v.is_number()) fail(field(key), "expected a number");
        out = v.get<double>();
    }

    void integer(const std::string& key, int& out) const
    {
        if (!has(key)) return;
        const auto& v = raw(key);
        if (!v.is_number_integer()) fail(field(key), "expected an integer");
        out = v.get<int>();
    }

    /// A number, or an array with one entry per BS.
    void per_bs(const std::string& key, std::size_t n, std::vector<double>& out) const
    {
        if (!has(key)) return;
        const auto& v = raw(key);
        if (v.is_number()) {
            out.assign(n, v.get<double>());
        } else if (v.is_array()) {
            out.clear();
            for (const auto& e : v) {
                if (!e.is_number()) fail(field(key), "expected numbers");
                out.push_back(e.get<double>());
            }
            if (out.size() != n) fail(field(key), "expected " + std::to_string(n) + " entries");
        } else {
            fail(field(key), "expected a number or an array");
        }
    }

    const json& node() const { return node_; }
    const std::string& path() const { return path_; }

private:
    const json& node_;
    std::string path_;
};

template <typename F>
void guarded(F&& f)
{
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

RunConfig parse(const json& doc)
{
    RunConfig rc;
    auto& cc = rc.campaign;
    const Section top(doc, "", {"deployment", "channel", "constraints", "campaign", "output"});

    if (top.has("deployment")) {
        const Section s(top.raw("deployment"), "deployment",
                        {"num_bs", "bs_height_m", "ue_height_m", "target_height_m", "inter_bs_distance_m",
                         "comm_coverage_radius_m", "sector_width_deg", "sector_boresights_deg"});
        auto& d = cc.deployment;
        s.integer("num_bs", d.num_bs);
        if (d.num_bs < 2) Section::fail("deployment.num_bs", "must be >= 2");
        s.number("bs_height_m", d.bs_height_m);
        s.number("ue_height_m", d.ue_height_m);
        s.number("target_height_m", d.target_height_m);
        s.number("inter_bs_distance_m", d.inter_bs_distance_m);
        s.number("comm_coverage_radius_m", d.comm_coverage_radius_m);
        s.number("sector_width_deg", d.sector_width_deg);
        d.sector_boresights_deg = scenario::boresights_toward_centroid(d.num_bs);
        s.per_bs("sector_boresights_deg", static_cast<std::size_t>(d.num_bs), d.sector_boresights_deg);
    }
    const auto K = static_cast<std::size_t>(cc.deployment.num_bs);
    cc.channel.bandwidth_per_bs_hz.assign(K, 100e6);
    cc.constraints.gamma_comm = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(K));

    if (top.has("channel")) {
        const Section s(top.raw("channel"), "channel",
                        {"carrier_frequency_hz", "bandwidth_hz", "subcarrier_spacing_hz", "num_subcarriers",
                         "num_symbols", "rician_k_factor_db", "comm_pathloss_exponent", "sensing_pathloss_exponent",
                         "bs_bs_pathloss_exponent", "bs_bs_k_factor_db", "target_rcs_dbsm", "antenna_gain_tx_dbi",
                         "antenna_gain_rx_dbi", "si_level_db", "si_level_dbm", "noise_figure_ue_db",
                         "noise_figure_bs_db", "reference_distance_m", "saturation_limit_dbm"});
        auto& c = cc.channel;
        s.number("carrier_frequency_hz", c.carrier_frequency_hz);
        s.per_bs("bandwidth_hz", K, c.bandwidth_per_bs_hz);
        s.number("subcarrier_spacing_hz", c.subcarrier_spacing_hz);
        s.integer("num_subcarriers", c.num_subcarriers);
        s.integer("num_symbols", c.num_symbols);
        double v = linear_to_db(c.rician_k_factor);
        s.number("rician_k_factor_db", v);
        c.rician_k_factor = db_to_linear(v);
        v = linear_to_db(c.bs_bs_k_factor);
        s.number("bs_bs_k_factor_db", v);
        c.bs_bs_k_factor = db_to_linear(v);
        s.number("comm_pathloss_exponent", c.comm_pathloss_exponent);
        s.number("sensing_pathloss_exponent", c.sensing_pathloss_exponent);
        s.number("bs_bs_pathloss_exponent", c.bs_bs_pathloss_exponent);
        v = linear_to_db(c.target_rcs_m2);
        s.number("target_rcs_dbsm", v);
        c.target_rcs_m2 = db_to_linear(v);
        v = linear_to_db(c.antenna_gain_tx);
        s.number("antenna_gain_tx_dbi", v);
        c.antenna_gain_tx = db_to_linear(v);
        v = linear_to_db(c.antenna_gain_rx);
        s.number("antenna_gain_rx_dbi", v);
        c.antenna_gain_rx = db_to_linear(v);
        if (s.has("si_level_db") && s.has("si_level_dbm"))
            Section::fail("channel.si_level_db", "give either si_level_db or si_level_dbm, not both");
        if (s.has("si_level_db")) {
            s.number("si_level_db", c.si_level);
            c.si_mode = channel::SiMode::attenuation;
        }
        if (s.has("si_level_dbm")) {
            s.number("si_level_dbm", c.si_level);
            c.si_mode = channel::SiMode::absolute_at_pmax;
        }
        s.number("noise_figure_ue_db", c.noise_figure_ue_db);
        s.number("noise_figure_bs_db", c.noise_figure_bs_db);
        s.number("reference_distance_m", c.reference_distance_m);
        if (s.has("saturation_limit_dbm")) {
            double dbm = 0.0;
            s.number("saturation_limit_dbm", dbm);
            c.saturation_limit_w = dbm_to_watts(dbm);
        }
    }

    if (top.has("constraints")) {
        const Section s(top.raw("constraints"), "constraints",
                        {"p_max_dbm", "gamma_comm_db", "epsilon", "max_iterations", "scaling"});
        auto& o = cc.constraints;
        double p = watts_to_dbm(o.p_max_w);
        s.number("p_max_dbm", p);
        o.p_max_w = dbm_to_watts(p);
        std::vector<double> g(K, 0.0);
        s.per_bs("gamma_comm_db", K, g);
        for (std::size_t m = 0; m < K; ++m) o.gamma_comm(static_cast<Eigen::Index>(m)) = db_to_linear(g[m]);
        s.number("epsilon", o.epsilon);
        s.integer("max_iterations", o.max_iterations);
        if (s.has("scaling")) {
            const auto& v = s.raw("scaling");
            if (v == "recentered") cc.sca.scaling = opt::Scaling::recentered;
            else if (v == "fixed") cc.sca.scaling = opt::Scaling::fixed;
            else Section::fail("constraints.scaling", "expected \"recentered\" or \"fixed\"");
        }
    }

    if (top.has("campaign")) {
        const Section s(top.raw("campaign"), "campaign",
                        {"num_realizations", "master_seed", "workers", "sweep"});
        s.integer("num_realizations", cc.num_realizations);
        s.integer("workers", cc.workers);
        if (s.has("master_seed")) {
            const auto& v = s.raw("master_seed");
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
                Section::fail("campaign.master_seed", "expected a non-negative integer");
            cc.master_seed = v.get<std::uint64_t>();
        }
        if (s.has("sweep")) {
            const Section w(s.raw("sweep"), "campaign.sweep", {"axis", "values"});
            if (!w.has("axis") || !w.raw("axis").is_string())
                Section::fail("campaign.sweep.axis", "expected \"si_level\" or \"gamma_comm_db\"");
            const auto axis = w.raw("axis").get<std::string>();
            if (axis == "si_level") cc.sweep.axis = mc::SweepAxis::si_level;
            else if (axis == "gamma_comm_db") cc.sweep.axis = mc::SweepAxis::gamma_comm;
            else Section::fail("campaign.sweep.axis", "expected \"si_level\" or \"gamma_comm_db\"");
            if (!w.has("values") || !w.raw("values").is_array())
                Section::fail("campaign.sweep.values", "expected an array of numbers");
            for (const auto& e : w.raw("values")) {
                if (!e.is_number()) Section::fail("campaign.sweep.values", "expected numbers");
                cc.sweep.values.push_back(e.get<double>());
            }
        }
    }

    if (top.has("output")) {
        const Section s(top.raw("output"), "output", {"dir", "verbosity"});
        if (s.has("dir")) {
            if (!s.raw("dir").is_string()) Section::fail("output.dir", "expected a string");
            rc.output_dir = s.raw("dir").get<std::string>();
        }
        s.integer("verbosity", rc.verbosity);
    }

    guarded([&] { cc.validate(); });
    guarded([&] { scenario::build_deployment(cc.deployment); });
    return rc;
}

RunConfig load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse(doc);
}

std::string reference()
{
    std::ostringstream os;
    os << R"(Configuration file (JSON, comments allowed). Every key is optional.

deployment.num_bs                  BS count K (default 3)
deployment.bs_height_m             BS altitude (10)
deployment.ue_height_m             UE altitude (1)
deployment.target_height_m         target altitude (1)
deployment.inter_bs_distance_m     ring side length (200)
deployment.comm_coverage_radius_m  UE placement disk radius (100)
deployment.sector_width_deg        sector width, (0, 180] (120)
deployment.sector_boresights_deg   per-BS azimuths (default: toward the ring center)
channel.carrier_frequency_hz       (3.5e9)
channel.bandwidth_hz               number or per-BS array (100e6)
channel.subcarrier_spacing_hz      (30e3)
channel.num_subcarriers            active subcarriers (3264)
channel.num_symbols                OFDM symbols (28)
channel.rician_k_factor_db         BS-UE Rician K-factor (5)
channel.comm_pathloss_exponent     BS-UE exponent (2.5)
channel.sensing_pathloss_exponent  echo exponent, 2 = radar equation (2)
channel.bs_bs_pathloss_exponent    BS-BS exponent (2.5)
channel.bs_bs_k_factor_db          BS-BS Rician K-factor (5)
channel.target_rcs_dbsm            target RCS (7)
channel.antenna_gain_tx_dbi        in-sector transmit gain on echo paths (0)
channel.antenna_gain_rx_dbi        in-sector receive gain on echo paths (0)
channel.si_level_db                SI attenuation relative to the transmit power (-90)
channel.si_level_dbm               alternative: residual SI power at P_max
channel.noise_figure_ue_db         (8)
channel.noise_figure_bs_db         (8)
channel.reference_distance_m       path-loss reference distance (1)
channel.saturation_limit_dbm       ADC saturation flag threshold (disabled)
constraints.p_max_dbm              per-BS power limit (23)
constraints.gamma_comm_db          number or per-UE array of SINR thresholds (0)
constraints.epsilon                SCA stop threshold, relative change of eta (1e-4)
constraints.max_iterations         SCA iteration cap (100)
constraints.scaling                "recentered" or "fixed" subproblem scaling (recentered)
campaign.num_realizations          realizations per sweep point (500)
campaign.master_seed               64-bit seed (1)
campaign.workers                   worker threads (1)
campaign.sweep.axis                "si_level" (unit of the si_level key) or "gamma_comm_db"
campaign.sweep.values              array of sweep points
output.dir                         campaign output directory ("out")
output.verbosity                   0 quiet, 1 normal (1)
)";
    return os.str();
}

}  // namespace isac::config
