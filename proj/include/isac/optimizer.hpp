#pragma once

#include "isac/channel.hpp"
#include "isac/convex.hpp"
#include "isac/metrics.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace isac::opt {

struct OptConstraints {
    Eigen::VectorXd gamma_comm;  // minimum overall communication SINR per UE, linear
    double p_max_w = 0.19952623149688797;  // 23 dBm
    double epsilon = 1e-4;                 // relative to the previous eta
    int max_iterations = 100;

    void validate(std::size_t num_bs) const;
};

/// Linearization point of the DC surrogate, in unscaled units.
struct SubproblemState {
    Eigen::VectorXd xi_prev;  // W
    double eta_prev = 0.0;    // linear SINR
};

enum class SolverStatus { converged, max_iter, infeasible, sensing_infeasible, solver_failure };

const char* to_string(SolverStatus s);

struct CommFeasibility {
    bool feasible = false;
    bool full_power_feasible = false;  // rho = P_max 1 meets every threshold
    metrics::PowerVector witness;      // max-slack point when feasible
    double slack = 0.0;                // > 0 means the witness is strictly interior
    /// Without feasibility: y >= 0 with A'y >= 0, b'y <= -1 over the system
    /// rows (comm thresholds, then rho/P_max <= 1) in normalized power units.
    Eigen::VectorXd certificate;
    Eigen::MatrixXd rows_A;
    Eigen::VectorXd rows_b;
};

/// LP feasibility of the communication constraints in the power box.
CommFeasibility check_comm_feasible(const channel::ChannelRealization& ch, const OptConstraints& cons);

/// One convex surrogate subproblem over x = [rho/P_max (K), xi~ (K), eta~].
///
/// Internally scaled: xi~_n = xi_n / xi_scale_n and eta~ = eta / eta_scale, so
/// that the linearization point sits near (1, 1). SINRs are ratios, so the
/// scaling is exact and undone by `unscale`.
struct Subproblem {
    std::size_t K = 0;
    double p_max_w = 0.0;
    Eigen::VectorXd xi_scale;
    double eta_scale = 1.0;
    Eigen::VectorXd lin_offset;  // xi~_prev - eta~_prev per BS

    convex::ConvexProgram program;  // linear rows first: 4K structural, then K+1 sign rows
    Eigen::Index num_linear_rows = 0;
    Eigen::Index num_sign_rows = 0;

    /// Cone form of row n: L_n(x) >= w_n(x)^2 with both affine.
    struct Cone {
        Eigen::VectorXd l_coef;
        double l_const = 0.0;
        Eigen::VectorXd w_coef;
    };
    std::vector<Cone> cones;

    Eigen::Index num_vars() const { return static_cast<Eigen::Index>(2 * K + 1); }
    Eigen::VectorXd scale(const Eigen::VectorXd& rho_w, const Eigen::VectorXd& xi, double eta) const;
    void unscale(const Eigen::VectorXd& x, Eigen::VectorXd& rho_w, Eigen::VectorXd& xi, double& eta) const;

    /// Right-hand side of the convexified numerator bound, unscaled units.
    double surrogate_rhs(std::size_t n, double xi, double eta) const;
};

/// The DC surrogate 1/4[(xi+eta)^2 - 2 a (xi-eta) + a^2] with a = xi_prev - eta_prev.
double surrogate(double xi, double eta, double xi_prev, double eta_prev);

struct ScalingRef {
    Eigen::VectorXd xi;  // W
    double eta = 1.0;
};

/// Builds the subproblem linearized at `state`, scaled around `ref`.
Subproblem build_subproblem(const channel::ChannelRealization& ch, const OptConstraints& cons,
                            const SubproblemState& state, const ScalingRef& ref);

/// Scaled around the linearization point itself.
Subproblem build_subproblem(const channel::ChannelRealization& ch, const OptConstraints& cons,
                            const SubproblemState& state);

struct SubproblemSolution {
    convex::BarrierStatus status = convex::BarrierStatus::numerical_failure;
    metrics::PowerVector rho;
    Eigen::VectorXd xi;
    double eta = 0.0;
    double duality_gap = 0.0;  // in eta units
    double kkt_residual = 0.0;
    int newton_steps = 0;
};

SubproblemSolution solve_subproblem(const Subproblem& sub, const Eigen::VectorXd& start_scaled,
                                    const convex::BarrierOptions& opt = {});

/// Starts from the center of the power box.
SubproblemSolution solve_subproblem(const Subproblem& sub, const convex::BarrierOptions& opt = {});

/// Writes the subproblem in Conic Benchmark Format (CBF v3).
void write_cbf(const Subproblem& sub, std::ostream& os);

enum class Scaling {
    /// scale fixed at the initial point for the whole run
    fixed,
    /// re-scaled around every new linearization point
    recentered,
};

struct ScaOptions {
    Scaling scaling = Scaling::recentered;
    convex::BarrierOptions barrier{};
    /// when set, each subproblem is written to <dump_dir>/sub_<iter>.cbf
    std::optional<std::string> dump_dir;
};

struct SolverResult {
    metrics::PowerVector rho_opt;
    double eta_opt = 0.0;  // min overall sensing SINR achieved by rho_opt
    Eigen::VectorXd xi_opt;
    std::vector<double> eta_trace;  // eta^(0), eta^(1), ...
    int iterations = 0;
    SolverStatus status = SolverStatus::solver_failure;
    int failed_iteration = -1;
    CommFeasibility feasibility;
    /// (eta_opt - eta_trace.back()) / eta_opt; 0 when the relaxed bound is tight
    double relaxation_gap = 0.0;
    double max_kkt_residual = 0.0;
    long newton_steps = 0;
};

/// Default initialization: full power when it meets the thresholds, else the
/// max-slack witness; xi tight at that point and eta its min sensing SINR.
SubproblemState initial_state(const channel::ChannelRealization& ch, const metrics::PowerVector& rho0);

SolverResult sca_solve(const channel::ChannelRealization& ch, const OptConstraints& cons,
                       const std::optional<SubproblemState>& init = std::nullopt, const ScaOptions& opt = {});

/// Feasibility of the fixed-eta LP {min sensing SINR >= eta, P1.a, P1.b}. On
/// success `witness` (if given) receives the power vector.
bool sensing_feasible_at(const channel::ChannelRealization& ch, const OptConstraints& cons, double eta,
                         metrics::PowerVector* witness = nullptr);

struct OracleOptions {
    double abs_tol = 0.0;    // 0: 1e-12 of the upper bound
    double rel_tol = 1e-10;  // relative to the feasible lower end
    int max_iterations = 200;
};

struct OracleResult {
    bool feasible = false;
    double eta_star = 0.0;   // largest eta proven feasible
    double eta_upper = 0.0;  // smallest eta proven infeasible (or the a-priori bound)
    metrics::PowerVector rho_star;
    int iterations = 0;
};

/// Single-BS no-interference bound min_n P g_nn / (P beta_n + sigma_n^2).
double sensing_sinr_upper_bound(const channel::ChannelRealization& ch, double p_max_w);

/// Global optimum of the max-min sensing SINR problem by bisection over eta.
OracleResult bisection_oracle(const channel::ChannelRealization& ch, const OptConstraints& cons,
                              const OracleOptions& opt = {});

}  // namespace isac::opt
