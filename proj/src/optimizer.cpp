#include "isac/optimizer.hpp"

#include "isac/lp.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace isac::opt {

using channel::ChannelRealization;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using metrics::PowerVector;

const char* to_string(SolverStatus s)
{
    switch (s) {
    case SolverStatus::converged: return "converged";
    case SolverStatus::max_iter: return "max-iter";
    case SolverStatus::infeasible: return "infeasible";
    case SolverStatus::sensing_infeasible: return "sensing-infeasible";
    case SolverStatus::solver_failure: return "solver-failure";
    }
    return "?";
}

void OptConstraints::validate(std::size_t num_bs) const
{
    if (static_cast<std::size_t>(gamma_comm.size()) != num_bs)
        throw std::invalid_argument("constraints.gamma_comm: need exactly num_bs entries");
    if (!((gamma_comm.array() >= 0.0).all() && gamma_comm.allFinite()))
        throw std::invalid_argument("constraints.gamma_comm: entries must be finite and >= 0");
    if (!(p_max_w > 0.0 && std::isfinite(p_max_w)))
        throw std::invalid_argument("constraints.p_max_w: must be > 0");
    if (!(epsilon > 0.0)) throw std::invalid_argument("constraints.epsilon: must be > 0");
    if (max_iterations < 1) throw std::invalid_argument("constraints.max_iterations: must be >= 1");
}

namespace {

/// Effective power gains of the overall SINR expressions.
struct Gains {
    Index K = 0;
    VectorXd comm_desired;   // |h_mm|^2 + |gamma_mm|^2
    MatrixXd comm_interf;    // (m, k): |h_mk|^2 + |gamma_mk|^2, zero diagonal
    VectorXd sense_desired;  // |gamma_nn|^2
    MatrixXd sense_interf;   // (n, k): |gamma_nk|^2 + |h_nk|^2, zero diagonal
    VectorXd beta_sq;
    VectorXd noise_ue;
    VectorXd noise_bs;

    explicit Gains(const ChannelRealization& ch)
    {
        K = static_cast<Index>(ch.num_bs());
        const MatrixXd hc = ch.comm_power_gain() + ch.g_ue_echo;
        comm_desired = hc.diagonal();
        comm_interf = hc;
        comm_interf.diagonal().setZero();
        sense_desired = ch.g_mono_bi.diagonal();
        sense_interf = ch.g_mono_bi + ch.bs_bs_power_gain();
        sense_interf.diagonal().setZero();
        beta_sq = ch.beta_sq;
        noise_ue = ch.noise_ue;
        noise_bs = ch.noise_bs;
    }
};

/// Communication threshold rows over rho' = rho / P_max, each scaled to unit
/// infinity norm: a_m' rho' <= b_m.
void comm_rows(const Gains& g, const OptConstraints& cons, MatrixXd& A, VectorXd& b)
{
    const Index K = g.K;
    const double P = cons.p_max_w;
    A = MatrixXd::Zero(K, K);
    b = VectorXd::Zero(K);
    for (Index m = 0; m < K; ++m) {
        const double gam = cons.gamma_comm(m);
        for (Index k = 0; k < K; ++k)
            A(m, k) = (k == m) ? -P * g.comm_desired(m) / g.noise_ue(m) : gam * P * g.comm_interf(m, k) / g.noise_ue(m);
        b(m) = -gam;
        const double s = std::max(A.row(m).lpNorm<Eigen::Infinity>(), std::abs(b(m)));
        if (s > 0.0) {
            A.row(m) /= s;
            b(m) /= s;
        }
    }
}

double min_sensing(const PowerVector& p, const ChannelRealization& ch)
{
    double v = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < ch.num_bs(); ++n) v = std::min(v, metrics::sensing_sinr_overall(p, ch, n));
    return v;
}

}  // namespace

CommFeasibility check_comm_feasible(const ChannelRealization& ch, const OptConstraints& cons)
{
    cons.validate(ch.num_bs());
    const Gains g(ch);
    const Index K = g.K;
    CommFeasibility out;
    comm_rows(g, cons, out.rows_A, out.rows_b);

    const auto full = PowerVector::constant(ch.num_bs(), cons.p_max_w);
    out.full_power_feasible = true;
    for (std::size_t m = 0; m < ch.num_bs(); ++m)
        if (metrics::comm_sinr_overall(full, ch, m) < cons.gamma_comm(static_cast<Index>(m)))
            out.full_power_feasible = false;

    // max-slack LP over [rho', t]
    lp::LinearProgram slack;
    slack.A = MatrixXd::Zero(3 * K, K + 1);
    slack.b = VectorXd::Zero(3 * K);
    for (Index m = 0; m < K; ++m) {
        const double norm = out.rows_A.row(m).norm();
        if (norm > 0.0) {
            slack.A.block(m, 0, 1, K) = out.rows_A.row(m) / norm;
            slack.A(m, K) = 1.0;
            slack.b(m) = out.rows_b(m) / norm;
        } else {
            slack.b(m) = out.rows_b(m);
        }
    }
    for (Index k = 0; k < K; ++k) {
        slack.A(K + k, k) = 1.0;
        slack.A(K + k, K) = 1.0;
        slack.b(K + k) = 1.0;
        slack.A(2 * K + k, k) = -1.0;
        slack.A(2 * K + k, K) = 1.0;
    }
    slack.c = VectorXd::Zero(K + 1);
    slack.c(K) = 1.0;
    const auto res = lp::solve(slack);

    if (res.status == lp::LpStatus::optimal) {
        out.feasible = true;
        out.slack = res.x(K);
        const PowerVector interior(cons.p_max_w * res.x.head(K));
        out.witness = out.full_power_feasible ? full : interior;
        return out;
    }
    out.feasible = out.full_power_feasible;
    if (out.feasible) {
        out.witness = full;
        return out;
    }
    MatrixXd A(2 * K, K);
    VectorXd b(2 * K);
    A.topRows(K) = out.rows_A;
    A.bottomRows(K) = MatrixXd::Identity(K, K);
    b.head(K) = out.rows_b;
    b.tail(K).setOnes();
    out.rows_A = A;
    out.rows_b = b;
    out.certificate = lp::farkas_certificate(A, b);
    return out;
}

double surrogate(double xi, double eta, double xi_prev, double eta_prev)
{
    const double a = xi_prev - eta_prev;
    return 0.25 * ((xi + eta) * (xi + eta) - 2.0 * a * (xi - eta) + a * a);
}

VectorXd Subproblem::scale(const VectorXd& rho_w, const VectorXd& xi, double eta) const
{
    const Index k = static_cast<Index>(K);
    VectorXd x(2 * k + 1);
    x.head(k) = rho_w / p_max_w;
    x.segment(k, k) = xi.cwiseQuotient(xi_scale);
    x(2 * k) = eta / eta_scale;
    return x;
}

void Subproblem::unscale(const VectorXd& x, VectorXd& rho_w, VectorXd& xi, double& eta) const
{
    const Index k = static_cast<Index>(K);
    rho_w = x.head(k) * p_max_w;
    xi = x.segment(k, k).cwiseProduct(xi_scale);
    eta = x(2 * k) * eta_scale;
}

double Subproblem::surrogate_rhs(std::size_t n, double xi, double eta) const
{
    const Index i = static_cast<Index>(n);
    const double xs = xi / xi_scale(i);
    const double es = eta / eta_scale;
    const double a = lin_offset(i);
    const double v = 0.25 * ((xs + es) * (xs + es) - 2.0 * a * (xs - es) + a * a);
    return v * xi_scale(i) * eta_scale;
}

Subproblem build_subproblem(const ChannelRealization& ch, const OptConstraints& cons, const SubproblemState& state,
                            const ScalingRef& ref)
{
    const Gains g(ch);
    const Index K = g.K;
    const double P = cons.p_max_w;
    Subproblem sub;
    sub.K = static_cast<std::size_t>(K);
    sub.p_max_w = P;
    sub.xi_scale = ref.xi;
    for (Index n = 0; n < K; ++n)
        if (!(sub.xi_scale(n) > 0.0)) sub.xi_scale(n) = g.noise_bs(n);
    sub.eta_scale = ref.eta > 0.0 ? ref.eta : 1.0;
    const double q = sub.eta_scale;

    sub.lin_offset.resize(K);
    for (Index n = 0; n < K; ++n) sub.lin_offset(n) = state.xi_prev(n) / sub.xi_scale(n) - state.eta_prev / q;

    const Index nv = 2 * K + 1;
    const Index eta_ix = 2 * K;
    auto& prog = sub.program;
    prog.c = VectorXd::Zero(nv);
    prog.c(eta_ix) = -1.0;  // maximize eta~

    sub.num_linear_rows = 4 * K;
    sub.num_sign_rows = K + 1;
    prog.A = MatrixXd::Zero(sub.num_linear_rows + sub.num_sign_rows, nv);
    prog.b = VectorXd::Zero(sub.num_linear_rows + sub.num_sign_rows);

    MatrixXd Ac;
    VectorXd bc;
    comm_rows(g, cons, Ac, bc);
    prog.A.block(0, 0, K, K) = Ac;
    prog.b.head(K) = bc;
    for (Index k = 0; k < K; ++k) {
        prog.A(K + k, k) = 1.0;  // rho' <= 1
        prog.b(K + k) = 1.0;
        prog.A(2 * K + k, k) = -1.0;  // rho' >= 0
    }
    for (Index n = 0; n < K; ++n) {
        const Index row = 3 * K + n;
        const double s = sub.xi_scale(n);
        for (Index k = 0; k < K; ++k)
            prog.A(row, k) = (k == n) ? P * g.beta_sq(n) / s : P * g.sense_interf(n, k) / s;
        prog.A(row, K + n) = -1.0;
        prog.b(row) = -g.noise_bs(n) / s;
    }
    for (Index n = 0; n < K; ++n) prog.A(4 * K + n, K + n) = -1.0;  // xi~ >= 0
    prog.A(5 * K, eta_ix) = -1.0;                                     // eta~ >= 0

    for (Index n = 0; n < K; ++n) {
        const double a = sub.lin_offset(n);
        const double gt = P * g.sense_desired(n) / (sub.xi_scale(n) * q);
        convex::QuadraticConstraint qc;
        qc.P = MatrixXd::Zero(nv, nv);
        qc.P(K + n, K + n) = 0.5;
        qc.P(K + n, eta_ix) = 0.5;
        qc.P(eta_ix, K + n) = 0.5;
        qc.P(eta_ix, eta_ix) = 0.5;
        qc.q = VectorXd::Zero(nv);
        qc.q(n) = -gt;
        qc.q(K + n) = -0.5 * a;
        qc.q(eta_ix) = 0.5 * a;
        qc.r = 0.25 * a * a;
        prog.quadratic.push_back(std::move(qc));

        Subproblem::Cone cone;
        cone.l_coef = VectorXd::Zero(nv);
        cone.l_coef(n) = gt;
        cone.l_coef(K + n) = 0.5 * a;
        cone.l_coef(eta_ix) = -0.5 * a;
        cone.l_const = -0.25 * a * a;
        cone.w_coef = VectorXd::Zero(nv);
        cone.w_coef(K + n) = 0.5;
        cone.w_coef(eta_ix) = 0.5;
        sub.cones.push_back(std::move(cone));
    }
    return sub;
}

Subproblem build_subproblem(const ChannelRealization& ch, const OptConstraints& cons, const SubproblemState& state)
{
    return build_subproblem(ch, cons, state, ScalingRef{state.xi_prev, state.eta_prev});
}

SubproblemSolution solve_subproblem(const Subproblem& sub, const VectorXd& start_scaled,
                                    const convex::BarrierOptions& opt)
{
    SubproblemSolution sol;
    const auto res = convex::solve(sub.program, start_scaled, opt);
    sol.status = res.status;
    sol.newton_steps = res.newton_steps;
    if (res.status != convex::BarrierStatus::optimal) return sol;
    VectorXd rho;
    sub.unscale(res.x, rho, sol.xi, sol.eta);
    sol.rho = PowerVector(rho.cwiseMax(0.0));
    sol.duality_gap = res.duality_gap * sub.eta_scale;
    sol.kkt_residual = convex::kkt_residual(sub.program, res);
    return sol;
}

SubproblemSolution solve_subproblem(const Subproblem& sub, const convex::BarrierOptions& opt)
{
    const Index K = static_cast<Index>(sub.K);
    VectorXd x = VectorXd::Zero(2 * K + 1);
    x.head(K).setConstant(0.5);
    x.segment(K, K).setOnes();
    return solve_subproblem(sub, x, opt);
}

void write_cbf(const Subproblem& sub, std::ostream& os)
{
    const auto& prog = sub.program;
    const Index nv = sub.num_vars();
    const Index ml = prog.A.rows();
    const Index K = static_cast<Index>(sub.K);
    os.precision(17);
    os << "# SCA subproblem; x = [rho/P_max (" << K << "), xi/xi_scale (" << K << "), eta/eta_scale]\n";
    os << "# P_max_w " << sub.p_max_w << "\n# eta_scale " << sub.eta_scale << "\n# xi_scale";
    for (Index n = 0; n < K; ++n) os << ' ' << sub.xi_scale(n);
    os << "\nVER\n3\n\nOBJSENSE\nMAX\n\nVAR\n" << nv << " 1\nF " << nv << "\n\n";
    os << "CON\n" << ml + 3 * K << ' ' << 1 + K << "\nL- " << ml << '\n';
    for (Index n = 0; n < K; ++n) os << "QR 3\n";
    os << "\nOBJACOORD\n1\n" << 2 * K << " 1\n\n";

    std::vector<std::tuple<Index, Index, double>> a;
    std::vector<std::pair<Index, double>> b;
    for (Index i = 0; i < ml; ++i) {
        for (Index j = 0; j < nv; ++j)
            if (prog.A(i, j) != 0.0) a.emplace_back(i, j, prog.A(i, j));
        if (prog.b(i) != 0.0) b.emplace_back(i, -prog.b(i));
    }
    for (Index n = 0; n < K; ++n) {
        const Index base = ml + 3 * n;
        const auto& c = sub.cones[static_cast<std::size_t>(n)];
        for (Index j = 0; j < nv; ++j) {
            if (c.l_coef(j) != 0.0) a.emplace_back(base, j, c.l_coef(j));
            if (c.w_coef(j) != 0.0) a.emplace_back(base + 2, j, c.w_coef(j));
        }
        if (c.l_const != 0.0) b.emplace_back(base, c.l_const);
        b.emplace_back(base + 1, 0.5);
    }
    os << "ACOORD\n" << a.size() << '\n';
    for (const auto& [i, j, v] : a) os << i << ' ' << j << ' ' << v << '\n';
    os << "\nBCOORD\n" << b.size() << '\n';
    for (const auto& [i, v] : b) os << i << ' ' << v << '\n';
}

SubproblemState initial_state(const ChannelRealization& ch, const PowerVector& rho0)
{
    SubproblemState s;
    const auto K = ch.num_bs();
    s.xi_prev.resize(static_cast<Index>(K));
    for (std::size_t n = 0; n < K; ++n)
        s.xi_prev(static_cast<Index>(n)) = metrics::sensing_interference_overall(rho0, ch, n);
    s.eta_prev = min_sensing(rho0, ch);
    return s;
}

SolverResult sca_solve(const ChannelRealization& ch, const OptConstraints& cons,
                       const std::optional<SubproblemState>& init, const ScaOptions& opt)
{
    SolverResult out;
    out.feasibility = check_comm_feasible(ch, cons);
    if (!out.feasibility.feasible) {
        out.status = SolverStatus::infeasible;
        return out;
    }
    PowerVector rho = out.feasibility.witness;
    if ((ch.g_mono_bi.diagonal().array() <= 0.0).any()) {
        out.status = SolverStatus::sensing_infeasible;
        out.rho_opt = rho;
        out.eta_opt = 0.0;
        return out;
    }

    SubproblemState state = init ? *init : initial_state(ch, rho);
    const ScalingRef fixed_ref{state.xi_prev, state.eta_prev};
    out.eta_trace.push_back(state.eta_prev);
    out.status = SolverStatus::max_iter;

    for (int it = 1; it <= cons.max_iterations; ++it) {
        const Subproblem sub = build_subproblem(
            ch, cons, state, opt.scaling == Scaling::fixed ? fixed_ref : ScalingRef{state.xi_prev, state.eta_prev});
        if (opt.dump_dir) {
            std::filesystem::create_directories(*opt.dump_dir);
            std::ofstream f(std::filesystem::path(*opt.dump_dir) / ("sub_" + std::to_string(it) + ".cbf"));
            write_cbf(sub, f);
        }
        const auto sol = solve_subproblem(sub, sub.scale(rho.rho, state.xi_prev, state.eta_prev), opt.barrier);
        out.newton_steps += sol.newton_steps;
        if (sol.status != convex::BarrierStatus::optimal) {
            out.status = SolverStatus::solver_failure;
            out.failed_iteration = it;
            break;
        }
        out.max_kkt_residual = std::max(out.max_kkt_residual, sol.kkt_residual);
        const double prev = state.eta_prev;
        rho = sol.rho;
        state = SubproblemState{sol.xi, sol.eta};
        out.eta_trace.push_back(sol.eta);
        out.iterations = it;
        if (std::abs(sol.eta - prev) < cons.epsilon * std::max(prev, std::numeric_limits<double>::min())) {
            out.status = SolverStatus::converged;
            break;
        }
    }
    out.rho_opt = rho;
    out.xi_opt = state.xi_prev;
    out.eta_opt = min_sensing(rho, ch);
    if (out.eta_opt > 0.0) out.relaxation_gap = (out.eta_opt - out.eta_trace.back()) / out.eta_opt;
    return out;
}

bool sensing_feasible_at(const ChannelRealization& ch, const OptConstraints& cons, double eta, PowerVector* witness)
{
    const Gains g(ch);
    const Index K = g.K;
    const double P = cons.p_max_w;
    lp::LinearProgram prog;
    prog.A = MatrixXd::Zero(3 * K, K);
    prog.b = VectorXd::Zero(3 * K);
    MatrixXd Ac;
    VectorXd bc;
    comm_rows(g, cons, Ac, bc);
    prog.A.topRows(K) = Ac;
    prog.b.head(K) = bc;
    prog.A.block(K, 0, K, K) = MatrixXd::Identity(K, K);
    prog.b.segment(K, K).setOnes();
    for (Index n = 0; n < K; ++n) {
        const Index row = 2 * K + n;
        const double sig = g.noise_bs(n);
        for (Index k = 0; k < K; ++k)
            prog.A(row, k) = (k == n) ? (eta * P * g.beta_sq(n) - P * g.sense_desired(n)) / sig
                                      : eta * P * g.sense_interf(n, k) / sig;
        prog.b(row) = -eta;
        const double s = std::max(prog.A.row(row).lpNorm<Eigen::Infinity>(), std::abs(prog.b(row)));
        if (s > 0.0) {
            prog.A.row(row) /= s;
            prog.b(row) /= s;
        }
    }
    prog.c = VectorXd::Zero(K);
    const auto r = lp::solve(prog);
    if (r.status != lp::LpStatus::optimal) return false;
    if (witness) *witness = PowerVector(P * r.x.cwiseMin(1.0));
    return true;
}

double sensing_sinr_upper_bound(const ChannelRealization& ch, double p_max_w)
{
    double ub = std::numeric_limits<double>::infinity();
    for (Index n = 0; n < static_cast<Index>(ch.num_bs()); ++n)
        ub = std::min(ub, p_max_w * ch.g_mono_bi(n, n) / (p_max_w * ch.beta_sq(n) + ch.noise_bs(n)));
    return ub;
}

OracleResult bisection_oracle(const ChannelRealization& ch, const OptConstraints& cons, const OracleOptions& opt)
{
    cons.validate(ch.num_bs());
    OracleResult out;
    PowerVector w;
    if (!sensing_feasible_at(ch, cons, 0.0, &w)) return out;
    out.feasible = true;
    out.rho_star = w;
    double lo = 0.0;
    double hi = sensing_sinr_upper_bound(ch, cons.p_max_w);
    out.eta_upper = hi;
    if (hi <= 0.0) return out;
    if (sensing_feasible_at(ch, cons, hi, &w)) {
        out.eta_star = hi;
        out.rho_star = w;
        return out;
    }
    const double abs_tol = opt.abs_tol > 0.0 ? opt.abs_tol : 1e-12 * hi;
    while (out.iterations < opt.max_iterations && hi - lo > std::max(abs_tol, opt.rel_tol * lo)) {
        const double mid = 0.5 * (lo + hi);
        ++out.iterations;
        if (sensing_feasible_at(ch, cons, mid, &w)) {
            lo = mid;
            out.rho_star = w;
        } else {
            hi = mid;
        }
    }
    out.eta_star = lo;
    out.eta_upper = hi;
    return out;
}

}  // namespace isac::opt
