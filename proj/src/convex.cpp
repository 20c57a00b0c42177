#include "isac/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isac::convex {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(BarrierStatus s)
{
    switch (s) {
    case BarrierStatus::optimal: return "optimal";
    case BarrierStatus::infeasible: return "infeasible";
    case BarrierStatus::numerical_failure: return "numerical-failure";
    }
    return "?";
}

double ConvexProgram::max_constraint(const VectorXd& x) const
{
    double v = -std::numeric_limits<double>::infinity();
    if (A.rows() > 0) v = (A * x - b).maxCoeff();
    for (const auto& q : quadratic) v = std::max(v, q.value(x));
    return v;
}

namespace {

/// Constraint values, all must be < 0 for the barrier to be defined.
bool slacks(const ConvexProgram& p, const VectorXd& x, VectorXd& f)
{
    const Index ml = p.A.rows();
    f.resize(p.num_constraints());
    if (ml > 0) f.head(ml) = p.A * x - p.b;
    for (std::size_t i = 0; i < p.quadratic.size(); ++i) f(ml + static_cast<Index>(i)) = p.quadratic[i].value(x);
    return (f.array() < 0.0).all();
}

double barrier_value(const ConvexProgram& p, double t, const VectorXd& x, bool& ok)
{
    VectorXd f;
    ok = slacks(p, x, f);
    if (!ok) return std::numeric_limits<double>::infinity();
    return t * p.c.dot(x) - (-f.array()).log().sum();
}

// Starting points closer than this to the boundary go through phase I first:
// Newton steps from there are dominated by rounding in the barrier Hessian.
constexpr double kInteriorMargin = 1e-6;

enum class CenterOutcome { converged, stop_predicate, failed };

/// Newton centering of t c'x - sum log(-f_i). Calls `stop` after each step.
template <typename Stop>
CenterOutcome center(const ConvexProgram& p, double t, VectorXd& x, const BarrierOptions& opt, int& steps, Stop&& stop)
{
    const Index n = p.num_vars();
    const Index ml = p.A.rows();
    VectorXd f;
    for (int it = 0; it < opt.max_newton_per_centering; ++it) {
        if (!slacks(p, x, f)) return CenterOutcome::failed;
        VectorXd g = t * p.c;
        MatrixXd H = MatrixXd::Zero(n, n);
        for (Index i = 0; i < ml; ++i) {
            const double inv = -1.0 / f(i);
            const auto a = p.A.row(i).transpose();
            g += inv * a;
            H.noalias() += (inv * inv) * a * a.transpose();
        }
        for (std::size_t qi = 0; qi < p.quadratic.size(); ++qi) {
            const auto& q = p.quadratic[qi];
            const double inv = -1.0 / f(ml + static_cast<Index>(qi));
            const VectorXd grad = q.gradient(x);
            g += inv * grad;
            H.noalias() += (inv * inv) * grad * grad.transpose() + inv * q.P;
        }
        Eigen::LDLT<MatrixXd> ldlt(H);
        if (ldlt.info() != Eigen::Success) return CenterOutcome::failed;
        VectorXd dx = ldlt.solve(-g);
        if (!dx.allFinite()) return CenterOutcome::failed;
        const double decrement = -g.dot(dx);
        if (decrement < 0.0) {
            // indefinite numerics; fall back to a gradient step
            dx = -g / std::max(1.0, H.diagonal().maxCoeff());
        }
        if (0.5 * std::abs(decrement) <= opt.newton_tol) return CenterOutcome::converged;

        bool ok = false;
        const double phi0 = barrier_value(p, t, x, ok);
        const double slope = g.dot(dx);
        double step = 1.0;
        VectorXd trial;
        for (int ls = 0; ls < 80; ++ls) {
            trial = x + step * dx;
            const double phi = barrier_value(p, t, trial, ok);
            if (ok && phi <= phi0 + 0.01 * step * slope) break;
            step *= 0.5;
        }
        if (!ok) return CenterOutcome::failed;
        if ((trial - x).lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + x.lpNorm<Eigen::Infinity>()))
            return CenterOutcome::converged;  // stalled at machine precision
        x = trial;
        ++steps;
        if (stop(x)) return CenterOutcome::stop_predicate;
    }
    return CenterOutcome::converged;
}

VectorXd multipliers_at(const ConvexProgram& p, double t, const VectorXd& x)
{
    VectorXd f;
    slacks(p, x, f);
    return (-1.0 / (t * f.array())).matrix();
}

/// Finds a strictly feasible point by minimizing s s.t. f_i(x) <= s, s >= -1.
bool phase_one(const ConvexProgram& p, VectorXd& x, const BarrierOptions& opt, int& steps)
{
    const Index n = p.num_vars();
    const Index ml = p.A.rows();
    ConvexProgram aux;
    aux.c = VectorXd::Zero(n + 1);
    aux.c(n) = 1.0;
    aux.A = MatrixXd::Zero(ml + 1, n + 1);
    aux.b = VectorXd::Zero(ml + 1);
    if (ml > 0) {
        aux.A.topLeftCorner(ml, n) = p.A;
        aux.A.block(0, n, ml, 1).setConstant(-1.0);
        aux.b.head(ml) = p.b;
    }
    aux.A(ml, n) = -1.0;
    aux.b(ml) = 1.0;
    for (const auto& q : p.quadratic) {
        QuadraticConstraint e;
        e.P = MatrixXd::Zero(n + 1, n + 1);
        e.P.topLeftCorner(n, n) = q.P;
        e.q = VectorXd::Zero(n + 1);
        e.q.head(n) = q.q;
        e.q(n) = -1.0;
        e.r = q.r;
        aux.quadratic.push_back(std::move(e));
    }

    VectorXd z(n + 1);
    z.head(n) = x;
    z(n) = std::max(p.max_constraint(x), -0.5) + 1.0;

    const double margin = kInteriorMargin;
    auto done = [&](const VectorXd& v) { return p.max_constraint(v.head(n)) < -margin; };
    if (done(z)) {
        x = z.head(n);
        return true;
    }
    double t = 1.0;
    const double m = static_cast<double>(aux.num_constraints());
    for (int outer = 0; outer < opt.max_outer; ++outer) {
        const auto oc = center(aux, t, z, opt, steps, done);
        if (oc == CenterOutcome::stop_predicate || done(z)) {
            x = z.head(n);
            return true;
        }
        if (oc == CenterOutcome::failed) return false;
        if (m / t < 1e-10) break;
        t *= opt.mu;
    }
    if (p.max_constraint(z.head(n)) < 0.0) {
        x = z.head(n);
        return true;
    }
    return false;
}

VectorXd stationarity(const ConvexProgram& p, const VectorXd& x, const VectorXd& lambda)
{
    VectorXd r = p.c;
    const Index ml = p.A.rows();
    if (ml > 0) r.noalias() += p.A.transpose() * lambda.head(ml);
    for (std::size_t qi = 0; qi < p.quadratic.size(); ++qi)
        r += lambda(ml + static_cast<Index>(qi)) * p.quadratic[qi].gradient(x);
    return r;
}

/// Least-squares refit of the multipliers of the near-active constraints at x.
/// Kept only if nonnegative and better than the central-path estimate.
void polish_multipliers(const ConvexProgram& p, const VectorXd& x, VectorXd& lambda)
{
    const Index ml = p.A.rows();
    const double lmax = lambda.maxCoeff();
    if (!(lmax > 0.0)) return;
    std::vector<Index> act;
    for (Index i = 0; i < lambda.size(); ++i)
        if (lambda(i) > 1e-9 * lmax) act.push_back(i);
    MatrixXd J(p.num_vars(), static_cast<Index>(act.size()));
    for (std::size_t k = 0; k < act.size(); ++k) {
        const Index i = act[k];
        J.col(static_cast<Index>(k)) =
            i < ml ? VectorXd(p.A.row(i).transpose()) : p.quadratic[static_cast<std::size_t>(i - ml)].gradient(x);
    }
    const VectorXd mu = J.colPivHouseholderQr().solve(-p.c);
    if (!mu.allFinite() || (mu.array() < 0.0).any()) return;
    VectorXd cand = VectorXd::Zero(lambda.size());
    for (std::size_t k = 0; k < act.size(); ++k) cand(act[k]) = mu(static_cast<Index>(k));
    if (stationarity(p, x, cand).lpNorm<Eigen::Infinity>() < stationarity(p, x, lambda).lpNorm<Eigen::Infinity>())
        lambda = cand;
}

}  // namespace

BarrierResult solve(const ConvexProgram& prog, const VectorXd& start, const BarrierOptions& opt)
{
    BarrierResult res;
    VectorXd x = start;
    if (!(prog.max_constraint(x) < -kInteriorMargin)) {
        if (!phase_one(prog, x, opt, res.newton_steps)) {
            res.status = BarrierStatus::infeasible;
            res.x = x;
            return res;
        }
    }

    const double m = static_cast<double>(prog.num_constraints());
    double t = 1.0;
    auto never = [](const VectorXd&) { return false; };
    for (int outer = 0; outer < opt.max_outer; ++outer) {
        const auto oc = center(prog, t, x, opt, res.newton_steps, never);
        if (oc == CenterOutcome::failed) {
            res.status = BarrierStatus::numerical_failure;
            break;
        }
        const double obj = prog.c.dot(x);
        const double gap = m / t;
        if (gap <= opt.gap_abs_tol + opt.gap_rel_tol * std::abs(obj)) {
            res.status = BarrierStatus::optimal;
            break;
        }
        t *= opt.mu;
    }
    res.x = x;
    res.objective = prog.c.dot(x);
    res.duality_gap = m / t;
    res.multipliers = multipliers_at(prog, t, x);
    if (res.status == BarrierStatus::optimal) polish_multipliers(prog, x, res.multipliers);
    return res;
}

double kkt_residual(const ConvexProgram& prog, const BarrierResult& res)
{
    return stationarity(prog, res.x, res.multipliers).lpNorm<Eigen::Infinity>() /
           std::max(1.0, prog.c.lpNorm<Eigen::Infinity>());
}

}  // namespace isac::convex
