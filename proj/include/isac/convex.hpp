#pragma once

#include <Eigen/Dense>

#include <vector>

namespace isac::convex {

/// 0.5 x'Px + q'x + r <= 0 with P symmetric positive semidefinite.
struct QuadraticConstraint {
    Eigen::MatrixXd P;
    Eigen::VectorXd q;
    double r = 0.0;

    double value(const Eigen::VectorXd& x) const { return 0.5 * x.dot(P * x) + q.dot(x) + r; }
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const { return P * x + q; }
};

/// minimize c'x  s.t.  A x <= b,  quadratic[i](x) <= 0.
struct ConvexProgram {
    Eigen::VectorXd c;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    std::vector<QuadraticConstraint> quadratic;

    Eigen::Index num_vars() const { return c.size(); }
    Eigen::Index num_constraints() const { return A.rows() + static_cast<Eigen::Index>(quadratic.size()); }

    /// Largest constraint value (<= 0 means feasible).
    double max_constraint(const Eigen::VectorXd& x) const;
};

enum class BarrierStatus { optimal, infeasible, numerical_failure };

const char* to_string(BarrierStatus s);

struct BarrierOptions {
    double mu = 20.0;
    double gap_abs_tol = 1e-11;
    double gap_rel_tol = 1e-10;
    double newton_tol = 1e-14;  // half squared Newton decrement
    int max_newton_per_centering = 200;
    int max_outer = 100;
};

struct BarrierResult {
    BarrierStatus status = BarrierStatus::numerical_failure;
    Eigen::VectorXd x;
    double objective = 0.0;
    double duality_gap = 0.0;
    /// Central-path dual estimates, linear rows first, then quadratic rows.
    Eigen::VectorXd multipliers;
    int newton_steps = 0;
};

/// Log-barrier interior-point method. `start` need not be feasible: a phase-I
/// problem is solved first when it is not strictly feasible. Reports
/// `infeasible` when no strictly feasible point exists.
BarrierResult solve(const ConvexProgram& prog, const Eigen::VectorXd& start, const BarrierOptions& opt = {});

/// Stationarity residual || c + sum_i lambda_i grad f_i(x) ||_inf for the
/// returned multipliers, relative to max(1, ||c||_inf).
double kkt_residual(const ConvexProgram& prog, const BarrierResult& res);

}  // namespace isac::convex
