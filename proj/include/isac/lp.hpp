#pragma once

#include <Eigen/Dense>

namespace isac::lp {

/// maximize c'x  subject to  A x <= b,  x >= 0.
struct LinearProgram {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus s);

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
    int pivots = 0;
};

struct SimplexOptions {
    double pivot_tol = 1e-11;
    double feasibility_tol = 1e-10;
    int max_pivots = 10'000;
};

/// Dense two-phase tableau simplex with Bland's anti-cycling rule. Intended
/// for small, well-scaled problems (tens of rows).
LpResult solve(const LinearProgram& lp, const SimplexOptions& opt = {});

/// Farkas certificate for infeasibility of {A x <= b, x >= 0}: y >= 0 with
/// A'y >= 0 and b'y <= -1. Empty vector if the system is feasible.
Eigen::VectorXd farkas_certificate(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                   const SimplexOptions& opt = {});

/// max_i (A x - b)_i clipped at zero, together with max(-x_j, 0).
double max_violation(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x);

}  // namespace isac::lp
