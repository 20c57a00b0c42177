#include "isac/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace isac::lp {

using Eigen::Index;

const char* to_string(LpStatus s)
{
    switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration-limit";
    }
    return "?";
}

namespace {

class Tableau {
public:
    Tableau(Index rows, Index cols) : t_(Eigen::MatrixXd::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

    Index rows() const { return t_.rows() - 1; }
    Index cols() const { return t_.cols() - 1; }
    double& at(Index i, Index j) { return t_(i, j); }
    double rhs(Index i) const { return t_(i, cols()); }
    std::vector<Index>& basis() { return basis_; }

    /// Sets the objective row to reduced costs of `cost` for the current basis.
    void price(const Eigen::VectorXd& cost)
    {
        const Index obj = rows();
        t_.row(obj).setZero();
        t_.row(obj).head(cost.size()) = cost.transpose();
        for (Index i = 0; i < rows(); ++i) {
            const Index bj = basis_[i];
            if (bj >= 0 && bj < cost.size() && cost(bj) != 0.0) t_.row(obj) -= cost(bj) * t_.row(i);
        }
    }

    void pivot(Index r, Index c)
    {
        t_.row(r) /= t_(r, c);
        for (Index i = 0; i < t_.rows(); ++i) {
            if (i == r) continue;
            const double f = t_(i, c);
            if (f != 0.0) t_.row(i) -= f * t_.row(r);
        }
        basis_[r] = c;
    }

    /// Runs Bland-rule iterations on the current objective row restricted to
    /// columns [0, allowed). Maximization: enters on positive reduced cost.
    LpStatus iterate(Index allowed, const SimplexOptions& opt, int& pivots)
    {
        const Index obj = rows();
        for (;;) {
            Index enter = -1;
            for (Index j = 0; j < allowed; ++j)
                if (t_(obj, j) > opt.pivot_tol) {
                    enter = j;
                    break;
                }
            if (enter < 0) return LpStatus::optimal;

            Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < rows(); ++i) {
                const double a = t_(i, enter);
                if (a <= opt.pivot_tol) continue;
                const double ratio = t_(i, cols()) / a;
                if (ratio < best - 1e-14 ||
                    (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basis_[i] < basis_[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave < 0) return LpStatus::unbounded;
            pivot(leave, enter);
            if (++pivots > opt.max_pivots) return LpStatus::iteration_limit;
        }
    }

    /// Current value of the objective row's constant, i.e. -(c_B' x_B).
    double objective_constant() const { return -t_(rows(), cols()); }

private:
    Eigen::MatrixXd t_;
    std::vector<Index> basis_;
};

}  // namespace

LpResult solve(const LinearProgram& lp, const SimplexOptions& opt)
{
    const Index m = lp.A.rows();
    const Index n = lp.A.cols();
    std::vector<Index> art_rows;
    for (Index i = 0; i < m; ++i)
        if (lp.b(i) < 0.0) art_rows.push_back(i);
    const Index na = static_cast<Index>(art_rows.size());
    const Index nvar = n + m + na;

    Tableau tab(m, nvar);
    Index a = 0;
    for (Index i = 0; i < m; ++i) {
        const double sign = lp.b(i) < 0.0 ? -1.0 : 1.0;
        for (Index j = 0; j < n; ++j) tab.at(i, j) = sign * lp.A(i, j);
        tab.at(i, n + i) = sign;
        tab.at(i, nvar) = sign * lp.b(i);
        if (sign < 0.0) {
            tab.at(i, n + m + a) = 1.0;
            tab.basis()[i] = n + m + a;
            ++a;
        } else {
            tab.basis()[i] = n + i;
        }
    }

    LpResult res;
    if (na > 0) {
        Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(nvar);
        phase1.tail(na).setConstant(-1.0);
        tab.price(phase1);
        const auto st = tab.iterate(nvar, opt, res.pivots);
        if (st == LpStatus::iteration_limit) {
            res.status = st;
            return res;
        }
        // phase-one optimum is -sum(artificials)
        double infeas = 0.0;
        for (Index i = 0; i < m; ++i)
            if (tab.basis()[i] >= n + m) infeas += tab.rhs(i);
        double bscale = 1.0;
        for (Index i = 0; i < m; ++i) bscale = std::max(bscale, std::abs(lp.b(i)));
        if (infeas > opt.feasibility_tol * bscale) {
            res.status = LpStatus::infeasible;
            return res;
        }
        // drive zero-valued artificials out of the basis
        for (Index i = 0; i < m; ++i) {
            if (tab.basis()[i] < n + m) continue;
            Index col = -1;
            for (Index j = 0; j < n + m; ++j)
                if (std::abs(tab.at(i, j)) > 1e-9) {
                    col = j;
                    break;
                }
            if (col >= 0) tab.pivot(i, col);
            // otherwise the row is redundant; its artificial stays basic at zero and is never priced
        }
    }

    Eigen::VectorXd cost = Eigen::VectorXd::Zero(nvar);
    cost.head(n) = lp.c;
    tab.price(cost);
    const auto st = tab.iterate(n + m, opt, res.pivots);
    res.status = st;
    res.x = Eigen::VectorXd::Zero(n);
    for (Index i = 0; i < m; ++i)
        if (tab.basis()[i] < n) res.x(tab.basis()[i]) = std::max(0.0, tab.rhs(i));
    res.objective = lp.c.dot(res.x);
    return res;
}

Eigen::VectorXd farkas_certificate(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                   const SimplexOptions& opt)
{
    // find y >= 0 with -A'y <= 0 and b'y <= -1
    const Index m = A.rows();
    const Index n = A.cols();
    LinearProgram cert;
    cert.A.resize(n + 1, m);
    cert.A.topRows(n) = -A.transpose();
    cert.A.row(n) = b.transpose();
    cert.b = Eigen::VectorXd::Zero(n + 1);
    cert.b(n) = -1.0;
    cert.c = Eigen::VectorXd::Zero(m);
    const auto r = solve(cert, opt);
    if (r.status != LpStatus::optimal) return {};
    return r.x;
}

double max_violation(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x)
{
    double v = 0.0;
    if (A.rows() > 0) v = std::max(v, (A * x - b).maxCoeff());
    if (x.size() > 0) v = std::max(v, (-x).maxCoeff());
    return v;
}

}  // namespace isac::lp
