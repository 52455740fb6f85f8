// SPDX-License-Identifier: Apache-2.0
//
// clra - cross-linked rotatable antenna array simulation and optimization
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "clra/linprog.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace clra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCostTol = 1e-9;   // reduced-cost optimality tolerance
constexpr double kPivotTol = 1e-11; // direction entries below this are noise
constexpr double kFeasTol = 1e-9;
constexpr int kMaxIterations = 20000;

enum class VarStatus { basic, at_lower, at_upper, free_zero };

// Working set for the simplex over columns [structural | slack | artificial].
struct Tableau {
    Eigen::MatrixXd cols;  // m x total
    Eigen::VectorXd b;
    Eigen::VectorXd lower, upper;
    Eigen::VectorXd cost;
    std::vector<VarStatus> status;
    std::vector<int> basis; // column basic in each row
    int m = 0;

    double nonbasic_value(int j) const {
        switch (status[size_t(j)]) {
        case VarStatus::at_lower:
            return lower[j];
        case VarStatus::at_upper:
            return upper[j];
        default:
            return 0.0;
        }
    }
};

struct PhaseResult {
    bool optimal = false;
    bool unbounded = false;
    Eigen::VectorXd values;    // all column values at termination
    Eigen::VectorXd duals;     // simplex multipliers y
    Eigen::VectorXd reduced;   // reduced costs (valid for nonbasic columns)
    double objective = 0.0;
};

PhaseResult run_simplex(Tableau &t) {
    const int total = int(t.cols.cols());
    PhaseResult result;

    for (int iteration = 0; iteration < kMaxIterations; ++iteration) {
        // Factor the basis and recover basic values and multipliers.
        Eigen::MatrixXd basis_matrix(t.m, t.m);
        for (int i = 0; i < t.m; ++i)
            basis_matrix.col(i) = t.cols.col(t.basis[size_t(i)]);
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);

        Eigen::VectorXd rhs = t.b;
        for (int j = 0; j < total; ++j)
            if (t.status[size_t(j)] != VarStatus::basic) {
                const double v = t.nonbasic_value(j);
                if (v != 0.0)
                    rhs -= t.cols.col(j) * v;
            }
        const Eigen::VectorXd xb = t.m > 0 ? lu.solve(rhs) : Eigen::VectorXd();

        Eigen::VectorXd cb(t.m);
        for (int i = 0; i < t.m; ++i)
            cb[i] = t.cost[t.basis[size_t(i)]];
        const Eigen::VectorXd y =
            t.m > 0 ? Eigen::VectorXd(lu.transpose().solve(cb)) : Eigen::VectorXd();

        // Reduced costs and Bland entering choice.
        int entering = -1;
        int direction = 0; // +1 increase, -1 decrease
        Eigen::VectorXd reduced = Eigen::VectorXd::Zero(total);
        for (int j = 0; j < total; ++j) {
            if (t.status[size_t(j)] == VarStatus::basic)
                continue;
            if (t.lower[j] == t.upper[j])
                continue; // fixed column never moves
            const double d = t.cost[j] - (t.m > 0 ? y.dot(t.cols.col(j)) : 0.0);
            reduced[j] = d;
            if (entering >= 0)
                continue;
            const VarStatus s = t.status[size_t(j)];
            if ((s == VarStatus::at_lower || s == VarStatus::free_zero) && d > kCostTol) {
                entering = j;
                direction = +1;
            } else if ((s == VarStatus::at_upper || s == VarStatus::free_zero) && d < -kCostTol) {
                entering = j;
                direction = -1;
            }
        }

        if (entering < 0) {
            // Optimal for this phase.
            result.optimal = true;
            result.values = Eigen::VectorXd(total);
            for (int j = 0; j < total; ++j)
                result.values[j] = t.nonbasic_value(j);
            for (int i = 0; i < t.m; ++i)
                result.values[t.basis[size_t(i)]] = t.m > 0 ? xb[i] : 0.0;
            result.duals = y;
            result.reduced = reduced;
            result.objective = 0.0;
            for (int j = 0; j < total; ++j)
                result.objective += t.cost[j] * result.values[j];
            return result;
        }

        // Ratio test: movement t of the entering variable before a bound blocks.
        const Eigen::VectorXd w =
            t.m > 0 ? Eigen::VectorXd(lu.solve(t.cols.col(entering))) : Eigen::VectorXd();
        double best_t = kInf;
        int blocking_row = -1; // -1 marks the entering variable's own range
        if (std::isfinite(t.upper[entering]) && std::isfinite(t.lower[entering]))
            best_t = t.upper[entering] - t.lower[entering];

        for (int i = 0; i < t.m; ++i) {
            const double delta = -direction * w[i]; // d x_Bi / d t
            double limit = kInf;
            if (delta > kPivotTol) {
                const double up = t.upper[t.basis[size_t(i)]];
                if (std::isfinite(up))
                    limit = (up - xb[i]) / delta;
            } else if (delta < -kPivotTol) {
                const double lo = t.lower[t.basis[size_t(i)]];
                if (std::isfinite(lo))
                    limit = (xb[i] - lo) / (-delta);
            }
            if (limit < -kFeasTol)
                limit = 0.0; // slight infeasibility from roundoff
            limit = std::max(limit, 0.0);
            if (limit < best_t - kPivotTol ||
                (blocking_row >= 0 && limit < best_t + kPivotTol &&
                 t.basis[size_t(i)] < t.basis[size_t(blocking_row)])) {
                best_t = limit;
                blocking_row = i;
            }
        }

        if (!std::isfinite(best_t)) {
            result.unbounded = true;
            result.values = Eigen::VectorXd(total);
            for (int j = 0; j < total; ++j)
                result.values[j] = t.nonbasic_value(j);
            for (int i = 0; i < t.m; ++i)
                result.values[t.basis[size_t(i)]] = xb[i];
            return result;
        }

        if (blocking_row < 0) {
            // Bound flip, basis unchanged.
            t.status[size_t(entering)] =
                direction > 0 ? VarStatus::at_upper : VarStatus::at_lower;
            continue;
        }

        // Pivot: the blocking basic leaves at the bound it reached.
        const int leaving = t.basis[size_t(blocking_row)];
        const double delta = -direction * w[blocking_row];
        t.status[size_t(leaving)] = delta > 0.0 ? VarStatus::at_upper : VarStatus::at_lower;
        if (!std::isfinite(t.lower[leaving]) && t.status[size_t(leaving)] == VarStatus::at_lower)
            t.status[size_t(leaving)] = VarStatus::free_zero;
        t.basis[size_t(blocking_row)] = entering;
        t.status[size_t(entering)] = VarStatus::basic;
    }
    throw std::runtime_error("solve_lp: iteration limit reached");
}

} // namespace

LpSolution solve_lp(const LinearProgram &lp) {
    const int n = lp.num_vars();
    const int m = lp.num_rows();
    if (n < 1)
        throw std::invalid_argument("solve_lp: empty program");
    if (lp.lower.size() != n || lp.upper.size() != n)
        throw std::invalid_argument("solve_lp: bounds do not match the variable count");
    for (int j = 0; j < n; ++j)
        if (lp.lower[j] > lp.upper[j])
            return LpSolution{LpStatus::infeasible, Eigen::VectorXd::Zero(n), 0.0,
                              Eigen::VectorXd::Zero(m), 0.0};

    Tableau t;
    t.m = m;
    t.cols.resize(m, n + m);
    if (m > 0) {
        t.cols.leftCols(n) = lp.rows;
        t.cols.rightCols(m) = Eigen::MatrixXd::Identity(m, m);
    }
    t.b = lp.rhs;
    t.lower.resize(n + m);
    t.upper.resize(n + m);
    t.cost = Eigen::VectorXd::Zero(n + m);
    t.lower.head(n) = lp.lower;
    t.upper.head(n) = lp.upper;
    t.lower.tail(m).setZero();
    t.upper.tail(m).setConstant(kInf);
    t.status.assign(size_t(n + m), VarStatus::at_lower);
    for (int j = 0; j < n; ++j) {
        if (std::isfinite(lp.lower[j]))
            t.status[size_t(j)] = VarStatus::at_lower;
        else if (std::isfinite(lp.upper[j]))
            t.status[size_t(j)] = VarStatus::at_upper;
        else
            t.status[size_t(j)] = VarStatus::free_zero;
    }
    t.basis.resize(size_t(m));
    for (int i = 0; i < m; ++i) {
        t.basis[size_t(i)] = n + i;
        t.status[size_t(n + i)] = VarStatus::basic;
    }

    // Slack start: s = b - A x_N. Rows driven negative need artificials.
    Eigen::VectorXd slack_start = lp.rhs;
    for (int j = 0; j < n; ++j) {
        const double v = t.nonbasic_value(j);
        if (m > 0 && v != 0.0)
            slack_start -= lp.rows.col(j) * v;
    }
    std::vector<int> artificial_rows;
    for (int i = 0; i < m; ++i)
        if (slack_start[i] < -kFeasTol)
            artificial_rows.push_back(i);

    if (!artificial_rows.empty()) {
        const int extra = int(artificial_rows.size());
        Eigen::MatrixXd widened(m, n + m + extra);
        widened.leftCols(n + m) = t.cols;
        widened.rightCols(extra).setZero();
        Eigen::VectorXd lo(n + m + extra), up(n + m + extra), cost(n + m + extra);
        lo.head(n + m) = t.lower;
        up.head(n + m) = t.upper;
        cost.setZero();
        for (int a = 0; a < extra; ++a) {
            const int row = artificial_rows[size_t(a)];
            widened(row, n + m + a) = -1.0;
            lo[n + m + a] = 0.0;
            up[n + m + a] = kInf;
            cost[n + m + a] = -1.0; // phase 1 maximizes -sum(artificials)
            t.basis[size_t(row)] = n + m + a;
            t.status[size_t(n + row)] = VarStatus::at_lower; // displaced slack
        }
        t.cols = widened;
        t.lower = lo;
        t.upper = up;
        t.cost = cost;
        t.status.resize(size_t(n + m + extra), VarStatus::basic);

        PhaseResult phase1 = run_simplex(t);
        if (!phase1.optimal || phase1.objective < -1e-7)
            return LpSolution{LpStatus::infeasible, Eigen::VectorXd::Zero(n), 0.0,
                              Eigen::VectorXd::Zero(m), 0.0};
        // Freeze artificials at zero for phase 2.
        for (int a = 0; a < extra; ++a) {
            t.lower[n + m + a] = 0.0;
            t.upper[n + m + a] = 0.0;
        }
    }

    t.cost.setZero();
    t.cost.head(n) = lp.objective;
    PhaseResult phase2 = run_simplex(t);

    LpSolution solution;
    solution.x = phase2.values.head(n);
    if (phase2.unbounded) {
        solution.status = LpStatus::unbounded;
        solution.value = lp.objective.dot(solution.x);
        solution.row_duals = Eigen::VectorXd::Zero(m);
        return solution;
    }

    solution.status = LpStatus::optimal;
    solution.value = lp.objective.dot(solution.x);
    solution.row_duals = m > 0 ? Eigen::VectorXd(phase2.duals.head(m)) : Eigen::VectorXd();

    // KKT audit: primal feasibility, dual sign, stationarity via reduced
    // costs, and complementary slackness.
    double residual = 0.0;
    const Eigen::VectorXd row_values = m > 0 ? Eigen::VectorXd(lp.rows * solution.x)
                                             : Eigen::VectorXd();
    for (int i = 0; i < m; ++i) {
        residual = std::max(residual, row_values[i] - lp.rhs[i]);
        residual = std::max(residual, -solution.row_duals[i]);
        residual = std::max(residual,
                            std::abs(solution.row_duals[i] * (lp.rhs[i] - row_values[i])));
    }
    for (int j = 0; j < n; ++j) {
        residual = std::max(residual, lp.lower[j] - solution.x[j]);
        residual = std::max(residual, solution.x[j] - lp.upper[j]);
        if (t.status[size_t(j)] == VarStatus::at_lower)
            residual = std::max(residual, phase2.reduced[j]);
        else if (t.status[size_t(j)] == VarStatus::at_upper)
            residual = std::max(residual, -phase2.reduced[j]);
    }
    solution.kkt_residual = std::max(residual, 0.0);
    return solution;
}

} // namespace clra
