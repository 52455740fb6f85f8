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

#ifndef CLRA_LINPROG_HPP
#define CLRA_LINPROG_HPP

#include <Eigen/Dense>

namespace clra {

// maximize objective^T x  subject to  rows * x <= rhs,  lower <= x <= upper.
// Bounds may be +-infinity componentwise.
struct LinearProgram {
    Eigen::VectorXd objective;
    Eigen::MatrixXd rows;  // may have zero rows
    Eigen::VectorXd rhs;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    int num_vars() const { return int(objective.size()); }
    int num_rows() const { return int(rows.rows()); }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Eigen::VectorXd x;
    double value = 0.0;
    Eigen::VectorXd row_duals;  // one multiplier per inequality row, >= 0
    double kkt_residual = 0.0;  // max stationarity/feasibility/slackness violation
};

// Dense bounded-variable primal simplex, two phases, Bland's entering rule
// and lowest-index tie breaking throughout. Never throws on infeasible or
// unbounded inputs; those are reported through the status.
LpSolution solve_lp(const LinearProgram &lp);

} // namespace clra

#endif
