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

#include "clra/rotation_opt.hpp"

#include <cmath>
#include <stdexcept>

namespace clra {

bool OptimizerTrace::non_decreasing(double tol) const {
    for (size_t i = 1; i < records.size(); ++i)
        if (records[i].objective < records[i - 1].objective - tol)
            return false;
    return true;
}

OrientationVariables::OrientationVariables(const ArrayLayout &layout, Coupling coupling)
    : rows_(layout.rows), cols_(layout.cols), coupling_(coupling) {}

int OrientationVariables::count() const {
    return coupling_ == Coupling::cross_linked ? rows_ + cols_ : 2 * rows_ * cols_;
}

int OrientationVariables::alpha_index(int m, int n) const {
    return coupling_ == Coupling::cross_linked ? m : m * cols_ + n;
}

int OrientationVariables::beta_index(int m, int n) const {
    return coupling_ == Coupling::cross_linked ? rows_ + n
                                               : rows_ * cols_ + m * cols_ + n;
}

AngleField OrientationVariables::decode(const Eigen::VectorXd &u) const {
    AngleField field = AngleField::zero(rows_, cols_);
    for (int m = 0; m < rows_; ++m)
        for (int n = 0; n < cols_; ++n) {
            field.alpha(m, n) = u[alpha_index(m, n)];
            field.beta(m, n) = u[beta_index(m, n)];
        }
    return field;
}

Eigen::VectorXd OrientationVariables::encode(const RotationState &state) const {
    if (coupling_ != Coupling::cross_linked)
        throw std::logic_error("encode: state form exists only for cross-linked coupling");
    Eigen::VectorXd u(rows_ + cols_);
    u.head(rows_) = state.alpha;
    u.tail(cols_) = state.beta;
    return u;
}

RotationState OrientationVariables::to_state(const Eigen::VectorXd &u) const {
    if (coupling_ != Coupling::cross_linked)
        throw std::logic_error("to_state: state form exists only for cross-linked coupling");
    return {u.head(rows_), u.tail(cols_)};
}

Eigen::MatrixXcd problem_channel(const RotationProblem &problem, const AngleField &field) {
    if (problem.mode == RotationMode::element)
        return element_channel_field(*problem.scenario, problem.layout, field, problem.pattern);
    return panel_channel_field(*problem.scenario, problem.layout, field, problem.pattern);
}

double rotation_objective(const RotationProblem &problem, const OrientationVariables &vars,
                          const Eigen::VectorXd &u, const Eigen::MatrixXcd &beamformers) {
    const Eigen::MatrixXcd h = problem_channel(problem, vars.decode(u));
    return sum_rate(h, beamformers, problem.scenario->normalized_powers()).sum_rate;
}

bool rotation_feasible(const RotationProblem &problem, const OrientationVariables &vars,
                       const Eigen::VectorXd &u, double tol) {
    const AngleField field = vars.decode(u);
    if (problem.mode == RotationMode::element)
        return count_element_violations(field, problem.theta_max, tol) == 0;
    return panel_constraints_field(field, problem.layout, std::max(tol, 1e-12)).satisfied;
}

Eigen::VectorXd rotation_gradient(const RotationProblem &problem, const OrientationVariables &vars,
                                  const Eigen::VectorXd &u, const Eigen::MatrixXcd &beamformers,
                                  double eps_fd) {
    Eigen::VectorXd gradient(vars.count());
    Eigen::VectorXd probe = u;
    for (int j = 0; j < vars.count(); ++j) {
        probe[j] = u[j] + eps_fd;
        const double forward = rotation_objective(problem, vars, probe, beamformers);
        probe[j] = u[j] - eps_fd;
        const double backward = rotation_objective(problem, vars, probe, beamformers);
        probe[j] = u[j];
        gradient[j] = (forward - backward) / (2.0 * eps_fd);
    }
    return gradient;
}

LinearProgram rotation_lp(const RotationProblem &problem, const OrientationVariables &vars,
                          const Eigen::VectorXd &u, const Eigen::VectorXd &gradient,
                          double trust_radius) {
    const int n = vars.count();
    const ArrayLayout &layout = problem.layout;
    LinearProgram lp;
    lp.objective = gradient;
    lp.lower = Eigen::VectorXd::Constant(n, -trust_radius);
    lp.upper = Eigen::VectorXd::Constant(n, trust_radius);

    if (problem.mode == RotationMode::element) {
        const int cells = layout.rows * layout.cols;
        lp.rows = Eigen::MatrixXd::Zero(2 * cells, n);
        lp.rhs.resize(2 * cells);
        const double cos_max = std::cos(problem.theta_max);
        int row = 0;
        for (int m = 0; m < layout.rows; ++m)
            for (int nn = 0; nn < layout.cols; ++nn) {
                const int ia = vars.alpha_index(m, nn);
                const int ib = vars.beta_index(m, nn);
                const double a0 = u[ia], b0 = u[ib];
                const double c = std::cos(a0) * std::cos(b0);
                // First-order boresight projection:
                //   cos(theta) ~ c - sin(a0) da - cos(a0) sin(b0) db
                const double ca = -std::sin(a0);
                const double cbta = -std::cos(a0) * std::sin(b0);
                lp.rows(row, ia) = ca;
                lp.rows(row, ib) = cbta;
                lp.rhs[row] = 1.0 - c; // upper side, cos(theta) <= 1
                ++row;
                lp.rows(row, ia) = -ca;
                lp.rows(row, ib) = -cbta;
                lp.rhs[row] = c - cos_max; // lower side, cos(theta) >= cos(theta_max)
                ++row;
            }
        return lp;
    }

    // Panel rows in grid index units; one anti-reflection row per ordered
    // pair plus one hub row per panel.
    const int B = layout.num_panels();
    lp.rows = Eigen::MatrixXd::Zero(B * (B - 1) + B, n);
    lp.rhs.resize(B * (B - 1) + B);
    int row = 0;
    for (int b = 0; b < B; ++b) {
        const int mi = b / layout.cols;
        const int ni = b % layout.cols;
        const int ia = vars.alpha_index(mi, ni);
        const int ib = vars.beta_index(mi, ni);
        const Eigen::Matrix3d r0 = rotation_matrix(u[ia], u[ib]).rotation;
        const double m = ArrayLayout::grid_index(mi, layout.rows);
        const double nn = ArrayLayout::grid_index(ni, layout.cols);
        for (int j = 0; j < B; ++j) {
            if (j == b)
                continue;
            const double mj = ArrayLayout::grid_index(j / layout.cols, layout.rows);
            const double nj = ArrayLayout::grid_index(j % layout.cols, layout.cols);
            const Eigen::Vector3d g = r0.transpose() * Eigen::Vector3d(0.0, nj - nn, mj - m);
            // Linearized n^T (q_j - q_b): g0 - g1 db + g2 da <= 0
            lp.rows(row, ia) = g[2];
            lp.rows(row, ib) = -g[1];
            lp.rhs[row] = -g[0];
            ++row;
        }
        const Eigen::Vector3d g = r0.transpose() * Eigen::Vector3d(0.0, nn, m);
        // Linearized n^T q_b >= 0 flipped into a <= row.
        lp.rows(row, ia) = -g[2];
        lp.rows(row, ib) = g[1];
        lp.rhs[row] = g[0];
        ++row;
    }
    return lp;
}

FeasDirResult feasible_direction_vars(const RotationProblem &problem,
                                      const OrientationVariables &vars,
                                      const Eigen::VectorXd &u0,
                                      const Eigen::MatrixXcd &beamformers,
                                      const FeasDirParams &params) {
    const Eigen::VectorXd pbar = problem.scenario->normalized_powers();
    Eigen::MatrixXcd anchor = beamformers;

    // Objective used by the line search; the gradient always freezes the
    // current anchor receivers.
    const auto evaluate = [&](const Eigen::VectorXd &u) {
        if (!params.refresh_receivers)
            return rotation_objective(problem, vars, u, anchor);
        const Eigen::MatrixXcd h = problem_channel(problem, vars.decode(u));
        return sum_rate(h, mmse_all(h, pbar), pbar).sum_rate;
    };

    FeasDirResult result;
    result.u = u0;
    double current = evaluate(result.u);
    result.trace.records.push_back({current, 0.0, 0.0, 0.0, LpStatus::optimal, true});

    // The step box adapts: heavy backtracking means the linearization
    // overreaches, so the box shrinks; clean full steps let it recover. The
    // stopping certificate is always evaluated on the nominal box, so a
    // shrunken step box cannot fake stationarity.
    double radius = params.trust_radius;
    constexpr double kMinRadius = 1e-7;

    for (int iteration = 0; iteration < params.max_inner_iterations; ++iteration) {
        if (params.refresh_receivers)
            anchor = mmse_all(problem_channel(problem, vars.decode(result.u)), pbar);
        const Eigen::VectorXd gradient =
            rotation_gradient(problem, vars, result.u, anchor, params.gradient_step);

        const LpSolution nominal = solve_lp(
            rotation_lp(problem, vars, result.u, gradient, params.trust_radius));
        if (nominal.status != LpStatus::optimal) {
            // The step program is feasible at du = 0 whenever the iterate is
            // exactly feasible, so this is a diagnostic failure.
            result.lp_ok = false;
            result.trace.records.push_back({current, 0.0, gradient.norm(), 0.0,
                                            nominal.status, true});
            break;
        }
        // Ascent gap on the nominal region, nonnegative up to LP tolerance.
        const double gap = nominal.value;
        if (gap <= params.inner_tolerance)
            break;

        LpSolution target = nominal;
        double target_gap = gap;
        if (radius < params.trust_radius) {
            target = solve_lp(rotation_lp(problem, vars, result.u, gradient, radius));
            if (target.status != LpStatus::optimal) {
                result.lp_ok = false;
                break;
            }
            target_gap = target.value;
        }

        double step = params.initial_step;
        bool accepted = false;
        int backtracks = 0;
        for (; backtracks < params.max_backtracks; ++backtracks) {
            const Eigen::VectorXd candidate = result.u + step * target.x;
            if (rotation_feasible(problem, vars, candidate, params.feasibility_tol)) {
                const double value = evaluate(candidate);
                if (value - current >= params.armijo_slope * step * target_gap) {
                    result.u = candidate;
                    current = value;
                    result.trace.records.push_back({current, step, gradient.norm(), gap,
                                                    LpStatus::optimal, true});
                    accepted = true;
                    break;
                }
            }
            step *= params.armijo_shrink;
        }
        if (!accepted) {
            // No acceptable point along this target; retry on a tighter box
            // unless the region is already negligible.
            if (radius <= kMinRadius)
                break;
            radius = std::max(kMinRadius, 0.25 * radius);
            continue;
        }
        if (backtracks <= 1)
            radius = std::min(params.trust_radius, 2.0 * radius);
        else if (backtracks >= 4)
            radius = std::max(kMinRadius, 0.5 * radius);
    }
    return result;
}

Eigen::VectorXd objective_gradient(const RotationProblem &problem, const RotationState &state,
                                   const Eigen::MatrixXcd &beamformers, double eps_fd) {
    const OrientationVariables vars(problem.layout, Coupling::cross_linked);
    return rotation_gradient(problem, vars, vars.encode(state), beamformers, eps_fd);
}

LinearProgram linearized_element_constraints(const RotationState &state, double theta_max,
                                             double trust_radius) {
    ArrayLayout layout;
    layout.rows = int(state.alpha.size());
    layout.cols = int(state.beta.size());
    RotationProblem problem;
    problem.layout = layout;
    problem.mode = RotationMode::element;
    problem.theta_max = theta_max;
    const OrientationVariables vars(layout, Coupling::cross_linked);
    return rotation_lp(problem, vars, vars.encode(state),
                       Eigen::VectorXd::Zero(vars.count()), trust_radius);
}

LinearProgram linearized_panel_constraints(const RotationState &state, const ArrayLayout &layout,
                                           double trust_radius) {
    if (!layout.is_panel())
        throw std::invalid_argument("linearized panel constraints require a panel layout");
    RotationProblem problem;
    problem.layout = layout;
    problem.mode = RotationMode::panel;
    const OrientationVariables vars(layout, Coupling::cross_linked);
    return rotation_lp(problem, vars, vars.encode(state),
                       Eigen::VectorXd::Zero(vars.count()), trust_radius);
}

std::pair<RotationState, OptimizerTrace> feasible_direction(const RotationProblem &problem,
                                                            const RotationState &state0,
                                                            const Eigen::MatrixXcd &beamformers,
                                                            const FeasDirParams &params) {
    const OrientationVariables vars(problem.layout, Coupling::cross_linked);
    FeasDirResult result =
        feasible_direction_vars(problem, vars, vars.encode(state0), beamformers, params);
    return {vars.to_state(result.u).wrapped(), std::move(result.trace)};
}

AoResult alternating_optimize(const RotationProblem &problem, const AoParams &params) {
    const OrientationVariables vars(problem.layout, problem.coupling);
    const Eigen::VectorXd pbar = problem.scenario->normalized_powers();

    // The rotation pass scores candidates under refreshed receivers: at high
    // SNR the frozen-receiver objective collapses into a razor ridge around
    // the current nulls and the ascent stalls in microscopic steps.
    FeasDirParams inner_params = params.inner;
    inner_params.refresh_receivers = true;

    AoResult result;
    result.u = Eigen::VectorXd::Zero(vars.count());

    double previous = 0.0;
    for (int outer = 0; outer < params.max_outer_iterations; ++outer) {
        const Eigen::MatrixXcd h = problem_channel(problem, vars.decode(result.u));
        result.beamformers = mmse_all(h, pbar);
        const FeasDirResult inner =
            feasible_direction_vars(problem, vars, result.u, result.beamformers, inner_params);
        result.u = inner.u;
        const Eigen::MatrixXcd h_new = problem_channel(problem, vars.decode(result.u));
        result.beamformers = mmse_all(h_new, pbar);
        const double objective =
            rotation_objective(problem, vars, result.u, result.beamformers);
        result.trace.records.push_back({objective, 0.0, 0.0,
                                        outer > 0 ? std::abs(objective - previous) : 0.0,
                                        inner.lp_ok ? LpStatus::optimal : LpStatus::infeasible,
                                        true});
        result.outer_iterations = outer + 1;
        if (outer > 0 && std::abs(objective - previous) <= params.outer_tolerance) {
            result.converged = true;
            previous = objective;
            break;
        }
        previous = objective;
    }

    const Eigen::MatrixXcd h = problem_channel(problem, vars.decode(result.u));
    result.beamformers = mmse_all(h, pbar);
    result.report = sum_rate(h, result.beamformers, pbar);
    if (problem.coupling == Coupling::cross_linked)
        result.state = vars.to_state(result.u).wrapped();
    return result;
}

SingleUserPointing single_user_oracle(const ArrayLayout &layout, const Eigen::Vector3d &user,
                                      double theta_max, double pbar, double wavelength,
                                      const GainPattern &pattern) {
    if (layout.is_panel() || layout.rows != 1)
        throw std::invalid_argument("single_user_oracle: requires a 1 x N element array");
    if (user.x() <= 0.0)
        throw std::invalid_argument("single_user_oracle: user must be in front of the array");

    const int N = layout.cols;
    const double x0 = user.x(), y0 = user.y(), z0 = user.z();
    const double zm = 0.0; // single row sits on z = 0
    const double beta0 = (wavelength / (4.0 * kPi)) * (wavelength / (4.0 * kPi));

    SingleUserPointing out;
    out.state.alpha = Eigen::VectorXd::Constant(1, std::atan2(z0 - zm, x0));
    out.state.beta.resize(N);
    out.cos_eps.resize(N);

    double snr = 0.0;
    for (int n = 0; n < N; ++n) {
        const double yn = ArrayLayout::grid_index(n, N) * layout.spacing;
        const double axial = std::sqrt(x0 * x0 + (z0 - zm) * (z0 - zm));
        out.state.beta[n] = std::atan2(yn - y0, axial);
        const double r = std::sqrt(x0 * x0 + (y0 - yn) * (y0 - yn) + (z0 - zm) * (z0 - zm));
        const double theta =
            std::atan(std::sqrt((y0 - yn) * (y0 - yn) + (z0 - zm) * (z0 - zm)) / x0);
        const double eps = std::max(0.0, theta - theta_max);
        out.cos_eps[n] = std::cos(eps);
        snr += std::pow(out.cos_eps[n], 2.0 * pattern.directivity) / (r * r);
    }
    out.snr_linear = pbar * beta0 * pattern.peak_gain() * snr;
    return out;
}

} // namespace clra
