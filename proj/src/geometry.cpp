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

#include "clra/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace clra {

double wrap_angle(double x) {
    double w = std::remainder(x, 2.0 * kPi); // [-pi, pi]
    if (w <= -kPi)
        w += 2.0 * kPi;
    return w;
}

Eigen::Vector3d element_position(const ArrayLayout &layout, int m, int n) {
    if (m < 0 || m >= layout.rows || n < 0 || n >= layout.cols)
        throw std::out_of_range("element index outside the array grid");
    const double zm = ArrayLayout::grid_index(m, layout.rows) * layout.spacing;
    const double yn = ArrayLayout::grid_index(n, layout.cols) * layout.spacing;
    return {0.0, yn, zm};
}

RotationState RotationState::wrapped() const {
    RotationState out = *this;
    for (Eigen::Index i = 0; i < out.alpha.size(); ++i)
        out.alpha[i] = wrap_angle(out.alpha[i]);
    for (Eigen::Index i = 0; i < out.beta.size(); ++i)
        out.beta[i] = wrap_angle(out.beta[i]);
    return out;
}

Orientation rotation_matrix(double alpha, double beta) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double cb = std::cos(beta), sb = std::sin(beta);
    Orientation out;
    out.rotation << ca * cb, ca * sb, -sa,
                    -sb,     cb,      0.0,
                    sa * cb, sa * sb, ca;
    out.pointing << ca * cb, -sb, sa * cb;
    return out;
}

Eigen::Vector3d pointing_vector(double alpha, double beta) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double cb = std::cos(beta), sb = std::sin(beta);
    return {ca * cb, -sb, sa * cb};
}

double eccentric_cosine(const RotationState &state, int m, int n) {
    if (m < 0 || m >= state.alpha.size() || n < 0 || n >= state.beta.size())
        throw std::out_of_range("eccentric_cosine: index outside the grid");
    return std::cos(state.alpha[m]) * std::cos(state.beta[n]);
}

bool element_bound_satisfied(double alpha, double beta, double theta_max, double tol) {
    // cos(theta_max) - cos(alpha)cos(beta) <= tol, written in versine form so
    // that angles far below the double-precision cosine resolution (~1e-8 rad
    // around boresight) still register.
    const auto versine = [](double x) {
        const double s = std::sin(0.5 * x);
        return 2.0 * s * s;
    };
    const double deficit = versine(alpha) + std::cos(alpha) * versine(beta);
    return deficit <= versine(theta_max) + tol;
}

bool element_bound_satisfied(const RotationState &state, int m, int n, double theta_max,
                             double tol) {
    return element_bound_satisfied(state.alpha[m], state.beta[n], theta_max, tol);
}

bool element_bounds_satisfied(const RotationState &state, double theta_max, double tol) {
    for (Eigen::Index m = 0; m < state.alpha.size(); ++m)
        for (Eigen::Index n = 0; n < state.beta.size(); ++n)
            if (!element_bound_satisfied(state.alpha[m], state.beta[n], theta_max, tol))
                return false;
    return true;
}

AngleField AngleField::broadcast(const RotationState &state) {
    AngleField field;
    const int rows = int(state.alpha.size());
    const int cols = int(state.beta.size());
    field.alpha = state.alpha.replicate(1, cols);
    field.beta = state.beta.transpose().replicate(rows, 1);
    return field;
}

int count_element_violations(const AngleField &field, double theta_max, double tol) {
    int count = 0;
    for (int m = 0; m < field.rows(); ++m)
        for (int n = 0; n < field.cols(); ++n)
            if (!element_bound_satisfied(field.alpha(m, n), field.beta(m, n), theta_max, tol))
                ++count;
    return count;
}

std::vector<Eigen::Vector3d> panel_centers(const ArrayLayout &layout) {
    if (!layout.is_panel())
        throw std::invalid_argument("panel_centers requires a panel-mode layout");
    const double pitch = layout.panel_pitch();
    std::vector<Eigen::Vector3d> centers;
    centers.reserve(size_t(layout.num_panels()));
    for (int m = 0; m < layout.rows; ++m)
        for (int n = 0; n < layout.cols; ++n)
            centers.emplace_back(0.0, ArrayLayout::grid_index(n, layout.cols) * pitch,
                                 ArrayLayout::grid_index(m, layout.rows) * pitch);
    return centers;
}

Eigen::Vector3d antenna_global_position(const Eigen::Vector3d &center,
                                        const Eigen::Matrix3d &rotation,
                                        const Eigen::Vector3d &local) {
    return center + rotation * local;
}

namespace {

// Collects the constraint rows of panel b given its own angles. Rows are in
// grid index units, so the tolerance is pitch-independent.
void collect_panel_rows(const ArrayLayout &layout, int b, double alpha, double beta,
                        double tol, PanelCheck &check) {
    const int N = layout.cols;
    const double m = ArrayLayout::grid_index(b / N, layout.rows);
    const double n = ArrayLayout::grid_index(b % N, N);
    const double sb = std::sin(beta);
    const double sacb = std::sin(alpha) * std::cos(beta);

    for (int j = 0; j < layout.num_panels(); ++j) {
        if (j == b)
            continue;
        const double mj = ArrayLayout::grid_index(j / N, layout.rows);
        const double nj = ArrayLayout::grid_index(j % N, N);
        const double lhs = -sb * (nj - n) + sacb * (mj - m);
        if (lhs > tol) {
            check.satisfied = false;
            check.violations.push_back({b, j, lhs});
        }
    }
    const double hub = sacb * m - sb * n;
    if (hub < -tol) {
        check.satisfied = false;
        check.violations.push_back({b, -1, -hub});
    }
}

} // namespace

PanelCheck panel_constraints_satisfied(const RotationState &state, const ArrayLayout &layout,
                                       double tol) {
    if (!layout.is_panel())
        throw std::invalid_argument("panel constraints require a panel-mode layout");
    PanelCheck check;
    for (int b = 0; b < layout.num_panels(); ++b) {
        const int mi = b / layout.cols;
        const int ni = b % layout.cols;
        collect_panel_rows(layout, b, state.alpha[mi], state.beta[ni], tol, check);
    }
    return check;
}

PanelCheck panel_constraints_for(const RotationState &state, const ArrayLayout &layout,
                                 int panel, double tol) {
    if (!layout.is_panel())
        throw std::invalid_argument("panel constraints require a panel-mode layout");
    if (panel < 0 || panel >= layout.num_panels())
        throw std::out_of_range("panel index outside the grid");
    PanelCheck check;
    const int mi = panel / layout.cols;
    const int ni = panel % layout.cols;
    collect_panel_rows(layout, panel, state.alpha[mi], state.beta[ni], tol, check);
    return check;
}

PanelCheck panel_constraints_field(const AngleField &field, const ArrayLayout &layout,
                                   double tol) {
    if (!layout.is_panel())
        throw std::invalid_argument("panel constraints require a panel-mode layout");
    if (field.rows() != layout.rows || field.cols() != layout.cols)
        throw std::invalid_argument("angle field does not match the panel grid");
    PanelCheck check;
    for (int b = 0; b < layout.num_panels(); ++b)
        collect_panel_rows(layout, b, field.alpha(b / layout.cols, b % layout.cols),
                           field.beta(b / layout.cols, b % layout.cols), tol, check);
    return check;
}

namespace {

bool sign_ok(SignRequirement req, double value, double tol) {
    switch (req) {
    case SignRequirement::any:
        return true;
    case SignRequirement::nonpositive:
        return value <= tol;
    case SignRequirement::zero:
        return std::abs(value) <= tol;
    case SignRequirement::nonnegative:
        return value >= -tol;
    }
    return false;
}

const char *sign_text(SignRequirement req) {
    switch (req) {
    case SignRequirement::any:
        return "free";
    case SignRequirement::nonpositive:
        return "<= 0";
    case SignRequirement::zero:
        return "= 0";
    case SignRequirement::nonnegative:
        return ">= 0";
    }
    return "?";
}

} // namespace

bool FeasibleRange::contains(double alpha, double beta, double tol) const {
    const double sb = std::sin(beta);
    const double sacb = std::sin(alpha) * std::cos(beta);
    return sign_ok(sin_beta, sb, tol) && sign_ok(sin_alpha_cos_beta, sacb, tol);
}

FeasibleRange analytic_feasible_range(const ArrayLayout &layout, int panel_index) {
    if (!layout.is_panel())
        throw std::invalid_argument("feasible range requires a panel-mode layout");
    if (panel_index < 0 || panel_index >= layout.num_panels())
        throw std::out_of_range("panel index outside the grid");

    const int M = layout.rows, N = layout.cols;
    const int row = panel_index / N;
    const int col = panel_index % N;

    FeasibleRange range;
    if (M == 1 && N == 1) {
        range.description = "single panel: unconstrained";
        return range;
    }
    // The column position fixes the sign of sin(beta): a right-edge panel
    // must not expose its face to panels on its left, and symmetrically for
    // the left edge; interior columns admit only sin(beta) = 0.
    if (N > 1) {
        if (col == 0)
            range.sin_beta = SignRequirement::nonnegative;
        else if (col == N - 1)
            range.sin_beta = SignRequirement::nonpositive;
        else
            range.sin_beta = SignRequirement::zero;
    }
    // The row position fixes sin(alpha)cos(beta) the same way.
    if (M > 1) {
        if (row == 0)
            range.sin_alpha_cos_beta = SignRequirement::nonpositive;
        else if (row == M - 1)
            range.sin_alpha_cos_beta = SignRequirement::nonnegative;
        else
            range.sin_alpha_cos_beta = SignRequirement::zero;
    }
    range.description = std::string("sin(beta) ") + sign_text(range.sin_beta) +
                        ", sin(alpha)cos(beta) " + sign_text(range.sin_alpha_cos_beta);
    return range;
}

} // namespace clra
