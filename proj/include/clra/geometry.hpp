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

#ifndef CLRA_GEOMETRY_HPP
#define CLRA_GEOMETRY_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace clra {

inline constexpr double kPi = 3.14159265358979323846;

// Wraps an angle into (-pi, pi]. Value-preserving for every trigonometric use.
double wrap_angle(double x);

// Rectangular array of rotation tracks. In element mode each grid cell holds
// one antenna; in panel mode each cell holds a rigid panel_rows x panel_cols
// sub-array sharing a single orientation.
struct ArrayLayout {
    enum class Mode { element, panel };

    int rows = 1;            // M, horizontal tracks
    int cols = 1;            // N, vertical tracks
    double spacing = 0.5;    // inter-antenna spacing, meters
    Mode mode = Mode::element;
    int panel_rows = 1;      // M_b, antennas per panel (vertical)
    int panel_cols = 1;      // N_b, antennas per panel (horizontal)
    double occupation = 1.0; // array occupation ratio (panel pitch scale)

    int num_panels() const { return rows * cols; }
    int antennas_per_panel() const {
        return mode == Mode::panel ? panel_rows * panel_cols : 1;
    }
    int total_antennas() const { return num_panels() * antennas_per_panel(); }

    // Panel centers are spaced so that panels tile the aperture contiguously
    // at occupation ratio 1.
    double panel_pitch() const {
        return std::max(panel_rows, panel_cols) * spacing * occupation;
    }

    // Symmetric grid index for slot i of `count`: {0, +-1, ...} for odd
    // counts, half-integers {+-1/2, +-3/2, ...} for even counts, so the
    // array stays centered on the origin.
    static double grid_index(int i, int count) {
        return double(i) - 0.5 * double(count - 1);
    }

    bool is_panel() const { return mode == Mode::panel; }
};

// Position of element (m, n) on the y-z grid; the array plane is x = 0.
Eigen::Vector3d element_position(const ArrayLayout &layout, int m, int n);

// Coupled rotation angles: every antenna (or panel) in row m shares alpha[m],
// every one in column n shares beta[n].
struct RotationState {
    Eigen::VectorXd alpha; // size rows
    Eigen::VectorXd beta;  // size cols

    static RotationState zero(int rows, int cols) {
        return {Eigen::VectorXd::Zero(rows), Eigen::VectorXd::Zero(cols)};
    }

    // Angles wrapped into (-pi, pi] for storage.
    RotationState wrapped() const;
};

struct Orientation {
    Eigen::Matrix3d rotation;
    Eigen::Vector3d pointing; // rotation * [1,0,0]^T, unit norm
};

// Composite rotation: first about the vertical axis by beta, then about the
// horizontal axis by alpha, acting on the reference boresight +x.
Orientation rotation_matrix(double alpha, double beta);

// Closed form of rotation_matrix(...).pointing.
Eigen::Vector3d pointing_vector(double alpha, double beta);

// cos(theta) of cell (m, n): projection of its boresight on the array
// normal +x, equal to cos(alpha_m) * cos(beta_n).
double eccentric_cosine(const RotationState &state, int m, int n);

// Mechanical rotation bound: cos(theta_max) - tol <= cos(alpha)cos(beta) <= 1 + tol.
bool element_bound_satisfied(double alpha, double beta, double theta_max, double tol = 1e-9);
bool element_bound_satisfied(const RotationState &state, int m, int n, double theta_max,
                             double tol = 1e-9);
// True when every cell of the grid passes the bound.
bool element_bounds_satisfied(const RotationState &state, double theta_max, double tol = 1e-9);

// Panel centers on the symmetric grid scaled by the panel pitch, linear
// index b = row * cols + col (row-major).
std::vector<Eigen::Vector3d> panel_centers(const ArrayLayout &layout);

// Global position of an antenna mounted at `local` on a rigid body centered
// at `center` with orientation `rotation`.
Eigen::Vector3d antenna_global_position(const Eigen::Vector3d &center,
                                        const Eigen::Matrix3d &rotation,
                                        const Eigen::Vector3d &local);

// Per-cell orientation angles on the rows x cols grid. Cross-linked states
// broadcast row/column angles; independently oriented baselines fill each
// cell separately.
struct AngleField {
    Eigen::MatrixXd alpha; // rows x cols
    Eigen::MatrixXd beta;

    static AngleField broadcast(const RotationState &state);
    static AngleField zero(int rows, int cols) {
        return {Eigen::MatrixXd::Zero(rows, cols), Eigen::MatrixXd::Zero(rows, cols)};
    }
    int rows() const { return int(alpha.rows()); }
    int cols() const { return int(alpha.cols()); }
};

// Number of grid cells whose boresight violates the mechanical bound.
int count_element_violations(const AngleField &field, double theta_max, double tol = 1e-9);

// One violated panel inequality. `other < 0` marks the hub-blockage row
// (panel normal against its own center); otherwise the anti-reflection row
// against panel `other`. residual > 0 measures the violation.
struct PanelViolation {
    int panel;
    int other;
    double residual;
};

struct PanelCheck {
    bool satisfied = true;
    std::vector<PanelViolation> violations;
};

// Evaluates, in panel-grid index units, the anti-reflection rows
//   -sin(beta_n)(n_j - n) + sin(alpha_m)cos(beta_n)(m_j - m) <= tol
// for every ordered panel pair, and the hub rows
//   sin(alpha_m)cos(beta_n) m >= sin(beta_n) n - tol
// for every panel.
PanelCheck panel_constraints_satisfied(const RotationState &state, const ArrayLayout &layout,
                                       double tol = 1e-9);

// Same rows restricted to panel b as the oriented panel.
PanelCheck panel_constraints_for(const RotationState &state, const ArrayLayout &layout,
                                 int panel, double tol = 1e-9);

// Panel rows evaluated on independently oriented panels.
PanelCheck panel_constraints_field(const AngleField &field, const ArrayLayout &layout,
                                   double tol = 1e-9);

enum class SignRequirement { any, nonpositive, zero, nonnegative };

// Closed-form admissible (alpha, beta) region of one panel, expressed as
// sign conditions on sin(beta) and sin(alpha)cos(beta). Serves as an
// independent oracle for panel_constraints_for.
struct FeasibleRange {
    SignRequirement sin_beta = SignRequirement::any;
    SignRequirement sin_alpha_cos_beta = SignRequirement::any;
    std::string description;

    bool contains(double alpha, double beta, double tol = 1e-12) const;
};

// Derives the admissible region of panel `panel_index` from the grid
// position alone: extreme rows/columns admit one sign, interior ones pin
// the product to zero, a single panel is unconstrained.
FeasibleRange analytic_feasible_range(const ArrayLayout &layout, int panel_index);

} // namespace clra

#endif
