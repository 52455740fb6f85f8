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

#ifndef CLRA_ROTATION_OPT_HPP
#define CLRA_ROTATION_OPT_HPP

#include <utility>
#include <vector>

#include "clra/beamforming.hpp"
#include "clra/channel.hpp"
#include "clra/linprog.hpp"

namespace clra {

enum class RotationMode { element, panel };

// How orientation variables map onto the grid: cross-linked rows/columns
// (M + N variables) or one independent pair per cell (2 M N variables).
enum class Coupling { cross_linked, independent };

// Everything the rotation objective depends on besides the angles.
struct RotationProblem {
    const Scenario *scenario = nullptr;
    ArrayLayout layout;     // element grid or panel grid
    GainPattern pattern;
    RotationMode mode = RotationMode::element;
    Coupling coupling = Coupling::cross_linked;
    double theta_max = kPi / 6.0; // element-mode rotation bound
};

struct FeasDirParams {
    double armijo_shrink = 0.5;    // step contraction per backtrack
    double armijo_slope = 0.1;     // required fraction of the linear gain
    double initial_step = 1.0;
    double trust_radius = 0.05;    // box on the per-iteration angle change, radians
    double gradient_step = 1e-5;   // central-difference perturbation, radians
    double inner_tolerance = 1e-4; // ascent-gap stopping threshold
    int max_inner_iterations = 100;
    int max_backtracks = 40;
    // Armijo candidates must satisfy the exact constraints outright; panel
    // rows get a 1e-12 floor against LP round-off on equality-pinned panels.
    double feasibility_tol = 0.0;
    // When set, the line search scores candidates by the sum rate under
    // freshly derived MMSE receivers instead of the frozen ones. The
    // gradient anchor is refreshed alongside, which keeps the frozen-
    // receiver gradient valid for the refreshed objective. Frozen receivers
    // make the objective a razor ridge at high SNR (any rotation leaks
    // power into the nulls), stalling the ascent in microscopic steps.
    bool refresh_receivers = false;
};

struct AoParams {
    FeasDirParams inner;
    double outer_tolerance = 1e-3;
    int max_outer_iterations = 50;
};

struct TraceRecord {
    double objective = 0.0;
    double step = 0.0;          // accepted Armijo step
    double gradient_norm = 0.0;
    double gap = 0.0;           // linearized ascent gap at this iterate
    LpStatus lp_status = LpStatus::optimal;
    bool feasible = true;
};

struct OptimizerTrace {
    std::vector<TraceRecord> records;

    bool non_decreasing(double tol = 1e-9) const;
    int iterations() const { return int(records.empty() ? 0 : records.size() - 1); }
};

// Maps the flat optimization vector onto per-cell angles.
class OrientationVariables {
  public:
    OrientationVariables(const ArrayLayout &layout, Coupling coupling);

    int count() const;
    int alpha_index(int m, int n) const;
    int beta_index(int m, int n) const;
    AngleField decode(const Eigen::VectorXd &u) const;
    Eigen::VectorXd encode(const RotationState &state) const; // cross-linked only
    RotationState to_state(const Eigen::VectorXd &u) const;   // cross-linked only
    Coupling coupling() const { return coupling_; }

  private:
    int rows_, cols_;
    Coupling coupling_;
};

// Channel for the problem's mode at the given per-cell angles.
Eigen::MatrixXcd problem_channel(const RotationProblem &problem, const AngleField &field);

// Sum rate with the beamformers held fixed.
double rotation_objective(const RotationProblem &problem, const OrientationVariables &vars,
                          const Eigen::VectorXd &u, const Eigen::MatrixXcd &beamformers);

// Exact (non-linearized) constraint check for the problem's mode.
bool rotation_feasible(const RotationProblem &problem, const OrientationVariables &vars,
                       const Eigen::VectorXd &u, double tol = 1e-9);

// Central-difference gradient of the frozen-beamformer sum rate; component j
// perturbs variable j with the channel rebuilt per evaluation.
Eigen::VectorXd rotation_gradient(const RotationProblem &problem, const OrientationVariables &vars,
                                  const Eigen::VectorXd &u, const Eigen::MatrixXcd &beamformers,
                                  double eps_fd);

// Linearized feasible set around u expressed in the step variables du,
// including the trust-region box.
LinearProgram rotation_lp(const RotationProblem &problem, const OrientationVariables &vars,
                          const Eigen::VectorXd &u, const Eigen::VectorXd &gradient,
                          double trust_radius);

struct FeasDirResult {
    Eigen::VectorXd u;
    OptimizerTrace trace;
    bool lp_ok = true; // false when the step program failed at a feasible point
};

// Ascent loop: linearize, pick the best feasible target by LP, step toward
// it with backtracking, keeping every accepted iterate exactly feasible.
// Stops when the ascent gap falls below the tolerance, the iteration cap is
// reached, or no feasible improving step exists.
FeasDirResult feasible_direction_vars(const RotationProblem &problem,
                                      const OrientationVariables &vars,
                                      const Eigen::VectorXd &u0,
                                      const Eigen::MatrixXcd &beamformers,
                                      const FeasDirParams &params);

// Cross-linked convenience wrappers mirroring the flat state type.
Eigen::VectorXd objective_gradient(const RotationProblem &problem, const RotationState &state,
                                   const Eigen::MatrixXcd &beamformers, double eps_fd);
LinearProgram linearized_element_constraints(const RotationState &state, double theta_max,
                                             double trust_radius);
LinearProgram linearized_panel_constraints(const RotationState &state, const ArrayLayout &layout,
                                           double trust_radius);
std::pair<RotationState, OptimizerTrace> feasible_direction(const RotationProblem &problem,
                                                            const RotationState &state0,
                                                            const Eigen::MatrixXcd &beamformers,
                                                            const FeasDirParams &params);

struct AoResult {
    Eigen::MatrixXcd beamformers;
    Eigen::VectorXd u;
    RotationState state; // populated for cross-linked coupling
    OptimizerTrace trace; // one record per outer iteration
    RateReport report;
    int outer_iterations = 0;
    bool converged = false;
};

// Alternating maximization: MMSE beamformer refresh, then a feasible
// direction pass over the angles, until the objective settles.
AoResult alternating_optimize(const RotationProblem &problem, const AoParams &params);

// Exact-pointing track angles and the attainable SNR for one user served by
// a single-row array, with per-antenna eccentricities clipped to theta_max.
struct SingleUserPointing {
    RotationState state;
    Eigen::VectorXd cos_eps; // per antenna, after clipping
    double snr_linear = 0.0;
};

SingleUserPointing single_user_oracle(const ArrayLayout &layout, const Eigen::Vector3d &user,
                                      double theta_max, double pbar, double wavelength,
                                      const GainPattern &pattern);

} // namespace clra

#endif
