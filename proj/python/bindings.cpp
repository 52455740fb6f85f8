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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "clra/harness.hpp"

namespace py = pybind11;
using namespace clra;

namespace {

RotationProblem make_problem(const Scenario &scenario, const ArrayLayout &layout,
                             const GainPattern &pattern, const std::string &mode,
                             const std::string &coupling, double theta_max) {
    RotationProblem problem;
    problem.scenario = &scenario;
    problem.layout = layout;
    problem.pattern = pattern;
    problem.mode = mode == "panel" ? RotationMode::panel : RotationMode::element;
    problem.coupling =
        coupling == "independent" ? Coupling::independent : Coupling::cross_linked;
    problem.theta_max = theta_max;
    return problem;
}

std::vector<double> trace_objectives(const OptimizerTrace &trace) {
    std::vector<double> values;
    values.reserve(trace.records.size());
    for (const TraceRecord &record : trace.records)
        values.push_back(record.objective);
    return values;
}

} // namespace

PYBIND11_MODULE(_clra, m) {
    m.doc() = "Cross-linked rotatable antenna array simulation and sum-rate optimization";

    py::class_<ArrayLayout>(m, "ArrayLayout")
        .def(py::init([](int rows, int cols, double spacing, const std::string &mode,
                         int panel_rows, int panel_cols, double occupation) {
                 ArrayLayout layout;
                 layout.rows = rows;
                 layout.cols = cols;
                 layout.spacing = spacing;
                 layout.mode = mode == "panel" ? ArrayLayout::Mode::panel
                                               : ArrayLayout::Mode::element;
                 layout.panel_rows = panel_rows;
                 layout.panel_cols = panel_cols;
                 layout.occupation = occupation;
                 return layout;
             }),
             py::arg("rows") = 1, py::arg("cols") = 1, py::arg("spacing") = 0.04285,
             py::arg("mode") = "element", py::arg("panel_rows") = 1, py::arg("panel_cols") = 1,
             py::arg("occupation") = 1.0)
        .def_readwrite("rows", &ArrayLayout::rows)
        .def_readwrite("cols", &ArrayLayout::cols)
        .def_readwrite("spacing", &ArrayLayout::spacing)
        .def_readwrite("panel_rows", &ArrayLayout::panel_rows)
        .def_readwrite("panel_cols", &ArrayLayout::panel_cols)
        .def_property_readonly("total_antennas", &ArrayLayout::total_antennas)
        .def_property_readonly("panel_pitch", &ArrayLayout::panel_pitch);

    py::class_<RotationState>(m, "RotationState")
        .def(py::init([](Eigen::VectorXd alpha, Eigen::VectorXd beta) {
                 return RotationState{std::move(alpha), std::move(beta)};
             }),
             py::arg("alpha"), py::arg("beta"))
        .def_static("zero", &RotationState::zero, py::arg("rows"), py::arg("cols"))
        .def_readwrite("alpha", &RotationState::alpha)
        .def_readwrite("beta", &RotationState::beta)
        .def("wrapped", &RotationState::wrapped);

    py::class_<GainPattern>(m, "GainPattern")
        .def(py::init([](double directivity) { return GainPattern{directivity}; }),
             py::arg("directivity") = 2.0)
        .def_readwrite("directivity", &GainPattern::directivity)
        .def_property_readonly("peak_gain", &GainPattern::peak_gain);

    py::class_<UserTerminal>(m, "UserTerminal")
        .def(py::init([](const Eigen::Vector3d &position, double power_w) {
                 return UserTerminal{position, power_w};
             }),
             py::arg("position"), py::arg("power_w") = 0.01)
        .def_readwrite("position", &UserTerminal::position)
        .def_readwrite("power_w", &UserTerminal::power_w);

    py::class_<ScatterCluster>(m, "ScatterCluster")
        .def(py::init([](const Eigen::Vector3d &position, double rcs, double phase) {
                 return ScatterCluster{position, rcs, phase};
             }),
             py::arg("position"), py::arg("rcs_m2") = 1.0, py::arg("phase_rad") = 0.0)
        .def_readwrite("position", &ScatterCluster::position)
        .def_readwrite("rcs_m2", &ScatterCluster::rcs_m2)
        .def_readwrite("phase_rad", &ScatterCluster::phase_rad);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("users", &Scenario::users)
        .def_readwrite("clusters", &Scenario::clusters)
        .def_readwrite("noise_power_w", &Scenario::noise_power_w)
        .def_readwrite("wavelength_m", &Scenario::wavelength_m)
        .def_readwrite("seed", &Scenario::seed)
        .def_property_readonly("reference_gain", &Scenario::reference_gain)
        .def("normalized_powers", &Scenario::normalized_powers);

    m.def("scenario_from_json", &scenario_from_json, py::arg("text"));
    m.def("scenario_to_json", &scenario_to_json, py::arg("scenario"));
    m.def("dbm_to_watts", &dbm_to_watts);
    m.def("watts_to_dbm", &watts_to_dbm);

    m.def(
        "rotation_matrix",
        [](double alpha, double beta) {
            const Orientation o = rotation_matrix(alpha, beta);
            return py::make_tuple(o.rotation, o.pointing);
        },
        py::arg("alpha"), py::arg("beta"),
        "Returns (rotation 3x3, pointing unit vector).");
    m.def("pointing_vector", &pointing_vector, py::arg("alpha"), py::arg("beta"));
    m.def("eccentric_cosine", &eccentric_cosine, py::arg("state"), py::arg("m"), py::arg("n"));
    m.def("element_bound_satisfied",
          py::overload_cast<double, double, double, double>(&element_bound_satisfied),
          py::arg("alpha"), py::arg("beta"), py::arg("theta_max"), py::arg("tol") = 1e-9);
    m.def("panel_centers", &panel_centers, py::arg("layout"));
    m.def(
        "panel_constraints_satisfied",
        [](const RotationState &state, const ArrayLayout &layout, double tol) {
            const PanelCheck check = panel_constraints_satisfied(state, layout, tol);
            std::vector<py::tuple> violations;
            for (const PanelViolation &v : check.violations)
                violations.push_back(py::make_tuple(v.panel, v.other, v.residual));
            return py::make_tuple(check.satisfied, violations);
        },
        py::arg("state"), py::arg("layout"), py::arg("tol") = 1e-9,
        "Returns (satisfied, [(panel, other, residual)]).");
    m.def("directional_gain", &directional_gain, py::arg("pattern"), py::arg("cos_eps"));
    m.def("element_channel_matrix", &element_channel_matrix, py::arg("scenario"),
          py::arg("layout"), py::arg("state"), py::arg("pattern"));
    m.def("panel_channel_matrix", &panel_channel_matrix, py::arg("scenario"),
          py::arg("layout"), py::arg("state"), py::arg("pattern"));

    m.def("mrc", &mrc, py::arg("h"));
    m.def(
        "mmse",
        [](const Eigen::MatrixXcd &channel, const Eigen::VectorXd &pbar, int user) {
            return mmse(channel, pbar, user);
        },
        py::arg("channel"), py::arg("pbar"), py::arg("user"));
    m.def("mmse_all", &mmse_all, py::arg("channel"), py::arg("pbar"));
    m.def("sinr", &sinr, py::arg("channel"), py::arg("beamformers"), py::arg("pbar"),
          py::arg("user"));
    m.def(
        "sum_rate",
        [](const Eigen::MatrixXcd &channel, const Eigen::MatrixXcd &w,
           const Eigen::VectorXd &pbar) {
            const RateReport report = sum_rate(channel, w, pbar);
            py::dict out;
            out["sinr"] = report.sinr;
            out["rate"] = report.rate;
            out["sum_rate"] = report.sum_rate;
            return out;
        },
        py::arg("channel"), py::arg("beamformers"), py::arg("pbar"));

    m.def(
        "solve_lp",
        [](const Eigen::VectorXd &objective, const Eigen::MatrixXd &rows,
           const Eigen::VectorXd &rhs, const Eigen::VectorXd &lower,
           const Eigen::VectorXd &upper) {
            const LpSolution sol = solve_lp({objective, rows, rhs, lower, upper});
            py::dict out;
            out["status"] = sol.status == LpStatus::optimal
                                ? "optimal"
                                : (sol.status == LpStatus::infeasible ? "infeasible"
                                                                      : "unbounded");
            out["x"] = sol.x;
            out["value"] = sol.value;
            out["row_duals"] = sol.row_duals;
            out["kkt_residual"] = sol.kkt_residual;
            return out;
        },
        py::arg("objective"), py::arg("rows"), py::arg("rhs"), py::arg("lower"),
        py::arg("upper"), "Maximize objective^T x s.t. rows*x <= rhs, lower <= x <= upper.");

    py::class_<FeasDirParams>(m, "FeasDirParams")
        .def(py::init<>())
        .def_readwrite("armijo_shrink", &FeasDirParams::armijo_shrink)
        .def_readwrite("armijo_slope", &FeasDirParams::armijo_slope)
        .def_readwrite("initial_step", &FeasDirParams::initial_step)
        .def_readwrite("trust_radius", &FeasDirParams::trust_radius)
        .def_readwrite("gradient_step", &FeasDirParams::gradient_step)
        .def_readwrite("inner_tolerance", &FeasDirParams::inner_tolerance)
        .def_readwrite("max_inner_iterations", &FeasDirParams::max_inner_iterations)
        .def_readwrite("refresh_receivers", &FeasDirParams::refresh_receivers);

    py::class_<AoParams>(m, "AoParams")
        .def(py::init<>())
        .def_readwrite("inner", &AoParams::inner)
        .def_readwrite("outer_tolerance", &AoParams::outer_tolerance)
        .def_readwrite("max_outer_iterations", &AoParams::max_outer_iterations);

    m.def(
        "alternating_optimize",
        [](const Scenario &scenario, const ArrayLayout &layout, const GainPattern &pattern,
           const std::string &mode, const std::string &coupling, double theta_max,
           const AoParams &params) {
            const RotationProblem problem =
                make_problem(scenario, layout, pattern, mode, coupling, theta_max);
            const AoResult result = alternating_optimize(problem, params);
            py::dict out;
            out["u"] = result.u;
            if (problem.coupling == Coupling::cross_linked) {
                out["alpha"] = result.state.alpha;
                out["beta"] = result.state.beta;
            }
            out["beamformers"] = result.beamformers;
            out["sum_rate"] = result.report.sum_rate;
            out["user_rates"] = result.report.rate;
            out["outer_iterations"] = result.outer_iterations;
            out["converged"] = result.converged;
            out["trace"] = trace_objectives(result.trace);
            return out;
        },
        py::arg("scenario"), py::arg("layout"), py::arg("pattern"),
        py::arg("mode") = "element", py::arg("coupling") = "cross_linked",
        py::arg("theta_max") = kPi / 6.0, py::arg("params") = AoParams{});

    m.def(
        "feasible_direction",
        [](const Scenario &scenario, const ArrayLayout &layout, const GainPattern &pattern,
           const std::string &mode, double theta_max, const RotationState &state,
           const Eigen::MatrixXcd &beamformers, const FeasDirParams &params) {
            const RotationProblem problem =
                make_problem(scenario, layout, pattern, mode, "cross_linked", theta_max);
            auto [out_state, trace] = feasible_direction(problem, state, beamformers, params);
            py::dict out;
            out["alpha"] = out_state.alpha;
            out["beta"] = out_state.beta;
            out["trace"] = trace_objectives(trace);
            return out;
        },
        py::arg("scenario"), py::arg("layout"), py::arg("pattern"), py::arg("mode"),
        py::arg("theta_max"), py::arg("state"), py::arg("beamformers"),
        py::arg("params") = FeasDirParams{});

    m.def(
        "single_user_oracle",
        [](const ArrayLayout &layout, const Eigen::Vector3d &user, double theta_max,
           double pbar, double wavelength, const GainPattern &pattern) {
            const SingleUserPointing p =
                single_user_oracle(layout, user, theta_max, pbar, wavelength, pattern);
            py::dict out;
            out["alpha"] = p.state.alpha;
            out["beta"] = p.state.beta;
            out["cos_eps"] = p.cos_eps;
            out["snr_linear"] = p.snr_linear;
            return out;
        },
        py::arg("layout"), py::arg("user"), py::arg("theta_max"), py::arg("pbar"),
        py::arg("wavelength"), py::arg("pattern"));

    py::class_<AngleGrid>(m, "AngleGrid")
        .def_static("uniform", &AngleGrid::uniform, py::arg("theta_max"), py::arg("points"))
        .def_readwrite("alpha_values", &AngleGrid::alpha_values)
        .def_readwrite("beta_values", &AngleGrid::beta_values);

    py::class_<GaParams>(m, "GaParams")
        .def(py::init<>())
        .def_readwrite("population", &GaParams::population)
        .def_readwrite("generations", &GaParams::generations)
        .def_readwrite("crossover_prob", &GaParams::crossover_prob)
        .def_readwrite("mutation_prob", &GaParams::mutation_prob)
        .def_readwrite("tournament_size", &GaParams::tournament_size)
        .def_readwrite("penalty", &GaParams::penalty)
        .def_readwrite("elite_count", &GaParams::elite_count);

    m.def(
        "run_ga",
        [](const Scenario &scenario, const ArrayLayout &layout, const GainPattern &pattern,
           const std::string &mode, double theta_max, const AngleGrid &grid,
           const GaParams &params, std::uint64_t seed) {
            const RotationProblem problem =
                make_problem(scenario, layout, pattern, mode, "cross_linked", theta_max);
            const GaResult result = run_ga(problem, grid, params, seed);
            py::dict out;
            out["genes"] = result.best.genes;
            out["alpha"] = result.state.alpha;
            out["beta"] = result.state.beta;
            out["best_fitness"] = result.best_fitness;
            out["feasible"] = result.feasible;
            out["sum_rate"] = result.feasible ? result.report.sum_rate : 0.0;
            out["history"] = result.best_fitness_history;
            return out;
        },
        py::arg("scenario"), py::arg("layout"), py::arg("pattern"), py::arg("mode"),
        py::arg("theta_max"), py::arg("grid"), py::arg("params"), py::arg("seed"));

    m.def(
        "nearest_projection",
        [](const RotationState &continuous, const AngleGrid &grid, double theta_max) {
            const ProjectionResult p = nearest_projection(continuous, grid, theta_max);
            py::dict out;
            out["alpha"] = p.state.alpha;
            out["beta"] = p.state.beta;
            out["repaired"] = p.repaired;
            out["fallback"] = p.fallback;
            return out;
        },
        py::arg("continuous"), py::arg("grid"), py::arg("theta_max"));

    m.def("config_from_json", &config_from_json, py::arg("text"));
    m.def("config_to_json", &config_to_json, py::arg("config"));
    py::class_<ExperimentConfig>(m, "ExperimentConfig").def(py::init<>());
    m.def("generate_scenario", &generate_scenario, py::arg("config"), py::arg("trial"));
    m.def(
        "run_scheme",
        [](const std::string &scheme, const Scenario &scenario,
           const ExperimentConfig &config) {
            const ResultRow row = run_scheme(scheme_from_string(scheme), scenario, config);
            py::dict out;
            out["scheme"] = row.scheme;
            out["seed"] = row.seed;
            out["sum_rate"] = row.sum_rate;
            out["user_rates"] = row.user_rates;
            out["iterations"] = row.iterations;
            return out;
        },
        py::arg("scheme"), py::arg("scenario"), py::arg("config"));
    m.def(
        "run_sweep",
        [](const ExperimentConfig &config) {
            const SweepResult result = run_sweep(config);
            py::list rows;
            for (const ResultRow &row : result.rows) {
                py::dict r;
                r["scheme"] = row.scheme;
                r["sweep_var"] = row.sweep_var;
                r["sweep_value"] = row.sweep_value;
                r["trial"] = row.trial;
                r["seed"] = row.seed;
                r["sum_rate"] = row.sum_rate;
                r["user_rates"] = row.user_rates;
                r["iterations"] = row.iterations;
                rows.append(r);
            }
            return rows;
        },
        py::arg("config"));
}
