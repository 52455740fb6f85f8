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

#ifndef CLRA_HARNESS_HPP
#define CLRA_HARNESS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "clra/discrete_ga.hpp"
#include "clra/rotation_opt.hpp"

namespace clra {

enum class Scheme {
    fixed,
    isotropic,
    random_orientation,
    array_wise,
    cl_element,
    cl_panel,
    flexible_element,
    flexible_panel,
    ga_element,
    ga_panel,
    nearest_projection,
};

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string &name);

enum class SweepVariable { power, theta_max, directivity, antennas, users, grid };

std::string to_string(SweepVariable variable);
SweepVariable sweep_variable_from_string(const std::string &name);

struct ExperimentConfig {
    // element-mode array (rotation tracks)
    int rows = 8;
    int cols = 8;
    double spacing_wavelengths = 0.5;
    // panel-mode partition: panel_grid x panel_grid panels of panel_size each
    int panel_grid_rows = 2;
    int panel_grid_cols = 2;
    int panel_rows = 4;
    int panel_cols = 4;
    double occupation = 1.0;

    std::vector<Scheme> schemes{Scheme::cl_element, Scheme::fixed};
    SweepVariable sweep_variable = SweepVariable::power;
    std::vector<double> sweep_values{10.0};
    int trials = 1;
    std::uint64_t master_seed = 1;
    int threads = 1;

    int num_users = 6;
    int num_clusters = 8;
    double cluster_rcs_m2 = 1.0;
    double power_dbm = 10.0;
    double noise_dbm = -80.0;
    double wavelength_m = 0.0857;
    double theta_max = kPi / 6.0;
    double directivity = 2.0;
    double user_distance_min = 50.0;
    double user_distance_max = 70.0;
    double cluster_distance_min = 20.0;
    double cluster_distance_max = 60.0;

    AoParams optimizer;
    GaParams ga;
    int grid_points = 15;

    std::string output_path = "results.csv";
    std::string scenario_path; // optional: fixed scenario instead of drawn ones

    ArrayLayout element_layout() const;
    ArrayLayout panel_layout() const;
    ArrayLayout array_wise_layout() const; // one panel holding the whole array
};

// Parses a config document; unspecified fields keep their defaults.
ExperimentConfig config_from_json(const std::string &text);
std::string config_to_json(const ExperimentConfig &config);

// Returns the config with the sweep variable applied. Antenna-count values
// must form square element grids (and square per-panel grids in panel mode).
ExperimentConfig apply_sweep(const ExperimentConfig &base, SweepVariable variable, double value);

// Users uniform over the front-half annulus, clusters and phases from their
// own substreams; trial substream seed = mix(master_seed, trial).
Scenario generate_scenario(const ExperimentConfig &config, int trial);

struct ResultRow {
    std::string scheme;
    std::string sweep_var;
    double sweep_value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double sum_rate = 0.0;
    Eigen::VectorXd user_rates;
    int iterations = 0;
    double wall_ms = 0.0;
};

// Executes one scheme on one resolved scenario. `config` must already have
// the sweep value applied.
ResultRow run_scheme(Scheme scheme, const Scenario &scenario, const ExperimentConfig &config);

struct SummaryCell {
    std::string scheme;
    double sweep_value = 0.0;
    int trials = 0;
    double mean = 0.0;
    double ci_half = 0.0; // 95% normal-approximation half width
};

struct SweepResult {
    std::vector<ResultRow> rows; // deterministic (scheme, value, trial) order
    std::vector<SummaryCell> summary;
};

// Runs every (scheme, sweep value, trial) combination, writes the CSV to
// config.output_path (empty path skips the file) and returns all rows.
SweepResult run_sweep(const ExperimentConfig &config);

std::string csv_header();
std::string csv_line(const ResultRow &row);
void write_csv(const SweepResult &result, const std::string &path);
void print_summary(const SweepResult &result, std::ostream &out);

} // namespace clra

#endif
