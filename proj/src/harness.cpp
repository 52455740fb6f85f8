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

#include "clra/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace clra {

namespace {

constexpr std::uint64_t kUserStream = 0x75736572ULL;    // "user"
constexpr std::uint64_t kClusterStream = 0x636C7573ULL; // "clus" (matches scenario_from_json)
constexpr std::uint64_t kPhaseStream = 0x70686173ULL;   // "phas" (matches scenario_from_json)
constexpr std::uint64_t kOrientationStream = 0x6F726E74ULL;
constexpr std::uint64_t kGaStream = 0x67615F73ULL;

const char *scheme_names[] = {
    "fixed",          "isotropic",       "random_orientation", "array_wise",
    "cl_element",     "cl_panel",        "flexible_element",   "flexible_panel",
    "ga_element",     "ga_panel",        "nearest_projection",
};

} // namespace

std::string to_string(Scheme scheme) { return scheme_names[int(scheme)]; }

Scheme scheme_from_string(const std::string &name) {
    for (int i = 0; i < int(std::size(scheme_names)); ++i)
        if (name == scheme_names[i])
            return Scheme(i);
    throw std::invalid_argument("unknown scheme: " + name);
}

std::string to_string(SweepVariable variable) {
    switch (variable) {
    case SweepVariable::power:
        return "power";
    case SweepVariable::theta_max:
        return "theta_max";
    case SweepVariable::directivity:
        return "p";
    case SweepVariable::antennas:
        return "Q";
    case SweepVariable::users:
        return "K";
    case SweepVariable::grid:
        return "L";
    }
    return "?";
}

SweepVariable sweep_variable_from_string(const std::string &name) {
    if (name == "power")
        return SweepVariable::power;
    if (name == "theta_max")
        return SweepVariable::theta_max;
    if (name == "p" || name == "directivity")
        return SweepVariable::directivity;
    if (name == "Q" || name == "antennas")
        return SweepVariable::antennas;
    if (name == "K" || name == "users")
        return SweepVariable::users;
    if (name == "L" || name == "grid")
        return SweepVariable::grid;
    throw std::invalid_argument("unknown sweep variable: " + name);
}

ArrayLayout ExperimentConfig::element_layout() const {
    ArrayLayout layout;
    layout.rows = rows;
    layout.cols = cols;
    layout.spacing = spacing_wavelengths * wavelength_m;
    layout.mode = ArrayLayout::Mode::element;
    layout.occupation = occupation;
    return layout;
}

ArrayLayout ExperimentConfig::panel_layout() const {
    ArrayLayout layout;
    layout.rows = panel_grid_rows;
    layout.cols = panel_grid_cols;
    layout.spacing = spacing_wavelengths * wavelength_m;
    layout.mode = ArrayLayout::Mode::panel;
    layout.panel_rows = panel_rows;
    layout.panel_cols = panel_cols;
    layout.occupation = occupation;
    return layout;
}

ArrayLayout ExperimentConfig::array_wise_layout() const {
    ArrayLayout layout;
    layout.rows = 1;
    layout.cols = 1;
    layout.spacing = spacing_wavelengths * wavelength_m;
    layout.mode = ArrayLayout::Mode::panel;
    layout.panel_rows = rows;
    layout.panel_cols = cols;
    layout.occupation = occupation;
    return layout;
}

ExperimentConfig config_from_json(const std::string &text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    ExperimentConfig c;
    c.master_seed = doc.value("seed", c.master_seed);
    c.trials = doc.value("trials", c.trials);
    c.threads = doc.value("threads", c.threads);
    c.output_path = doc.value("out", c.output_path);
    c.scenario_path = doc.value("scenario_path", c.scenario_path);
    c.num_users = doc.value("users", c.num_users);
    c.num_clusters = doc.value("clusters", c.num_clusters);
    c.cluster_rcs_m2 = doc.value("cluster_rcs_m2", c.cluster_rcs_m2);
    c.power_dbm = doc.value("power_dbm", c.power_dbm);
    c.noise_dbm = doc.value("noise_dbm", c.noise_dbm);
    c.wavelength_m = doc.value("wavelength_m", c.wavelength_m);
    if (doc.contains("frequency_ghz"))
        c.wavelength_m = 299792458.0 / (doc.at("frequency_ghz").get<double>() * 1e9);
    c.theta_max = doc.value("theta_max_rad", c.theta_max);
    c.directivity = doc.value("directivity", c.directivity);
    c.occupation = doc.value("occupation", c.occupation);
    if (doc.contains("array")) {
        const auto &a = doc.at("array");
        c.rows = a.value("rows", c.rows);
        c.cols = a.value("cols", c.cols);
        c.spacing_wavelengths = a.value("spacing_wavelengths", c.spacing_wavelengths);
    }
    if (doc.contains("panels")) {
        const auto &p = doc.at("panels");
        c.panel_grid_rows = p.value("rows", c.panel_grid_rows);
        c.panel_grid_cols = p.value("cols", c.panel_grid_cols);
        c.panel_rows = p.value("panel_rows", c.panel_rows);
        c.panel_cols = p.value("panel_cols", c.panel_cols);
    }
    if (doc.contains("user_distance_m")) {
        c.user_distance_min = doc.at("user_distance_m").at(0).get<double>();
        c.user_distance_max = doc.at("user_distance_m").at(1).get<double>();
    }
    if (doc.contains("cluster_distance_m")) {
        c.cluster_distance_min = doc.at("cluster_distance_m").at(0).get<double>();
        c.cluster_distance_max = doc.at("cluster_distance_m").at(1).get<double>();
    }
    if (doc.contains("schemes")) {
        c.schemes.clear();
        for (const auto &s : doc.at("schemes"))
            c.schemes.push_back(scheme_from_string(s.get<std::string>()));
    }
    if (doc.contains("sweep")) {
        const auto &s = doc.at("sweep");
        if (s.contains("variable"))
            c.sweep_variable = sweep_variable_from_string(s.at("variable").get<std::string>());
        if (s.contains("values")) {
            c.sweep_values.clear();
            for (const auto &v : s.at("values"))
                c.sweep_values.push_back(v.get<double>());
        }
    }
    if (doc.contains("optimizer")) {
        const auto &o = doc.at("optimizer");
        auto &inner = c.optimizer.inner;
        inner.armijo_shrink = o.value("armijo_shrink", inner.armijo_shrink);
        inner.armijo_slope = o.value("armijo_slope", inner.armijo_slope);
        inner.initial_step = o.value("initial_step", inner.initial_step);
        inner.trust_radius = o.value("trust_radius", inner.trust_radius);
        inner.gradient_step = o.value("gradient_step", inner.gradient_step);
        inner.inner_tolerance = o.value("inner_tolerance", inner.inner_tolerance);
        inner.max_inner_iterations = o.value("max_inner_iterations", inner.max_inner_iterations);
        inner.max_backtracks = o.value("max_backtracks", inner.max_backtracks);
        c.optimizer.outer_tolerance = o.value("outer_tolerance", c.optimizer.outer_tolerance);
        c.optimizer.max_outer_iterations =
            o.value("max_outer_iterations", c.optimizer.max_outer_iterations);
    }
    if (doc.contains("ga")) {
        const auto &g = doc.at("ga");
        c.ga.population = g.value("population", c.ga.population);
        c.ga.generations = g.value("generations", c.ga.generations);
        c.ga.crossover_prob = g.value("crossover_prob", c.ga.crossover_prob);
        c.ga.mutation_prob = g.value("mutation_prob", c.ga.mutation_prob);
        c.ga.tournament_size = g.value("tournament_size", c.ga.tournament_size);
        c.ga.penalty = g.value("penalty", c.ga.penalty);
        c.ga.elite_count = g.value("elite_count", c.ga.elite_count);
        c.grid_points = g.value("grid_points", c.grid_points);
    }
    if (c.sweep_values.empty())
        throw std::invalid_argument("config: sweep values must be nonempty");
    if (c.trials < 1)
        throw std::invalid_argument("config: trials must be >= 1");
    return c;
}

std::string config_to_json(const ExperimentConfig &c) {
    nlohmann::json doc;
    doc["seed"] = c.master_seed;
    doc["trials"] = c.trials;
    doc["threads"] = c.threads;
    doc["out"] = c.output_path;
    if (!c.scenario_path.empty())
        doc["scenario_path"] = c.scenario_path;
    doc["users"] = c.num_users;
    doc["clusters"] = c.num_clusters;
    doc["cluster_rcs_m2"] = c.cluster_rcs_m2;
    doc["power_dbm"] = c.power_dbm;
    doc["noise_dbm"] = c.noise_dbm;
    doc["wavelength_m"] = c.wavelength_m;
    doc["theta_max_rad"] = c.theta_max;
    doc["directivity"] = c.directivity;
    doc["occupation"] = c.occupation;
    doc["array"] = {{"rows", c.rows},
                    {"cols", c.cols},
                    {"spacing_wavelengths", c.spacing_wavelengths}};
    doc["panels"] = {{"rows", c.panel_grid_rows},
                     {"cols", c.panel_grid_cols},
                     {"panel_rows", c.panel_rows},
                     {"panel_cols", c.panel_cols}};
    doc["user_distance_m"] = {c.user_distance_min, c.user_distance_max};
    doc["cluster_distance_m"] = {c.cluster_distance_min, c.cluster_distance_max};
    doc["schemes"] = nlohmann::json::array();
    for (Scheme s : c.schemes)
        doc["schemes"].push_back(to_string(s));
    doc["sweep"] = {{"variable", to_string(c.sweep_variable)}, {"values", c.sweep_values}};
    doc["optimizer"] = {{"armijo_shrink", c.optimizer.inner.armijo_shrink},
                        {"armijo_slope", c.optimizer.inner.armijo_slope},
                        {"initial_step", c.optimizer.inner.initial_step},
                        {"trust_radius", c.optimizer.inner.trust_radius},
                        {"gradient_step", c.optimizer.inner.gradient_step},
                        {"inner_tolerance", c.optimizer.inner.inner_tolerance},
                        {"max_inner_iterations", c.optimizer.inner.max_inner_iterations},
                        {"max_backtracks", c.optimizer.inner.max_backtracks},
                        {"outer_tolerance", c.optimizer.outer_tolerance},
                        {"max_outer_iterations", c.optimizer.max_outer_iterations}};
    doc["ga"] = {{"population", c.ga.population},
                 {"generations", c.ga.generations},
                 {"crossover_prob", c.ga.crossover_prob},
                 {"mutation_prob", c.ga.mutation_prob},
                 {"tournament_size", c.ga.tournament_size},
                 {"penalty", c.ga.penalty},
                 {"elite_count", c.ga.elite_count},
                 {"grid_points", c.grid_points}};
    return doc.dump(2);
}

ExperimentConfig apply_sweep(const ExperimentConfig &base, SweepVariable variable, double value) {
    ExperimentConfig c = base;
    switch (variable) {
    case SweepVariable::power:
        c.power_dbm = value;
        break;
    case SweepVariable::theta_max:
        c.theta_max = value;
        break;
    case SweepVariable::directivity:
        c.directivity = value;
        break;
    case SweepVariable::antennas: {
        const int q = int(std::lround(value));
        const int side = int(std::lround(std::sqrt(double(q))));
        if (side * side != q)
            throw std::invalid_argument("antenna sweep values must be perfect squares");
        c.rows = c.cols = side;
        const int panels = base.panel_grid_rows * base.panel_grid_cols;
        const int per_panel = q / panels;
        const int panel_side = int(std::lround(std::sqrt(double(per_panel))));
        if (panels * panel_side * panel_side != q)
            throw std::invalid_argument("antenna sweep values must tile the panel grid squarely");
        c.panel_rows = c.panel_cols = panel_side;
        break;
    }
    case SweepVariable::users:
        c.num_users = int(std::lround(value));
        break;
    case SweepVariable::grid:
        c.grid_points = int(std::lround(value));
        break;
    }
    return c;
}

Scenario generate_scenario(const ExperimentConfig &config, int trial) {
    if (!config.scenario_path.empty()) {
        std::ifstream in(config.scenario_path);
        if (!in)
            throw std::runtime_error("cannot open scenario file: " + config.scenario_path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        Scenario fixed = scenario_from_json(buffer.str());
        for (UserTerminal &user : fixed.users)
            user.power_w = dbm_to_watts(config.power_dbm); // sweep still applies
        return fixed;
    }

    Scenario scenario;
    scenario.seed = mix_seed({config.master_seed, std::uint64_t(trial)});
    scenario.wavelength_m = config.wavelength_m;
    scenario.noise_power_w = dbm_to_watts(config.noise_dbm);

    Rng users = Rng(scenario.seed).substream(kUserStream);
    const double power_w = dbm_to_watts(config.power_dbm);
    for (int k = 0; k < config.num_users; ++k) {
        const double azimuth = users.uniform(-kPi / 2.0, kPi / 2.0);
        const double radius = std::sqrt(users.uniform(config.user_distance_min * config.user_distance_min,
                                                      config.user_distance_max * config.user_distance_max));
        scenario.users.push_back(
            {{radius * std::cos(azimuth), radius * std::sin(azimuth), 0.0}, power_w});
    }

    Rng clusters = Rng(scenario.seed).substream(kClusterStream);
    Rng phases = Rng(scenario.seed).substream(kPhaseStream);
    for (int d = 0; d < config.num_clusters; ++d) {
        const double azimuth = clusters.uniform(-kPi / 2.0, kPi / 2.0);
        const double radius =
            std::sqrt(clusters.uniform(config.cluster_distance_min * config.cluster_distance_min,
                                       config.cluster_distance_max * config.cluster_distance_max));
        ScatterCluster cluster;
        cluster.position = {radius * std::cos(azimuth), radius * std::sin(azimuth), 0.0};
        cluster.rcs_m2 = config.cluster_rcs_m2;
        cluster.phase_rad = phases.uniform(0.0, 2.0 * kPi);
        scenario.clusters.push_back(cluster);
    }
    return scenario;
}

namespace {

ResultRow evaluate_static(const Scenario &scenario, const ArrayLayout &layout,
                          const AngleField &field, const GainPattern &pattern) {
    const Eigen::MatrixXcd h =
        layout.is_panel() ? panel_channel_field(scenario, layout, field, pattern)
                          : element_channel_field(scenario, layout, field, pattern);
    const Eigen::VectorXd pbar = scenario.normalized_powers();
    const RateReport report = sum_rate(h, mmse_all(h, pbar), pbar);
    ResultRow row;
    row.sum_rate = report.sum_rate;
    row.user_rates = report.rate;
    return row;
}

AngleField draw_feasible_orientations(const Scenario &scenario, const ExperimentConfig &config) {
    Rng rng = Rng(scenario.seed).substream(kOrientationStream);
    AngleField field = AngleField::zero(config.rows, config.cols);
    for (int m = 0; m < config.rows; ++m)
        for (int n = 0; n < config.cols; ++n) {
            double alpha = 0.0, beta = 0.0;
            // Uniform over the admissible box, rejected against the joint bound.
            do {
                alpha = rng.uniform(-config.theta_max, config.theta_max);
                beta = rng.uniform(-config.theta_max, config.theta_max);
            } while (!element_bound_satisfied(alpha, beta, config.theta_max));
            field.alpha(m, n) = alpha;
            field.beta(m, n) = beta;
        }
    return field;
}

RotationProblem make_problem(const Scenario &scenario, const ExperimentConfig &config,
                             Scheme scheme) {
    RotationProblem problem;
    problem.scenario = &scenario;
    problem.pattern = GainPattern{config.directivity};
    problem.theta_max = config.theta_max;
    switch (scheme) {
    case Scheme::cl_element:
    case Scheme::ga_element:
    case Scheme::nearest_projection:
        problem.layout = config.element_layout();
        problem.mode = RotationMode::element;
        problem.coupling = Coupling::cross_linked;
        break;
    case Scheme::flexible_element:
        problem.layout = config.element_layout();
        problem.mode = RotationMode::element;
        problem.coupling = Coupling::independent;
        break;
    case Scheme::cl_panel:
    case Scheme::ga_panel:
        problem.layout = config.panel_layout();
        problem.mode = RotationMode::panel;
        problem.coupling = Coupling::cross_linked;
        break;
    case Scheme::flexible_panel:
        problem.layout = config.panel_layout();
        problem.mode = RotationMode::panel;
        problem.coupling = Coupling::independent;
        break;
    case Scheme::array_wise:
        problem.layout = config.array_wise_layout();
        problem.mode = RotationMode::panel;
        problem.coupling = Coupling::cross_linked;
        break;
    default:
        throw std::logic_error("scheme does not use the rotation optimizer");
    }
    return problem;
}

} // namespace

ResultRow run_scheme(Scheme scheme, const Scenario &scenario, const ExperimentConfig &config) {
    const auto start = std::chrono::steady_clock::now();
    const GainPattern pattern{config.directivity};

    ResultRow row;
    switch (scheme) {
    case Scheme::fixed:
        row = evaluate_static(scenario, config.element_layout(),
                              AngleField::zero(config.rows, config.cols), pattern);
        break;
    case Scheme::isotropic:
        row = evaluate_static(scenario, config.element_layout(),
                              AngleField::zero(config.rows, config.cols),
                              GainPattern::isotropic());
        break;
    case Scheme::random_orientation:
        row = evaluate_static(scenario, config.element_layout(),
                              draw_feasible_orientations(scenario, config), pattern);
        break;
    case Scheme::cl_element:
    case Scheme::flexible_element:
    case Scheme::cl_panel:
    case Scheme::flexible_panel:
    case Scheme::array_wise: {
        const RotationProblem problem = make_problem(scenario, config, scheme);
        const AoResult ao = alternating_optimize(problem, config.optimizer);
        row.sum_rate = ao.report.sum_rate;
        row.user_rates = ao.report.rate;
        row.iterations = ao.outer_iterations;
        break;
    }
    case Scheme::ga_element:
    case Scheme::ga_panel: {
        const RotationProblem problem = make_problem(scenario, config, scheme);
        const AngleGrid grid = AngleGrid::uniform(config.theta_max, config.grid_points);
        const GaResult ga =
            run_ga(problem, grid, config.ga, mix_seed({scenario.seed, kGaStream}));
        row.sum_rate = ga.feasible ? ga.report.sum_rate : 0.0;
        row.user_rates = ga.feasible ? ga.report.rate
                                     : Eigen::VectorXd::Zero(scenario.num_users());
        row.iterations = int(ga.best_fitness_history.size());
        break;
    }
    case Scheme::nearest_projection: {
        const RotationProblem problem = make_problem(scenario, config, scheme);
        const AoResult ao = alternating_optimize(problem, config.optimizer);
        const AngleGrid grid = AngleGrid::uniform(config.theta_max, config.grid_points);
        const ProjectionResult projected =
            nearest_projection(ao.state, grid, config.theta_max);
        row = evaluate_static(scenario, problem.layout,
                              AngleField::broadcast(projected.state), pattern);
        row.iterations = ao.outer_iterations;
        break;
    }
    }

    row.scheme = to_string(scheme);
    row.seed = scenario.seed;
    const auto stop = std::chrono::steady_clock::now();
    row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return row;
}

std::string csv_header() {
    return "scheme,sweep_var,sweep_value,trial,seed,sum_rate_bps_hz,iters,wall_ms,user_rates";
}

std::string csv_line(const ResultRow &row) {
    char buffer[64];
    std::string line = row.scheme + "," + row.sweep_var + ",";
    std::snprintf(buffer, sizeof(buffer), "%.10g", row.sweep_value);
    line += buffer;
    line += "," + std::to_string(row.trial) + "," + std::to_string(row.seed) + ",";
    std::snprintf(buffer, sizeof(buffer), "%.12g", row.sum_rate);
    line += buffer;
    line += "," + std::to_string(row.iterations) + ",";
    std::snprintf(buffer, sizeof(buffer), "%.3f", row.wall_ms);
    line += buffer;
    line += ",";
    for (int k = 0; k < row.user_rates.size(); ++k) {
        if (k > 0)
            line += ";";
        std::snprintf(buffer, sizeof(buffer), "%.12g", row.user_rates[k]);
        line += buffer;
    }
    return line;
}

void write_csv(const SweepResult &result, const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << csv_header() << "\n";
    for (const ResultRow &row : result.rows)
        out << csv_line(row) << "\n";
    if (!out)
        throw std::runtime_error("failed while writing: " + path);
}

SweepResult run_sweep(const ExperimentConfig &config) {
    struct Task {
        Scheme scheme;
        double value;
        int trial;
    };
    std::vector<Task> tasks;
    for (Scheme scheme : config.schemes)
        for (double value : config.sweep_values)
            for (int trial = 0; trial < config.trials; ++trial)
                tasks.push_back({scheme, value, trial});

    SweepResult result;
    result.rows.resize(tasks.size());

    const int workers = std::max(1, config.threads);
    std::atomic<size_t> cursor{0};
    auto work = [&]() {
        for (;;) {
            const size_t index = cursor.fetch_add(1);
            if (index >= tasks.size())
                return;
            const Task &task = tasks[index];
            const ExperimentConfig resolved =
                apply_sweep(config, config.sweep_variable, task.value);
            const Scenario scenario = generate_scenario(resolved, task.trial);
            ResultRow row = run_scheme(task.scheme, scenario, resolved);
            row.sweep_var = to_string(config.sweep_variable);
            row.sweep_value = task.value;
            row.trial = task.trial;
            result.rows[index] = std::move(row);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i)
            pool.emplace_back(work);
        for (std::thread &t : pool)
            t.join();
    }

    for (Scheme scheme : config.schemes) {
        for (double value : config.sweep_values) {
            SummaryCell cell;
            cell.scheme = to_string(scheme);
            cell.sweep_value = value;
            double sum = 0.0, sq = 0.0;
            for (const ResultRow &row : result.rows)
                if (row.scheme == cell.scheme && row.sweep_value == value) {
                    sum += row.sum_rate;
                    sq += row.sum_rate * row.sum_rate;
                    ++cell.trials;
                }
            cell.mean = sum / std::max(1, cell.trials);
            if (cell.trials > 1) {
                const double variance =
                    std::max(0.0, (sq - sum * sum / cell.trials) / (cell.trials - 1));
                cell.ci_half = 1.96 * std::sqrt(variance / cell.trials);
            }
            result.summary.push_back(cell);
        }
    }

    if (!config.output_path.empty())
        write_csv(result, config.output_path);
    return result;
}

void print_summary(const SweepResult &result, std::ostream &out) {
    out << "scheme                sweep_value   trials   mean_sum_rate   ci95_half\n";
    char buffer[160];
    for (const SummaryCell &cell : result.summary) {
        std::snprintf(buffer, sizeof(buffer), "%-20s %12.6g %8d %15.6f %11.6f\n",
                      cell.scheme.c_str(), cell.sweep_value, cell.trials, cell.mean,
                      cell.ci_half);
        out << buffer;
    }
}

} // namespace clra
