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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clra/harness.hpp"

using namespace clra;

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::vector<std::string> schemes;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int trials = 0;
    int threads = 0;
    bool print_config = false;
};

void add_common(CLI::App *cmd, CommonOptions &options) {
    cmd->add_option("--config", options.config_path, "experiment config document (JSON)");
    cmd->add_option("--out", options.out_path, "CSV output path");
    cmd->add_option("--scheme", options.schemes, "scheme to run (repeatable)");
    cmd->add_option("--seed", options.seed, "master seed")->each([&options](const std::string &) {
        options.seed_set = true;
    });
    cmd->add_option("--trials", options.trials, "number of Monte-Carlo trials");
    cmd->add_option("--threads", options.threads, "worker threads");
    cmd->add_flag("--print-config", options.print_config,
                  "print the resolved config as JSON and exit");
}

ExperimentConfig load_config(const CommonOptions &options) {
    ExperimentConfig config;
    if (!options.config_path.empty()) {
        std::ifstream in(options.config_path);
        if (!in)
            throw std::runtime_error("cannot open config: " + options.config_path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        config = config_from_json(buffer.str());
    }
    // environment seed is honored unless the flag was given
    if (const char *env = std::getenv("CLRA_SEED"); env && !options.seed_set)
        config.master_seed = std::strtoull(env, nullptr, 10);
    if (options.seed_set)
        config.master_seed = options.seed;
    if (options.trials > 0)
        config.trials = options.trials;
    if (options.threads > 0)
        config.threads = options.threads;
    if (!options.out_path.empty())
        config.output_path = options.out_path;
    if (!options.schemes.empty()) {
        config.schemes.clear();
        for (const std::string &name : options.schemes)
            config.schemes.push_back(scheme_from_string(name));
    }
    return config;
}

int execute(const ExperimentConfig &config, bool print_config) {
    if (print_config) {
        std::cout << config_to_json(config) << "\n";
        return 0;
    }
    const SweepResult result = run_sweep(config);
    print_summary(result, std::cout);
    if (!config.output_path.empty())
        std::cout << "wrote " << result.rows.size() << " rows to " << config.output_path
                  << "\n";
    return 0;
}

// Composite Simpson over [a, b].
double simpson(const std::function<double(double)> &f, double a, double b, int panels) {
    double sum = f(a) + f(b);
    const double h = (b - a) / panels;
    for (int i = 1; i < panels; ++i)
        sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

int run_validate(std::uint64_t seed) {
    int failures = 0;
    const auto report = [&failures](const char *name, bool ok, const std::string &details) {
        std::printf("[%s] %s (%s)\n", ok ? "PASS" : "FAIL", name, details.c_str());
        if (!ok)
            ++failures;
    };
    char buffer[128];

    {
        Rng rng(seed);
        double worst = 0.0;
        for (int i = 0; i < 100000; ++i) {
            const Orientation o =
                rotation_matrix(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi));
            worst = std::max(worst, (o.rotation.transpose() * o.rotation -
                                     Eigen::Matrix3d::Identity())
                                        .cwiseAbs()
                                        .maxCoeff());
            worst = std::max(worst, std::abs(o.pointing.norm() - 1.0));
        }
        std::snprintf(buffer, sizeof(buffer), "max deviation %.1e", worst);
        report("rotation orthonormality", worst <= 1e-12, buffer);
    }
    {
        double worst = 0.0;
        for (double p : {0.0, 0.5, 2.0}) {
            const GainPattern pattern{p};
            const double integral =
                2.0 * kPi * simpson(
                                [&pattern](double eps) {
                                    return directional_gain(pattern, std::cos(eps)) *
                                           std::sin(eps);
                                },
                                0.0, kPi / 2.0, 20000);
            worst = std::max(worst, std::abs(integral - 4.0 * kPi));
        }
        std::snprintf(buffer, sizeof(buffer), "max residual %.1e", worst);
        report("gain pattern normalization", worst <= 1e-3, buffer);
    }
    {
        Rng rng(seed + 1);
        double worst = 0.0;
        for (int instance = 0; instance < 20; ++instance) {
            const int k = int(rng.uniform_int(2, 6));
            const int q = int(rng.uniform_int(k, 32));
            Eigen::MatrixXcd h(q, k);
            for (int i = 0; i < q; ++i)
                for (int j = 0; j < k; ++j)
                    h(i, j) = rng.gaussian_complex();
            const Eigen::VectorXd pbar = Eigen::VectorXd::Constant(k, 5.0);
            for (int user = 0; user < k; ++user) {
                Eigen::MatrixXcd cov = Eigen::MatrixXcd::Identity(q, q);
                for (int i = 0; i < k; ++i)
                    if (i != user)
                        cov += pbar[i] * h.col(i) * h.col(i).adjoint();
                Eigen::VectorXcd ref = cov.fullPivLu().solve(h.col(user));
                ref /= ref.norm();
                const std::complex<double> inner = ref.dot(h.col(user));
                if (std::abs(inner) > 0)
                    ref *= inner / std::abs(inner);
                worst = std::max(worst, (mmse(h, pbar, user) - ref).norm());
            }
        }
        std::snprintf(buffer, sizeof(buffer), "max error %.1e", worst);
        report("low-rank receiver vs direct solve", worst <= 1e-10, buffer);
    }
    {
        LinearProgram lp;
        lp.objective = Eigen::Vector2d(1.0, 1.0);
        lp.rows = Eigen::MatrixXd(1, 2);
        lp.rows << 1.0, 1.0;
        lp.rhs = Eigen::VectorXd::Constant(1, 1.0);
        lp.lower = Eigen::Vector2d(0.0, 0.0);
        lp.upper = Eigen::Vector2d(1.0, 1.0);
        const LpSolution sol = solve_lp(lp);
        const bool ok = sol.status == LpStatus::optimal && std::abs(sol.value - 1.0) <= 1e-9 &&
                        sol.kkt_residual <= 1e-8;
        std::snprintf(buffer, sizeof(buffer), "value %.6f, kkt %.1e", sol.value,
                      sol.kkt_residual);
        report("linear program sanity", ok, buffer);
    }
    {
        Rng rng(seed + 2);
        ArrayLayout layout;
        layout.rows = 1;
        layout.cols = 8;
        layout.spacing = 0.04285;
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double azimuth = rng.uniform(-1.2, 1.2);
            const double radius = rng.uniform(50.0, 70.0);
            Scenario scenario;
            scenario.users.push_back(
                {{radius * std::cos(azimuth), radius * std::sin(azimuth), 0.0},
                 dbm_to_watts(10.0)});
            RotationProblem problem;
            problem.scenario = &scenario;
            problem.layout = layout;
            problem.pattern = GainPattern{2.0};
            problem.mode = RotationMode::element;
            problem.theta_max = kPi / 2.0;
            const AoResult result = alternating_optimize(problem, AoParams{});
            const SingleUserPointing oracle = single_user_oracle(
                layout, scenario.users[0].position, kPi / 2.0,
                scenario.normalized_powers()[0], scenario.wavelength_m, GainPattern{2.0});
            worst = std::max(worst, std::abs(result.report.sinr[0] - oracle.snr_linear) /
                                        oracle.snr_linear);
        }
        std::snprintf(buffer, sizeof(buffer), "worst relative error %.1e", worst);
        report("single-user closed form", worst <= 0.005, buffer);
    }
    {
        Rng rng(seed + 3);
        ArrayLayout layout;
        layout.mode = ArrayLayout::Mode::panel;
        layout.rows = layout.cols = 3;
        layout.panel_rows = layout.panel_cols = 2;
        layout.spacing = 0.04;
        long mismatches = 0;
        for (int b = 0; b < layout.num_panels(); ++b) {
            const FeasibleRange range = analytic_feasible_range(layout, b);
            for (int i = 0; i < 10000; ++i) {
                const double alpha = rng.uniform(-kPi, kPi);
                const double beta = rng.uniform(-kPi, kPi);
                RotationState state = RotationState::zero(3, 3);
                state.alpha[b / 3] = alpha;
                state.beta[b % 3] = beta;
                if (panel_constraints_for(state, layout, b, 1e-12).satisfied !=
                    range.contains(alpha, beta, 1e-12))
                    ++mismatches;
            }
        }
        std::snprintf(buffer, sizeof(buffer), "%ld mismatches over 90000 samples", mismatches);
        report("panel feasible-range oracle", mismatches == 0, buffer);
    }
    return failures;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"cross-linked rotatable antenna array experiments"};
    app.require_subcommand(1);

    CommonOptions run_options, sweep_options, ga_options;
    std::string sweep_var;
    std::vector<double> sweep_values;
    int ga_grid_points = 0;
    std::uint64_t validate_seed = 1;

    CLI::App *run_cmd = app.add_subcommand("run", "run the configured schemes at one point");
    add_common(run_cmd, run_options);

    CLI::App *sweep_cmd = app.add_subcommand("sweep", "run the configured parameter sweep");
    add_common(sweep_cmd, sweep_options);
    sweep_cmd->add_option("--var", sweep_var, "sweep variable (power|theta_max|p|Q|K|L)");
    sweep_cmd->add_option("--values", sweep_values,
                          "sweep values (repeatable or space separated)");

    CLI::App *validate_cmd =
        app.add_subcommand("validate", "run the analytic oracles and invariant checks");
    validate_cmd->add_option("--seed", validate_seed, "seed for the randomized checks");

    CLI::App *ga_cmd = app.add_subcommand("ga", "discrete rotation-angle experiments");
    add_common(ga_cmd, ga_options);
    ga_cmd->add_option("--grid-points", ga_grid_points, "discrete angle grid size L");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            ExperimentConfig config = load_config(run_options);
            config.sweep_variable = SweepVariable::power;
            config.sweep_values = {config.power_dbm};
            return execute(config, run_options.print_config);
        }
        if (sweep_cmd->parsed()) {
            ExperimentConfig config = load_config(sweep_options);
            if (!sweep_var.empty())
                config.sweep_variable = sweep_variable_from_string(sweep_var);
            if (!sweep_values.empty())
                config.sweep_values = sweep_values;
            return execute(config, sweep_options.print_config);
        }
        if (validate_cmd->parsed())
            return run_validate(validate_seed);
        if (ga_cmd->parsed()) {
            ExperimentConfig config = load_config(ga_options);
            if (ga_options.schemes.empty())
                config.schemes = {Scheme::ga_element, Scheme::nearest_projection,
                                  Scheme::cl_element};
            if (ga_grid_points > 0)
                config.grid_points = ga_grid_points;
            return execute(config, ga_options.print_config);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
