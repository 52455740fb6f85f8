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

#include <doctest.h>

#include <cmath>
#include <functional>

#include "clra/discrete_ga.hpp"

using namespace clra;

namespace {

Scenario two_users() {
    Scenario scenario;
    scenario.users.push_back({{52, 17, 0}, 0.01});
    scenario.users.push_back({{63, -24, 0}, 0.01});
    return scenario;
}

RotationProblem element_problem(const Scenario &scenario, int rows, int cols,
                                double theta_max) {
    RotationProblem problem;
    problem.scenario = &scenario;
    problem.layout.rows = rows;
    problem.layout.cols = cols;
    problem.layout.spacing = 0.04285;
    problem.pattern = GainPattern{2.0};
    problem.mode = RotationMode::element;
    problem.theta_max = theta_max;
    return problem;
}

double fixed_orientation_rate(const RotationProblem &problem) {
    const Eigen::MatrixXcd h = problem_channel(
        problem, AngleField::zero(problem.layout.rows, problem.layout.cols));
    const Eigen::VectorXd pbar = problem.scenario->normalized_powers();
    return sum_rate(h, mmse_all(h, pbar), pbar).sum_rate;
}

// Exhaustive search over every chromosome, the reference for toy instances.
double exhaustive_optimum(const RotationProblem &problem, const AngleGrid &grid,
                          double penalty) {
    const int genes = problem.layout.rows + problem.layout.cols;
    Chromosome c;
    c.genes.assign(size_t(genes), 0);
    double best = -std::numeric_limits<double>::infinity();
    std::function<void(int)> recurse = [&](int slot) {
        if (slot == genes) {
            best = std::max(best, fitness(c, problem, grid, penalty));
            return;
        }
        const int size =
            slot < problem.layout.rows ? grid.alpha_size() : grid.beta_size();
        for (int v = 0; v < size; ++v) {
            c.genes[size_t(slot)] = v;
            recurse(slot + 1);
        }
    };
    recurse(0);
    return best;
}

} // namespace

TEST_CASE("uniform grids") {
    const AngleGrid grid = AngleGrid::uniform(kPi / 6, 5);
    REQUIRE(grid.alpha_size() == 5);
    CHECK(grid.alpha_values.front() == doctest::Approx(-kPi / 6));
    CHECK(grid.alpha_values[2] == doctest::Approx(0.0));
    CHECK(grid.alpha_values.back() == doctest::Approx(kPi / 6));
    const AngleGrid point = AngleGrid::uniform(kPi / 6, 1);
    CHECK(point.alpha_values == std::vector<double>{0.0});
}

TEST_CASE("fitness of the reference chromosome equals the fixed-orientation rate") {
    const Scenario scenario = two_users();
    const RotationProblem problem = element_problem(scenario, 2, 2, kPi / 6);
    const AngleGrid grid = AngleGrid::uniform(kPi / 6, 5);
    Chromosome zero;
    zero.genes = {2, 2, 2, 2}; // index 2 holds angle 0
    CHECK(fitness(zero, problem, grid, -10.0) ==
          doctest::Approx(fixed_orientation_rate(problem)).epsilon(1e-12));
}

TEST_CASE("violating chromosomes pay per offending antenna") {
    const Scenario scenario = two_users();
    const RotationProblem problem = element_problem(scenario, 2, 2, 0.3);
    AngleGrid grid;
    grid.alpha_values = {0.0, 0.8};
    grid.beta_values = {0.0, 0.8};
    Chromosome c;
    c.genes = {1, 0, 1, 0}; // alpha = (0.8, 0), beta = (0.8, 0): cells 00, 01, 10 violate
    CHECK(fitness(c, problem, grid, -10.0) == doctest::Approx(-30.0));
}

TEST_CASE("a right angle budget disables the penalty") {
    const Scenario scenario = two_users();
    const RotationProblem problem = element_problem(scenario, 1, 2, kPi / 2);
    const AngleGrid grid = AngleGrid::uniform(kPi / 2, 7);
    Rng rng(61);
    for (int i = 0; i < 50; ++i) {
        Chromosome c;
        c.genes = {int(rng.uniform_int(0, 6)), int(rng.uniform_int(0, 6)),
                   int(rng.uniform_int(0, 6))};
        CHECK(fitness(c, problem, grid, -10.0) >= 0.0);
    }
}

TEST_CASE("tournament selection") {
    const std::vector<double> fitnesses{1.0, 2.0, 3.0, 4.0};

    SUBCASE("full-size tournament always returns the champion") {
        Rng rng(62);
        for (int i = 0; i < 50; ++i)
            CHECK(tournament_select(fitnesses, 4, rng) == 3);
    }
    SUBCASE("size one is a uniform draw") {
        Rng rng(63);
        std::vector<int> counts(4, 0);
        for (int i = 0; i < 4000; ++i)
            ++counts[size_t(tournament_select(fitnesses, 1, rng))];
        for (int c : counts)
            CHECK(c > 800); // roughly uniform
    }
    SUBCASE("pairwise tournaments have mean winner fitness 10/3") {
        Rng rng(64);
        double sum = 0.0;
        const int draws = 40000;
        for (int i = 0; i < draws; ++i)
            sum += fitnesses[size_t(tournament_select(fitnesses, 2, rng))];
        CHECK(sum / draws == doctest::Approx(10.0 / 3.0).epsilon(0.01));
    }
}

TEST_CASE("two-point crossover") {
    Chromosome a, b;
    a.genes = {0, 1, 2, 3, 4, 5, 6, 7};
    b.genes = {10, 11, 12, 13, 14, 15, 16, 17};

    SUBCASE("probability zero copies the parents") {
        Rng rng(65);
        const auto [c1, c2] = two_point_crossover(a, b, 0.0, rng);
        CHECK(c1 == a);
        CHECK(c2 == b);
    }
    SUBCASE("identical parents are unchanged") {
        Rng rng(66);
        const auto [c1, c2] = two_point_crossover(a, a, 1.0, rng);
        CHECK(c1 == a);
        CHECK(c2 == a);
    }
    SUBCASE("cut points (2, 5) swap exactly genes 3..5") {
        const auto [c1, c2] = crossover_segment(a, b, 2, 5);
        CHECK(c1.genes == std::vector<int>{0, 1, 12, 13, 14, 5, 6, 7});
        CHECK(c2.genes == std::vector<int>{10, 11, 2, 3, 4, 15, 16, 17});
    }
}

TEST_CASE("mutation") {
    const AngleGrid grid = AngleGrid::uniform(0.5, 2);
    Chromosome c;
    c.genes = {0, 1, 0, 1};

    SUBCASE("probability zero is the identity") {
        Rng rng(67);
        CHECK(mutate(c, 0.0, grid, 2, rng) == c);
    }
    SUBCASE("certain mutation on a binary grid flips every gene") {
        Rng rng(68);
        const Chromosome m = mutate(c, 1.0, grid, 2, rng);
        CHECK(m.genes == std::vector<int>{1, 0, 1, 0});
    }
    SUBCASE("expected number of mutated genes is pm times the length") {
        const AngleGrid wide = AngleGrid::uniform(0.5, 9);
        Chromosome base;
        base.genes.assign(16, 4);
        Rng rng(69);
        int mutated = 0;
        const int trials = 5000;
        for (int t = 0; t < trials; ++t) {
            const Chromosome m = mutate(base, 0.1, wide, 8, rng);
            for (size_t i = 0; i < m.genes.size(); ++i)
                if (m.genes[i] != base.genes[i])
                    ++mutated;
        }
        CHECK(double(mutated) / trials == doctest::Approx(1.6).epsilon(0.05));
    }
}

TEST_CASE("singleton grid returns the fixed orientation") {
    const Scenario scenario = two_users();
    const RotationProblem problem = element_problem(scenario, 2, 2, kPi / 6);
    const AngleGrid grid = AngleGrid::uniform(kPi / 6, 1);
    GaParams params;
    params.population = 10;
    params.generations = 3;
    const GaResult result = run_ga(problem, grid, params, 7);
    CHECK(result.feasible);
    CHECK(result.report.sum_rate ==
          doctest::Approx(fixed_orientation_rate(problem)).epsilon(1e-12));
}

TEST_CASE("seeded runs are bit-identical") {
    const Scenario scenario = two_users();
    const RotationProblem problem = element_problem(scenario, 2, 2, kPi / 6);
    const AngleGrid grid = AngleGrid::uniform(kPi / 6, 5);
    GaParams params;
    params.population = 24;
    params.generations = 10;
    const GaResult a = run_ga(problem, grid, params, 1234);
    const GaResult b = run_ga(problem, grid, params, 1234);
    CHECK(a.best == b.best);
    CHECK(a.report.sum_rate == b.report.sum_rate);
    CHECK(a.best_fitness_history == b.best_fitness_history);
}

TEST_CASE("elitist best fitness never decreases") {
    const Scenario scenario = two_users();
    const RotationProblem problem = element_problem(scenario, 2, 2, kPi / 6);
    const AngleGrid grid = AngleGrid::uniform(kPi / 6, 5);
    GaParams params;
    params.population = 20;
    params.generations = 15;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const GaResult result = run_ga(problem, grid, params, seed);
        for (size_t g = 1; g < result.best_fitness_history.size(); ++g)
            CHECK(result.best_fitness_history[g] >=
                  result.best_fitness_history[g - 1] - 1e-12);
    }
}

TEST_CASE("dense single-user grid reaches the closed-form rate") {
    Scenario scenario;
    scenario.users.push_back({{45, 28, 0}, 0.01});
    const RotationProblem problem = element_problem(scenario, 1, 2, kPi / 2);
    const AngleGrid grid = AngleGrid::uniform(kPi / 2, 181);
    GaParams params;
    const GaResult result = run_ga(problem, grid, params, 5);
    REQUIRE(result.feasible);

    const double pbar = scenario.normalized_powers()[0];
    ArrayLayout layout = problem.layout;
    const SingleUserPointing oracle =
        single_user_oracle(layout, scenario.users[0].position, kPi / 2, pbar,
                           scenario.wavelength_m, GainPattern{2.0});
    CHECK(result.report.sinr[0] >= 0.99 * oracle.snr_linear);
}

TEST_CASE("toy instance matches exhaustive search") {
    const Scenario scenario = two_users();
    const RotationProblem problem = element_problem(scenario, 2, 2, kPi / 6);
    const AngleGrid grid = AngleGrid::uniform(kPi / 6, 5);
    GaParams params;
    const double reference = exhaustive_optimum(problem, grid, params.penalty);
    const GaResult result = run_ga(problem, grid, params, 3);
    CHECK(result.best_fitness == doctest::Approx(reference).epsilon(1e-9));
}

TEST_CASE("nearest projection") {
    AngleGrid grid;
    grid.alpha_values = {-0.5, 0.0, 0.5};
    grid.beta_values = {-0.5, 0.0, 0.5};

    SUBCASE("on-grid states are unchanged") {
        RotationState state;
        state.alpha = Eigen::VectorXd::Constant(1, 0.5);
        state.beta = Eigen::VectorXd::Constant(1, -0.5);
        const ProjectionResult p = nearest_projection(state, grid, kPi / 2);
        CHECK_FALSE(p.repaired);
        CHECK(p.state.alpha[0] == doctest::Approx(0.5));
        CHECK(p.state.beta[0] == doctest::Approx(-0.5));
    }
    SUBCASE("plain rounding by distance") {
        RotationState state;
        state.alpha = Eigen::VectorXd::Constant(1, 0.26);
        state.beta = Eigen::VectorXd::Constant(1, 0.0);
        const ProjectionResult p = nearest_projection(state, grid, kPi / 2);
        CHECK(p.state.alpha[0] == doctest::Approx(0.5));
    }
    SUBCASE("joint violations are repaired to a feasible neighbor") {
        // snapped corner (0.5, 0.5) violates cos a cos b >= cos(0.6)
        RotationState state;
        state.alpha = Eigen::VectorXd::Constant(1, 0.45);
        state.beta = Eigen::VectorXd::Constant(1, 0.45);
        const ProjectionResult p = nearest_projection(state, grid, 0.6);
        CHECK(p.repaired);
        CHECK_FALSE(p.fallback);
        CHECK(element_bound_satisfied(p.state.alpha[0], p.state.beta[0], 0.6));
    }
    SUBCASE("no feasible combination falls back to the safe zero state") {
        AngleGrid offset;
        offset.alpha_values = {0.7, 0.9};
        offset.beta_values = {0.7, 0.9};
        RotationState state;
        state.alpha = Eigen::VectorXd::Constant(1, 0.8);
        state.beta = Eigen::VectorXd::Constant(1, 0.8);
        const ProjectionResult p = nearest_projection(state, offset, 0.3);
        CHECK(p.fallback);
        CHECK(p.state.alpha[0] == 0.0);
        CHECK(p.state.beta[0] == 0.0);
    }
}
