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

#include "clra/discrete_ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace clra {

AngleGrid AngleGrid::uniform(double theta_max, int points) {
    if (points < 1)
        throw std::invalid_argument("AngleGrid: at least one grid point required");
    AngleGrid grid;
    if (points == 1) {
        grid.alpha_values = {0.0};
        grid.beta_values = {0.0};
        return grid;
    }
    grid.alpha_values.reserve(size_t(points));
    for (int i = 0; i < points; ++i)
        grid.alpha_values.push_back(-theta_max + 2.0 * theta_max * i / double(points - 1));
    grid.beta_values = grid.alpha_values;
    return grid;
}

RotationState decode_chromosome(const Chromosome &chromosome, const AngleGrid &grid, int rows,
                                int cols) {
    if (int(chromosome.genes.size()) != rows + cols)
        throw std::invalid_argument("decode_chromosome: gene count does not match the grid");
    RotationState state;
    state.alpha.resize(rows);
    state.beta.resize(cols);
    for (int m = 0; m < rows; ++m)
        state.alpha[m] = grid.alpha_values.at(size_t(chromosome.genes[size_t(m)]));
    for (int n = 0; n < cols; ++n)
        state.beta[n] = grid.beta_values.at(size_t(chromosome.genes[size_t(rows + n)]));
    return state;
}

double fitness(const Chromosome &chromosome, const RotationProblem &problem,
               const AngleGrid &grid, double penalty) {
    const RotationState state =
        decode_chromosome(chromosome, grid, problem.layout.rows, problem.layout.cols);
    const AngleField field = AngleField::broadcast(state);

    int violations = 0;
    if (problem.mode == RotationMode::element)
        violations = count_element_violations(field, problem.theta_max);
    else
        violations = int(panel_constraints_field(field, problem.layout).violations.size());
    if (violations > 0)
        return penalty * violations;

    const Eigen::MatrixXcd h = problem_channel(problem, field);
    const Eigen::VectorXd pbar = problem.scenario->normalized_powers();
    return sum_rate(h, mmse_all(h, pbar), pbar).sum_rate;
}

int tournament_select(const std::vector<double> &fitnesses, int eta, Rng &rng) {
    const int population = int(fitnesses.size());
    if (population == 0)
        throw std::invalid_argument("tournament_select: empty population");
    eta = std::clamp(eta, 1, population);

    // Partial Fisher-Yates: the first eta slots are a uniform sample without
    // replacement.
    std::vector<int> order(static_cast<size_t>(population));
    std::iota(order.begin(), order.end(), 0);
    for (int t = 0; t < eta; ++t) {
        const int j = int(rng.uniform_int(t, population - 1));
        std::swap(order[size_t(t)], order[size_t(j)]);
    }

    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> winners;
    for (int t = 0; t < eta; ++t) {
        const double f = fitnesses[size_t(order[size_t(t)])];
        if (f > best) {
            best = f;
            winners.assign(1, order[size_t(t)]);
        } else if (f == best) {
            winners.push_back(order[size_t(t)]);
        }
    }
    if (winners.size() == 1)
        return winners.front();
    return winners[size_t(rng.uniform_int(0, int(winners.size()) - 1))];
}

std::pair<Chromosome, Chromosome> crossover_segment(const Chromosome &a, const Chromosome &b,
                                                    int cut1, int cut2) {
    if (a.genes.size() != b.genes.size())
        throw std::invalid_argument("crossover: parents differ in length");
    Chromosome child1 = a, child2 = b;
    for (int i = cut1; i < cut2; ++i)
        std::swap(child1.genes[size_t(i)], child2.genes[size_t(i)]);
    return {child1, child2};
}

std::pair<Chromosome, Chromosome> two_point_crossover(const Chromosome &a, const Chromosome &b,
                                                      double pc, Rng &rng) {
    if (a.genes.size() != b.genes.size())
        throw std::invalid_argument("crossover: parents differ in length");
    if (rng.uniform() >= pc)
        return {a, b};
    const int length = int(a.genes.size());
    int cut1 = int(rng.uniform_int(0, length));
    int cut2 = int(rng.uniform_int(0, length));
    if (cut1 > cut2)
        std::swap(cut1, cut2);
    return crossover_segment(a, b, cut1, cut2);
}

Chromosome mutate(const Chromosome &chromosome, double pm, const AngleGrid &grid, int rows,
                  Rng &rng) {
    Chromosome out = chromosome;
    for (size_t i = 0; i < out.genes.size(); ++i) {
        const int size = int(i) < rows ? grid.alpha_size() : grid.beta_size();
        if (rng.uniform() >= pm || size < 2)
            continue;
        const int current = out.genes[i];
        int drawn = int(rng.uniform_int(0, size - 2));
        if (drawn >= current)
            ++drawn; // uniform over the indices different from the current one
        out.genes[i] = drawn;
    }
    return out;
}

namespace {

Chromosome random_chromosome(const AngleGrid &grid, int rows, int cols, Rng &rng) {
    Chromosome c;
    c.genes.resize(size_t(rows + cols));
    for (int m = 0; m < rows; ++m)
        c.genes[size_t(m)] = int(rng.uniform_int(0, grid.alpha_size() - 1));
    for (int n = 0; n < cols; ++n)
        c.genes[size_t(rows + n)] = int(rng.uniform_int(0, grid.beta_size() - 1));
    return c;
}

int best_index(const std::vector<double> &fitnesses) {
    int best = 0;
    for (int i = 1; i < int(fitnesses.size()); ++i)
        if (fitnesses[size_t(i)] > fitnesses[size_t(best)])
            best = i;
    return best;
}

} // namespace

GaResult run_ga(const RotationProblem &problem, const AngleGrid &grid, const GaParams &params,
                std::uint64_t seed) {
    if (params.population < 2)
        throw std::invalid_argument("run_ga: population must hold at least two individuals");
    const int rows = problem.layout.rows;
    const int cols = problem.layout.cols;

    std::vector<Chromosome> population;
    population.reserve(size_t(params.population));
    for (int i = 0; i < params.population; ++i) {
        Rng rng(mix_seed({seed, 0x696E6974ULL, std::uint64_t(i)}));
        population.push_back(random_chromosome(grid, rows, cols, rng));
    }

    std::vector<double> fitnesses(size_t(params.population));
    auto evaluate = [&](const std::vector<Chromosome> &pop) {
        for (int i = 0; i < params.population; ++i)
            fitnesses[size_t(i)] = fitness(pop[size_t(i)], problem, grid, params.penalty);
    };
    evaluate(population);

    GaResult result;
    result.best_fitness_history.reserve(size_t(params.generations));

    for (int generation = 1; generation <= params.generations; ++generation) {
        std::vector<Chromosome> next;
        next.reserve(size_t(params.population));
        const int elites = std::clamp(params.elite_count, 0, params.population);
        std::vector<int> order(size_t(params.population));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return fitnesses[size_t(a)] > fitnesses[size_t(b)];
        });
        for (int e = 0; e < elites; ++e)
            next.push_back(population[size_t(order[size_t(e)])]);

        std::uint64_t slot = 0;
        while (int(next.size()) < params.population) {
            Rng rng(mix_seed({seed, std::uint64_t(generation), slot++}));
            const int p1 = tournament_select(fitnesses, params.tournament_size, rng);
            const int p2 = tournament_select(fitnesses, params.tournament_size, rng);
            auto [c1, c2] = two_point_crossover(population[size_t(p1)], population[size_t(p2)],
                                                params.crossover_prob, rng);
            next.push_back(mutate(c1, params.mutation_prob, grid, rows, rng));
            if (int(next.size()) < params.population)
                next.push_back(mutate(c2, params.mutation_prob, grid, rows, rng));
        }
        population = std::move(next);
        evaluate(population);
        result.best_fitness_history.push_back(fitnesses[size_t(best_index(fitnesses))]);
    }

    const int champion = best_index(fitnesses);
    result.best = population[size_t(champion)];
    result.best_fitness = fitnesses[size_t(champion)];
    result.state = decode_chromosome(result.best, grid, rows, cols);
    result.feasible = result.best_fitness >= 0.0;
    if (result.feasible) {
        const Eigen::MatrixXcd h = problem_channel(problem, AngleField::broadcast(result.state));
        const Eigen::VectorXd pbar = problem.scenario->normalized_powers();
        result.report = sum_rate(h, mmse_all(h, pbar), pbar);
    }
    return result;
}

namespace {

// Nearest grid value by distance, ties to the smaller value.
double snap_value(double x, const std::vector<double> &values) {
    double best = values.front();
    double best_dist = std::abs(x - best);
    for (double v : values) {
        const double dist = std::abs(x - v);
        if (dist < best_dist - 1e-15) {
            best = v;
            best_dist = dist;
        }
    }
    return best;
}

} // namespace

ProjectionResult nearest_projection(const RotationState &continuous, const AngleGrid &grid,
                                    double theta_max, double tol) {
    const int rows = int(continuous.alpha.size());
    const int cols = int(continuous.beta.size());

    ProjectionResult out;
    out.state.alpha.resize(rows);
    out.state.beta.resize(cols);
    for (int m = 0; m < rows; ++m)
        out.state.alpha[m] = snap_value(continuous.alpha[m], grid.alpha_values);
    for (int n = 0; n < cols; ++n)
        out.state.beta[n] = snap_value(continuous.beta[n], grid.beta_values);

    // Greedy repair: move a whole row (or column) angle to the nearest grid
    // value that satisfies the bound against every partner angle. Each such
    // move settles its track for good, so at most rows + cols moves happen.
    for (int pass = 0; pass <= rows + cols; ++pass) {
        int vm = -1, vn = -1;
        for (int m = 0; m < rows && vm < 0; ++m)
            for (int n = 0; n < cols; ++n)
                if (!element_bound_satisfied(out.state.alpha[m], out.state.beta[n], theta_max,
                                             tol)) {
                    vm = m;
                    vn = n;
                    break;
                }
        if (vm < 0)
            return out;

        auto track_fix = [&](double target, const std::vector<double> &values,
                             auto feasible_against) -> std::pair<bool, double> {
            bool found = false;
            double best = 0.0, best_dist = 0.0;
            for (double v : values) {
                if (!feasible_against(v))
                    continue;
                const double dist = std::abs(v - target);
                if (!found || dist < best_dist - 1e-15) {
                    found = true;
                    best = v;
                    best_dist = dist;
                }
            }
            return {found, best};
        };

        const auto [alpha_ok, alpha_fix] =
            track_fix(continuous.alpha[vm], grid.alpha_values, [&](double v) {
                for (int n = 0; n < cols; ++n)
                    if (!element_bound_satisfied(v, out.state.beta[n], theta_max, tol))
                        return false;
                return true;
            });
        const auto [beta_ok, beta_fix] =
            track_fix(continuous.beta[vn], grid.beta_values, [&](double v) {
                for (int m = 0; m < rows; ++m)
                    if (!element_bound_satisfied(out.state.alpha[m], v, theta_max, tol))
                        return false;
                return true;
            });

        if (!alpha_ok && !beta_ok)
            break;
        const double alpha_cost =
            alpha_ok ? std::abs(alpha_fix - continuous.alpha[vm])
                     : std::numeric_limits<double>::infinity();
        const double beta_cost = beta_ok ? std::abs(beta_fix - continuous.beta[vn])
                                         : std::numeric_limits<double>::infinity();
        if (alpha_cost <= beta_cost)
            out.state.alpha[vm] = alpha_fix;
        else
            out.state.beta[vn] = beta_fix;
        out.repaired = true;
    }

    out.state.alpha.setZero();
    out.state.beta.setZero();
    out.repaired = true;
    out.fallback = true;
    return out;
}

} // namespace clra
