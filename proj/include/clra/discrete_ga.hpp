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

#ifndef CLRA_DISCRETE_GA_HPP
#define CLRA_DISCRETE_GA_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "clra/rng.hpp"
#include "clra/rotation_opt.hpp"

namespace clra {

// Admissible discrete rotation values, sorted, within (-pi, pi].
struct AngleGrid {
    std::vector<double> alpha_values;
    std::vector<double> beta_values;

    // L evenly spaced values over [-theta_max, theta_max]; a single point
    // collapses to {0}.
    static AngleGrid uniform(double theta_max, int points);

    int alpha_size() const { return int(alpha_values.size()); }
    int beta_size() const { return int(beta_values.size()); }
};

// rows indices into the alpha grid followed by cols indices into the beta grid.
struct Chromosome {
    std::vector<int> genes;

    bool operator==(const Chromosome &other) const { return genes == other.genes; }
};

struct GaParams {
    int population = 200;
    int generations = 100;
    double crossover_prob = 0.8;
    double mutation_prob = 0.1;
    int tournament_size = 2;   // selection pressure
    double penalty = -10.0;    // per violation, < 0
    // Top slice carried unchanged into the next generation. A single elite
    // line gets diluted by the weak tournament pressure before it can finish
    // refining; keeping 5% of the population preserves the leading basins.
    int elite_count = 10;
};

RotationState decode_chromosome(const Chromosome &chromosome, const AngleGrid &grid, int rows,
                                int cols);

// Sum rate under fresh MMSE beamformers when the decoded state satisfies the
// problem's constraints; otherwise penalty times the violation count
// (violating cells in element mode, violated rows in panel mode).
double fitness(const Chromosome &chromosome, const RotationProblem &problem,
               const AngleGrid &grid, double penalty);

// Tournament over `eta` distinct uniformly sampled individuals; the fittest
// wins, ties broken uniformly at random. Returns the winner's index.
int tournament_select(const std::vector<double> &fitnesses, int eta, Rng &rng);

// Swaps genes [cut1, cut2) between copies of the parents.
std::pair<Chromosome, Chromosome> crossover_segment(const Chromosome &a, const Chromosome &b,
                                                    int cut1, int cut2);

// With probability pc picks two random cut points and swaps the segment
// between them; otherwise copies the parents.
std::pair<Chromosome, Chromosome> two_point_crossover(const Chromosome &a, const Chromosome &b,
                                                      double pc, Rng &rng);

// Resamples each gene with probability pm to a different in-range index;
// genes whose grid has a single value never change.
Chromosome mutate(const Chromosome &chromosome, double pm, const AngleGrid &grid, int rows,
                  Rng &rng);

struct GaResult {
    Chromosome best;
    RotationState state;
    RateReport report;
    double best_fitness = 0.0;
    bool feasible = false;
    std::vector<double> best_fitness_history; // one entry per generation
};

// Elitist generational GA; deterministic for a given seed (every stochastic
// step draws from a substream keyed by generation and slot).
GaResult run_ga(const RotationProblem &problem, const AngleGrid &grid, const GaParams &params,
                std::uint64_t seed);

struct ProjectionResult {
    RotationState state;
    bool repaired = false; // a snapped angle had to move off its nearest value
    bool fallback = false; // no feasible grid combination found, zero state returned
};

// Snaps a continuous state to the nearest grid values, then greedily moves
// offending row/column angles to the nearest grid values that restore the
// mechanical bound everywhere in that row or column.
ProjectionResult nearest_projection(const RotationState &continuous, const AngleGrid &grid,
                                    double theta_max, double tol = 1e-9);

} // namespace clra

#endif
