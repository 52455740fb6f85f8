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
//
// Test-only reference oracles, independent of the library code paths they
// cross-check.

#ifndef CLRA_TESTS_ORACLES_HPP
#define CLRA_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "clra/linprog.hpp"
#include "clra/rng.hpp"

namespace clra::testing {

// Recursive adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)> &f, double a, double b,
                               double tol, int depth = 24) {
    const auto simpson = [&](double lo, double hi) {
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
    };
    std::function<double(double, double, double, int)> refine =
        [&](double lo, double hi, double whole, int level) -> double {
        const double mid = 0.5 * (lo + hi);
        const double left = simpson(lo, mid);
        const double right = simpson(mid, hi);
        if (level <= 0 || std::abs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return refine(lo, mid, left, level - 1) + refine(mid, hi, right, level - 1);
    };
    return refine(a, b, simpson(a, b), depth);
}

// Brute-force LP oracle: enumerates every basic point defined by n active
// constraints drawn from the rows and the finite bounds, keeps the feasible
// ones, and returns the best objective. Valid whenever the feasible region
// is bounded (all test programs carry finite boxes). Returns nullopt when
// no feasible vertex exists.
inline std::optional<double> vertex_enumeration_optimum(const LinearProgram &lp,
                                                        double feas_tol = 1e-7) {
    const int n = lp.num_vars();
    struct Constraint {
        Eigen::RowVectorXd a;
        double b;
    };
    std::vector<Constraint> constraints;
    for (int i = 0; i < lp.num_rows(); ++i)
        constraints.push_back({lp.rows.row(i), lp.rhs[i]});
    for (int j = 0; j < n; ++j) {
        Eigen::RowVectorXd unit = Eigen::RowVectorXd::Zero(n);
        unit[j] = 1.0;
        if (std::isfinite(lp.upper[j]))
            constraints.push_back({unit, lp.upper[j]});
        if (std::isfinite(lp.lower[j]))
            constraints.push_back({-unit, -lp.lower[j]});
    }

    const int total = int(constraints.size());
    std::vector<int> pick(static_cast<size_t>(n));
    std::optional<double> best;

    const auto feasible = [&](const Eigen::VectorXd &x) {
        for (const Constraint &c : constraints)
            if (c.a.dot(x) > c.b + feas_tol)
                return false;
        return true;
    };

    std::function<void(int, int)> recurse = [&](int next, int chosen) {
        if (chosen == n) {
            Eigen::MatrixXd a(n, n);
            Eigen::VectorXd b(n);
            for (int r = 0; r < n; ++r) {
                a.row(r) = constraints[size_t(pick[size_t(r)])].a;
                b[r] = constraints[size_t(pick[size_t(r)])].b;
            }
            const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
            if (!lu.isInvertible())
                return;
            const Eigen::VectorXd x = lu.solve(b);
            if (!feasible(x))
                return;
            const double value = lp.objective.dot(x);
            if (!best || value > *best)
                best = value;
            return;
        }
        if (next >= total)
            return;
        pick[size_t(chosen)] = next;
        recurse(next + 1, chosen + 1);
        recurse(next + 1, chosen);
    };
    recurse(0, 0);
    return best;
}

// Random boxed LP with a mix of feasible and infeasible instances.
inline LinearProgram random_lp(Rng &rng, int max_vars = 5, int max_rows = 8) {
    LinearProgram lp;
    const int n = int(rng.uniform_int(1, max_vars));
    const int m = int(rng.uniform_int(0, max_rows));
    lp.objective.resize(n);
    lp.lower.resize(n);
    lp.upper.resize(n);
    for (int j = 0; j < n; ++j) {
        lp.objective[j] = rng.gaussian();
        const double a = rng.uniform(-2.0, 2.0);
        const double b = rng.uniform(-2.0, 2.0);
        lp.lower[j] = std::min(a, b);
        lp.upper[j] = std::max(a, b);
    }
    lp.rows.resize(m, n);
    lp.rhs.resize(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j)
            lp.rows(i, j) = rng.gaussian();
        // biased positive so most instances are feasible, some are not
        lp.rhs[i] = rng.gaussian() * 1.5 + 1.0;
    }
    return lp;
}

inline Eigen::VectorXcd random_unit_complex(Rng &rng, int size) {
    Eigen::VectorXcd v(size);
    for (int i = 0; i < size; ++i)
        v[i] = rng.gaussian_complex();
    return v / v.norm();
}

} // namespace clra::testing

#endif
