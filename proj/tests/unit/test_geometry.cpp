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

#include "clra/geometry.hpp"
#include "clra/rng.hpp"

using namespace clra;

TEST_CASE("rotation matrix at reference orientation is the identity") {
    const Orientation o = rotation_matrix(0.0, 0.0);
    CHECK((o.rotation - Eigen::Matrix3d::Identity()).norm() == doctest::Approx(0.0));
    CHECK(o.pointing.isApprox(Eigen::Vector3d(1, 0, 0)));
}

TEST_CASE("quarter turn about the horizontal axis points up") {
    const Orientation o = rotation_matrix(kPi / 2.0, 0.0);
    CHECK(o.pointing.isApprox(Eigen::Vector3d(0, 0, 1), 1e-15));
}

TEST_CASE("pointing vector components match the matrix entries") {
    const Orientation o = rotation_matrix(0.3, 0.4);
    CHECK(o.pointing.x() == doctest::Approx(std::cos(0.3) * std::cos(0.4)).epsilon(1e-14));
    CHECK(o.pointing.y() == doctest::Approx(-std::sin(0.4)).epsilon(1e-14));
    CHECK(o.pointing.z() == doctest::Approx(std::sin(0.3) * std::cos(0.4)).epsilon(1e-14));
    CHECK(o.pointing.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(o.pointing.isApprox(pointing_vector(0.3, 0.4)));
}

TEST_CASE("composite rotation equals the factor product entrywise") {
    Rng rng(11);
    for (int i = 0; i < 20000; ++i) {
        const double a = rng.uniform(-kPi, kPi);
        const double b = rng.uniform(-kPi, kPi);
        Eigen::Matrix3d ra, rb;
        ra << std::cos(a), 0, -std::sin(a), 0, 1, 0, std::sin(a), 0, std::cos(a);
        rb << std::cos(b), std::sin(b), 0, -std::sin(b), std::cos(b), 0, 0, 0, 1;
        const Orientation o = rotation_matrix(a, b);
        CHECK((o.rotation - ra * rb).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("rotation matrices stay orthonormal with unit pointing") {
    Rng rng(12);
    for (int i = 0; i < 20000; ++i) {
        const Orientation o = rotation_matrix(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi));
        CHECK((o.rotation.transpose() * o.rotation - Eigen::Matrix3d::Identity())
                  .cwiseAbs()
                  .maxCoeff() <= 1e-12);
        CHECK(std::abs(o.rotation.determinant() - 1.0) <= 1e-12);
        CHECK(std::abs(o.pointing.norm() - 1.0) <= 1e-12);
        CHECK((o.pointing - o.rotation * Eigen::Vector3d(1, 0, 0)).norm() <= 1e-12);
    }
}

TEST_CASE("eccentric cosine is the product of the track cosines") {
    RotationState state;
    state.alpha = Eigen::VectorXd::Zero(2);
    state.beta = Eigen::VectorXd::Zero(2);
    CHECK(eccentric_cosine(state, 0, 0) == doctest::Approx(1.0));

    state.alpha[1] = kPi / 2.0;
    CHECK(eccentric_cosine(state, 1, 0) == doctest::Approx(0.0).epsilon(1e-15));

    state.alpha[0] = 0.3;
    state.beta[1] = 0.4;
    // product of cosines, frozen from an independent evaluation
    CHECK(eccentric_cosine(state, 0, 1) == doctest::Approx(0.879923176281257).epsilon(1e-14));

    CHECK_THROWS_AS(eccentric_cosine(state, 2, 0), std::out_of_range);
}

TEST_CASE("eccentric cosine is invariant under full-turn shifts") {
    Rng rng(13);
    for (int i = 0; i < 1000; ++i) {
        RotationState state;
        state.alpha = Eigen::VectorXd::Constant(1, rng.uniform(-kPi, kPi));
        state.beta = Eigen::VectorXd::Constant(1, rng.uniform(-kPi, kPi));
        const double base = eccentric_cosine(state, 0, 0);
        RotationState shifted = state;
        shifted.alpha[0] += 2.0 * kPi;
        shifted.beta[0] -= 4.0 * kPi;
        CHECK(eccentric_cosine(shifted, 0, 0) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("mechanical bound cases") {
    CHECK(element_bound_satisfied(0.0, 0.0, kPi / 6.0));
    CHECK_FALSE(element_bound_satisfied(0.01, 0.0, 0.0)); // only boresight feasible
    // boundary: cos(pi/6)cos(0) == cos(theta_max)
    CHECK(element_bound_satisfied(kPi / 6.0, 0.0, kPi / 6.0));
}

TEST_CASE("angle wrapping lands in (-pi, pi] and preserves the trig values") {
    CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    Rng rng(14);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(-20.0, 20.0);
        const double w = wrap_angle(x);
        CHECK(w <= kPi);
        CHECK(w > -kPi);
        CHECK(std::cos(w) == doctest::Approx(std::cos(x)).epsilon(1e-10));
        CHECK(std::sin(w) == doctest::Approx(std::sin(x)).epsilon(1e-10));
    }
}

TEST_CASE("element grid is origin-centered with half indices for even counts") {
    ArrayLayout layout;
    layout.rows = 2;
    layout.cols = 3;
    layout.spacing = 0.5;
    CHECK(element_position(layout, 0, 0).isApprox(Eigen::Vector3d(0, -0.5, -0.25)));
    CHECK(element_position(layout, 1, 2).isApprox(Eigen::Vector3d(0, 0.5, 0.25)));
    CHECK(element_position(layout, 0, 1).y() == doctest::Approx(0.0));
}

TEST_CASE("panel centers sit on the symmetric grid scaled by the pitch") {
    ArrayLayout layout;
    layout.mode = ArrayLayout::Mode::panel;
    layout.spacing = 0.1;
    layout.panel_rows = 2;
    layout.panel_cols = 2;

    SUBCASE("single panel at the origin") {
        layout.rows = layout.cols = 1;
        const auto centers = panel_centers(layout);
        REQUIRE(centers.size() == 1);
        CHECK(centers[0].norm() == doctest::Approx(0.0));
    }
    SUBCASE("two stacked panels split the pitch symmetrically") {
        layout.rows = 2;
        layout.cols = 1;
        const double d = layout.panel_pitch();
        const auto centers = panel_centers(layout);
        REQUIRE(centers.size() == 2);
        CHECK(centers[0].isApprox(Eigen::Vector3d(0, 0, -d / 2.0)));
        CHECK(centers[1].isApprox(Eigen::Vector3d(0, 0, d / 2.0)));
    }
    SUBCASE("2x2 panels occupy the four quadrants") {
        layout.rows = layout.cols = 2;
        const double d = layout.panel_pitch();
        const auto centers = panel_centers(layout);
        REQUIRE(centers.size() == 4);
        CHECK(centers[0].isApprox(Eigen::Vector3d(0, -d / 2.0, -d / 2.0)));
        CHECK(centers[3].isApprox(Eigen::Vector3d(0, d / 2.0, d / 2.0)));
    }
    SUBCASE("element mode is rejected") {
        layout.mode = ArrayLayout::Mode::element;
        CHECK_THROWS_AS(panel_centers(layout), std::invalid_argument);
    }
}

TEST_CASE("rigid-body antenna positions") {
    const Eigen::Vector3d center(1, 2, 3);
    CHECK(antenna_global_position(center, Eigen::Matrix3d::Identity(), {0, 0, 0})
              .isApprox(center));
    CHECK(antenna_global_position(center, Eigen::Matrix3d::Identity(), {0, 0.5, 0})
              .isApprox(Eigen::Vector3d(1, 2.5, 3)));
    // quarter turn about the horizontal axis folds +z into -x
    const Orientation o = rotation_matrix(kPi / 2.0, 0.0);
    CHECK(antenna_global_position(center, o.rotation, {0, 0, 0.5})
              .isApprox(center + Eigen::Vector3d(-0.5, 0, 0), 1e-12));
}

namespace {

ArrayLayout panel_grid(int rows, int cols) {
    ArrayLayout layout;
    layout.mode = ArrayLayout::Mode::panel;
    layout.rows = rows;
    layout.cols = cols;
    layout.panel_rows = 2;
    layout.panel_cols = 2;
    layout.spacing = 0.04;
    return layout;
}

} // namespace

TEST_CASE("panel constraints at the reference orientation are satisfied") {
    const ArrayLayout layout = panel_grid(2, 2);
    const RotationState state = RotationState::zero(2, 2);
    CHECK(panel_constraints_satisfied(state, layout).satisfied);
}

TEST_CASE("single panel is unconstrained") {
    const ArrayLayout layout = panel_grid(1, 1);
    RotationState state = RotationState::zero(1, 1);
    state.alpha[0] = 1.2;
    state.beta[0] = -2.1;
    CHECK(panel_constraints_satisfied(state, layout).satisfied);
}

TEST_CASE("leftmost panel of a row may not swing to negative beta") {
    const ArrayLayout layout = panel_grid(1, 4);
    RotationState state = RotationState::zero(1, 4);
    state.beta[0] = -0.2; // sin(beta) < 0 on the left edge
    const PanelCheck check = panel_constraints_satisfied(state, layout);
    CHECK_FALSE(check.satisfied);
    REQUIRE_FALSE(check.violations.empty());
    CHECK(check.violations.front().panel == 0);
}

TEST_CASE("element mode is rejected by the panel predicates") {
    ArrayLayout layout;
    CHECK_THROWS_AS(panel_constraints_satisfied(RotationState::zero(1, 1), layout),
                    std::invalid_argument);
}

TEST_CASE("analytic feasible ranges match the remark cases") {
    SUBCASE("interior panel must stay on the array normal") {
        const FeasibleRange r = analytic_feasible_range(panel_grid(3, 3), 4);
        CHECK(r.sin_beta == SignRequirement::zero);
        CHECK(r.sin_alpha_cos_beta == SignRequirement::zero);
        CHECK(r.contains(0.0, 0.0));
        CHECK_FALSE(r.contains(0.1, 0.0));
    }
    SUBCASE("middle panel of a row keeps beta at zero, alpha free") {
        const FeasibleRange r = analytic_feasible_range(panel_grid(1, 3), 1);
        CHECK(r.sin_beta == SignRequirement::zero);
        CHECK(r.sin_alpha_cos_beta == SignRequirement::any);
        CHECK(r.contains(1.0, 0.0));
        CHECK_FALSE(r.contains(0.0, 0.1));
    }
    SUBCASE("bottom-right corner: sin(beta) <= 0 and sin(alpha)cos(beta) <= 0") {
        // panel grid row 0 is the bottom edge, last column the right edge
        const FeasibleRange r = analytic_feasible_range(panel_grid(3, 3), 2);
        CHECK(r.sin_beta == SignRequirement::nonpositive);
        CHECK(r.sin_alpha_cos_beta == SignRequirement::nonpositive);
        CHECK(r.contains(-0.3, -0.2));
        CHECK_FALSE(r.contains(0.3, -0.2));
        CHECK_FALSE(r.contains(-0.3, 0.2));
    }
}

TEST_CASE("analytic ranges agree with the direct constraint rows") {
    Rng rng(15);
    const ArrayLayout layouts[] = {panel_grid(1, 5), panel_grid(5, 1), panel_grid(3, 3),
                                   panel_grid(2, 2)};
    for (const ArrayLayout &layout : layouts) {
        for (int b = 0; b < layout.num_panels(); ++b) {
            const FeasibleRange range = analytic_feasible_range(layout, b);
            int mismatches = 0;
            for (int i = 0; i < 20000; ++i) {
                const double alpha = rng.uniform(-kPi, kPi);
                const double beta = rng.uniform(-kPi, kPi);
                RotationState state = RotationState::zero(layout.rows, layout.cols);
                state.alpha[b / layout.cols] = alpha;
                state.beta[b % layout.cols] = beta;
                const bool direct =
                    panel_constraints_for(state, layout, b, 1e-12).satisfied;
                if (direct != range.contains(alpha, beta, 1e-12))
                    ++mismatches;
            }
            CHECK(mismatches == 0);
        }
    }
}
