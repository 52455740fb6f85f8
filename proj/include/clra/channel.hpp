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

#ifndef CLRA_CHANNEL_HPP
#define CLRA_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "clra/geometry.hpp"

namespace clra {

// Directional gain G(eps) = G0 cos^{2p}(eps) on the front hemisphere, zero
// behind. G0 = 2(2p+1) normalizes the radiated power over the hemisphere.
struct GainPattern {
    double directivity = 2.0; // p >= 0

    double peak_gain() const { return 2.0 * (2.0 * directivity + 1.0); }
    static GainPattern isotropic() { return GainPattern{0.0}; }
};

double directional_gain(const GainPattern &pattern, double cos_eps);

struct UserTerminal {
    Eigen::Vector3d position; // meters, global frame
    double power_w = 0.01;    // transmit power, watts
};

struct ScatterCluster {
    Eigen::Vector3d position;
    double rcs_m2 = 1.0;    // radar cross section
    double phase_rad = 0.0; // random scattering phase, [0, 2pi)
};

// Fully resolved propagation scene. All randomness (cluster phases, drawn
// positions) is already materialized, so channel synthesis is a pure
// function of this struct plus the rotation state.
struct Scenario {
    std::vector<UserTerminal> users;
    std::vector<ScatterCluster> clusters;
    double noise_power_w = 1e-11; // -80 dBm
    double wavelength_m = 0.0857; // 3.5 GHz
    std::uint64_t seed = 0;

    int num_users() const { return int(users.size()); }

    // Free-space reference gain at 1 m: (lambda / 4 pi)^2.
    double reference_gain() const;

    // P_k / sigma^2 per user.
    Eigen::VectorXd normalized_powers() const;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// Scenario (de)serialization. Schema:
//   {"seed": u64, "wavelength_m": f, "noise_dbm": f,
//    "users": [{"xyz_m": [x,y,z], "power_dbm": f}, ...],
//    "clusters": [{"xyz_m": [x,y,z], "rcs_m2": f}, ...]
//      or {"count": n, "annulus": [r_min, r_max], "rcs_m2": f}}
// Cluster phases (and positions in annulus form) come from the seeded stream.
Scenario scenario_from_json(const std::string &text);
std::string scenario_to_json(const Scenario &scenario);

// Direct-path coefficient: sqrt(beta0 G(eps) / r^2) * exp(-j 2 pi r / lambda),
// with cos(eps) between the boresight and the antenna-to-target direction.
std::complex<double> los_coefficient(const GainPattern &pattern, const Eigen::Vector3d &boresight,
                                     const Eigen::Vector3d &antenna, const Eigen::Vector3d &target,
                                     double wavelength, double beta0);

// Scattered-path coefficient: bi-static sum over clusters, antenna-side gain
// only, exact two-leg path phase plus the cluster phase.
std::complex<double> nlos_coefficient(const GainPattern &pattern, const Eigen::Vector3d &boresight,
                                      const Eigen::Vector3d &antenna,
                                      const std::vector<ScatterCluster> &clusters,
                                      const Eigen::Vector3d &user, double wavelength, double beta0);

// Q x K channel, antennas flattened row-major over the element grid.
Eigen::MatrixXcd element_channel_matrix(const Scenario &scenario, const ArrayLayout &layout,
                                        const RotationState &state, const GainPattern &pattern);
Eigen::MatrixXcd element_channel_field(const Scenario &scenario, const ArrayLayout &layout,
                                       const AngleField &field, const GainPattern &pattern);

// Q x K channel, antennas flattened (panel, within-panel) row-major. All
// antennas of a panel share its normal for the gain; positions and phases
// use the exact rotated per-antenna locations.
Eigen::MatrixXcd panel_channel_matrix(const Scenario &scenario, const ArrayLayout &layout,
                                      const RotationState &state, const GainPattern &pattern);
Eigen::MatrixXcd panel_channel_field(const Scenario &scenario, const ArrayLayout &layout,
                                     const AngleField &field, const GainPattern &pattern);

} // namespace clra

#endif
