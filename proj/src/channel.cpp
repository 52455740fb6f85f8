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

#include "clra/channel.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "clra/rng.hpp"

namespace clra {

double directional_gain(const GainPattern &pattern, double cos_eps) {
    if (cos_eps <= 0.0)
        return 0.0;
    return pattern.peak_gain() * std::pow(cos_eps, 2.0 * pattern.directivity);
}

double Scenario::reference_gain() const {
    const double c = wavelength_m / (4.0 * kPi);
    return c * c;
}

Eigen::VectorXd Scenario::normalized_powers() const {
    Eigen::VectorXd p(num_users());
    for (int k = 0; k < num_users(); ++k)
        p[k] = users[size_t(k)].power_w / noise_power_w;
    return p;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1e3); }

std::complex<double> los_coefficient(const GainPattern &pattern, const Eigen::Vector3d &boresight,
                                     const Eigen::Vector3d &antenna, const Eigen::Vector3d &target,
                                     double wavelength, double beta0) {
    const Eigen::Vector3d d = target - antenna;
    const double r = d.norm();
    if (r <= 0.0)
        throw std::invalid_argument("los_coefficient: target coincides with the antenna");
    const double cos_eps = boresight.dot(d) / r;
    const double gain = directional_gain(pattern, cos_eps);
    if (gain == 0.0)
        return {0.0, 0.0};
    const double magnitude = std::sqrt(beta0 * gain) / r;
    return std::polar(magnitude, -2.0 * kPi * r / wavelength);
}

std::complex<double> nlos_coefficient(const GainPattern &pattern, const Eigen::Vector3d &boresight,
                                      const Eigen::Vector3d &antenna,
                                      const std::vector<ScatterCluster> &clusters,
                                      const Eigen::Vector3d &user, double wavelength,
                                      double beta0) {
    std::complex<double> sum{0.0, 0.0};
    for (const ScatterCluster &cluster : clusters) {
        const Eigen::Vector3d d = cluster.position - antenna;
        const double r_ac = d.norm();
        const double r_cu = (user - cluster.position).norm();
        if (r_ac <= 0.0 || r_cu <= 0.0)
            throw std::invalid_argument("nlos_coefficient: cluster coincides with an endpoint");
        const double cos_eps = boresight.dot(d) / r_ac;
        const double gain = directional_gain(pattern, cos_eps);
        if (gain == 0.0)
            continue;
        const double power = beta0 * gain / (r_ac * r_ac) * cluster.rcs_m2 /
                             (4.0 * kPi * r_cu * r_cu);
        sum += std::polar(std::sqrt(power),
                          -2.0 * kPi * (r_ac + r_cu) / wavelength + cluster.phase_rad);
    }
    return sum;
}

namespace {

std::complex<double> channel_entry(const Scenario &scenario, const GainPattern &pattern,
                                   const Eigen::Vector3d &boresight, const Eigen::Vector3d &antenna,
                                   const Eigen::Vector3d &user, double beta0) {
    return los_coefficient(pattern, boresight, antenna, user, scenario.wavelength_m, beta0) +
           nlos_coefficient(pattern, boresight, antenna, scenario.clusters, user,
                            scenario.wavelength_m, beta0);
}

} // namespace

Eigen::MatrixXcd element_channel_field(const Scenario &scenario, const ArrayLayout &layout,
                                       const AngleField &field, const GainPattern &pattern) {
    if (layout.is_panel())
        throw std::invalid_argument("element channel requires an element-mode layout");
    if (field.rows() != layout.rows || field.cols() != layout.cols)
        throw std::invalid_argument("angle field does not match the layout grid");
    const int K = scenario.num_users();
    const double beta0 = scenario.reference_gain();
    Eigen::MatrixXcd h(layout.total_antennas(), K);
    for (int m = 0; m < layout.rows; ++m) {
        for (int n = 0; n < layout.cols; ++n) {
            const Eigen::Vector3d antenna = element_position(layout, m, n);
            const Eigen::Vector3d f = pointing_vector(field.alpha(m, n), field.beta(m, n));
            const int q = m * layout.cols + n;
            for (int k = 0; k < K; ++k)
                h(q, k) = channel_entry(scenario, pattern, f, antenna,
                                        scenario.users[size_t(k)].position, beta0);
        }
    }
    return h;
}

Eigen::MatrixXcd element_channel_matrix(const Scenario &scenario, const ArrayLayout &layout,
                                        const RotationState &state, const GainPattern &pattern) {
    return element_channel_field(scenario, layout, AngleField::broadcast(state), pattern);
}

Eigen::MatrixXcd panel_channel_field(const Scenario &scenario, const ArrayLayout &layout,
                                     const AngleField &field, const GainPattern &pattern) {
    if (!layout.is_panel())
        throw std::invalid_argument("panel channel requires a panel-mode layout");
    if (field.rows() != layout.rows || field.cols() != layout.cols)
        throw std::invalid_argument("angle field does not match the panel grid");
    const int K = scenario.num_users();
    const double beta0 = scenario.reference_gain();
    const std::vector<Eigen::Vector3d> centers = panel_centers(layout);
    const int per_panel = layout.antennas_per_panel();
    Eigen::MatrixXcd h(layout.total_antennas(), K);
    for (int b = 0; b < layout.num_panels(); ++b) {
        const int mi = b / layout.cols;
        const int ni = b % layout.cols;
        const Orientation orientation = rotation_matrix(field.alpha(mi, ni), field.beta(mi, ni));
        for (int qm = 0; qm < layout.panel_rows; ++qm) {
            for (int qn = 0; qn < layout.panel_cols; ++qn) {
                const Eigen::Vector3d local(
                    0.0, ArrayLayout::grid_index(qn, layout.panel_cols) * layout.spacing,
                    ArrayLayout::grid_index(qm, layout.panel_rows) * layout.spacing);
                const Eigen::Vector3d antenna =
                    antenna_global_position(centers[size_t(b)], orientation.rotation, local);
                const int q = b * per_panel + qm * layout.panel_cols + qn;
                for (int k = 0; k < K; ++k)
                    h(q, k) = channel_entry(scenario, pattern, orientation.pointing, antenna,
                                            scenario.users[size_t(k)].position, beta0);
            }
        }
    }
    return h;
}

Eigen::MatrixXcd panel_channel_matrix(const Scenario &scenario, const ArrayLayout &layout,
                                      const RotationState &state, const GainPattern &pattern) {
    return panel_channel_field(scenario, layout, AngleField::broadcast(state), pattern);
}

Scenario scenario_from_json(const std::string &text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    Scenario scenario;
    scenario.seed = doc.value("seed", std::uint64_t(0));
    scenario.wavelength_m = doc.value("wavelength_m", 0.0857);
    scenario.noise_power_w = dbm_to_watts(doc.value("noise_dbm", -80.0));

    for (const auto &u : doc.at("users")) {
        UserTerminal user;
        const auto &p = u.at("xyz_m");
        user.position = {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()};
        user.power_w = dbm_to_watts(u.value("power_dbm", 10.0));
        scenario.users.push_back(user);
    }

    Rng phases = Rng(scenario.seed).substream(0x70686173ULL); // cluster phases
    if (doc.contains("clusters")) {
        const auto &c = doc.at("clusters");
        if (c.is_array()) {
            for (const auto &entry : c) {
                ScatterCluster cluster;
                const auto &p = entry.at("xyz_m");
                cluster.position = {p.at(0).get<double>(), p.at(1).get<double>(),
                                    p.at(2).get<double>()};
                cluster.rcs_m2 = entry.value("rcs_m2", 1.0);
                cluster.phase_rad = phases.uniform(0.0, 2.0 * kPi);
                scenario.clusters.push_back(cluster);
            }
        } else {
            const int count = c.value("count", 0);
            double r_min = 20.0, r_max = 60.0;
            if (c.contains("annulus")) {
                r_min = c.at("annulus").at(0).get<double>();
                r_max = c.at("annulus").at(1).get<double>();
            }
            const double rcs = c.value("rcs_m2", 1.0);
            Rng draw = Rng(scenario.seed).substream(0x636C7573ULL); // cluster positions
            for (int d = 0; d < count; ++d) {
                const double azimuth = draw.uniform(-kPi / 2.0, kPi / 2.0);
                const double radius =
                    std::sqrt(draw.uniform(r_min * r_min, r_max * r_max)); // area-uniform
                ScatterCluster cluster;
                cluster.position = {radius * std::cos(azimuth), radius * std::sin(azimuth), 0.0};
                cluster.rcs_m2 = rcs;
                cluster.phase_rad = phases.uniform(0.0, 2.0 * kPi);
                scenario.clusters.push_back(cluster);
            }
        }
    }
    return scenario;
}

std::string scenario_to_json(const Scenario &scenario) {
    nlohmann::json doc;
    doc["seed"] = scenario.seed;
    doc["wavelength_m"] = scenario.wavelength_m;
    doc["noise_dbm"] = watts_to_dbm(scenario.noise_power_w);
    doc["users"] = nlohmann::json::array();
    for (const UserTerminal &u : scenario.users)
        doc["users"].push_back({{"xyz_m", {u.position.x(), u.position.y(), u.position.z()}},
                                {"power_dbm", watts_to_dbm(u.power_w)}});
    doc["clusters"] = nlohmann::json::array();
    for (const ScatterCluster &c : scenario.clusters)
        doc["clusters"].push_back({{"xyz_m", {c.position.x(), c.position.y(), c.position.z()}},
                                   {"rcs_m2", c.rcs_m2}});
    return doc.dump(2);
}

} // namespace clra
