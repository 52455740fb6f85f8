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

#include "clra/beamforming.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace clra {

namespace {

constexpr double kConditionLimit = 1e12;

// Rotate w so that w^H h is real nonnegative; keeps outputs deterministic.
Eigen::VectorXcd phase_align(const Eigen::VectorXcd &w, const Eigen::VectorXcd &h) {
    const std::complex<double> inner = w.dot(h); // conjugates w
    const double mag = std::abs(inner);
    if (mag == 0.0)
        return w;
    return w * (inner / mag);
}

} // namespace

Eigen::VectorXcd mrc(const Eigen::VectorXcd &h) {
    const double norm = h.norm();
    if (norm == 0.0)
        throw std::invalid_argument("mrc: zero channel");
    return h / norm;
}

Eigen::VectorXcd mmse(const Eigen::MatrixXcd &channel, const Eigen::VectorXd &pbar, int user,
                      bool *used_direct_solve) {
    const int Q = int(channel.rows());
    const int K = int(channel.cols());
    if (user < 0 || user >= K)
        throw std::out_of_range("mmse: user index outside the channel");
    if (pbar.size() != K)
        throw std::invalid_argument("mmse: power vector does not match the channel");
    if (used_direct_solve)
        *used_direct_solve = false;

    const Eigen::VectorXcd h = channel.col(user);
    if (h.norm() == 0.0)
        return Eigen::VectorXcd::Unit(Q, 0);
    if (K == 1)
        return mrc(h);

    // Interferer matrix and powers with user k removed.
    Eigen::MatrixXcd others(Q, K - 1);
    Eigen::VectorXd powers(K - 1);
    int col = 0;
    for (int i = 0; i < K; ++i) {
        if (i == user)
            continue;
        others.col(col) = channel.col(i);
        powers[col] = pbar[i];
        ++col;
    }

    // C^{-1} h = h - H_o (P^{-1} + H_o^H H_o)^{-1} H_o^H h
    const Eigen::MatrixXcd gram = others.adjoint() * others;
    Eigen::MatrixXcd inner = gram;
    for (int i = 0; i < K - 1; ++i) {
        if (powers[i] <= 0.0)
            throw std::invalid_argument("mmse: normalized powers must be positive");
        inner(i, i) += 1.0 / powers[i];
    }

    Eigen::VectorXcd w;
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(inner);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > kConditionLimit) {
        // Near-singular inner system: solve C w = h directly.
        if (used_direct_solve)
            *used_direct_solve = true;
        Eigen::MatrixXcd cov = Eigen::MatrixXcd::Identity(Q, Q);
        for (int i = 0; i < K - 1; ++i)
            cov += powers[i] * others.col(i) * others.col(i).adjoint();
        w = cov.ldlt().solve(h);
    } else {
        const Eigen::VectorXcd projected = others.adjoint() * h;
        w = h - others * inner.ldlt().solve(projected);
    }

    const double norm = w.norm();
    if (norm == 0.0)
        return Eigen::VectorXcd::Unit(Q, 0);
    return phase_align(w / norm, h);
}

Eigen::MatrixXcd mmse_all(const Eigen::MatrixXcd &channel, const Eigen::VectorXd &pbar) {
    Eigen::MatrixXcd w(channel.rows(), channel.cols());
    for (int k = 0; k < channel.cols(); ++k)
        w.col(k) = mmse(channel, pbar, k);
    return w;
}

double sinr(const Eigen::MatrixXcd &channel, const Eigen::MatrixXcd &beamformers,
            const Eigen::VectorXd &pbar, int user) {
    const int K = int(channel.cols());
    if (user < 0 || user >= K)
        throw std::out_of_range("sinr: user index outside the channel");
    const Eigen::VectorXcd w = beamformers.col(user);
    double interference = 0.0;
    for (int i = 0; i < K; ++i) {
        if (i == user)
            continue;
        interference += pbar[i] * std::norm(w.dot(channel.col(i)));
    }
    const double signal = pbar[user] * std::norm(w.dot(channel.col(user)));
    return signal / (interference + 1.0);
}

RateReport sum_rate(const Eigen::MatrixXcd &channel, const Eigen::MatrixXcd &beamformers,
                    const Eigen::VectorXd &pbar) {
    const int K = int(channel.cols());
    RateReport report;
    report.sinr.resize(K);
    report.rate.resize(K);
    for (int k = 0; k < K; ++k) {
        report.sinr[k] = sinr(channel, beamformers, pbar, k);
        report.rate[k] = std::log2(1.0 + report.sinr[k]);
    }
    report.sum_rate = report.rate.sum();
    return report;
}

} // namespace clra
