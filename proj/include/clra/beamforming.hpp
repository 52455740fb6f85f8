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

#ifndef CLRA_BEAMFORMING_HPP
#define CLRA_BEAMFORMING_HPP

#include <Eigen/Dense>

namespace clra {

// Receive beamformers are stored as unit-norm columns of a Q x K matrix and
// applied as w^H x. Each column is phase-normalized so that w_k^H h_k is
// real and nonnegative.

struct RateReport {
    Eigen::VectorXd sinr;     // linear, per user
    Eigen::VectorXd rate;     // bits/s/Hz, log2(1 + sinr)
    double sum_rate = 0.0;
};

// Matched filter w = h / ||h||; throws on a zero channel.
Eigen::VectorXcd mrc(const Eigen::VectorXcd &h);

// SINR-optimal unit receiver C_k^{-1} h_k (normalized), with
// C_k = sum_{i != k} pbar_i h_i h_i^H + I. The inverse is applied through
// the low-rank identity so only a (K-1) x (K-1) system is solved; an
// ill-conditioned inner system falls back to the direct Q x Q solve
// (reported through used_direct_solve). A zero channel column yields e_1.
Eigen::VectorXcd mmse(const Eigen::MatrixXcd &channel, const Eigen::VectorXd &pbar, int user,
                      bool *used_direct_solve = nullptr);

// MMSE beamformers for all users.
Eigen::MatrixXcd mmse_all(const Eigen::MatrixXcd &channel, const Eigen::VectorXd &pbar);

// pbar_k |w_k^H h_k|^2 / (sum_{i != k} pbar_i |w_k^H h_i|^2 + 1).
double sinr(const Eigen::MatrixXcd &channel, const Eigen::MatrixXcd &beamformers,
            const Eigen::VectorXd &pbar, int user);

RateReport sum_rate(const Eigen::MatrixXcd &channel, const Eigen::MatrixXcd &beamformers,
                    const Eigen::VectorXd &pbar);

} // namespace clra

#endif
