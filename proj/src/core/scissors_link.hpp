// Copyright 2026 The cvrepeater Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVREPEATER_CORE_SCISSORS_LINK_HPP
#define CVREPEATER_CORE_SCISSORS_LINK_HPP

#include <vector>

#include "core/fock.hpp"

namespace cvr::link {

/// One repeater link: TMSV source, pure-loss channel, N parallel scissors.
struct LinkParams {
    double mu = 0;     ///< TMSV mean photon number per mode.
    double t = 1;      ///< Channel transmissivity, (0, 1].
    double kappa = 0.5;  ///< Scissors beam-splitter parameter, (0, 1).
    int n_scissors = 1;
};

struct LinkDerived {
    double chi;   ///< tanh of the squeezing parameter.
    double gain;  ///< NLA amplitude gain sqrt((1-kappa)/kappa).
    double a;
    double b;
    double c;
};

/// Validates params and returns the derived constants.
LinkDerived derive(const LinkParams &params);

/// Photon-number amplitude of |m+u>_A |m>_B in the u-th block of the heralded state.
double zeta(const LinkParams &params, int m, int u);

/// Squared amplitudes zeta_{m,u}^2 for m in [0, N], u in [0, u_max].
struct ZetaTable {
    int n;
    int u_max;
    std::vector<double> sq;  ///< Row-major by u: sq[u * (n + 1) + m].

    double at(int m, int u) const { return sq[(size_t)u * (size_t)(n + 1) + (size_t)m]; }
    /// Sum over m of zeta_{m,u}^2 (unnormalized weight of block u).
    double block(int u) const;
    double total() const;
};

/// u-sum stops once a block falls below 1e-16 of the running sum and u > 50.
ZetaTable zeta_table(const LinkParams &params);

double herald_probability(const LinkParams &params);
/// Heralded state on (A, B) with A truncated at `cutoff` and B at N, trace 1.
fock::DensityOperator heralded_state(const LinkParams &params, int cutoff);
double entropy_joint(const LinkParams &params);
double entropy_marginal(const LinkParams &params);
double rci(const LinkParams &params);
/// Herald probability times RCI, clamped below at 0.
double true_rci(const LinkParams &params);

struct LinkReport {
    double probability;
    double entropy_joint;
    double entropy_marginal;
    double rci;
    double true_rci;
};

/// All link scalars from a single zeta table.
LinkReport evaluate(const LinkParams &params);

/// Fiber transmissivity 10^(-alpha L / 10).
double transmissivity(double distance_km, double alpha_db_per_km = 0.2);

}  // namespace cvr::link

#endif
