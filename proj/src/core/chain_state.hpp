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

#ifndef CVREPEATER_CORE_CHAIN_STATE_HPP
#define CVREPEATER_CORE_CHAIN_STATE_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "core/fock.hpp"

namespace cvr::chain {

/// Pure-state coefficients g0..g3 over {1, a^dag, b^dag, a^dag b^dag} sigma_AL |0>,
/// where sigma_AL squeezes the end mode A with a traced loss mode L.
struct LinkGammas {
    double gamma;             ///< Norm of the coefficient vector (sqrt of g^T Gram g).
    std::array<double, 4> g;  ///< Unnormalized coefficients.
    int level;
    double rho;      ///< Residual squeezing magnitude.
    double f;
    double kappa_h;
    double xi;
};

LinkGammas link_gammas(double mu, double t, double kappa);
double p_sciss(const LinkGammas &gammas);

/// Gram matrix of the coefficient basis, diag(1, cosh^2 rho, 1, cosh^2 rho).
Eigen::Matrix4d gram(double rho);

struct PrintedStep {
    LinkGammas gammas;
    double probability;
};

/// Four-coefficient recursion that adds the two L2 branches coherently.
/// Kept for comparison; it does not describe the state after tracing L2.
PrintedStep swap_step_printed(const LinkGammas &left, const LinkGammas &right, double q);

/// Mixed chain state: a 4x4 PSD coefficient matrix G so that the state is
/// sum_jk G_jk P_j sigma|0><0|sigma^dag P_k^dag, normalized with Tr(G Gram) = 1.
struct ChainState {
    Eigen::Matrix4d coeffs;
    int level;
    double rho;
};

ChainState from_gammas(const LinkGammas &gammas);

struct StepResult {
    ChainState state;
    double probability;
};

/// Ideal swap of two chain segments, tracing the right segment's loss mode.
StepResult swap_step(const ChainState &left, const ChainState &right, double q);

/// Density operator on (A_1, B_end) with A truncated at `cutoff` and B at 1.
fock::DensityOperator end_to_end_density(const ChainState &state, int cutoff);
fock::DensityOperator end_to_end_density(const LinkGammas &gammas, int cutoff);

enum class Recursion { kExact, kPrinted };

struct ChainParams {
    double mu = 0;
    double t_link = 1;
    double kappa = 0.5;
    /// Projector coefficient; negative selects the default 1/xi of the level-1 link.
    double q = -1;
    int x = 0;
    Recursion recursion = Recursion::kExact;
};

struct ChainResult {
    double rci;
    double entropy_joint;
    double entropy_marginal;
    double p_sciss;
    double q;
    double xi;
    /// P_swap of the ideal projector at levels 1..x.
    std::vector<double> swap_probabilities;
    ChainState state;
};

double resolve_q(const ChainParams &params, const LinkGammas &link);

/// Link and swap probabilities plus the final state; entropies are left NaN.
ChainResult propagate_chain(const ChainParams &params);
ChainResult evaluate_chain(const ChainParams &params, int cutoff);
double chain_rci(const ChainParams &params, int cutoff);

/// Entropies and RCI of a chain state (fills rci and entropy fields of a result).
void fill_entropies(ChainResult &result, int cutoff);

}  // namespace cvr::chain

#endif
