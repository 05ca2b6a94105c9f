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

#ifndef CVREPEATER_CORE_RATE_MODEL_HPP
#define CVREPEATER_CORE_RATE_MODEL_HPP

#include <vector>

#include "core/chain_state.hpp"

namespace cvr::rate {

/// Repeaterless capacity -log2(1 - eta) in ebits/mode.
double capacity_direct(double eta);

/// Probability that at least one of M multiplexed links succeeds,
/// 1 - (1 - c eta^(1/n))^M, evaluated as -expm1(M log1p(-p)).
double p_multiplexed(double c, double eta, double n, double M);

/// DV-like chain rate p_M^n p_swap^(n-1) / M in ebits/mode.
double rate_dv(double M, double n, double p_swap, double c, double eta);

/// Intersection exponent log(1/p_swap) / log(M c).
double tau_exponent(double M, double c, double p_swap);

/// Left side of the envelope stationarity equation; its root in (0,1) is z.
double envelope_residual(double z, double M, double c, double p_swap);

struct ZSolution {
    double z;
    double residual;
};

/// Bracketed bisection in log z; throws SubcriticalError when M c p_swap <= 1.
ZSolution solve_z_detailed(double M, double c, double p_swap);
double solve_z(double M, double c, double p_swap);

/// Exponent s of the DV-like tangent envelope eta^s / (M p_swap).
double envelope_exponent_s(double M, double c, double p_swap);

enum class SwapCost {
    kPhysical,  ///< P_swap = P_Pi x P_phys(xi, theta*).
    kIdeal,     ///< P_swap = P_Pi.
};

/// Per-swap success factor applied on top of P_Pi.
double swap_cost_factor(double xi, SwapCost cost);

/// General-operation rate I_R (1-(1-p_sciss)^M)^(n-1) prod_i P_swap^(i) / M with
/// n = 2^x links; level i contributes n / 2^i swaps.
double rate_general(const chain::ChainResult &chain, double M, SwapCost cost = SwapCost::kPhysical);

enum class EnvelopeMode { kDvLike, kGeneral };

struct EnvelopeConfig {
    EnvelopeMode mode = EnvelopeMode::kDvLike;
    double M = 1e10;
    double rep_rate = 1e6;
    double alpha_db_per_km = 0.2;
    double distance_min_km = 1;
    double distance_max_km = 2000;
    double distance_step_km = 1;
    int x_max = 12;

    // DV-like.
    double p_swap = 0.00463;
    double c = 5e-6;

    // General: kappa = kappa_coeff * t_link^kappa_exp.
    double mu = 0.0719;
    double kappa_coeff = 0.0557;
    double kappa_exp = 0.6057;
    double q = -1;  ///< Negative selects 1/xi.
    int cutoff = 30;
    SwapCost swap_cost = SwapCost::kPhysical;
    chain::Recursion recursion = chain::Recursion::kExact;
};

struct EnvelopeCurve {
    std::vector<double> distances_km;
    std::vector<int> n_rep;
    std::vector<std::vector<double>> curves;  ///< [curve][point], ebits/mode.
    std::vector<double> pointwise_max;        ///< ebits/mode.
    /// DV-like with a root: analytic tangent envelope. Otherwise the pointwise max.
    std::vector<double> envelope;
    std::vector<double> direct;               ///< C_direct, ebits/mode.

    double s_fit = 0;
    double s_fit_r2 = 0;
    double fit_lo_km = 0;
    double fit_hi_km = 0;

    bool supercritical = false;  ///< DV-like: the envelope equation has a root.
    double s_exact = 0;          ///< DV-like only.
    double tau = 0;              ///< DV-like only.
    double z = 0;                ///< DV-like only.

    bool advantage = false;
    double l_cross_km = 0;
    double r_cross_ebps = 0;
};

EnvelopeCurve build_envelope(const EnvelopeConfig &config);

/// Rates (ebits/mode) of every n_rep = 2^x - 1 curve at one distance.
std::vector<double> rates_at(const EnvelopeConfig &config, double distance_km);

}  // namespace cvr::rate

#endif
