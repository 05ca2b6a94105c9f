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

#ifndef CVREPEATER_CORE_SWAP_GADGET_HPP
#define CVREPEATER_CORE_SWAP_GADGET_HPP

#include "core/fock.hpp"

namespace cvr::swap {

struct SwapParams {
    double xi;     ///< Link entanglement coefficient.
    double q;      ///< Projector coefficient, default 1/xi.
    double theta;  ///< Photon-subtraction beam-splitter angle.
    double lam;    ///< Displacement magnitude, default sqrt(xi/2).

    static SwapParams from_xi(double xi, double theta);
};

/// Fock-state filter <1|_i U_ij(theta) |1>_j as a diagonal (cutoff+1)^2 matrix.
fock::Matrix channel_n11(double theta, int cutoff);
/// Photon subtraction <1|_i U_ij(theta) |0>_j = cos(theta) sin(theta)^n a.
fock::Matrix channel_n01(double theta, int cutoff);

/// The same two channels obtained by simulating the optical circuit.
fock::Matrix channel_n11_circuit(double theta, int cutoff);
fock::Matrix channel_n01_circuit(double theta, int cutoff);

/// Ket of F23 on modes (2, 3): -cos^2(theta) sin^2(theta)^(lam^2) (lam^2/2 |00> + 1/4 |11>).
fock::FockArray f23_closed_form(double theta, double lam, int cutoff);

enum class SubtractionModel {
    /// sin(theta)^n replaced by sin(theta)^(lam^2) inside the displaced subtraction,
    /// the approximation under which the closed form holds.
    kMeanField,
    /// Full cos(theta) sin(theta)^n a operator.
    kExact,
};

/// F23 assembled from the measurement circuit: 50:50 splitter, two N11(pi/4)
/// filters, inverse splitter, displaced photon subtractions, vacuum projections.
fock::FockArray f23_circuit(double theta, double lam, int cutoff,
                            SubtractionModel model = SubtractionModel::kMeanField);

/// Success probability of the physical swap, (xi^2/(1+xi^2)) cos^4 sin^(2 xi) / 16.
double p_phys(double xi, double theta);

struct PhysOptimum {
    double theta;
    double p;
};

/// Golden-section maximization of p_phys over theta in (0, pi/2).
PhysOptimum optimize_p_phys(double xi);

/// Normalized (|00> + q|11>) / sqrt(1 + q^2) with the given per-mode cutoffs.
fock::FockArray projector_ket(double q, int cutoff0 = 1, int cutoff1 = 1);

struct SwapOutcome {
    fock::DensityOperator state;
    double probability;
};
struct SwapKetOutcome {
    fock::FockArray state;
    double probability;
};

/// Projects B1 and A2 of (A1,B1) x (A2,B2) onto the ideal swap ket. States must be
/// normalized; the output is renormalized and the squared norm is returned.
SwapOutcome ideal_swap(const fock::DensityOperator &left, const fock::DensityOperator &right, double q);
SwapKetOutcome ideal_swap(const fock::FockArray &left, const fock::FockArray &right, double q);

/// (|00> + xi |11>) / sqrt(1 + xi^2).
fock::FockArray qubit_pair_state(double xi, int cutoff = 1);

}  // namespace cvr::swap

#endif
