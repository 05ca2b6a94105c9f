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

#ifndef CVREPEATER_CORE_ORACLES_HPP
#define CVREPEATER_CORE_ORACLES_HPP

#include "core/fock.hpp"
#include "core/scissors_link.hpp"

namespace cvr::oracle {

/// Kraus operators of one scissors for the two single-click patterns
/// (detector Y, detector C) = (1,0) and (0,1), as 2 x (cutoff+1) matrices.
struct ScissorsPatterns {
    fock::Matrix k10;
    fock::Matrix k01;
};
ScissorsPatterns scissors_patterns(double kappa, int cutoff);

/// Heralding Kraus operator of N scissors behind a balanced N-way splitter,
/// recombined and post-selected on vacuum in the unused ports. Both click
/// patterns of every scissors are included after parity correction.
/// Shape (N+1) x (cutoff+1).
fock::Matrix scissors_kraus(double kappa, int n_scissors, int cutoff);

/// TMSV source, loss beam splitter, N-scissors amplifier, simulated in Fock space.
struct LinkCircuit {
    fock::FockArray state;  ///< Unnormalized, modes (A, B, E).
    double probability;
};
LinkCircuit link_circuit(const link::LinkParams &params, int cutoff);

/// Normalized heralded state on (A, B).
fock::DensityOperator link_circuit_state(const LinkCircuit &circuit);

/// Two N=1 links joined by projecting (B1, A2) onto `phi`.
struct SwapCircuit {
    fock::DensityOperator state;  ///< Normalized, modes (A1, B2).
    double probability;           ///< Projection probability given both links heralded.
};
SwapCircuit two_link_swap(const link::LinkParams &params, const fock::FockArray &phi, int cutoff);

}  // namespace cvr::oracle

#endif
