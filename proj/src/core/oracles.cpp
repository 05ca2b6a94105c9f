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

#include "core/oracles.hpp"

#include <cmath>
#include <numbers>

#include "core/errors.hpp"

using namespace cvr;
using namespace cvr::fock;
using namespace cvr::oracle;

namespace {

// Single photon on C, vacuum on B, signal |j> on Y. C is split onto B, then Y and
// C meet on a 50:50 splitter and are measured.
Matrix scissors_pattern(double kappa, int cutoff, int click_y, int click_c) {
    double theta = std::acos(std::sqrt(kappa));
    Matrix k = Matrix::Zero(2, cutoff + 1);
    for (int j = 0; j <= cutoff; j++) {
        FockArray psi = FockArray::basis({j, 1, 0}, {j + 1, j + 1, 1});
        psi = apply_beam_splitter(psi, {1, 2}, theta);
        psi = apply_beam_splitter(psi, {0, 1}, std::numbers::pi / 4);
        Projection py = project_fock(psi, 0, click_y);
        Projection pc = project_fock(py.state, 0, click_c);
        k(0, j) = pc.state[0];
        k(1, j) = pc.state[1];
    }
    return k;
}

// Fixes the global sign so <0|K|0> > 0 and applies a parity flip on the output
// so <1|K|1> > 0 (positive amplifier gain).
Matrix parity_corrected(Matrix k) {
    if (k(0, 0).real() < 0) {
        k = -k;
    }
    if (k(1, 1).real() < 0) {
        k.row(1) = -k.row(1);
    }
    return k;
}

}  // namespace

ScissorsPatterns cvr::oracle::scissors_patterns(double kappa, int cutoff) {
    if (!(kappa > 0 && kappa < 1)) {
        throw DomainError("kappa must lie in (0, 1)");
    }
    return {scissors_pattern(kappa, cutoff, 1, 0), scissors_pattern(kappa, cutoff, 0, 1)};
}

Matrix cvr::oracle::scissors_kraus(double kappa, int n_scissors, int cutoff) {
    if (n_scissors < 1) {
        throw DomainError("number of scissors must be at least 1");
    }
    // Every input above one photon per arm is annihilated, so arms only need
    // cutoff 1 while the input port keeps the full signal.
    ScissorsPatterns pat = scissors_patterns(kappa, std::max(cutoff, 1));
    Matrix a = parity_corrected(pat.k10);
    Matrix b = parity_corrected(pat.k01);
    if ((a - b).cwiseAbs().maxCoeff() > 1e-12) {
        throw NumericalError("scissors click patterns do not herald the same operation");
    }
    // Two indistinguishable-after-correction patterns add incoherently.
    Matrix single = std::sqrt(2.0) * b;

    int n = n_scissors;
    std::vector<double> angles;
    for (int k = 1; k < n; k++) {
        angles.push_back(std::asin(std::sqrt(1.0 / (n - k + 1))));
    }

    Matrix out = Matrix::Zero(n + 1, cutoff + 1);
    for (int j = 0; j <= cutoff; j++) {
        std::vector<int> cut(n, 1);
        cut[0] = j;
        std::vector<int> photons(n, 0);
        photons[0] = j;
        FockArray psi = FockArray::basis(photons, cut);
        for (int k = 1; k < n; k++) {
            psi = apply_beam_splitter(psi, {0, (size_t)k}, angles[(size_t)k - 1]);
        }
        for (int k = 0; k < n; k++) {
            psi = apply_single_mode(psi, (size_t)k, single.leftCols(psi.cutoff((size_t)k) + 1));
        }
        psi = psi.with_cutoff(0, n);
        for (int k = n - 1; k >= 1; k--) {
            psi = apply_beam_splitter(psi, {0, (size_t)k}, -angles[(size_t)k - 1]);
            psi = project_fock(psi, (size_t)k, 0).state;
        }
        for (int m = 0; m <= n; m++) {
            out(m, j) = psi[(size_t)m];
        }
    }
    return out;
}

LinkCircuit cvr::oracle::link_circuit(const link::LinkParams &params, int cutoff) {
    link::derive(params);
    FockArray src(2, cutoff);
    src = apply_two_mode_squeezer(src, {0, 1}, std::asinh(std::sqrt(params.mu)));
    FockArray psi = src.tensor(FockArray(1, cutoff));
    psi = apply_beam_splitter(psi, {1, 2}, std::acos(std::sqrt(params.t)));
    psi = apply_single_mode(psi, 1, scissors_kraus(params.kappa, params.n_scissors, cutoff));
    double p = psi.norm_squared();
    return {std::move(psi), p};
}

DensityOperator cvr::oracle::link_circuit_state(const LinkCircuit &circuit) {
    return reduced_density(circuit.state, {0, 1}).normalized();
}

SwapCircuit cvr::oracle::two_link_swap(const link::LinkParams &params, const FockArray &phi, int cutoff) {
    if (params.n_scissors != 1) {
        throw ArgumentError("two-link swap oracle is built for single-scissors links");
    }
    LinkCircuit link = link_circuit(params, cutoff);
    FockArray one = link.state;
    one *= 1 / std::sqrt(link.probability);
    // Modes (A1, B1, E1, A2, B2, E2); project B1 and A2.
    FockArray both = one.tensor(one);
    FockArray out = project_two_modes(both, {1, 3}, phi);
    double p = out.norm_squared();
    if (!(p > 0)) {
        throw DegenerateError("swap projection has zero probability");
    }
    // Remaining modes (A1, E1, B2, E2).
    return {reduced_density(out, {0, 2}).normalized(), p};
}
