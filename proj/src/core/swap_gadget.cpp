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

#include "core/swap_gadget.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "core/errors.hpp"

using namespace cvr;
using namespace cvr::fock;
using namespace cvr::swap;

namespace {

void check_theta(double theta) {
    if (!(theta > 0 && theta < std::numbers::pi / 2)) {
        throw DomainError("beam-splitter angle must lie in (0, pi/2)");
    }
}

// Input on mode 0, ancilla Fock state |n_anc> on mode 1, splitter U_01(theta),
// detect one photon on mode 0. Column n is the output of |n>.
Matrix heralded_channel(double theta, int cutoff, int ancilla) {
    Matrix out = Matrix::Zero(cutoff + 1, cutoff + 1);
    for (int n = 0; n <= cutoff; n++) {
        int total = std::max(n + ancilla, 1);
        FockArray in = FockArray::basis({n, ancilla}, total);
        FockArray mixed = apply_beam_splitter(in, {0, 1}, theta);
        Projection p = project_fock(mixed, 0, 1);
        for (int k = 0; k <= std::min(cutoff, total); k++) {
            out(k, n) = p.state[(size_t)k];
        }
    }
    return out;
}

// <0| D(out_lam) S D(in_lam) as a row vector over the first cutoff+1 Fock states.
Eigen::RowVectorXcd displaced_subtraction(double theta, double lam_in, double lam_out, int cutoff,
                                          SubtractionModel model) {
    int wide = cutoff + 60 + (int)std::ceil(8 * std::max(lam_in * lam_in, lam_out * lam_out));
    Matrix d_in = displacement_matrix(lam_in, wide + 1, cutoff + 1);
    Matrix d_out = displacement_matrix(lam_out, 1, wide + 1);
    Matrix s;
    if (model == SubtractionModel::kExact) {
        s = channel_n01_circuit(theta, wide);
    } else {
        double lam2 = lam_in * lam_in;
        s = annihilation(wide) * (std::cos(theta) * std::pow(std::sin(theta), lam2));
    }
    // Tail of the displaced vacuum bra beyond the padded basis.
    double kept = d_out.row(0).squaredNorm();
    if (1 - kept > 1e-8) {
        std::stringstream ss;
        ss.precision(12);
        ss << "displacement ancilla tail mass " << 1 - kept << " exceeds 1e-8";
        throw ConvergenceError(ss.str());
    }
    return d_out * s * d_in;
}

}  // namespace

SwapParams SwapParams::from_xi(double xi, double theta) {
    if (!(xi > 0) || !std::isfinite(xi)) {
        throw DomainError("xi must be positive and finite");
    }
    return SwapParams{xi, 1 / xi, theta, std::sqrt(xi / 2)};
}

Matrix cvr::swap::channel_n11(double theta, int cutoff) {
    check_theta(theta);
    double s = std::sin(theta);
    double c = std::cos(theta);
    Matrix out = Matrix::Zero(cutoff + 1, cutoff + 1);
    for (int n = 0; n <= cutoff; n++) {
        out(n, n) = std::pow(s, n - 1) * (n * c * c - s * s);
    }
    return out;
}

Matrix cvr::swap::channel_n01(double theta, int cutoff) {
    check_theta(theta);
    double s = std::sin(theta);
    Matrix out = Matrix::Zero(cutoff + 1, cutoff + 1);
    for (int n = 1; n <= cutoff; n++) {
        out(n - 1, n) = std::cos(theta) * std::pow(s, n - 1) * std::sqrt((double)n);
    }
    return out;
}

Matrix cvr::swap::channel_n11_circuit(double theta, int cutoff) {
    check_theta(theta);
    return heralded_channel(theta, cutoff, 1);
}

Matrix cvr::swap::channel_n01_circuit(double theta, int cutoff) {
    check_theta(theta);
    return heralded_channel(theta, cutoff, 0);
}

FockArray cvr::swap::f23_closed_form(double theta, double lam, int cutoff) {
    check_theta(theta);
    if (cutoff < 1) {
        throw ArgumentError("f23 needs a cutoff of at least 1");
    }
    double c = std::cos(theta);
    double s2 = std::sin(theta) * std::sin(theta);
    double pre = -c * c * std::pow(s2, lam * lam);
    FockArray out = FockArray::zeros({cutoff, cutoff});
    out.at({0, 0}) = pre * lam * lam / 2;
    out.at({1, 1}) = pre / 4;
    return out;
}

FockArray cvr::swap::f23_circuit(double theta, double lam, int cutoff, SubtractionModel model) {
    check_theta(theta);
    if (cutoff < 1) {
        throw ArgumentError("f23 needs a cutoff of at least 1");
    }
    if (!std::isfinite(lam) || lam * lam >= cutoff) {
        throw DomainError("displacement magnitude must satisfy lam^2 < cutoff");
    }
    const double quarter = std::numbers::pi / 4;
    // Everything before the subtractions conserves total photon number, so
    // a basis input of n photons needs modes truncated at n.
    Eigen::RowVectorXcd bra2 = displaced_subtraction(theta, -lam, lam, 2 * cutoff, model);
    Eigen::RowVectorXcd bra3 = displaced_subtraction(theta, lam, -lam, 2 * cutoff, model);

    FockArray out = FockArray::zeros({cutoff, cutoff});
    for (int n2 = 0; n2 <= cutoff; n2++) {
        for (int n3 = 0; n3 <= cutoff; n3++) {
            int total = n2 + n3;
            FockArray psi = FockArray::basis({n2, n3}, total);
            psi = apply_beam_splitter(psi, {0, 1}, quarter);
            Matrix filter = channel_n11_circuit(quarter, total);
            psi = apply_single_mode(psi, 0, filter);
            psi = apply_single_mode(psi, 1, filter);
            psi = apply_beam_splitter(psi, {0, 1}, -quarter);
            cplx amp = 0;
            for (int a = 0; a <= total; a++) {
                for (int b = 0; b <= total - a; b++) {
                    amp += bra2[a] * bra3[b] * psi.at({a, b});
                }
            }
            // The circuit realizes F23^dag; its ket is the conjugate.
            out.at({n2, n3}) = std::conj(amp);
        }
    }
    return out;
}

double cvr::swap::p_phys(double xi, double theta) {
    if (!(xi > 0) || !std::isfinite(xi)) {
        throw DomainError("xi must be positive and finite");
    }
    check_theta(theta);
    double c2 = std::cos(theta) * std::cos(theta);
    double s2 = std::sin(theta) * std::sin(theta);
    return xi * xi / (1 + xi * xi) * c2 * c2 * std::pow(s2, xi) / 16;
}

PhysOptimum cvr::swap::optimize_p_phys(double xi) {
    if (!(xi > 0) || !std::isfinite(xi)) {
        throw DomainError("xi must be positive and finite");
    }
    // log p is concave on (0, pi/2); bisect its derivative -4 tan + 2 xi cot.
    auto slope = [&](double th) { return 2 * xi / std::tan(th) - 4 * std::tan(th); };
    double lo = 1e-9;
    double hi = std::numbers::pi / 2 - 1e-9;
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; iter++) {
        double mid = 0.5 * (lo + hi);
        if (slope(mid) > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double th = 0.5 * (lo + hi);
    return {th, p_phys(xi, th)};
}

FockArray cvr::swap::projector_ket(double q, int cutoff0, int cutoff1) {
    if (!std::isfinite(q) || q < 0) {
        throw DomainError("projector coefficient q must be finite and non-negative");
    }
    FockArray out = FockArray::zeros({cutoff0, cutoff1});
    double norm = std::sqrt(1 + q * q);
    out.at({0, 0}) = 1 / norm;
    if (cutoff0 >= 1 && cutoff1 >= 1) {
        out.at({1, 1}) = q / norm;
    }
    return out;
}

FockArray cvr::swap::qubit_pair_state(double xi, int cutoff) {
    FockArray out = FockArray::zeros({cutoff, cutoff});
    double norm = std::sqrt(1 + xi * xi);
    out.at({0, 0}) = 1 / norm;
    out.at({1, 1}) = xi / norm;
    return out;
}

SwapKetOutcome cvr::swap::ideal_swap(const FockArray &left, const FockArray &right, double q) {
    if (left.num_modes() != 2 || right.num_modes() != 2) {
        throw ArgumentError("ideal swap takes two two-mode states");
    }
    FockArray phi = projector_ket(q, left.cutoff(1), right.cutoff(0));
    FockArray out = project_two_modes(left.tensor(right), {1, 2}, phi);
    double p = out.norm_squared();
    if (!(p > 0)) {
        throw DegenerateError("swap projection has zero probability");
    }
    out *= 1 / std::sqrt(p);
    return {std::move(out), p};
}

SwapOutcome cvr::swap::ideal_swap(const DensityOperator &left, const DensityOperator &right, double q) {
    if (left.num_modes() != 2 || right.num_modes() != 2) {
        throw ArgumentError("ideal swap takes two two-mode states");
    }
    int ca = left.cutoffs()[0];
    int cb1 = left.cutoffs()[1];
    int ca2 = right.cutoffs()[0];
    int cb = right.cutoffs()[1];
    FockArray phi = projector_ket(q, cb1, ca2);
    // Nonzero projector entries (k, l) with amplitudes.
    std::vector<std::pair<int, double>> terms;
    for (int k = 0; k <= std::min({1, cb1, ca2}); k++) {
        terms.push_back({k, phi.at({k, k}).real()});
    }
    int d1 = cb1 + 1;
    int d2 = cb + 1;
    int dim = (ca + 1) * d2;
    Matrix out = Matrix::Zero(dim, dim);
    const Matrix &r1 = left.matrix();
    const Matrix &r2 = right.matrix();
    for (auto [k, wk] : terms) {
        for (auto [kp, wkp] : terms) {
            double w = wk * wkp;
            for (int a = 0; a <= ca; a++) {
                for (int ap = 0; ap <= ca; ap++) {
                    cplx x = r1(a * d1 + k, ap * d1 + kp) * w;
                    if (x == cplx(0)) {
                        continue;
                    }
                    for (int b = 0; b <= cb; b++) {
                        for (int bp = 0; bp <= cb; bp++) {
                            out(a * d2 + b, ap * d2 + bp) += x * r2(k * d2 + b, kp * d2 + bp);
                        }
                    }
                }
            }
        }
    }
    double p = out.trace().real();
    if (!(p > 0)) {
        throw DegenerateError("swap projection has zero probability");
    }
    return {DensityOperator({ca, cb}, out / p), p};
}
