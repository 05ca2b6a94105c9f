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

#include "core/chain_state.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"

using namespace cvr;
using namespace cvr::chain;

namespace {

using Mat4x16 = Eigen::Matrix<double, 4, 16>;

// Index of (left j, right k) in the Kronecker product of two coefficient vectors.
constexpr int kron(int j, int k) {
    return 4 * j + k;
}

// Projected coefficients with the right loss mode in |0> (A) and in |1> (B).
void swap_maps(double q, double th, Mat4x16 &a, Mat4x16 &b) {
    a.setZero();
    b.setZero();
    a(0, kron(0, 0)) = 1;
    a(0, kron(2, 1)) = q;
    a(1, kron(1, 0)) = 1;
    a(1, kron(3, 1)) = q;
    a(2, kron(0, 2)) = 1;
    a(2, kron(2, 3)) = q;
    a(3, kron(1, 2)) = 1;
    a(3, kron(3, 3)) = q;
    b(0, kron(2, 0)) = q * th;
    b(1, kron(3, 0)) = q * th;
    b(2, kron(2, 2)) = q * th;
    b(3, kron(3, 2)) = q * th;
}

Eigen::Matrix<double, 16, 16> kron_product(const Eigen::Matrix4d &l, const Eigen::Matrix4d &r) {
    Eigen::Matrix<double, 16, 16> out;
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            out.block<4, 4>(4 * i, 4 * j) = l(i, j) * r;
        }
    }
    return out;
}

void check_q(double q) {
    if (!(q >= 0) || !std::isfinite(q)) {
        throw DomainError("projector coefficient q must be finite and non-negative");
    }
}

}  // namespace

LinkGammas cvr::chain::link_gammas(double mu, double t, double kappa) {
    if (!(mu >= 0) || !std::isfinite(mu)) {
        throw DomainError("mu must be finite and non-negative");
    }
    if (t == 0) {
        throw DegenerateError("zero transmissivity: the link transmits nothing");
    }
    if (!(t > 0 && t <= 1)) {
        throw DomainError("transmissivity must lie in (0, 1]");
    }
    if (!(kappa > 0 && kappa < 1)) {
        throw DomainError("kappa must lie in (0, 1)");
    }
    double r = std::asinh(std::sqrt(mu));
    double sech = 1 / std::cosh(r);
    double tanh = std::tanh(r);
    double denom = sech * sech + t * tanh * tanh;

    LinkGammas out;
    out.level = 1;
    out.f = std::sqrt(kappa) * sech / std::sqrt(denom);
    out.kappa_h = std::sqrt((1 - kappa) / kappa) * std::sqrt(t) * tanh;
    out.xi = out.kappa_h;
    out.rho = std::atanh(std::sqrt(1 - t) * tanh);
    out.gamma = std::sqrt((kappa * sech * sech + t * tanh * tanh) / (std::cosh(r) * std::cosh(r) * denom * denom));
    out.g = {out.f, 0, 0, out.kappa_h * out.f};
    return out;
}

double cvr::chain::p_sciss(const LinkGammas &gammas) {
    if (gammas.level != 1) {
        throw ArgumentError("scissors success probability is defined for level-1 links");
    }
    return gammas.gamma * gammas.gamma;
}

Eigen::Matrix4d cvr::chain::gram(double rho) {
    double c2 = std::cosh(rho) * std::cosh(rho);
    return Eigen::Vector4d(1, c2, 1, c2).asDiagonal();
}

PrintedStep cvr::chain::swap_step_printed(const LinkGammas &l, const LinkGammas &r, double q) {
    if (l.level != r.level) {
        throw ArgumentError("swap_step needs segments of equal level");
    }
    if (l.rho != r.rho) {
        throw ArgumentError("swap_step needs segments with identical residual squeezing");
    }
    check_q(q);
    double th = std::tanh(l.rho);
    const auto &a = l.g;
    const auto &b = r.g;
    PrintedStep out;
    out.gammas = l;
    out.gammas.level = l.level + 1;
    out.gammas.g = {
        a[0] * b[0] + q * a[2] * (b[1] + b[0] * th),
        a[1] * b[0] + q * a[3] * (b[1] + b[0] * th),
        a[0] * b[2] + q * a[2] * (b[3] + b[2] * th),
        a[1] * b[2] + q * a[3] * (b[3] + b[2] * th),
    };
    Eigen::Vector4d v(out.gammas.g.data());
    double norm2 = v.dot(gram(l.rho) * v);
    out.gammas.gamma = std::sqrt(norm2);
    double sech = 1 / std::cosh(l.rho);
    out.probability =
        sech * sech / (1 + q * q) * norm2 / (l.gamma * l.gamma * r.gamma * r.gamma);
    return out;
}

ChainState cvr::chain::from_gammas(const LinkGammas &gammas) {
    Eigen::Vector4d v(gammas.g.data());
    double norm2 = v.dot(gram(gammas.rho) * v);
    if (!(norm2 > 0)) {
        throw DegenerateError("coefficient vector has zero norm");
    }
    return ChainState{v * v.transpose() / norm2, gammas.level, gammas.rho};
}

StepResult cvr::chain::swap_step(const ChainState &left, const ChainState &right, double q) {
    if (left.level != right.level) {
        throw ArgumentError("swap_step needs segments of equal level");
    }
    if (left.rho != right.rho) {
        throw ArgumentError("swap_step needs segments with identical residual squeezing");
    }
    check_q(q);
    Mat4x16 a, b;
    swap_maps(q, std::tanh(left.rho), a, b);
    Eigen::Matrix<double, 16, 16> both = kron_product(left.coeffs, right.coeffs);
    Eigen::Matrix4d g = a * both * a.transpose() + b * both * b.transpose();
    double norm2 = (g * gram(left.rho)).trace();
    double sech = 1 / std::cosh(left.rho);
    double p = sech * sech / (1 + q * q) * norm2;
    if (!(norm2 > 0)) {
        throw DegenerateError("swap projection has zero probability");
    }
    Eigen::Matrix4d sym = 0.5 * (g + g.transpose()) / norm2;
    return {ChainState{sym, left.level + 1, left.rho}, p};
}

fock::DensityOperator cvr::chain::end_to_end_density(const ChainState &state, int cutoff) {
    if (cutoff < 1) {
        throw ArgumentError("cutoff must be at least 1");
    }
    double nbar = std::sinh(state.rho) * std::sinh(state.rho);
    fock::DensityOperator th = fock::thermal_state(nbar, cutoff);
    Eigen::VectorXd p = th.matrix().diagonal().real();

    // Coefficient j = 2 beta + alpha stands for (a^dag)^alpha (b^dag)^beta.
    int dim = 2 * (cutoff + 1);
    fock::Matrix rho = fock::Matrix::Zero(dim, dim);
    for (int j = 0; j < 4; j++) {
        for (int k = 0; k < 4; k++) {
            double w = state.coeffs(j, k);
            if (w == 0) {
                continue;
            }
            int aj = j % 2, bj = j / 2;
            int ak = k % 2, bk = k / 2;
            // <n| (a^dag)^aj rho_th a^ak |m> with n - aj = m - ak = l.
            for (int l = 0; l <= cutoff; l++) {
                int n = l + aj;
                int m = l + ak;
                if (n > cutoff || m > cutoff) {
                    continue;
                }
                double v = p[l] * std::sqrt(aj ? (double)n : 1.0) * std::sqrt(ak ? (double)m : 1.0);
                rho(2 * n + bj, 2 * m + bk) += w * v;
            }
        }
    }
    double tr = rho.trace().real();
    if (std::abs(tr - 1) > 1e-8) {
        std::stringstream ss;
        ss.precision(12);
        ss << "end-to-end density truncated at cutoff " << cutoff << " has trace " << tr;
        throw ConvergenceError(ss.str());
    }
    return fock::DensityOperator({cutoff, 1}, rho / tr);
}

fock::DensityOperator cvr::chain::end_to_end_density(const LinkGammas &gammas, int cutoff) {
    return end_to_end_density(from_gammas(gammas), cutoff);
}

double cvr::chain::resolve_q(const ChainParams &params, const LinkGammas &link) {
    if (params.q >= 0) {
        return params.q;
    }
    return link.xi > 0 ? 1 / link.xi : 0.0;
}

void cvr::chain::fill_entropies(ChainResult &result, int cutoff) {
    fock::DensityOperator rho = end_to_end_density(result.state, cutoff);
    result.entropy_joint = fock::von_neumann_entropy(rho);
    result.entropy_marginal = fock::von_neumann_entropy(fock::partial_trace(rho, {0}));
    result.rci = result.entropy_marginal - result.entropy_joint;
}

ChainResult cvr::chain::propagate_chain(const ChainParams &params) {
    if (params.x < 0 || params.x > 30) {
        throw DomainError("nesting level x must lie in [0, 30]");
    }
    LinkGammas link = link_gammas(params.mu, params.t_link, params.kappa);
    ChainResult out;
    out.q = resolve_q(params, link);
    out.xi = link.xi;
    out.p_sciss = p_sciss(link);
    if (params.recursion == Recursion::kExact) {
        ChainState s = from_gammas(link);
        for (int i = 0; i < params.x; i++) {
            StepResult step = swap_step(s, s, out.q);
            out.swap_probabilities.push_back(step.probability);
            s = step.state;
        }
        out.state = s;
    } else {
        LinkGammas g = link;
        for (int i = 0; i < params.x; i++) {
            PrintedStep step = swap_step_printed(g, g, out.q);
            out.swap_probabilities.push_back(step.probability);
            g = step.gammas;
            // Only ratios matter; rescale so deep nesting does not underflow.
            for (double &v : g.g) {
                v /= g.gamma;
            }
            g.gamma = 1;
        }
        out.state = from_gammas(g);
    }
    out.rci = out.entropy_joint = out.entropy_marginal = std::nan("");
    return out;
}

ChainResult cvr::chain::evaluate_chain(const ChainParams &params, int cutoff) {
    ChainResult out = propagate_chain(params);
    fill_entropies(out, cutoff);
    return out;
}

double cvr::chain::chain_rci(const ChainParams &params, int cutoff) {
    return evaluate_chain(params, cutoff).rci;
}
