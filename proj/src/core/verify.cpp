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

#include "core/verify.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "core/chain_state.hpp"
#include "core/errors.hpp"
#include "core/oracles.hpp"
#include "core/scissors_link.hpp"
#include "core/swap_gadget.hpp"

using namespace cvr;
using namespace cvr::verify;

namespace {

std::vector<link::LinkParams> random_links(const VerifyConfig &cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u01(0, 1);
    std::vector<link::LinkParams> out;
    for (int k = 0; k < cfg.points; k++) {
        link::LinkParams p;
        p.mu = 0.001 + 0.499 * u01(rng);
        p.kappa = 0.01 + 0.98 * u01(rng);
        p.t = 0.001 + 0.999 * u01(rng);
        p.n_scissors = 1 + (int)(u01(rng) * 4) % 4;
        out.push_back(p);
    }
    return out;
}

link::LinkParams perturbed(link::LinkParams p, const VerifyConfig &cfg) {
    p.kappa *= 1 + cfg.inject_kappa_error;
    return p;
}

// Runs `body`, which returns the residual; exceptions become failed checks.
void add_check(VerifyReport &rep, const std::string &name, double tol, const std::function<double()> &body) {
    Check c{name, std::nan(""), tol, false, ""};
    try {
        c.residual = body();
        c.passed = c.residual <= tol;
    } catch (const std::exception &e) {
        c.note = e.what();
    }
    for (auto &w : take_warnings()) {
        rep.warnings.push_back(name + ": " + w);
    }
    rep.checks.push_back(c);
}

void note_drift(VerifyReport &rep, const std::string &name, int cutoff, const std::function<double(int)> &scalar) {
    try {
        double a = scalar(cutoff);
        double b = scalar(cutoff + 10);
        if (std::abs(a - b) > 1e-8) {
            std::stringstream ss;
            ss.precision(12);
            ss << name << ": convergence warning, result moves by " << std::abs(a - b) << " from cutoff " << cutoff
               << " to " << cutoff + 10;
            rep.warnings.push_back(ss.str());
        }
    } catch (const std::exception &e) {
        std::stringstream ss;
        ss.precision(12);
        ss << name << ": convergence warning at cutoff " << cutoff << ": " << e.what();
        rep.warnings.push_back(ss.str());
    }
}

}  // namespace

bool VerifyReport::all_passed() const {
    for (const auto &c : checks) {
        if (!c.passed) {
            return false;
        }
    }
    return !checks.empty();
}

size_t VerifyReport::worst() const {
    size_t w = 0;
    double worst_ratio = -1;
    for (size_t k = 0; k < checks.size(); k++) {
        double r = std::isnan(checks[k].residual) ? INFINITY : checks[k].residual / checks[k].tolerance;
        if (r > worst_ratio) {
            worst_ratio = r;
            w = k;
        }
    }
    return w;
}

VerifyReport cvr::verify::run(const VerifyConfig &cfg) {
    if (cfg.cutoff < 4) {
        throw DomainError("verification cutoff must be at least 4");
    }
    if (cfg.points < 1) {
        throw DomainError("verification needs at least one random point");
    }
    VerifyReport rep;
    int cut = cfg.cutoff;
    std::vector<link::LinkParams> links = random_links(cfg);

    // Circuit-side states are shared by the scissors and entropy checks.
    std::vector<fock::DensityOperator> circuit_states;
    std::vector<double> circuit_probs;
    add_check(rep, "scissors circuit simulation", 0, [&]() {
        for (const auto &p : links) {
            oracle::LinkCircuit c = oracle::link_circuit(p, cut);
            circuit_states.push_back(oracle::link_circuit_state(c));
            circuit_probs.push_back(c.probability);
        }
        return 0.0;
    });
    bool have_circuit = circuit_states.size() == links.size();

    std::stringstream pts;
    pts << " (" << links.size() << " random points)";
    add_check(rep, "scissors herald probability vs circuit" + pts.str(), 1e-8, [&]() {
        if (!have_circuit) {
            throw ConvergenceError("circuit simulation failed");
        }
        double worst = 0;
        for (size_t k = 0; k < links.size(); k++) {
            double p = link::herald_probability(perturbed(links[k], cfg));
            worst = std::max(worst, std::abs(p - circuit_probs[k]));
        }
        return worst;
    });
    add_check(rep, "scissors heralded state vs circuit, trace distance" + pts.str(), 1e-8, [&]() {
        if (!have_circuit) {
            throw ConvergenceError("circuit simulation failed");
        }
        double worst = 0;
        for (size_t k = 0; k < links.size(); k++) {
            fock::DensityOperator rho = link::heralded_state(perturbed(links[k], cfg), cut);
            worst = std::max(worst, fock::trace_distance(rho, circuit_states[k]));
        }
        return worst;
    });
    add_check(rep, "scissors entropies H(AB), H(A) vs circuit" + pts.str(), 1e-8, [&]() {
        if (!have_circuit) {
            throw ConvergenceError("circuit simulation failed");
        }
        double worst = 0;
        for (size_t k = 0; k < links.size(); k++) {
            link::LinkReport r = link::evaluate(perturbed(links[k], cfg));
            const auto &rho = circuit_states[k];
            worst = std::max(worst, std::abs(r.entropy_joint - fock::von_neumann_entropy(rho)));
            worst = std::max(worst,
                             std::abs(r.entropy_marginal - fock::von_neumann_entropy(fock::partial_trace(rho, {0}))));
        }
        return worst;
    });
    add_check(rep, "entropy formulas vs eigen-entropies of the closed-form state" + pts.str(), 1e-9, [&]() {
        double worst = 0;
        for (const auto &p0 : links) {
            link::LinkParams p = perturbed(p0, cfg);
            link::LinkReport r = link::evaluate(p0);
            fock::DensityOperator rho = link::heralded_state(p, cut);
            worst = std::max(worst, std::abs(r.entropy_joint - fock::von_neumann_entropy(rho)));
            worst = std::max(worst,
                             std::abs(r.entropy_marginal - fock::von_neumann_entropy(fock::partial_trace(rho, {0}))));
        }
        return worst;
    });
    note_drift(rep, "scissors closed form", cut, [&](int c) {
        return fock::von_neumann_entropy(link::heralded_state(links[0], c));
    });

    add_check(rep, "N11 and N01 channels vs circuit", 1e-10, [&]() {
        double worst = 0;
        for (double th : {0.3, std::numbers::pi / 4, 1.2}) {
            worst = std::max(worst, (swap::channel_n11(th, 12) - swap::channel_n11_circuit(th, 12)).cwiseAbs().maxCoeff());
            worst = std::max(worst, (swap::channel_n01(th, 12) - swap::channel_n01_circuit(th, 12)).cwiseAbs().maxCoeff());
        }
        return worst;
    });

    add_check(rep, "f23 closed form vs circuit on theta x lambda grid (3x3)", 1e-9, [&]() {
        double worst = 0;
        for (double th : {0.3, 0.6, 0.9}) {
            for (double lam : {0.3, 0.7, 1.0}) {
                fock::FockArray a = swap::f23_closed_form(th, lam, 3);
                fock::FockArray b = swap::f23_circuit(th, lam, 3);
                for (size_t k = 0; k < a.size(); k++) {
                    worst = std::max(worst, std::abs(a[k] - b[k]));
                }
            }
        }
        return worst;
    });

    // Larger-mu point so the truncation of the traced loss mode is visible at
    // small cutoffs.
    const double mu = 0.4, t = 0.05, kappa = 0.2;
    link::LinkParams lp{mu, t, kappa, 1};
    chain::LinkGammas g1 = chain::link_gammas(mu, t, kappa * (1 + cfg.inject_kappa_error));
    add_check(rep, "single-scissors link: p_sciss vs herald probability", 1e-10, [&]() {
        return std::abs(chain::p_sciss(g1) - link::herald_probability(lp));
    });
    add_check(rep, "single link: chain density vs circuit, trace distance", 1e-8, [&]() {
        oracle::LinkCircuit c = oracle::link_circuit(lp, cut);
        return fock::trace_distance(chain::end_to_end_density(g1, cut), oracle::link_circuit_state(c));
    });

    double fid_residual = std::nan("");
    double prob_residual = std::nan("");
    add_check(rep, "two-link chain: 1 - fidelity vs circuit", 1e-8, [&]() {
        chain::ChainState s1 = chain::from_gammas(g1);
        chain::StepResult step = chain::swap_step(s1, s1, 1 / g1.xi);
        fock::DensityOperator rho = chain::end_to_end_density(step.state, cut);
        swap::SwapParams sp = swap::SwapParams::from_xi(g1.xi, 0.6);
        fock::FockArray phi = swap::f23_circuit(sp.theta, sp.lam, 1);
        phi *= 1 / std::sqrt(phi.norm_squared());
        oracle::SwapCircuit sc = oracle::two_link_swap(lp, phi, cut);
        // (1 - D)^2 lower-bounds the fidelity and avoids square roots of
        // round-off eigenvalues.
        double d = fock::trace_distance(rho, sc.state);
        fid_residual = 1 - (1 - d) * (1 - d);
        prob_residual = std::abs(step.probability - sc.probability);
        return fid_residual;
    });
    add_check(rep, "two-link chain: swap probability vs circuit", 1e-8, [&]() {
        if (std::isnan(prob_residual)) {
            throw ConvergenceError("two-link circuit failed");
        }
        return prob_residual;
    });
    note_drift(rep, "two-link chain", cut, [&](int c) {
        chain::ChainState s1 = chain::from_gammas(g1);
        chain::StepResult step = chain::swap_step(s1, s1, 1 / g1.xi);
        fock::DensityOperator rho = chain::end_to_end_density(step.state, c);
        return fock::von_neumann_entropy(rho);
    });
    return rep;
}
