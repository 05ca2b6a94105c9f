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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "core/chain_state.hpp"
#include "core/errors.hpp"
#include "core/fock.hpp"
#include "core/oracles.hpp"
#include "core/scissors_link.hpp"
#include "core/swap_gadget.hpp"

using namespace cvr;
using namespace cvr::chain;

namespace {

double eta(double km) { return std::pow(10, -0.02 * km); }

fock::FockArray swap_ket(double xi) {
    swap::SwapParams sp = swap::SwapParams::from_xi(xi, 0.6);
    fock::FockArray phi = swap::f23_circuit(sp.theta, sp.lam, 1);
    phi *= 1 / std::sqrt(phi.norm_squared());
    return phi;
}

}  // namespace

TEST(LinkGammas, Lossless) {
    double mu = 0.3, kappa = 0.2;
    LinkGammas g = link_gammas(mu, 1, kappa);
    double r = std::asinh(std::sqrt(mu));
    EXPECT_NEAR(g.rho, 0, 1e-15);
    EXPECT_NEAR(g.f, std::sqrt(kappa) / std::cosh(r), 1e-15);
}

TEST(LinkGammas, VacuumSource) {
    LinkGammas g = link_gammas(0, 0.3, 0.2);
    EXPECT_NEAR(g.f, std::sqrt(0.2), 1e-15);
    EXPECT_EQ(g.kappa_h, 0);
    EXPECT_NEAR(g.gamma, std::sqrt(0.2), 1e-15);
    EXPECT_NEAR(p_sciss(g), 0.2, 1e-15);
    fock::DensityOperator rho = end_to_end_density(g, 10);
    EXPECT_NEAR(rho.matrix()(0, 0).real(), 1, 1e-15);
}

TEST(LinkGammas, Level1Structure) {
    LinkGammas g = link_gammas(0.0719, eta(200), 0.1);
    EXPECT_EQ(g.level, 1);
    EXPECT_EQ(g.g[1], 0);
    EXPECT_EQ(g.g[2], 0);
    EXPECT_EQ(g.g[0], g.f);
    EXPECT_NEAR(g.g[3], g.kappa_h * g.f, 1e-15);
    EXPECT_EQ(g.xi, g.kappa_h);
}

TEST(LinkGammas, Errors) {
    EXPECT_THROW(link_gammas(0.1, 0, 0.5), DegenerateError);
    EXPECT_THROW(link_gammas(0.1, 1.5, 0.5), DomainError);
    EXPECT_THROW(link_gammas(0.1, 0.5, 1), DomainError);
    EXPECT_THROW(link_gammas(-1, 0.5, 0.5), DomainError);
}

TEST(LinkGammas, HeraldedStateMatchesCircuit) {
    link::LinkParams p{0.0719, eta(200), 0.1, 1};
    fock::DensityOperator circuit = oracle::link_circuit_state(oracle::link_circuit(p, 30));
    EXPECT_LT(fock::trace_distance(end_to_end_density(link_gammas(p.mu, p.t, p.kappa), 30), circuit), 1e-8);
}

TEST(PSciss, MatchesHeraldProbability) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 20; k++) {
        double mu = 0.001 + 0.499 * u(rng), t = 0.001 + 0.999 * u(rng), kappa = 0.01 + 0.98 * u(rng);
        double p = p_sciss(link_gammas(mu, t, kappa));
        EXPECT_NEAR(p, link::herald_probability({mu, t, kappa, 1}), 1e-10);
        EXPECT_GT(p, 0);
        EXPECT_LE(p, 1);
    }
}

TEST(PrintedStep, LevelTwoCoefficients) {
    LinkGammas g = link_gammas(0.0719, eta(100), 0.05);
    double q = 1 / g.xi;
    PrintedStep s = swap_step_printed(g, g, q);
    double th = std::tanh(g.rho);
    double f2 = g.f * g.f;
    EXPECT_NEAR(s.gammas.g[0] / f2, 1, 1e-14);
    EXPECT_NEAR(s.gammas.g[1] / f2, g.kappa_h * q * th, 1e-14);
    EXPECT_EQ(s.gammas.g[2], 0);
    EXPECT_NEAR(s.gammas.g[3] / f2, g.kappa_h * g.kappa_h * q, 1e-14);

    // P_Pi = f^4 sech^2 rho (gamma2)^2 / ((1+q^2) (gamma1)^4), gamma2 the norm of the unit-leading vector.
    double c2 = std::cosh(g.rho) * std::cosh(g.rho);
    double v1 = g.kappa_h * q * th, v3 = g.kappa_h * g.kappa_h * q;
    double gamma2_sq = 1 + c2 * (v1 * v1 + v3 * v3);
    double expect = std::pow(g.f, 4) / c2 * gamma2_sq / ((1 + q * q) * std::pow(g.gamma, 4));
    EXPECT_NEAR(s.probability, expect, 1e-14);
}

TEST(PrintedStep, NormIdentity) {
    LinkGammas g = link_gammas(0.1, 0.05, 0.03);
    double c2 = std::cosh(g.rho) * std::cosh(g.rho);
    for (int level = 2; level <= 5; level++) {
        g = swap_step_printed(g, g, 1 / g.xi).gammas;
        double n2 = g.g[0] * g.g[0] + g.g[2] * g.g[2] + c2 * (g.g[1] * g.g[1] + g.g[3] * g.g[3]);
        EXPECT_NEAR(g.gamma * g.gamma, n2, 1e-12 * n2);
        EXPECT_EQ(g.level, level);
    }
}

TEST(SwapStep, ExactAndPrintedAgreeOnFirstProbability) {
    LinkGammas g = link_gammas(0.0719, eta(150), 0.04);
    double q = 1 / g.xi;
    StepResult e = swap_step(from_gammas(g), from_gammas(g), q);
    PrintedStep p = swap_step_printed(g, g, q);
    EXPECT_NEAR(e.probability, p.probability, 1e-13);
}

TEST(SwapStep, ZeroQGivesNoCorrelation) {
    ChainParams cp;
    cp.mu = 0.0719;
    cp.t_link = eta(50);
    cp.kappa = 0.05;
    cp.q = 0;
    cp.x = 1;
    for (Recursion r : {Recursion::kExact, Recursion::kPrinted}) {
        cp.recursion = r;
        ChainResult res = evaluate_chain(cp, 30);
        EXPECT_NEAR(res.rci, 0, 1e-10);
        EXPECT_EQ(res.state.coeffs(3, 3), 0);
    }
}

TEST(SwapStep, RejectsMismatchedSegments) {
    LinkGammas a = link_gammas(0.1, 0.1, 0.1);
    LinkGammas b = link_gammas(0.1, 0.2, 0.1);
    EXPECT_THROW(swap_step(from_gammas(a), from_gammas(b), 1), ArgumentError);
    ChainState lifted = swap_step(from_gammas(a), from_gammas(a), 1).state;
    EXPECT_THROW(swap_step(lifted, from_gammas(a), 1), ArgumentError);
    EXPECT_THROW(swap_step_printed(a, b, 1), ArgumentError);
    EXPECT_THROW(swap_step(from_gammas(a), from_gammas(a), -1), DomainError);
}

// Two full link circuits joined by the swap projector, against one exact step.
TEST(SwapStep, TwoLinkChainMatchesCircuit) {
    for (auto [mu, t, kappa] : {std::tuple{0.0719, eta(100), 0.1}, std::tuple{0.4, 0.05, 0.2}}) {
        LinkGammas g = link_gammas(mu, t, kappa);
        StepResult step = swap_step(from_gammas(g), from_gammas(g), 1 / g.xi);
        oracle::SwapCircuit sc = oracle::two_link_swap({mu, t, kappa, 1}, swap_ket(g.xi), 30);
        double d = fock::trace_distance(end_to_end_density(step.state, 30), sc.state);
        EXPECT_GE((1 - d) * (1 - d), 1 - 1e-8);
        EXPECT_NEAR(step.probability, sc.probability, 1e-8);
    }
}

TEST(SwapStep, PrintedRecursionMissesIncoherentBranch) {
    LinkGammas g = link_gammas(0.4, 0.05, 0.2);
    PrintedStep p = swap_step_printed(g, g, 1 / g.xi);
    oracle::SwapCircuit sc = oracle::two_link_swap({0.4, 0.05, 0.2, 1}, swap_ket(g.xi), 30);
    EXPECT_NEAR(p.probability, sc.probability, 1e-8);
    EXPECT_GT(fock::trace_distance(end_to_end_density(p.gammas, 30), sc.state), 1e-4);
}

TEST(EndToEnd, SingleLinkMatchesScissorsState) {
    link::LinkParams p{0.2, 0.3, 0.15, 1};
    fock::DensityOperator a = end_to_end_density(link_gammas(p.mu, p.t, p.kappa), 30);
    EXPECT_LT(fock::trace_distance(a, link::heralded_state(p, 30)), 1e-8);
}

TEST(EndToEnd, LosslessIsPure) {
    fock::DensityOperator rho = end_to_end_density(link_gammas(0.2, 1, 0.3), 30);
    EXPECT_LT(fock::von_neumann_entropy(rho), 1e-9);
}

TEST(EndToEnd, ConvergenceError) {
    LinkGammas g = link_gammas(0.4, 0.05, 0.2);
    EXPECT_THROW(end_to_end_density(g, 4), ConvergenceError);
    EXPECT_THROW(end_to_end_density(g, 0), ArgumentError);
}

TEST(ChainRci, SingleLinkEqualsLinkRci) {
    for (auto [mu, t, kappa] : {std::tuple{0.0719, 0.1, 0.05}, std::tuple{0.3, 0.6, 0.4}}) {
        ChainParams cp;
        cp.mu = mu;
        cp.t_link = t;
        cp.kappa = kappa;
        EXPECT_NEAR(chain_rci(cp, 30), link::rci({mu, t, kappa, 1}), 1e-8);
    }
    ChainParams vac;
    vac.mu = 0;
    vac.t_link = 0.3;
    vac.x = 2;
    EXPECT_NEAR(chain_rci(vac, 20), 0, 1e-12);
}

TEST(ChainRci, NonIncreasingInNesting) {
    for (double km : {20.0, 100.0, 300.0}) {
        ChainParams cp;
        cp.mu = 0.0719;
        cp.t_link = eta(km);
        cp.kappa = 0.0557 * std::pow(cp.t_link, 0.6057);
        double prev = INFINITY;
        for (int x = 0; x <= 4; x++) {
            cp.x = x;
            ChainResult r = evaluate_chain(cp, 30);
            EXPECT_LE(r.rci, prev + 1e-12) << km << " " << x;
            prev = r.rci;
            for (double p : r.swap_probabilities) {
                EXPECT_GT(p, 0);
                EXPECT_LE(p, 1);
            }
            EXPECT_EQ(r.swap_probabilities.size(), (size_t)x);
        }
    }
}

TEST(ChainRci, DeepNestingStaysFinite) {
    ChainParams cp;
    cp.mu = 0.0719;
    cp.t_link = 0.5;
    cp.kappa = 0.03;
    cp.x = 12;
    for (Recursion r : {Recursion::kExact, Recursion::kPrinted}) {
        cp.recursion = r;
        ChainResult res = evaluate_chain(cp, 30);
        EXPECT_TRUE(std::isfinite(res.rci));
    }
    cp.x = 31;
    EXPECT_THROW(propagate_chain(cp), DomainError);
}

TEST(ChainRci, DefaultQIsInverseXi) {
    ChainParams cp;
    cp.mu = 0.0719;
    cp.t_link = 0.2;
    cp.kappa = 0.05;
    LinkGammas g = link_gammas(cp.mu, cp.t_link, cp.kappa);
    EXPECT_NEAR(resolve_q(cp, g), 1 / g.xi, 1e-15);
    cp.q = 0.7;
    EXPECT_EQ(resolve_q(cp, g), 0.7);
    ChainParams vac;
    vac.mu = 0;
    EXPECT_EQ(resolve_q(vac, link_gammas(0, 0.2, 0.05)), 0);
}
