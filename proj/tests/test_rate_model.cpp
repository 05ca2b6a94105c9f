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

#include <boost/math/special_functions/expm1.hpp>
#include <boost/math/special_functions/log1p.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "core/chain_state.hpp"
#include "core/errors.hpp"
#include "core/rate_model.hpp"

using namespace cvr;
using namespace cvr::rate;
using boost::multiprecision::cpp_bin_float_50;

namespace {

constexpr double kC = 5e-6;
constexpr double kPSwap = 0.00463;

double eta(double km) { return std::pow(10, -0.02 * km); }

double p_multiplexed_mp(double c, double e, double n, double M) {
    cpp_bin_float_50 p = cpp_bin_float_50(c) * pow(cpp_bin_float_50(e), cpp_bin_float_50(1) / cpp_bin_float_50(n));
    return static_cast<double>(-boost::math::expm1(cpp_bin_float_50(M) * boost::math::log1p(-p)));
}

}  // namespace

TEST(Capacity, Values) {
    EXPECT_NEAR(capacity_direct(0.5), 1, 1e-15);
    EXPECT_NEAR(capacity_direct(0.75), 2, 1e-15);
    EXPECT_EQ(capacity_direct(0), 0);
    EXPECT_NEAR(capacity_direct(1e-12), (1e-12 + 0.5e-24) / std::log(2.0), 1e-27);
    EXPECT_THROW(capacity_direct(1), DomainError);
    EXPECT_THROW(capacity_direct(-0.1), DomainError);
}

TEST(PMultiplexed, Examples) {
    EXPECT_NEAR(p_multiplexed(0.5, 1, 1, 1), 0.5, 1e-15);
    EXPECT_NEAR(p_multiplexed(0.5, 1, 1, 2), 0.75, 1e-15);
    EXPECT_NEAR(p_multiplexed(0.5, 0.25, 2, 1), 0.25, 1e-15);
    // Tiny p with huge M: 1 - exp(-M p) in the leading order.
    EXPECT_NEAR(p_multiplexed(1e-20, 1, 1, 1e10), -std::expm1(-1e-10), 1e-24);
    EXPECT_THROW(p_multiplexed(kC, 0.5, 1, 0.5), DomainError);
    EXPECT_THROW(p_multiplexed(kC, 0.5, 0.5, 10), DomainError);
    EXPECT_THROW(p_multiplexed(kC, 0, 1, 10), DomainError);
    EXPECT_THROW(p_multiplexed(1.5, 1, 1, 10), DomainError);
}

TEST(PMultiplexed, MatchesMultiprecision) {
    for (double M = 1; M <= 1e16; M *= 10) {
        for (double km : {1.0, 100.0, 500.0, 1000.0, 2000.0}) {
            for (double n : {1.0, 3.0, 63.0, 4095.0}) {
                double ref = p_multiplexed_mp(kC, eta(km), n, M);
                double got = p_multiplexed(kC, eta(km), n, M);
                EXPECT_NEAR(got, ref, 1e-12 * ref) << M << " " << km << " " << n;
            }
        }
    }
}

TEST(RateDv, Bounds) {
    double r = rate_dv(1e10, 7, kPSwap, kC, eta(500));
    EXPECT_GT(r, 0);
    EXPECT_LE(r, 1 / 1e10);
    EXPECT_NEAR(rate_dv(1e10, 1, kPSwap, kC, eta(100)), p_multiplexed(kC, eta(100), 1, 1e10) / 1e10, 1e-25);
    EXPECT_THROW(rate_dv(1e10, 3, 0, kC, 0.5), DomainError);
}

TEST(Tau, Values) {
    EXPECT_NEAR(tau_exponent(1e10, kC, kPSwap), std::log(1 / kPSwap) / std::log(5e4), 1e-14);
    EXPECT_THROW(tau_exponent(1e5, kC, kPSwap), DomainError);
}

TEST(SolveZ, ResidualAndBracket) {
    for (double M = 1e9; M <= 1e16; M *= 10) {
        ZSolution z = solve_z_detailed(M, kC, kPSwap);
        EXPECT_GT(z.z, 0);
        EXPECT_LT(z.z, 1);
        EXPECT_LT(std::abs(z.residual), 1e-12);
        EXPECT_GT(envelope_residual(z.z * 0.999, M, kC, kPSwap), 0);
        EXPECT_LT(envelope_residual(std::min(z.z * 1.001, 1 - 1e-12), M, kC, kPSwap), 0);
    }
}

TEST(SolveZ, Subcritical) {
    EXPECT_THROW(solve_z(1e7, kC, kPSwap), SubcriticalError);
    EXPECT_NO_THROW(solve_z(1e8, kC, kPSwap));
}

TEST(EnvelopeExponent, TableValues) {
    const double expected[] = {0.68, 0.54, 0.44, 0.37, 0.32, 0.29, 0.26, 0.23};
    double prev = 1;
    for (int k = 0; k < 8; k++) {
        double s = envelope_exponent_s(std::pow(10, 9 + k), kC, kPSwap);
        EXPECT_NEAR(s, expected[k], 0.01) << "M=1e" << 9 + k;
        EXPECT_LT(s, prev);
        prev = s;
    }
}

TEST(RateGeneral, SingleLink) {
    chain::ChainParams cp;
    cp.mu = 0.0719;
    cp.t_link = eta(100);
    cp.kappa = 0.0557 * std::pow(cp.t_link, 0.6057);
    chain::ChainResult r = chain::evaluate_chain(cp, 30);
    EXPECT_NEAR(rate_general(r, 1e7), r.rci / 1e7, 1e-22);

    chain::ChainResult neg = r;
    neg.rci = -0.1;
    EXPECT_EQ(rate_general(neg, 1e7), 0);
}

TEST(RateGeneral, CostFactor) {
    EXPECT_EQ(swap_cost_factor(0.7, SwapCost::kIdeal), 1);
    EXPECT_NEAR(swap_cost_factor(1, SwapCost::kPhysical), 1.0 / 216, 1e-12);
}

TEST(Envelope, DvTableRow) {
    EnvelopeConfig cfg;
    cfg.M = 1e10;
    EnvelopeCurve e = build_envelope(cfg);
    ASSERT_TRUE(e.advantage);
    EXPECT_NEAR(e.l_cross_km, 851, 0.02 * 851);
    EXPECT_GT(e.r_cross_ebps, 1.4e-11 / 2);
    EXPECT_LT(e.r_cross_ebps, 1.4e-11 * 2);
    EXPECT_TRUE(e.supercritical);
    EXPECT_NEAR(e.s_exact, 0.54, 0.01);
    EXPECT_NEAR(e.s_fit, e.s_exact, 0.02);
    ASSERT_EQ(e.curves.size(), 13u);
    for (size_t i = 0; i < e.distances_km.size(); i++) {
        for (const auto &curve : e.curves) {
            EXPECT_LE(curve[i], e.pointwise_max[i]);
        }
        EXPECT_GE(e.envelope[i], e.pointwise_max[i] * (1 - 1e-9));
    }
}

TEST(Envelope, DvNoAdvantage) {
    EnvelopeConfig cfg;
    cfg.M = 1e8;
    EnvelopeCurve e = build_envelope(cfg);
    EXPECT_TRUE(e.supercritical);
    EXPECT_FALSE(e.advantage);
}

TEST(Envelope, ConfigErrors) {
    EnvelopeConfig cfg;
    cfg.distance_min_km = 0;
    EXPECT_THROW(build_envelope(cfg), DomainError);
    cfg = {};
    cfg.x_max = 21;
    EXPECT_THROW(build_envelope(cfg), DomainError);
    cfg = {};
    cfg.rep_rate = 0;
    EXPECT_THROW(build_envelope(cfg), DomainError);
}

TEST(Envelope, RatesAtMatchesCurves) {
    EnvelopeConfig cfg;
    cfg.distance_min_km = 100;
    cfg.distance_max_km = 300;
    cfg.distance_step_km = 100;
    EnvelopeCurve e = build_envelope(cfg);
    std::vector<double> r = rates_at(cfg, 200);
    ASSERT_EQ(r.size(), e.curves.size());
    for (size_t k = 0; k < r.size(); k++) {
        EXPECT_NEAR(r[k], e.curves[k][1], 1e-12 * e.curves[k][1]);
    }
}
