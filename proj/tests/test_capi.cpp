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
#include <cstring>
#include <string>
#include <vector>

#include "cvrepeater/cvrepeater.h"

namespace {

cvr_link_params link(double mu, double t, double kappa, int n = 1) {
    return {mu, t, kappa, n};
}

}  // namespace

TEST(CApi, VersionAndNames) {
    EXPECT_STREQ(cvr_version(), "1.0.0");
    EXPECT_STREQ(cvr_status_name(CVR_OK), "ok");
    EXPECT_STRNE(cvr_status_name(CVR_ERR_SUBCRITICAL), cvr_status_name(CVR_ERR_DOMAIN));
    EXPECT_NE(cvr_status_name((cvr_status)99), nullptr);
}

TEST(CApi, LinkExample) {
    cvr_link_params p = link(0, 0.5, 0.5);
    cvr_link_report r;
    ASSERT_EQ(cvr_link_evaluate(&p, &r), CVR_OK);
    EXPECT_NEAR(r.probability, 0.5, 1e-15);
    EXPECT_NEAR(r.rci, 0, 1e-12);
    EXPECT_NEAR(r.true_rci, 0, 1e-12);
    EXPECT_STREQ(cvr_last_error(), "");
}

TEST(CApi, ErrorsCarryMessages) {
    cvr_link_params p = link(0.1, 1.5, 0.5);
    cvr_link_report r;
    EXPECT_EQ(cvr_link_evaluate(&p, &r), CVR_ERR_DOMAIN);
    EXPECT_GT(std::strlen(cvr_last_error()), 0u);
    p = link(0.1, 0, 0.5);
    EXPECT_EQ(cvr_link_evaluate(&p, &r), CVR_ERR_DOMAIN);
    cvr_chain_params cp;
    cvr_chain_params_init(&cp);
    cp.mu = 0.1;
    cp.t_link = 0;
    cp.kappa = 0.5;
    cvr_chain_report cr;
    EXPECT_EQ(cvr_chain_evaluate(&cp, &cr, nullptr, 0), CVR_ERR_DEGENERATE);
    double z, res;
    EXPECT_EQ(cvr_solve_z(1e7, 5e-6, 0.00463, &z, &res), CVR_ERR_SUBCRITICAL);
    // A successful call clears the previous error.
    EXPECT_EQ(cvr_solve_z(1e10, 5e-6, 0.00463, &z, &res), CVR_OK);
    EXPECT_STREQ(cvr_last_error(), "");
}

TEST(CApi, NullPointers) {
    cvr_link_report r;
    EXPECT_EQ(cvr_link_evaluate(nullptr, &r), CVR_ERR_NULL_POINTER);
    cvr_link_params p = link(0.1, 0.5, 0.5);
    EXPECT_EQ(cvr_link_evaluate(&p, nullptr), CVR_ERR_NULL_POINTER);
    EXPECT_EQ(cvr_transmissivity(10, 0.2, nullptr), CVR_ERR_NULL_POINTER);
    EXPECT_EQ(cvr_envelope_build(nullptr, nullptr), CVR_ERR_NULL_POINTER);
    EXPECT_EQ(cvr_density_entropy(nullptr, nullptr), CVR_ERR_NULL_POINTER);
    cvr_density_free(nullptr);
    cvr_envelope_free(nullptr);
    cvr_verify_free(nullptr);
}

TEST(CApi, DensityHandles) {
    cvr_link_params p = link(0.2, 0.3, 0.15);
    cvr_density *a = nullptr, *b = nullptr, *m = nullptr;
    ASSERT_EQ(cvr_link_heralded_state(&p, 20, &a), CVR_OK);
    double prob = 0;
    ASSERT_EQ(cvr_link_circuit_state(&p, 20, &b, &prob), CVR_OK);
    EXPECT_EQ(cvr_density_num_modes(a), 2u);
    // Mode B leaves the scissors truncated to N photons.
    EXPECT_EQ(cvr_density_dim(a), 42u);
    int cut[2];
    ASSERT_EQ(cvr_density_cutoffs(a, cut, 2), CVR_OK);
    EXPECT_EQ(cut[0], 20);
    EXPECT_EQ(cut[1], 1);
    EXPECT_EQ(cvr_density_cutoffs(a, cut, 1), CVR_ERR_ARGUMENT);

    double d = 1;
    ASSERT_EQ(cvr_density_trace_distance(a, b, &d), CVR_OK);
    EXPECT_LT(d, 1e-8);

    cvr_link_report rep;
    ASSERT_EQ(cvr_link_evaluate(&p, &rep), CVR_OK);
    EXPECT_NEAR(prob, rep.probability, 1e-10);
    double h;
    ASSERT_EQ(cvr_density_entropy(a, &h), CVR_OK);
    EXPECT_NEAR(h, rep.entropy_joint, 1e-9);
    ASSERT_EQ(cvr_density_marginal(a, 0, &m), CVR_OK);
    ASSERT_EQ(cvr_density_entropy(m, &h), CVR_OK);
    EXPECT_NEAR(h, rep.entropy_marginal, 1e-9);
    EXPECT_EQ(cvr_density_marginal(a, 2, &m), CVR_ERR_ARGUMENT);

    size_t dim = cvr_density_dim(a);
    std::vector<double> re(dim * dim), im(dim * dim);
    ASSERT_EQ(cvr_density_copy(a, re.data(), im.data(), re.size()), CVR_OK);
    double tr = 0;
    for (size_t k = 0; k < dim; k++) {
        tr += re[k * dim + k];
        EXPECT_EQ(im[k * dim + k], 0);
    }
    EXPECT_NEAR(tr, 1, 1e-12);
    EXPECT_EQ(cvr_density_copy(a, re.data(), im.data(), 10), CVR_ERR_ARGUMENT);

    cvr_density_free(a);
    cvr_density_free(b);
    cvr_density_free(m);
}

TEST(CApi, SwapAndZeta) {
    double theta, p;
    ASSERT_EQ(cvr_swap_optimize(1, &theta, &p), CVR_OK);
    EXPECT_NEAR(std::sin(theta) * std::sin(theta), 1.0 / 3, 1e-12);
    EXPECT_NEAR(p, 1.0 / 216, 1e-12);
    double q;
    ASSERT_EQ(cvr_swap_p_phys(1, theta, &q), CVR_OK);
    EXPECT_NEAR(q, p, 1e-15);

    std::vector<double> a(4), b(4);
    ASSERT_EQ(cvr_swap_f23(0.6, 0.6, 1, CVR_F23_CLOSED_FORM, a.data(), a.size()), CVR_OK);
    ASSERT_EQ(cvr_swap_f23(0.6, 0.6, 1, CVR_F23_CIRCUIT, b.data(), b.size()), CVR_OK);
    for (int k = 0; k < 4; k++) {
        EXPECT_NEAR(a[k], b[k], 1e-9);
    }
    EXPECT_EQ(cvr_swap_f23(0.6, 0.6, 1, CVR_F23_CLOSED_FORM, a.data(), 3), CVR_ERR_ARGUMENT);

    cvr_link_params lp = link(0.1, 0.4, 0.2, 2);
    double z;
    ASSERT_EQ(cvr_link_zeta(&lp, 0, 0, &z), CVR_OK);
    EXPECT_TRUE(std::isfinite(z));
}

TEST(CApi, Chain) {
    cvr_chain_params p;
    cvr_chain_params_init(&p);
    EXPECT_LT(p.q, 0);
    EXPECT_EQ(p.x, 0);
    p.mu = 0.0719;
    p.t_link = 0.3;
    p.kappa = 0.02;
    p.x = 2;
    cvr_chain_report r;
    double probs[4] = {0, 0, 0, 0};
    ASSERT_EQ(cvr_chain_evaluate(&p, &r, probs, 4), CVR_OK);
    EXPECT_EQ(r.levels, 2u);
    EXPECT_GT(probs[0], 0);
    EXPECT_GT(probs[1], 0);
    EXPECT_EQ(probs[2], 0);
    EXPECT_NEAR(r.p_swap_product, probs[0] * probs[0] * probs[1], 1e-15);
    EXPECT_NEAR(r.q, 1 / r.xi, 1e-12);
    double first[2] = {0, -1};
    ASSERT_EQ(cvr_chain_evaluate(&p, &r, first, 1), CVR_OK);
    EXPECT_EQ(first[0], probs[0]);
    EXPECT_EQ(first[1], -1);
    ASSERT_EQ(cvr_chain_evaluate(&p, &r, nullptr, 0), CVR_OK);

    cvr_density *rho;
    ASSERT_EQ(cvr_chain_density(&p, &rho), CVR_OK);
    double h;
    ASSERT_EQ(cvr_density_entropy(rho, &h), CVR_OK);
    EXPECT_NEAR(h, r.entropy_joint, 1e-12);
    cvr_density_free(rho);

    double rate;
    ASSERT_EQ(cvr_chain_rate(&p, 1e7, CVR_SWAP_COST_IDEAL, &rate), CVR_OK);
    EXPECT_GT(rate, 0);
    double rate_phys;
    ASSERT_EQ(cvr_chain_rate(&p, 1e7, CVR_SWAP_COST_PHYSICAL, &rate_phys), CVR_OK);
    EXPECT_LT(rate_phys, rate);
    EXPECT_EQ(cvr_chain_rate(&p, 0.5, CVR_SWAP_COST_IDEAL, &rate), CVR_ERR_DOMAIN);
}

TEST(CApi, RateScalars) {
    double v;
    ASSERT_EQ(cvr_capacity_direct(0.5, &v), CVR_OK);
    EXPECT_NEAR(v, 1, 1e-15);
    EXPECT_EQ(cvr_capacity_direct(1, &v), CVR_ERR_DOMAIN);
    ASSERT_EQ(cvr_p_multiplexed(0.5, 1, 1, 2, &v), CVR_OK);
    EXPECT_NEAR(v, 0.75, 1e-15);
    ASSERT_EQ(cvr_rate_dv(1e10, 1, 0.00463, 5e-6, 0.1, &v), CVR_OK);
    EXPECT_GT(v, 0);
    ASSERT_EQ(cvr_tau_exponent(1e10, 5e-6, 0.00463, &v), CVR_OK);
    EXPECT_GT(v, 0);
    ASSERT_EQ(cvr_envelope_exponent(1e10, 5e-6, 0.00463, &v), CVR_OK);
    EXPECT_NEAR(v, 0.54, 0.01);
    ASSERT_EQ(cvr_transmissivity(50, 0.2, &v), CVR_OK);
    EXPECT_NEAR(v, 0.1, 1e-15);
}

TEST(CApi, Envelope) {
    cvr_envelope_config cfg;
    cvr_envelope_config_init(&cfg, CVR_MODE_DV);
    EXPECT_EQ(cfg.M, 1e10);
    EXPECT_EQ(cfg.x_max, 12);
    cfg.distance_step_km = 10;
    cvr_envelope *env = nullptr;
    ASSERT_EQ(cvr_envelope_build(&cfg, &env), CVR_OK);
    cvr_envelope_summary s;
    ASSERT_EQ(cvr_envelope_summary_get(env, &s), CVR_OK);
    EXPECT_EQ(s.num_curves, 13u);
    EXPECT_EQ(s.num_points, 200u);
    EXPECT_TRUE(s.advantage);
    EXPECT_NEAR(s.l_cross_km, 851, 17);

    std::vector<double> d(s.num_points), e(s.num_points), c(s.num_points);
    ASSERT_EQ(cvr_envelope_distances(env, d.data(), d.size()), CVR_OK);
    EXPECT_EQ(d.front(), 1);
    ASSERT_EQ(cvr_envelope_series_get(env, CVR_SERIES_ENVELOPE, e.data(), e.size()), CVR_OK);
    int n_rep = -1;
    ASSERT_EQ(cvr_envelope_curve(env, 3, &n_rep, c.data(), c.size()), CVR_OK);
    EXPECT_EQ(n_rep, 7);
    for (size_t k = 0; k < d.size(); k++) {
        EXPECT_GE(e[k], c[k] * (1 - 1e-9));
    }
    EXPECT_EQ(cvr_envelope_curve(env, 13, &n_rep, c.data(), c.size()), CVR_ERR_ARGUMENT);
    EXPECT_EQ(cvr_envelope_distances(env, d.data(), 3), CVR_ERR_ARGUMENT);
    cvr_envelope_free(env);

    cfg.distance_min_km = -1;
    env = nullptr;
    EXPECT_EQ(cvr_envelope_build(&cfg, &env), CVR_ERR_DOMAIN);
    EXPECT_EQ(env, nullptr);
}

TEST(CApi, OptimizeAndFit) {
    cvr_opt_domain d;
    cvr_opt_domain_init(&d);
    EXPECT_EQ(d.grid, 40);
    cvr_opt_result r;
    ASSERT_EQ(cvr_optimize_link(0.1, 1, CVR_OBJECTIVE_TRUE_RCI, nullptr, &r), CVR_OK);
    EXPECT_GT(r.value, 0);
    EXPECT_LE(r.value, -std::log2(0.9));
    EXPECT_EQ(cvr_optimize_link(0.1, 9, CVR_OBJECTIVE_RCI, &d, &r), CVR_ERR_DOMAIN);

    double t[6], v[6];
    for (int k = 0; k < 6; k++) {
        t[k] = k + 1;
        v[k] = 2 * t[k] * t[k] * t[k];
    }
    double ex, pre, r2;
    ASSERT_EQ(cvr_fit_power_law(t, v, 6, &ex, &pre, &r2), CVR_OK);
    EXPECT_NEAR(ex, 3, 1e-12);
    EXPECT_NEAR(pre, 2, 1e-10);
    EXPECT_EQ(cvr_fit_power_law(t, v, 3, &ex, &pre, &r2), CVR_ERR_ARGUMENT);
}

TEST(CApi, VerifyReport) {
    cvr_verify_config cfg;
    cvr_verify_config_init(&cfg);
    EXPECT_EQ(cfg.cutoff, 30);
    cfg.points = 3;
    cvr_verify_report *rep = nullptr;
    ASSERT_EQ(cvr_verify_run(&cfg, &rep), CVR_OK);
    EXPECT_TRUE(cvr_verify_all_passed(rep));
    ASSERT_GT(cvr_verify_check_count(rep), 0u);
    cvr_check c;
    ASSERT_EQ(cvr_verify_check(rep, 0, &c), CVR_OK);
    EXPECT_GT(std::strlen(c.name), 0u);
    EXPECT_LE(c.residual, c.tolerance);
    EXPECT_LT(cvr_verify_worst(rep), cvr_verify_check_count(rep));
    EXPECT_EQ(cvr_verify_check(rep, 1000, &c), CVR_ERR_ARGUMENT);
    cvr_verify_free(rep);

    cfg.inject_kappa_error = 1e-3;
    ASSERT_EQ(cvr_verify_run(&cfg, &rep), CVR_OK);
    EXPECT_FALSE(cvr_verify_all_passed(rep));
    cvr_verify_free(rep);
}

TEST(CApi, Warnings) {
    cvr_link_params p = link(0.4, 0.05, 0.2);
    cvr_density *rho = nullptr;
    // A cutoff that leaves a visible tail either warns or fails with a convergence error.
    cvr_status st = cvr_link_heralded_state(&p, 4, &rho);
    if (st == CVR_OK) {
        EXPECT_GT(cvr_warning_count(), 0u);
        EXPECT_NE(cvr_warning(0), nullptr);
        cvr_density_free(rho);
    } else {
        EXPECT_EQ(st, CVR_ERR_CONVERGENCE);
    }
    EXPECT_EQ(cvr_warning(1000), nullptr);
}

TEST(CApi, Threads) {
    cvr_set_num_threads(2);
    EXPECT_EQ(cvr_num_threads(), 2);
    cvr_set_num_threads(0);
    EXPECT_GE(cvr_num_threads(), 1);
}
