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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <boost/math/special_functions/expm1.hpp>
#include <boost/math/special_functions/log1p.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cvrepeater/cvrepeater.h"

namespace {

using boost::multiprecision::cpp_bin_float_50;

constexpr double kC = 5e-6;
constexpr double kPSwap = 0.00463;

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        passed = passed && ok;
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what + (ok ? "" : " [out of tolerance]");
    }
};

std::string fmt(const char *f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char *f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

bool ok(cvr_status st, Outcome &o, const char *what) {
    if (st == CVR_OK) {
        return true;
    }
    o.require(false, std::string(what) + " failed: " + cvr_status_name(st) + ": " + cvr_last_error());
    return false;
}

double eta_km(double km) {
    double t = 0;
    cvr_transmissivity(km, 0.2, &t);
    return t;
}

Outcome criterion1() {
    Outcome o;
    double theta, p;
    if (!ok(cvr_swap_optimize(1, &theta, &p), o, "swap optimize")) {
        return o;
    }
    double s2 = std::sin(theta) * std::sin(theta);
    o.require(std::abs(p - 0.00463) <= 1e-5, fmt("p* = %.8f (target 0.00463 +- 1e-5)", p));
    o.require(std::abs(s2 - 1.0 / 3) <= 1e-6, fmt("sin^2 theta* = %.9f (target 1/3 +- 1e-6)", s2));
    return o;
}

Outcome criterion2() {
    Outcome o;
    const double expected[] = {0.68, 0.54, 0.44, 0.37, 0.32, 0.29, 0.26, 0.23};
    std::string got;
    bool all = true;
    for (int k = 0; k < 8; k++) {
        double s = 0;
        if (!ok(cvr_envelope_exponent(std::pow(10, 9 + k), kC, kPSwap, &s), o, "envelope exponent")) {
            return o;
        }
        all = all && std::abs(s - expected[k]) <= 0.01;
        got += fmt(k ? ",%.3f" : "%.3f", s);
    }
    o.require(all, "s(M=1e9..1e16) = {" + got + "}");

    cvr_envelope_config cfg;
    cvr_envelope_config_init(&cfg, CVR_MODE_DV);
    cfg.M = 1e8;
    cvr_envelope *env = nullptr;
    if (!ok(cvr_envelope_build(&cfg, &env), o, "envelope M=1e8")) {
        return o;
    }
    cvr_envelope_summary s;
    cvr_envelope_summary_get(env, &s);
    cvr_envelope_free(env);
    o.require(!s.advantage, std::string("M=1e8 ") + (s.advantage ? "reports an advantage" : "reports no advantage"));
    double z, res;
    cvr_status st = cvr_solve_z(1e7, kC, kPSwap, &z, &res);
    o.require(st == CVR_ERR_SUBCRITICAL, std::string("M=1e7 envelope root: ") + cvr_status_name(st));
    return o;
}

Outcome envelope_criterion(const cvr_envelope_config &cfg, double l_target, double l_tol, bool dv) {
    Outcome o;
    cvr_envelope *env = nullptr;
    if (!ok(cvr_envelope_build(&cfg, &env), o, "envelope build")) {
        return o;
    }
    cvr_envelope_summary s;
    cvr_envelope_summary_get(env, &s);
    cvr_envelope_free(env);
    if (!s.advantage) {
        o.require(false, "no crossover found");
        return o;
    }
    o.require(std::abs(s.l_cross_km - l_target) <= l_tol * l_target,
              fmt("L_cross = %.1f km (target %.0f", s.l_cross_km, l_target) + fmt(" +- %.0f%%)", 100 * l_tol));
    if (dv) {
        o.require(s.r_cross_ebps >= 1.4e-11 / 2 && s.r_cross_ebps <= 1.4e-11 * 2,
                  fmt("R_cross = %.3g ebps (target 1.4e-11 within 2x)", s.r_cross_ebps));
    } else {
        o.require(std::abs(s.s_fit - 0.54) <= 0.02,
                  fmt("s_fit = %.3f (target 0.54 +- 0.02), window %.0f", s.s_fit, s.fit_lo_km) +
                      fmt("-%.0f km, R_cross = %.3g ebps", s.fit_hi_km, s.r_cross_ebps));
    }
    return o;
}

Outcome criterion3() {
    cvr_envelope_config cfg;
    cvr_envelope_config_init(&cfg, CVR_MODE_DV);
    cfg.M = 1e10;
    return envelope_criterion(cfg, 851, 0.02, true);
}

Outcome criterion4() {
    cvr_envelope_config cfg;
    cvr_envelope_config_init(&cfg, CVR_MODE_GENERAL);
    cfg.M = 1e7;
    return envelope_criterion(cfg, 525, 0.03, false);
}

bool fit_exponent(const std::vector<double> &t, const std::vector<double> &v, double *ex, Outcome &o) {
    double pre, r2;
    return ok(cvr_fit_power_law(t.data(), v.data(), t.size(), ex, &pre, &r2), o, "power-law fit");
}

Outcome criterion5() {
    Outcome o;
    // (a) ordering and capacity bound.
    bool ordered = true, bounded = true;
    std::string vals;
    for (double km : {10.0, 50.0, 100.0}) {
        double t = eta_km(km);
        double v[5];
        for (int n = 1; n <= 4; n++) {
            cvr_opt_result r;
            if (!ok(cvr_optimize_link(t, n, CVR_OBJECTIVE_TRUE_RCI, nullptr, &r), o, "optimize")) {
                return o;
            }
            v[n] = r.value;
            bounded = bounded && r.value <= -std::log2(1 - t) + 1e-12;
        }
        for (int n = 2; n <= 4; n++) {
            ordered = ordered && v[1] > v[n];
        }
        vals += fmt(vals.empty() ? "%.0f km " : ", %.0f km ", km) + fmt("%.4g/%.4g", v[1], v[2]) +
                fmt("/%.4g/%.4g", v[3], v[4]);
    }
    o.require(ordered && bounded, "(a) true RCI N=1..4 " + vals);

    // (b), (c): optimal RCI with the kappa floor lowered to 1e-12.
    cvr_opt_domain deep;
    cvr_opt_domain_init(&deep);
    deep.kappa_lo = 1e-12;
    std::vector<double> ts;
    for (int k = 0; k <= 8; k++) {
        ts.push_back(std::pow(10, -4 + 0.25 * k));
    }
    std::string exps;
    bool exps_ok = true;
    double intercept = 0;
    for (int n = 1; n <= 4; n++) {
        std::vector<double> ps, rs;
        for (double t : ts) {
            cvr_opt_result r;
            if (!ok(cvr_optimize_link(t, n, CVR_OBJECTIVE_RCI, &deep, &r), o, "optimize")) {
                return o;
            }
            ps.push_back(r.probability);
            rs.push_back(r.value);
        }
        if (n == 1) {
            // Linear extrapolation of I_R(t) to t -> 0.
            double mx = 0, my = 0;
            for (size_t k = 0; k < ts.size(); k++) {
                mx += ts[k];
                my += rs[k];
            }
            mx /= (double)ts.size();
            my /= (double)ts.size();
            double sxy = 0, sxx = 0;
            for (size_t k = 0; k < ts.size(); k++) {
                sxy += (ts[k] - mx) * (rs[k] - my);
                sxx += (ts[k] - mx) * (ts[k] - mx);
            }
            intercept = my - sxy / sxx * mx;
        }
        double ex = 0;
        if (!fit_exponent(ts, ps, &ex, o)) {
            return o;
        }
        exps_ok = exps_ok && std::abs(ex - n) <= 0.05;
        exps += fmt(n == 1 ? "%.3f" : ",%.3f", ex);
    }
    o.require(intercept > 0.99, fmt("(b) extrapolated I_R(N=1) = %.5f (target > 0.99)", intercept));
    o.require(exps_ok, "(c) P exponents N=1..4 = {" + exps + "} (target N +- 0.05)");
    return o;
}

Outcome criterion6() {
    Outcome o;
    cvr_verify_config cfg;
    cvr_verify_config_init(&cfg);
    cvr_verify_report *rep = nullptr;
    if (!ok(cvr_verify_run(&cfg, &rep), o, "verify")) {
        return o;
    }
    for (size_t k = 0; k < cvr_verify_check_count(rep); k++) {
        cvr_check c;
        cvr_verify_check(rep, k, &c);
        if (!c.passed) {
            o.require(false, c.name + fmt(" residual %.3g", c.residual));
        }
    }
    if (cvr_verify_all_passed(rep)) {
        cvr_check w;
        cvr_verify_check(rep, cvr_verify_worst(rep), &w);
        o.require(true, std::to_string(cvr_verify_check_count(rep)) + " checks, worst " + w.name +
                            fmt(" %.3g <= %.3g", w.residual, w.tolerance));
    }
    cvr_verify_free(rep);
    return o;
}

double p_multiplexed_mp(double c, double e, double n, double M) {
    cpp_bin_float_50 p = cpp_bin_float_50(c) * pow(cpp_bin_float_50(e), 1 / cpp_bin_float_50(n));
    return static_cast<double>(-boost::math::expm1(cpp_bin_float_50(M) * boost::math::log1p(-p)));
}

Outcome criterion7() {
    Outcome o;
    double worst = 0;
    int compared = 0;
    auto track = [&](double a, double b) {
        worst = std::max(worst, std::abs(a - b));
        compared++;
    };

    // Single links across the scissors count and a spread of losses.
    for (double mu : {0.0719, 0.5}) {
        for (double km : {1.0, 20.0, 100.0, 300.0}) {
            for (int n = 1; n <= 4; n++) {
                cvr_link_params p{mu, eta_km(km), 0.0557 * std::pow(eta_km(km), 0.6057), n};
                cvr_density *a = nullptr, *b = nullptr;
                if (!ok(cvr_link_heralded_state(&p, 30, &a), o, "link state 30") ||
                    !ok(cvr_link_heralded_state(&p, 40, &b), o, "link state 40")) {
                    cvr_density_free(a);
                    return o;
                }
                double ha, hb, pa, pb;
                cvr_density_entropy(a, &ha);
                cvr_density_entropy(b, &hb);
                track(ha, hb);
                for (size_t mode = 0; mode < 2; mode++) {
                    cvr_density *m30, *m40;
                    cvr_density_marginal(a, mode, &m30);
                    cvr_density_marginal(b, mode, &m40);
                    cvr_density_entropy(m30, &ha);
                    cvr_density_entropy(m40, &hb);
                    track(ha, hb);
                    cvr_density_free(m30);
                    cvr_density_free(m40);
                }
                cvr_density_free(a);
                cvr_density_free(b);
                if (n == 1) {
                    cvr_density *c30 = nullptr, *c40 = nullptr;
                    bool both = ok(cvr_link_circuit_state(&p, 30, &c30, &pa), o, "circuit 30") &&
                                ok(cvr_link_circuit_state(&p, 40, &c40, &pb), o, "circuit 40");
                    cvr_density_free(c30);
                    cvr_density_free(c40);
                    if (!both) {
                        return o;
                    }
                    track(pa, pb);
                }
            }
        }
    }

    // Repeater chains along the operating-point kappa law.
    for (double km : {100.0, 500.0, 1000.0, 2000.0}) {
        for (int x = 0; x <= 5; x++) {
            cvr_chain_params p;
            cvr_chain_params_init(&p);
            p.mu = 0.0719;
            p.x = x;
            p.t_link = std::pow(eta_km(km), 1 / std::ldexp(1.0, x));
            p.kappa = 0.0557 * std::pow(p.t_link, 0.6057);
            cvr_chain_report r30, r40;
            p.cutoff = 30;
            if (!ok(cvr_chain_evaluate(&p, &r30, nullptr, 0), o, "chain 30")) {
                return o;
            }
            p.cutoff = 40;
            if (!ok(cvr_chain_evaluate(&p, &r40, nullptr, 0), o, "chain 40")) {
                return o;
            }
            track(r30.rci, r40.rci);
            track(r30.entropy_joint, r40.entropy_joint);
            track(r30.entropy_marginal, r40.entropy_marginal);
        }
    }
    o.require(worst <= 1e-8, fmt("max |scalar(30) - scalar(40)| = %.3g over %.0f scalars (target 1e-8)", worst, compared));

    double rel = 0;
    for (double M = 1; M <= 1e16; M *= 10) {
        for (double km : {1.0, 100.0, 500.0, 1000.0, 2000.0}) {
            for (double n : {1.0, 2.0, 64.0, 4096.0}) {
                double got = 0;
                if (!ok(cvr_p_multiplexed(kC, eta_km(km), n, M, &got), o, "p_multiplexed")) {
                    return o;
                }
                double ref = p_multiplexed_mp(kC, eta_km(km), n, M);
                rel = std::max(rel, std::abs(got - ref) / ref);
            }
        }
    }
    o.require(rel <= 1e-12, fmt("p_multiplexed max relative error vs 50 digits = %.3g (target 1e-12)", rel));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                            criterion5, criterion6, criterion7};
    const double budget_s[] = {1, 1, 10, -1, -1, 60, -1};
    int failed = 0;
    for (size_t k = 0; k < criteria.size(); k++) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o = criteria[k]();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (budget_s[k] > 0) {
            o.require(secs < budget_s[k], fmt("runtime %.2f s (budget %.0f s)", secs, budget_s[k]));
        } else {
            o.detail += fmt("; runtime %.2f s", secs);
        }
        std::printf("criterion %zu: %s  %s\n", k + 1, o.passed ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failed += o.passed ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", (int)criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
