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

#include "cvrepeater/cvrepeater.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "core/chain_state.hpp"
#include "core/errors.hpp"
#include "core/fock.hpp"
#include "core/optimizer.hpp"
#include "core/oracles.hpp"
#include "core/parallel.hpp"
#include "core/rate_model.hpp"
#include "core/scissors_link.hpp"
#include "core/swap_gadget.hpp"
#include "core/verify.hpp"

struct cvr_density {
    cvr::fock::DensityOperator op;
};

struct cvr_envelope {
    cvr::rate::EnvelopeCurve curve;
};

struct cvr_verify_report {
    cvr::verify::VerifyReport report;
};

namespace {

thread_local std::string g_last_error;
thread_local std::vector<std::string> g_warnings;

cvr_status fail(cvr_status status, const char *msg) {
    g_last_error = msg;
    return status;
}

cvr_status map_kind(cvr::ErrorKind kind) {
    switch (kind) {
        case cvr::ErrorKind::kArgument:
            return CVR_ERR_ARGUMENT;
        case cvr::ErrorKind::kDomain:
            return CVR_ERR_DOMAIN;
        case cvr::ErrorKind::kDegenerate:
            return CVR_ERR_DEGENERATE;
        case cvr::ErrorKind::kConvergence:
            return CVR_ERR_CONVERGENCE;
        case cvr::ErrorKind::kSubcritical:
            return CVR_ERR_SUBCRITICAL;
        case cvr::ErrorKind::kNumerical:
            return CVR_ERR_NUMERICAL;
    }
    return CVR_ERR_INTERNAL;
}

template <typename F>
cvr_status guarded(F &&body) {
    g_last_error.clear();
    cvr::take_warnings();
    cvr_status status = CVR_OK;
    try {
        body();
    } catch (const cvr::Error &e) {
        status = fail(map_kind(e.kind()), e.what());
    } catch (const std::bad_alloc &) {
        status = fail(CVR_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        status = fail(CVR_ERR_INTERNAL, e.what());
    } catch (...) {
        status = fail(CVR_ERR_INTERNAL, "unknown exception");
    }
    g_warnings = cvr::take_warnings();
    return status;
}

#define CVR_REQUIRE(ptr)                                                   \
    do {                                                                   \
        if ((ptr) == nullptr) {                                            \
            g_warnings.clear();                                            \
            return fail(CVR_ERR_NULL_POINTER, "null pointer: " #ptr);      \
        }                                                                  \
    } while (0)

cvr::link::LinkParams to_core(const cvr_link_params &p) {
    cvr::link::LinkParams out;
    out.mu = p.mu;
    out.t = p.t;
    out.kappa = p.kappa;
    out.n_scissors = p.n_scissors;
    return out;
}

cvr::chain::Recursion to_core(cvr_recursion r) {
    if (r == CVR_RECURSION_EXACT) return cvr::chain::Recursion::kExact;
    if (r == CVR_RECURSION_PRINTED) return cvr::chain::Recursion::kPrinted;
    throw cvr::ArgumentError("unknown recursion");
}

cvr::rate::SwapCost to_core(cvr_swap_cost c) {
    if (c == CVR_SWAP_COST_PHYSICAL) return cvr::rate::SwapCost::kPhysical;
    if (c == CVR_SWAP_COST_IDEAL) return cvr::rate::SwapCost::kIdeal;
    throw cvr::ArgumentError("unknown swap cost");
}

cvr::chain::ChainParams to_core(const cvr_chain_params &p) {
    cvr::chain::ChainParams out;
    out.mu = p.mu;
    out.t_link = p.t_link;
    out.kappa = p.kappa;
    out.q = p.q;
    out.x = p.x;
    out.recursion = to_core(p.recursion);
    return out;
}

void check_len(size_t have, size_t need) {
    if (have < need) {
        throw cvr::ArgumentError("output buffer holds " + std::to_string(have) + " values, need " +
                                 std::to_string(need));
    }
}

cvr_density *wrap(cvr::fock::DensityOperator op) { return new cvr_density{std::move(op)}; }

}  // namespace

extern "C" {

const char *cvr_version(void) { return "1.0.0"; }

const char *cvr_status_name(cvr_status status) {
    switch (status) {
        case CVR_OK:
            return "ok";
        case CVR_ERR_ARGUMENT:
            return "invalid argument";
        case CVR_ERR_DOMAIN:
            return "domain error";
        case CVR_ERR_DEGENERATE:
            return "degenerate state";
        case CVR_ERR_CONVERGENCE:
            return "convergence failure";
        case CVR_ERR_SUBCRITICAL:
            return "subcritical";
        case CVR_ERR_NUMERICAL:
            return "numerical failure";
        case CVR_ERR_NULL_POINTER:
            return "null pointer";
        case CVR_ERR_INTERNAL:
            return "internal error";
    }
    return "unknown status";
}

const char *cvr_last_error(void) { return g_last_error.c_str(); }

size_t cvr_warning_count(void) { return g_warnings.size(); }

const char *cvr_warning(size_t index) { return index < g_warnings.size() ? g_warnings[index].c_str() : nullptr; }

void cvr_set_num_threads(int n) { cvr::set_num_threads(n); }

int cvr_num_threads(void) { return cvr::num_threads(); }

cvr_status cvr_transmissivity(double distance_km, double alpha_db_per_km, double *t) {
    CVR_REQUIRE(t);
    return guarded([&] { *t = cvr::link::transmissivity(distance_km, alpha_db_per_km); });
}

// Density operators.

size_t cvr_density_dim(const cvr_density *rho) { return rho ? rho->op.dim() : 0; }

size_t cvr_density_num_modes(const cvr_density *rho) { return rho ? rho->op.num_modes() : 0; }

cvr_status cvr_density_cutoffs(const cvr_density *rho, int *cutoffs, size_t len) {
    CVR_REQUIRE(rho);
    CVR_REQUIRE(cutoffs);
    return guarded([&] {
        const auto &c = rho->op.cutoffs();
        check_len(len, c.size());
        for (size_t k = 0; k < c.size(); k++) cutoffs[k] = c[k];
    });
}

cvr_status cvr_density_entropy(const cvr_density *rho, double *bits) {
    CVR_REQUIRE(rho);
    CVR_REQUIRE(bits);
    return guarded([&] { *bits = cvr::fock::von_neumann_entropy(rho->op); });
}

cvr_status cvr_density_marginal(const cvr_density *rho, size_t mode, cvr_density **out) {
    CVR_REQUIRE(rho);
    CVR_REQUIRE(out);
    return guarded([&] {
        if (mode >= rho->op.num_modes()) throw cvr::ArgumentError("mode out of range");
        *out = wrap(cvr::fock::partial_trace(rho->op, {mode}));
    });
}

cvr_status cvr_density_copy(const cvr_density *rho, double *re, double *im, size_t len) {
    CVR_REQUIRE(rho);
    CVR_REQUIRE(re);
    return guarded([&] {
        const auto &m = rho->op.matrix();
        size_t d = (size_t)m.rows();
        check_len(len, d * d);
        for (size_t r = 0; r < d; r++) {
            for (size_t c = 0; c < d; c++) {
                re[r * d + c] = m((Eigen::Index)r, (Eigen::Index)c).real();
                if (im) im[r * d + c] = m((Eigen::Index)r, (Eigen::Index)c).imag();
            }
        }
    });
}

cvr_status cvr_density_trace_distance(const cvr_density *a, const cvr_density *b, double *d) {
    CVR_REQUIRE(a);
    CVR_REQUIRE(b);
    CVR_REQUIRE(d);
    return guarded([&] { *d = cvr::fock::trace_distance(a->op, b->op); });
}

void cvr_density_free(cvr_density *rho) { delete rho; }

// Single link.

cvr_status cvr_link_evaluate(const cvr_link_params *params, cvr_link_report *out) {
    CVR_REQUIRE(params);
    CVR_REQUIRE(out);
    return guarded([&] {
        auto r = cvr::link::evaluate(to_core(*params));
        *out = {r.probability, r.entropy_joint, r.entropy_marginal, r.rci, r.true_rci};
    });
}

cvr_status cvr_link_zeta(const cvr_link_params *params, int m, int u, double *out) {
    CVR_REQUIRE(params);
    CVR_REQUIRE(out);
    return guarded([&] { *out = cvr::link::zeta(to_core(*params), m, u); });
}

cvr_status cvr_link_heralded_state(const cvr_link_params *params, int cutoff, cvr_density **out) {
    CVR_REQUIRE(params);
    CVR_REQUIRE(out);
    return guarded([&] { *out = wrap(cvr::link::heralded_state(to_core(*params), cutoff)); });
}

cvr_status cvr_link_circuit_state(const cvr_link_params *params, int cutoff, cvr_density **out,
                                  double *probability) {
    CVR_REQUIRE(params);
    CVR_REQUIRE(out);
    return guarded([&] {
        auto circuit = cvr::oracle::link_circuit(to_core(*params), cutoff);
        auto state = cvr::oracle::link_circuit_state(circuit);
        if (probability) *probability = circuit.probability;
        *out = wrap(std::move(state));
    });
}

// Swap gadget.

cvr_status cvr_swap_p_phys(double xi, double theta, double *p) {
    CVR_REQUIRE(p);
    return guarded([&] { *p = cvr::swap::p_phys(xi, theta); });
}

cvr_status cvr_swap_optimize(double xi, double *theta, double *p) {
    CVR_REQUIRE(theta);
    CVR_REQUIRE(p);
    return guarded([&] {
        auto best = cvr::swap::optimize_p_phys(xi);
        *theta = best.theta;
        *p = best.p;
    });
}

cvr_status cvr_swap_f23(double theta, double lam, int cutoff, cvr_f23_model model, double *re, size_t len) {
    CVR_REQUIRE(re);
    return guarded([&] {
        if (cutoff < 1) throw cvr::ArgumentError("cutoff must be at least 1");
        cvr::fock::FockArray ket(2, cutoff);
        switch (model) {
            case CVR_F23_CLOSED_FORM:
                ket = cvr::swap::f23_closed_form(theta, lam, cutoff);
                break;
            case CVR_F23_CIRCUIT:
                ket = cvr::swap::f23_circuit(theta, lam, cutoff, cvr::swap::SubtractionModel::kMeanField);
                break;
            case CVR_F23_CIRCUIT_EXACT:
                ket = cvr::swap::f23_circuit(theta, lam, cutoff, cvr::swap::SubtractionModel::kExact);
                break;
            default:
                throw cvr::ArgumentError("unknown f23 model");
        }
        size_t n = (size_t)(cutoff + 1);
        check_len(len, n * n);
        for (int a = 0; a <= cutoff; a++) {
            for (int b = 0; b <= cutoff; b++) {
                re[(size_t)a * n + (size_t)b] = ket.at({a, b}).real();
            }
        }
    });
}

// Chain.

void cvr_chain_params_init(cvr_chain_params *params) {
    if (!params) return;
    params->mu = 0;
    params->t_link = 1;
    params->kappa = 0.5;
    params->q = -1;
    params->x = 0;
    params->recursion = CVR_RECURSION_EXACT;
    params->cutoff = 30;
}

cvr_status cvr_chain_evaluate(const cvr_chain_params *params, cvr_chain_report *out, double *swap_probs,
                              size_t cap) {
    CVR_REQUIRE(params);
    CVR_REQUIRE(out);
    return guarded([&] {
        auto r = cvr::chain::evaluate_chain(to_core(*params), params->cutoff);
        // Level k of a 2^x-link tree performs 2^(x-k) swaps.
        double prod = 1;
        size_t levels = r.swap_probabilities.size();
        for (size_t k = 0; k < levels; k++) prod *= std::pow(r.swap_probabilities[k], std::ldexp(1.0, (int)(levels - k - 1)));
        *out = {r.rci, r.entropy_joint, r.entropy_marginal, r.p_sciss, r.q, r.xi, r.state.rho, prod,
                r.swap_probabilities.size()};
        if (swap_probs) {
            for (size_t k = 0; k < r.swap_probabilities.size() && k < cap; k++) swap_probs[k] = r.swap_probabilities[k];
        }
    });
}

cvr_status cvr_chain_density(const cvr_chain_params *params, cvr_density **out) {
    CVR_REQUIRE(params);
    CVR_REQUIRE(out);
    return guarded([&] {
        auto r = cvr::chain::propagate_chain(to_core(*params));
        *out = wrap(cvr::chain::end_to_end_density(r.state, params->cutoff));
    });
}

cvr_status cvr_chain_rate(const cvr_chain_params *params, double M, cvr_swap_cost cost, double *rate) {
    CVR_REQUIRE(params);
    CVR_REQUIRE(rate);
    return guarded([&] {
        auto r = cvr::chain::evaluate_chain(to_core(*params), params->cutoff);
        *rate = cvr::rate::rate_general(r, M, to_core(cost));
    });
}

// Rates.

cvr_status cvr_capacity_direct(double eta, double *out) {
    CVR_REQUIRE(out);
    return guarded([&] { *out = cvr::rate::capacity_direct(eta); });
}

cvr_status cvr_p_multiplexed(double c, double eta, double n, double M, double *out) {
    CVR_REQUIRE(out);
    return guarded([&] { *out = cvr::rate::p_multiplexed(c, eta, n, M); });
}

cvr_status cvr_rate_dv(double M, double n, double p_swap, double c, double eta, double *out) {
    CVR_REQUIRE(out);
    return guarded([&] { *out = cvr::rate::rate_dv(M, n, p_swap, c, eta); });
}

cvr_status cvr_tau_exponent(double M, double c, double p_swap, double *out) {
    CVR_REQUIRE(out);
    return guarded([&] { *out = cvr::rate::tau_exponent(M, c, p_swap); });
}

cvr_status cvr_solve_z(double M, double c, double p_swap, double *z, double *residual) {
    CVR_REQUIRE(z);
    return guarded([&] {
        auto s = cvr::rate::solve_z_detailed(M, c, p_swap);
        *z = s.z;
        if (residual) *residual = s.residual;
    });
}

cvr_status cvr_envelope_exponent(double M, double c, double p_swap, double *s) {
    CVR_REQUIRE(s);
    return guarded([&] { *s = cvr::rate::envelope_exponent_s(M, c, p_swap); });
}

void cvr_envelope_config_init(cvr_envelope_config *config, cvr_envelope_mode mode) {
    if (!config) return;
    cvr::rate::EnvelopeConfig d;
    config->mode = mode;
    config->M = d.M;
    config->rep_rate = d.rep_rate;
    config->alpha_db_per_km = d.alpha_db_per_km;
    config->distance_min_km = d.distance_min_km;
    config->distance_max_km = d.distance_max_km;
    config->distance_step_km = d.distance_step_km;
    config->x_max = d.x_max;
    config->p_swap = d.p_swap;
    config->c = d.c;
    config->mu = d.mu;
    config->kappa_coeff = d.kappa_coeff;
    config->kappa_exp = d.kappa_exp;
    config->q = d.q;
    config->cutoff = d.cutoff;
    config->swap_cost = CVR_SWAP_COST_PHYSICAL;
    config->recursion = CVR_RECURSION_EXACT;
}

cvr_status cvr_envelope_build(const cvr_envelope_config *config, cvr_envelope **out) {
    CVR_REQUIRE(config);
    CVR_REQUIRE(out);
    return guarded([&] {
        cvr::rate::EnvelopeConfig c;
        if (config->mode == CVR_MODE_DV) {
            c.mode = cvr::rate::EnvelopeMode::kDvLike;
        } else if (config->mode == CVR_MODE_GENERAL) {
            c.mode = cvr::rate::EnvelopeMode::kGeneral;
        } else {
            throw cvr::ArgumentError("unknown envelope mode");
        }
        c.M = config->M;
        c.rep_rate = config->rep_rate;
        c.alpha_db_per_km = config->alpha_db_per_km;
        c.distance_min_km = config->distance_min_km;
        c.distance_max_km = config->distance_max_km;
        c.distance_step_km = config->distance_step_km;
        c.x_max = config->x_max;
        c.p_swap = config->p_swap;
        c.c = config->c;
        c.mu = config->mu;
        c.kappa_coeff = config->kappa_coeff;
        c.kappa_exp = config->kappa_exp;
        c.q = config->q;
        c.cutoff = config->cutoff;
        c.swap_cost = to_core(config->swap_cost);
        c.recursion = to_core(config->recursion);
        *out = new cvr_envelope{cvr::rate::build_envelope(c)};
    });
}

cvr_status cvr_envelope_summary_get(const cvr_envelope *env, cvr_envelope_summary *out) {
    CVR_REQUIRE(env);
    CVR_REQUIRE(out);
    return guarded([&] {
        const auto &e = env->curve;
        *out = {e.distances_km.size(), e.curves.size(), e.s_fit, e.s_fit_r2, e.fit_lo_km, e.fit_hi_km,
                e.supercritical ? 1 : 0, e.s_exact, e.tau, e.z, e.advantage ? 1 : 0, e.l_cross_km,
                e.r_cross_ebps};
    });
}

cvr_status cvr_envelope_distances(const cvr_envelope *env, double *out, size_t len) {
    CVR_REQUIRE(env);
    CVR_REQUIRE(out);
    return guarded([&] {
        const auto &d = env->curve.distances_km;
        check_len(len, d.size());
        std::copy(d.begin(), d.end(), out);
    });
}

cvr_status cvr_envelope_curve(const cvr_envelope *env, size_t curve, int *n_rep, double *out, size_t len) {
    CVR_REQUIRE(env);
    return guarded([&] {
        const auto &e = env->curve;
        if (curve >= e.curves.size()) throw cvr::ArgumentError("curve index out of range");
        if (n_rep) *n_rep = e.n_rep[curve];
        if (out) {
            check_len(len, e.curves[curve].size());
            std::copy(e.curves[curve].begin(), e.curves[curve].end(), out);
        }
    });
}

cvr_status cvr_envelope_series_get(const cvr_envelope *env, cvr_series series, double *out, size_t len) {
    CVR_REQUIRE(env);
    CVR_REQUIRE(out);
    return guarded([&] {
        const std::vector<double> *v = nullptr;
        switch (series) {
            case CVR_SERIES_ENVELOPE:
                v = &env->curve.envelope;
                break;
            case CVR_SERIES_POINTWISE_MAX:
                v = &env->curve.pointwise_max;
                break;
            case CVR_SERIES_DIRECT:
                v = &env->curve.direct;
                break;
            default:
                throw cvr::ArgumentError("unknown series");
        }
        check_len(len, v->size());
        std::copy(v->begin(), v->end(), out);
    });
}

void cvr_envelope_free(cvr_envelope *env) { delete env; }

// Optimization.

void cvr_opt_domain_init(cvr_opt_domain *domain) {
    if (!domain) return;
    cvr::opt::OptDomain d;
    *domain = {d.mu_lo, d.mu_hi, d.kappa_lo, d.kappa_hi, d.grid, d.simplex_scale};
}

cvr_status cvr_optimize_link(double t, int n_scissors, cvr_objective objective, const cvr_opt_domain *domain,
                             cvr_opt_result *out) {
    CVR_REQUIRE(out);
    return guarded([&] {
        cvr::opt::OptDomain d;
        if (domain) {
            d.mu_lo = domain->mu_lo;
            d.mu_hi = domain->mu_hi;
            d.kappa_lo = domain->kappa_lo;
            d.kappa_hi = domain->kappa_hi;
            d.grid = domain->grid;
            d.simplex_scale = domain->simplex_scale;
        }
        cvr::opt::OptResult r;
        if (objective == CVR_OBJECTIVE_TRUE_RCI) {
            r = cvr::opt::optimize_link_true_rci(t, n_scissors, d);
        } else if (objective == CVR_OBJECTIVE_RCI) {
            r = cvr::opt::optimize_link_rci(t, n_scissors, d);
        } else {
            throw cvr::ArgumentError("unknown objective");
        }
        *out = {r.mu,        r.kappa,       r.value,           r.probability,          r.rci,
                r.grid_best, r.evaluations, r.converged ? 1 : 0, r.all_negative ? 1 : 0};
    });
}

cvr_status cvr_fit_power_law(const double *t, const double *v, size_t n, double *exponent, double *prefactor,
                             double *r2) {
    CVR_REQUIRE(t);
    CVR_REQUIRE(v);
    CVR_REQUIRE(exponent);
    return guarded([&] {
        auto fit = cvr::opt::fit_power_law(std::vector<double>(t, t + n), std::vector<double>(v, v + n));
        *exponent = fit.exponent;
        if (prefactor) *prefactor = fit.prefactor;
        if (r2) *r2 = fit.r2;
    });
}

// Verification.

void cvr_verify_config_init(cvr_verify_config *config) {
    if (!config) return;
    cvr::verify::VerifyConfig d;
    *config = {d.cutoff, d.points, d.seed, d.inject_kappa_error};
}

cvr_status cvr_verify_run(const cvr_verify_config *config, cvr_verify_report **out) {
    CVR_REQUIRE(config);
    CVR_REQUIRE(out);
    return guarded([&] {
        cvr::verify::VerifyConfig c;
        c.cutoff = config->cutoff;
        c.points = config->points;
        c.seed = config->seed;
        c.inject_kappa_error = config->inject_kappa_error;
        *out = new cvr_verify_report{cvr::verify::run(c)};
    });
}

size_t cvr_verify_check_count(const cvr_verify_report *report) { return report ? report->report.checks.size() : 0; }

cvr_status cvr_verify_check(const cvr_verify_report *report, size_t index, cvr_check *out) {
    CVR_REQUIRE(report);
    CVR_REQUIRE(out);
    return guarded([&] {
        if (index >= report->report.checks.size()) throw cvr::ArgumentError("check index out of range");
        const auto &c = report->report.checks[index];
        *out = {c.name.c_str(), c.residual, c.tolerance, c.passed ? 1 : 0, c.note.c_str()};
    });
}

size_t cvr_verify_worst(const cvr_verify_report *report) { return report ? report->report.worst() : 0; }

size_t cvr_verify_warning_count(const cvr_verify_report *report) {
    return report ? report->report.warnings.size() : 0;
}

const char *cvr_verify_warning(const cvr_verify_report *report, size_t index) {
    if (!report || index >= report->report.warnings.size()) return nullptr;
    return report->report.warnings[index].c_str();
}

int cvr_verify_all_passed(const cvr_verify_report *report) { return report && report->report.all_passed() ? 1 : 0; }

void cvr_verify_free(cvr_verify_report *report) { delete report; }

}  // extern "C"
