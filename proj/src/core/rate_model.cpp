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

#include "core/rate_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/regression.hpp"
#include "core/scissors_link.hpp"
#include "core/swap_gadget.hpp"

using namespace cvr;
using namespace cvr::rate;

namespace {

void check_prob(double p, const char *name) {
    if (!(p > 0 && p <= 1)) {
        std::stringstream ss;
        ss.precision(12);
        ss << name << " must lie in (0, 1]";
        throw DomainError(ss.str());
    }
}

void check_multiplexing(double M) {
    if (!(M >= 1) || !std::isfinite(M)) {
        throw DomainError("multiplexing degree M must be finite and at least 1");
    }
}

// -expm1(M log1p(-p)) for p in (0, 1].
double at_least_one(double p, double M) {
    if (p >= 1) {
        return 1;
    }
    return -std::expm1(M * std::log1p(-p));
}

struct DvInfo {
    bool supercritical = false;
    double s = 0;
    double z = 0;
};

DvInfo dv_info(const EnvelopeConfig &cfg) {
    DvInfo info;
    try {
        ZSolution sol = solve_z_detailed(cfg.M, cfg.c, cfg.p_swap);
        info.supercritical = true;
        info.z = sol.z;
        info.s = std::log(cfg.p_swap * p_multiplexed(cfg.c, sol.z, 1, cfg.M)) / std::log(sol.z);
    } catch (const SubcriticalError &) {
        info.supercritical = false;
    }
    return info;
}

double envelope_at(const EnvelopeConfig &cfg, const DvInfo &dv, double distance_km) {
    double eta = link::transmissivity(distance_km, cfg.alpha_db_per_km);
    if (cfg.mode == EnvelopeMode::kDvLike && dv.supercritical) {
        return std::pow(eta, dv.s) / (cfg.M * cfg.p_swap);
    }
    std::vector<double> r = rates_at(cfg, distance_km);
    return *std::max_element(r.begin(), r.end());
}

double log_gap(const EnvelopeConfig &cfg, const DvInfo &dv, double distance_km) {
    double eta = link::transmissivity(distance_km, cfg.alpha_db_per_km);
    double env = envelope_at(cfg, dv, distance_km);
    if (!(env > 0)) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(env) - std::log(capacity_direct(eta));
}

void validate(const EnvelopeConfig &cfg) {
    check_multiplexing(cfg.M);
    if (!(cfg.rep_rate > 0) || !std::isfinite(cfg.rep_rate)) {
        throw DomainError("repetition rate must be positive");
    }
    if (!(cfg.alpha_db_per_km > 0) || !std::isfinite(cfg.alpha_db_per_km)) {
        throw DomainError("attenuation must be positive");
    }
    if (!(cfg.distance_min_km > 0) || !(cfg.distance_max_km > cfg.distance_min_km) || !(cfg.distance_step_km > 0)) {
        throw DomainError("distance grid needs 0 < min < max and a positive step");
    }
    if (cfg.x_max < 0 || cfg.x_max > 20) {
        throw DomainError("x_max must lie in [0, 20]");
    }
    if (cfg.mode == EnvelopeMode::kDvLike) {
        check_prob(cfg.p_swap, "p_swap");
        check_prob(cfg.c, "c");
    } else {
        if (!(cfg.kappa_coeff > 0) || !std::isfinite(cfg.kappa_exp)) {
            throw DomainError("kappa law needs a positive coefficient and finite exponent");
        }
        if (cfg.cutoff < 1) {
            throw DomainError("cutoff must be at least 1");
        }
    }
}

}  // namespace

double cvr::rate::capacity_direct(double eta) {
    if (eta == 1) {
        throw DomainError("direct capacity is infinite at eta = 1");
    }
    if (!(eta >= 0 && eta < 1)) {
        throw DomainError("eta must lie in [0, 1)");
    }
    return -std::log1p(-eta) / std::log(2.0);
}

double cvr::rate::p_multiplexed(double c, double eta, double n, double M) {
    check_multiplexing(M);
    if (!(n >= 1)) {
        throw DomainError("number of links must be at least 1");
    }
    if (!(eta > 0 && eta <= 1)) {
        throw DomainError("eta must lie in (0, 1]");
    }
    double p = c * std::pow(eta, 1 / n);
    check_prob(p, "per-link success c eta^(1/n)");
    return at_least_one(p, M);
}

double cvr::rate::rate_dv(double M, double n, double p_swap, double c, double eta) {
    check_prob(p_swap, "p_swap");
    double pm = p_multiplexed(c, eta, n, M);
    return std::exp(n * std::log(pm) + (n - 1) * std::log(p_swap) - std::log(M));
}

double cvr::rate::tau_exponent(double M, double c, double p_swap) {
    check_prob(p_swap, "p_swap");
    check_prob(c, "c");
    if (!(M * c > 1)) {
        throw DomainError("tau exponent needs M c > 1");
    }
    return std::log(1 / p_swap) / std::log(M * c);
}

double cvr::rate::envelope_residual(double z, double M, double c, double p_swap) {
    double pm = at_least_one(c * z, M);
    double tail = std::exp((M - 1) * std::log1p(-c * z));
    return pm * std::log(p_swap * pm) - c * M * z * std::log(z) * tail;
}

ZSolution cvr::rate::solve_z_detailed(double M, double c, double p_swap) {
    check_multiplexing(M);
    check_prob(p_swap, "p_swap");
    check_prob(c, "c");
    if (!(M * c * p_swap > 1)) {
        std::stringstream ss;
        ss.precision(12);
        ss << "subcritical multiplexing: M c p_swap = " << M * c * p_swap << " <= 1";
        throw SubcriticalError(ss.str());
    }
    auto f = [&](double log_z) { return envelope_residual(std::exp(log_z), M, c, p_swap); };
    double lo = std::log(1e-200);
    double hi = std::log1p(-1e-12);
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (!(f_lo > 0 && f_hi < 0)) {
        throw SubcriticalError("envelope equation has no sign change on (0, 1)");
    }

    // A second sign change would make the root ambiguous.
    int changes = 0;
    double prev = f_lo;
    for (int k = 1; k <= 100; k++) {
        double v = f(lo + (hi - lo) * k / 100.0);
        if ((v > 0) != (prev > 0)) {
            changes++;
        }
        prev = v;
    }
    if (changes != 1) {
        throw NumericalError("envelope equation residual changes sign more than once");
    }

    for (int iter = 0; iter < 400 && hi - lo > 1e-15 * std::abs(lo); iter++) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double z = std::exp(0.5 * (lo + hi));
    return {z, envelope_residual(z, M, c, p_swap)};
}

double cvr::rate::solve_z(double M, double c, double p_swap) {
    return solve_z_detailed(M, c, p_swap).z;
}

double cvr::rate::envelope_exponent_s(double M, double c, double p_swap) {
    double z = solve_z(M, c, p_swap);
    return std::log(p_swap * at_least_one(c * z, M)) / std::log(z);
}

double cvr::rate::swap_cost_factor(double xi, SwapCost cost) {
    if (cost == SwapCost::kIdeal) {
        return 1;
    }
    if (!(xi > 0)) {
        return 0;
    }
    return swap::optimize_p_phys(xi).p;
}

double cvr::rate::rate_general(const chain::ChainResult &chain, double M, SwapCost cost) {
    check_multiplexing(M);
    if (!(chain.rci > 0)) {
        return 0;
    }
    size_t levels = chain.swap_probabilities.size();
    double n = std::ldexp(1.0, (int)levels);
    double log_r = std::log(chain.rci) - std::log(M);
    if (levels > 0) {
        double pm = at_least_one(chain.p_sciss, M);
        double phys = swap_cost_factor(chain.xi, cost);
        if (!(pm > 0) || !(phys > 0)) {
            return 0;
        }
        log_r += (n - 1) * std::log(pm);
        for (size_t i = 0; i < levels; i++) {
            double p = chain.swap_probabilities[i] * phys;
            if (!(p > 0)) {
                return 0;
            }
            log_r += std::ldexp(n, -(int)(i + 1)) * std::log(p);
        }
    }
    return std::exp(log_r);
}

std::vector<double> cvr::rate::rates_at(const EnvelopeConfig &cfg, double distance_km) {
    double eta = link::transmissivity(distance_km, cfg.alpha_db_per_km);
    std::vector<double> out((size_t)cfg.x_max + 1, 0.0);
    if (cfg.mode == EnvelopeMode::kDvLike) {
        for (int x = 0; x <= cfg.x_max; x++) {
            out[(size_t)x] = rate_dv(cfg.M, std::ldexp(1.0, x), cfg.p_swap, cfg.c, eta);
        }
        return out;
    }
    for (int x = 0; x <= cfg.x_max; x++) {
        double n = std::ldexp(1.0, x);
        chain::ChainParams p;
        p.mu = cfg.mu;
        p.t_link = std::pow(eta, 1 / n);
        p.kappa = cfg.kappa_coeff * std::pow(p.t_link, cfg.kappa_exp);
        p.q = cfg.q;
        p.x = x;
        p.recursion = cfg.recursion;
        chain::ChainResult res = chain::propagate_chain(p);
        // The RCI of a B-qubit state is at most 1 bit, so skip the
        // eigen-decomposition when even that bound underflows.
        res.rci = 1;
        if (rate_general(res, cfg.M, cfg.swap_cost) < 1e-300) {
            continue;
        }
        chain::fill_entropies(res, cfg.cutoff);
        out[(size_t)x] = rate_general(res, cfg.M, cfg.swap_cost);
    }
    return out;
}

EnvelopeCurve cvr::rate::build_envelope(const EnvelopeConfig &cfg) {
    validate(cfg);
    EnvelopeCurve out;
    size_t npts = (size_t)std::floor((cfg.distance_max_km - cfg.distance_min_km) / cfg.distance_step_km + 1e-9) + 1;
    for (size_t k = 0; k < npts; k++) {
        out.distances_km.push_back(cfg.distance_min_km + (double)k * cfg.distance_step_km);
    }
    for (int x = 0; x <= cfg.x_max; x++) {
        out.n_rep.push_back((1 << x) - 1);
    }
    out.curves.assign((size_t)cfg.x_max + 1, std::vector<double>(npts, 0.0));

    DvInfo dv;
    if (cfg.mode == EnvelopeMode::kDvLike) {
        dv = dv_info(cfg);
        out.supercritical = dv.supercritical;
        out.s_exact = dv.supercritical ? dv.s : std::nan("");
        out.z = dv.supercritical ? dv.z : std::nan("");
        out.tau = cfg.M * cfg.c > 1 ? tau_exponent(cfg.M, cfg.c, cfg.p_swap) : std::nan("");
    } else {
        out.s_exact = out.z = out.tau = std::nan("");
    }

    parallel_for(npts, [&](size_t k) {
        std::vector<double> r = rates_at(cfg, out.distances_km[k]);
        for (size_t x = 0; x < r.size(); x++) {
            out.curves[x][k] = r[x];
        }
    });

    out.pointwise_max.resize(npts);
    out.envelope.resize(npts);
    out.direct.resize(npts);
    std::vector<size_t> best(npts);
    for (size_t k = 0; k < npts; k++) {
        double m = 0;
        size_t arg = 0;
        for (size_t x = 0; x < out.curves.size(); x++) {
            if (out.curves[x][k] > m) {
                m = out.curves[x][k];
                arg = x;
            }
        }
        best[k] = arg;
        out.pointwise_max[k] = m;
        double eta = link::transmissivity(out.distances_km[k], cfg.alpha_db_per_km);
        out.envelope[k] = (cfg.mode == EnvelopeMode::kDvLike && dv.supercritical)
                              ? std::pow(eta, dv.s) / (cfg.M * cfg.p_swap)
                              : m;
        out.direct[k] = capacity_direct(eta);
    }

    // Fit window: deepest three decades of loss, or for general operation the
    // stretch after the first change of the optimal n_rep.
    double decades_km = 30 / cfg.alpha_db_per_km;
    out.fit_lo_km = std::max(cfg.distance_min_km, cfg.distance_max_km - decades_km);
    out.fit_hi_km = out.distances_km.back();
    if (cfg.mode == EnvelopeMode::kGeneral) {
        for (size_t k = 1; k < npts; k++) {
            if (best[k] != best[0]) {
                out.fit_lo_km = out.distances_km[k];
                break;
            }
        }
    }
    std::vector<double> lx, ly;
    for (size_t k = 0; k < npts; k++) {
        double d = out.distances_km[k];
        if (d >= out.fit_lo_km && d <= out.fit_hi_km && out.envelope[k] > 0) {
            lx.push_back(std::log10(link::transmissivity(d, cfg.alpha_db_per_km)));
            ly.push_back(std::log10(out.envelope[k]));
        }
    }
    if (lx.size() >= 2) {
        LineFit fit = fit_line(lx, ly);
        out.s_fit = fit.slope;
        out.s_fit_r2 = fit.r2;
        if (!(out.s_fit > 0 && out.s_fit < 1.5)) {
            std::stringstream ss;
            ss.precision(12);
            ss << "fitted envelope exponent " << out.s_fit << " outside the sanity band (0, 1.5)";
            warn(ss.str());
        }
    } else {
        out.s_fit = out.s_fit_r2 = std::nan("");
    }

    // First grid point where the envelope reaches the direct capacity, refined
    // by bisection on the continuous envelope.
    for (size_t k = 0; k < npts; k++) {
        if (!(out.envelope[k] >= out.direct[k])) {
            continue;
        }
        out.advantage = true;
        double hi = out.distances_km[k];
        double lo = k == 0 ? hi : out.distances_km[k - 1];
        for (int iter = 0; iter < 60 && hi - lo > 1e-9; iter++) {
            double mid = 0.5 * (lo + hi);
            if (log_gap(cfg, dv, mid) >= 0) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.l_cross_km = hi;
        out.r_cross_ebps = cfg.rep_rate * capacity_direct(link::transmissivity(hi, cfg.alpha_db_per_km));
        break;
    }
    return out;
}
