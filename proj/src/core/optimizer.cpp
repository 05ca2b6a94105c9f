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

#include "core/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/regression.hpp"
#include "core/scissors_link.hpp"
#include "core/swap_gadget.hpp"

using namespace cvr;
using namespace cvr::opt;

namespace {

enum class Objective { kTrueRci, kRci };

double clamp(double v, double lo, double hi) {
    return std::min(hi, std::max(lo, v));
}

OptResult optimize_link(double t, int n, const OptDomain &d, Objective obj) {
    if (!(t > 0 && t < 1)) {
        throw DomainError("transmissivity must lie in (0, 1)");
    }
    if (n < 1 || n > 4) {
        throw DomainError("number of scissors must lie in [1, 4]");
    }
    if (!(d.mu_lo > 0 && d.mu_hi > d.mu_lo && d.kappa_lo > 0 && d.kappa_hi > d.kappa_lo && d.kappa_hi < 1) ||
        d.grid < 2) {
        throw DomainError("invalid optimization domain");
    }

    auto value = [&](const link::LinkReport &r) {
        return obj == Objective::kTrueRci ? r.probability * r.rci : r.rci;
    };
    auto at = [&](double log_mu, double log_kappa) {
        return link::evaluate(link::LinkParams{std::exp(log_mu), t, std::exp(log_kappa), n});
    };

    std::vector<double> lo = {std::log(d.mu_lo), std::log(d.kappa_lo)};
    std::vector<double> hi = {std::log(d.mu_hi), std::log(d.kappa_hi)};
    double dmu = (hi[0] - lo[0]) / (d.grid - 1);
    double dka = (hi[1] - lo[1]) / (d.grid - 1);

    size_t g = (size_t)d.grid;
    std::vector<double> grid_values(g * g);
    parallel_for(g * g, [&](size_t k) {
        double lm = lo[0] + dmu * (double)(k / g);
        double lk = lo[1] + dka * (double)(k % g);
        grid_values[k] = value(at(lm, lk));
    });
    size_t best = (size_t)(std::max_element(grid_values.begin(), grid_values.end()) - grid_values.begin());
    double grid_best = grid_values[best];

    std::vector<double> x0 = {lo[0] + dmu * (double)(best / g), lo[1] + dka * (double)(best % g)};
    std::vector<double> step = {dmu * d.simplex_scale, dka * d.simplex_scale};
    SimplexResult nm = nelder_mead_max([&](const std::vector<double> &x) { return value(at(x[0], x[1])); }, x0, step,
                                       lo, hi);

    OptResult out;
    link::LinkReport r = at(nm.x[0], nm.x[1]);
    out.mu = std::exp(nm.x[0]);
    out.kappa = std::exp(nm.x[1]);
    out.value = nm.value;
    out.probability = r.probability;
    out.rci = r.rci;
    out.grid_best = grid_best;
    out.evaluations = (long)(g * g) + nm.evaluations;
    out.converged = nm.converged;
    out.all_negative = !(nm.value > 0);
    if (out.all_negative) {
        out.value = 0;
    }
    return out;
}

}  // namespace

OptResult cvr::opt::optimize_link_true_rci(double t, int n, const OptDomain &domain) {
    return optimize_link(t, n, domain, Objective::kTrueRci);
}

OptResult cvr::opt::optimize_link_rci(double t, int n, const OptDomain &domain) {
    return optimize_link(t, n, domain, Objective::kRci);
}

SimplexResult cvr::opt::nelder_mead_max(const std::function<double(const std::vector<double> &)> &f,
                                        std::vector<double> x0, const std::vector<double> &step,
                                        const std::vector<double> &lo, const std::vector<double> &hi, double tol,
                                        int max_iter) {
    size_t dim = x0.size();
    if (dim == 0 || step.size() != dim || lo.size() != dim || hi.size() != dim) {
        throw ArgumentError("simplex inputs must share one nonzero dimension");
    }
    auto clamp_all = [&](std::vector<double> x) {
        for (size_t k = 0; k < dim; k++) {
            x[k] = clamp(x[k], lo[k], hi[k]);
        }
        return x;
    };

    long evals = 0;
    auto eval = [&](const std::vector<double> &x) {
        evals++;
        double v = f(x);
        return std::isnan(v) ? -INFINITY : v;
    };

    // Vertex k > 0 steps along axis k-1, away from the nearer wall.
    std::vector<std::vector<double>> pts;
    pts.push_back(clamp_all(x0));
    for (size_t k = 0; k < dim; k++) {
        std::vector<double> p = pts[0];
        double s = step[k];
        if (p[k] + s > hi[k]) {
            s = -s;
        }
        p[k] += s;
        pts.push_back(clamp_all(p));
    }
    std::vector<double> vals;
    for (auto &p : pts) {
        vals.push_back(eval(p));
    }

    auto diameter = [&]() {
        double m = 0;
        for (size_t a = 1; a < pts.size(); a++) {
            double d2 = 0;
            for (size_t k = 0; k < dim; k++) {
                d2 += (pts[a][k] - pts[0][k]) * (pts[a][k] - pts[0][k]);
            }
            m = std::max(m, std::sqrt(d2));
        }
        return m;
    };

    bool converged = false;
    for (int iter = 0; iter < max_iter; iter++) {
        // Sort descending by value; ties keep insertion order for determinism.
        std::vector<size_t> order(pts.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return vals[a] > vals[b]; });
        std::vector<std::vector<double>> p2;
        std::vector<double> v2;
        for (size_t o : order) {
            p2.push_back(pts[o]);
            v2.push_back(vals[o]);
        }
        pts.swap(p2);
        vals.swap(v2);

        if (diameter() < tol) {
            converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (size_t a = 0; a < dim; a++) {
            for (size_t k = 0; k < dim; k++) {
                centroid[k] += pts[a][k] / (double)dim;
            }
        }
        auto along = [&](double coef) {
            std::vector<double> p(dim);
            for (size_t k = 0; k < dim; k++) {
                p[k] = centroid[k] + coef * (pts[dim][k] - centroid[k]);
            }
            return clamp_all(p);
        };

        std::vector<double> xr = along(-1);
        double fr = eval(xr);
        if (fr > vals[0]) {
            std::vector<double> xe = along(-2);
            double fe = eval(xe);
            if (fe > fr) {
                pts[dim] = xe;
                vals[dim] = fe;
            } else {
                pts[dim] = xr;
                vals[dim] = fr;
            }
            continue;
        }
        if (fr > vals[dim - 1]) {
            pts[dim] = xr;
            vals[dim] = fr;
            continue;
        }
        std::vector<double> xc = fr > vals[dim] ? along(-0.5) : along(0.5);
        double fc = eval(xc);
        if (fc > std::max(fr, vals[dim])) {
            pts[dim] = xc;
            vals[dim] = fc;
            continue;
        }
        for (size_t a = 1; a <= dim; a++) {
            for (size_t k = 0; k < dim; k++) {
                pts[a][k] = pts[0][k] + 0.5 * (pts[a][k] - pts[0][k]);
            }
            vals[a] = eval(pts[a]);
        }
    }
    size_t best = (size_t)(std::max_element(vals.begin(), vals.end()) - vals.begin());
    return {pts[best], vals[best], evals, converged};
}

PowerLawFit cvr::opt::fit_power_law(const std::vector<double> &t, const std::vector<double> &v) {
    if (t.size() != v.size()) {
        throw ArgumentError("power-law fit needs paired samples");
    }
    if (t.size() < 5) {
        throw ArgumentError("power-law fit needs at least 5 samples");
    }
    std::vector<double> lx, ly;
    for (size_t k = 0; k < t.size(); k++) {
        if (!(t[k] > 0) || !(v[k] > 0)) {
            throw ArgumentError("power-law fit needs positive samples");
        }
        lx.push_back(std::log(t[k]));
        ly.push_back(std::log(v[k]));
    }
    LineFit f = fit_line(lx, ly);
    if (f.r2 < 0.999) {
        std::stringstream ss;
        ss.precision(12);
        ss << "power-law fit rejected: R^2 = " << f.r2 << " < 0.999";
        throw NumericalError(ss.str());
    }
    return {f.slope, std::exp(f.intercept), f.r2};
}

double cvr::opt::refine_swap_angle(double xi) {
    const double eps = 1e-9;
    SimplexResult r = nelder_mead_max(
        [&](const std::vector<double> &x) { return std::log(swap::p_phys(xi, x[0])); }, {std::numbers::pi / 4},
        {0.1}, {eps}, {std::numbers::pi / 2 - eps}, 1e-12);
    return r.x[0];
}
