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

#include "core/scissors_link.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"

using namespace cvr;
using namespace cvr::link;

namespace {

constexpr int kMaxScissors = 8;
constexpr int kMaxU = 1000000;

double log_zeta(const LinkParams &p, const LinkDerived &d, int m, int u) {
    if ((u > 0 && d.a == 0) || (m > 0 && d.b == 0) || d.c == 0) {
        return -INFINITY;
    }
    int n = p.n_scissors;
    double v = std::log(d.c) + std::lgamma(n + 1.0) - std::lgamma(n - m + 1.0);
    if (u > 0) {
        v += u * std::log(d.a);
    }
    if (m > 0) {
        v += m * std::log(d.b);
    }
    v += 0.5 * (std::lgamma(m + u + 1.0) - std::lgamma(m + 1.0) - std::lgamma(u + 1.0));
    return v;
}

double entropy_of_weights(const std::vector<double> &w, double total) {
    double h = 0;
    for (double x : w) {
        double p = x / total;
        if (p > 0) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

// Marginal photon-number distribution of A: k <= N collects zeta_{i,k-i} for
// i <= k (Gamma_1), k > N collects it for i <= N (Gamma_2).
std::vector<double> marginal_weights(const ZetaTable &z) {
    int n = z.n;
    std::vector<double> w((size_t)(z.u_max + n + 1), 0.0);
    for (int k = 0; k <= n && k <= z.u_max + n; k++) {
        double g1 = 0;
        for (int i = 0; i <= k; i++) {
            if (k - i <= z.u_max) {
                g1 += z.at(i, k - i);
            }
        }
        w[(size_t)k] = g1;
    }
    for (int k = n + 1; k <= z.u_max + n; k++) {
        double g2 = 0;
        for (int i = 0; i <= n; i++) {
            int u = k - i;
            if (u <= z.u_max) {
                g2 += z.at(i, u);
            }
        }
        w[(size_t)k] = g2;
    }
    return w;
}

}  // namespace

LinkDerived cvr::link::derive(const LinkParams &p) {
    if (!(p.mu >= 0) || !std::isfinite(p.mu)) {
        throw DomainError("mu must be finite and non-negative");
    }
    if (!(p.t > 0 && p.t <= 1)) {
        throw DomainError("transmissivity must lie in (0, 1]");
    }
    if (!(p.kappa > 0 && p.kappa < 1)) {
        throw DomainError("kappa must lie in (0, 1)");
    }
    if (p.n_scissors < 1 || p.n_scissors > kMaxScissors) {
        throw DomainError("number of scissors must be in [1, 8]");
    }
    LinkDerived d;
    d.chi = std::tanh(std::asinh(std::sqrt(p.mu)));
    d.gain = std::sqrt((1 - p.kappa) / p.kappa);
    d.a = d.chi * std::sqrt(1 - p.t);
    d.b = d.gain * d.chi * std::sqrt(p.t) / p.n_scissors;
    d.c = std::sqrt((1 - d.chi * d.chi) * std::pow(p.kappa, p.n_scissors));
    return d;
}

double cvr::link::zeta(const LinkParams &params, int m, int u) {
    LinkDerived d = derive(params);
    if (m < 0 || m > params.n_scissors) {
        throw ArgumentError("zeta index m must lie in [0, N]");
    }
    if (u < 0) {
        throw ArgumentError("zeta index u must be non-negative");
    }
    return std::exp(log_zeta(params, d, m, u));
}

double ZetaTable::block(int u) const {
    double s = 0;
    for (int m = 0; m <= n; m++) {
        s += at(m, u);
    }
    return s;
}

double ZetaTable::total() const {
    double s = 0;
    for (double v : sq) {
        s += v;
    }
    return s;
}

ZetaTable cvr::link::zeta_table(const LinkParams &params) {
    LinkDerived d = derive(params);
    int n = params.n_scissors;
    ZetaTable z{n, -1, {}};
    double sum = 0;
    for (int u = 0;; u++) {
        if (u > kMaxU) {
            throw ConvergenceError("zeta u-sum did not converge");
        }
        double block = 0;
        for (int m = 0; m <= n; m++) {
            double v = std::exp(2 * log_zeta(params, d, m, u));
            z.sq.push_back(v);
            block += v;
        }
        sum += block;
        z.u_max = u;
        if (u > 50 && block < 1e-16 * sum) {
            break;
        }
    }
    return z;
}

double cvr::link::herald_probability(const LinkParams &params) {
    return zeta_table(params).total();
}

fock::DensityOperator cvr::link::heralded_state(const LinkParams &params, int cutoff) {
    ZetaTable z = zeta_table(params);
    int n = params.n_scissors;
    if (cutoff < n) {
        throw ArgumentError("cutoff must be at least the number of scissors");
    }
    double total = z.total();
    int dim_b = n + 1;
    int dim = (cutoff + 1) * dim_b;
    fock::Matrix rho = fock::Matrix::Zero(dim, dim);
    double kept = 0;
    for (int u = 0; u <= z.u_max && u + n <= cutoff; u++) {
        // Block u is rank one: sum_m zeta_{m,u} |m+u, m>.
        for (int m = 0; m <= n; m++) {
            double zm = std::sqrt(z.at(m, u));
            for (int k = 0; k <= n; k++) {
                double zk = std::sqrt(z.at(k, u));
                rho((m + u) * dim_b + m, (k + u) * dim_b + k) = zm * zk;
            }
        }
        kept += z.block(u);
    }
    if (std::abs(kept / total - 1) > 1e-8) {
        std::stringstream ss;
        ss.precision(12);
        ss << "heralded state truncated at cutoff " << cutoff << " keeps only " << kept / total << " of its trace";
        throw ConvergenceError(ss.str());
    }
    rho /= kept;
    return fock::DensityOperator({cutoff, n}, rho);
}

LinkReport cvr::link::evaluate(const LinkParams &params) {
    ZetaTable z = zeta_table(params);
    double total = z.total();
    std::vector<double> blocks((size_t)z.u_max + 1);
    for (int u = 0; u <= z.u_max; u++) {
        blocks[(size_t)u] = z.block(u);
    }
    LinkReport r;
    r.probability = total;
    r.entropy_joint = entropy_of_weights(blocks, total);
    r.entropy_marginal = entropy_of_weights(marginal_weights(z), total);
    r.rci = r.entropy_marginal - r.entropy_joint;
    r.true_rci = std::max(0.0, r.probability * r.rci);
    return r;
}

double cvr::link::entropy_joint(const LinkParams &params) {
    return evaluate(params).entropy_joint;
}

double cvr::link::entropy_marginal(const LinkParams &params) {
    return evaluate(params).entropy_marginal;
}

double cvr::link::rci(const LinkParams &params) {
    return evaluate(params).rci;
}

double cvr::link::true_rci(const LinkParams &params) {
    return evaluate(params).true_rci;
}

double cvr::link::transmissivity(double distance_km, double alpha_db_per_km) {
    if (!(distance_km >= 0) || !std::isfinite(distance_km)) {
        throw DomainError("distance must be finite and non-negative");
    }
    if (!(alpha_db_per_km >= 0) || !std::isfinite(alpha_db_per_km)) {
        throw DomainError("attenuation must be finite and non-negative");
    }
    return std::pow(10.0, -alpha_db_per_km * distance_km / 10.0);
}
