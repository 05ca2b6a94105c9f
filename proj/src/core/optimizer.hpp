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

#ifndef CVREPEATER_CORE_OPTIMIZER_HPP
#define CVREPEATER_CORE_OPTIMIZER_HPP

#include <functional>
#include <vector>

namespace cvr::opt {

/// Search box for (mu, kappa); both axes are sampled log-uniformly.
struct OptDomain {
    double mu_lo = 1e-4;
    double mu_hi = 1;
    double kappa_lo = 1e-3;
    double kappa_hi = 0.999;
    int grid = 40;
    /// Initial simplex edge, in grid spacings of log-parameter space.
    double simplex_scale = 1;
};

struct OptResult {
    double mu;
    double kappa;
    double value;        ///< Objective at the argmax.
    double probability;  ///< Herald probability at the argmax.
    double rci;          ///< RCI at the argmax.
    double grid_best;    ///< Best objective over the coarse grid.
    long evaluations;
    bool converged;
    bool all_negative;
};

OptResult optimize_link_true_rci(double t, int n, const OptDomain &domain = {});
OptResult optimize_link_rci(double t, int n, const OptDomain &domain = {});

struct SimplexResult {
    std::vector<double> x;
    double value;
    long evaluations;
    bool converged;
};

/// Nelder-Mead maximization with every trial point clamped into [lo, hi].
/// Stops when the simplex diameter drops below tol.
SimplexResult nelder_mead_max(const std::function<double(const std::vector<double> &)> &f, std::vector<double> x0,
                              const std::vector<double> &step, const std::vector<double> &lo,
                              const std::vector<double> &hi, double tol = 1e-6, int max_iter = 10000);

struct PowerLawFit {
    double exponent;
    double prefactor;
    double r2;
};

/// Least-squares power law v = prefactor t^exponent in log-log coordinates.
/// Needs >= 5 positive samples; fits with R^2 < 0.999 are rejected.
PowerLawFit fit_power_law(const std::vector<double> &t, const std::vector<double> &v);

/// Swap-angle optimum from the generic simplex refiner, for cross-checking the
/// golden-section search in the swap module.
double refine_swap_angle(double xi);

}  // namespace cvr::opt

#endif
