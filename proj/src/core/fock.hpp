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

#ifndef CVREPEATER_CORE_FOCK_HPP
#define CVREPEATER_CORE_FOCK_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace cvr::fock {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

struct ModePair {
    size_t i;
    size_t j;
};

/// Pure state on a truncated multi-mode Fock space.
///
/// Amplitudes are stored row-major with mode 0 most significant. Each mode has
/// its own cutoff (inclusive maximum photon number); the uniform-cutoff
/// constructor is the common case.
class FockArray {
   public:
    /// Vacuum on `num_modes` modes, each truncated at `cutoff`.
    FockArray(size_t num_modes, int cutoff);
    /// Vacuum with per-mode cutoffs.
    explicit FockArray(std::vector<int> cutoffs);

    static FockArray basis(const std::vector<int> &photons, int cutoff);
    static FockArray basis(const std::vector<int> &photons, std::vector<int> cutoffs);
    /// All-zero array (sub-normalized outcome of a failed projection).
    static FockArray zeros(std::vector<int> cutoffs);

    size_t num_modes() const { return cutoffs_.size(); }
    int cutoff(size_t mode) const { return cutoffs_[mode]; }
    /// Largest per-mode cutoff.
    int cutoff() const;
    const std::vector<int> &cutoffs() const { return cutoffs_; }
    size_t size() const { return amps_.size(); }
    size_t stride(size_t mode) const { return strides_[mode]; }

    size_t index(const std::vector<int> &photons) const;
    /// Photon number of `mode` at flat position `flat`.
    int photons_at(size_t flat, size_t mode) const { return (int)((flat / strides_[mode]) % (size_t)(cutoffs_[mode] + 1)); }

    cplx &at(const std::vector<int> &photons) { return amps_[index(photons)]; }
    cplx at(const std::vector<int> &photons) const { return amps_[index(photons)]; }
    cplx &operator[](size_t flat) { return amps_[flat]; }
    cplx operator[](size_t flat) const { return amps_[flat]; }
    std::vector<cplx> &data() { return amps_; }
    const std::vector<cplx> &data() const { return amps_; }

    double norm_squared() const;
    FockArray &operator*=(cplx s);

    /// |this> ⊗ |other>, with other's modes appended after this one's.
    FockArray tensor(const FockArray &other) const;
    /// Copy with `mode` re-truncated at `new_cutoff` (zero padding or hard truncation).
    FockArray with_cutoff(size_t mode, int new_cutoff) const;

   private:
    void init_strides();

    std::vector<int> cutoffs_;
    std::vector<size_t> strides_;
    std::vector<cplx> amps_;
};

/// Density operator on a truncated Fock space, same index order as FockArray.
class DensityOperator {
   public:
    DensityOperator(std::vector<int> cutoffs, Matrix matrix);

    static DensityOperator from_pure(const FockArray &psi);

    size_t num_modes() const { return cutoffs_.size(); }
    const std::vector<int> &cutoffs() const { return cutoffs_; }
    size_t dim() const { return (size_t)matrix_.rows(); }
    const Matrix &matrix() const { return matrix_; }

    double trace() const;
    DensityOperator normalized() const;

   private:
    std::vector<int> cutoffs_;
    Matrix matrix_;
};

/// Result of a projective Fock measurement: unnormalized post-measurement state
/// on the remaining modes and the outcome probability (its squared norm).
struct Projection {
    FockArray state;
    double probability;
};

FockArray apply_beam_splitter(const FockArray &state, ModePair modes, double theta);
FockArray apply_two_mode_squeezer(const FockArray &state, ModePair modes, double r);
/// Applies D(lam). If tail_mass is given it receives the norm lost above the cutoff;
/// a warning is raised when that exceeds 1e-10.
FockArray apply_displacement(const FockArray &state, size_t mode, double lam, double *tail_mass = nullptr);
/// Applies a linear map on one mode. `op` has cutoff(mode)+1 columns; its row
/// count sets the new cutoff of that mode.
FockArray apply_single_mode(const FockArray &state, size_t mode, const Matrix &op);

Projection project_fock(const FockArray &state, size_t mode, int n);
/// Contracts modes (i, j) with <ket| and removes them. ket is a two-mode array
/// whose mode 0 pairs with i and mode 1 with j.
FockArray project_two_modes(const FockArray &state, ModePair modes, const FockArray &ket);

DensityOperator partial_trace(const DensityOperator &rho, const std::vector<size_t> &keep);
/// Reduced density operator of a pure state, without forming |psi><psi|.
DensityOperator reduced_density(const FockArray &psi, const std::vector<size_t> &keep);

double von_neumann_entropy(const DensityOperator &rho);
/// Entropy in bits of a probability vector; tiny negatives are clipped.
double entropy_bits(const Eigen::VectorXd &eigenvalues);

DensityOperator thermal_state(double mean_photon, int cutoff);

double trace_distance(const DensityOperator &a, const DensityOperator &b);
/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2.
double fidelity(const DensityOperator &a, const DensityOperator &b);

/// Truncated ladder operators of dimension (cutoff+1).
Matrix annihilation(int cutoff);
Matrix creation(int cutoff);
/// exp(lam (a^dag - a)) restricted to [0, rows) x [0, cols), computed in a padded basis.
Matrix displacement_matrix(double lam, int rows, int cols);

}  // namespace cvr::fock

#endif
