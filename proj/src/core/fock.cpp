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

#include "core/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "core/errors.hpp"

using namespace cvr;
using namespace cvr::fock;

namespace {

void check_mode(const FockArray &s, size_t mode) {
    if (mode >= s.num_modes()) {
        std::stringstream ss;
        ss.precision(12);
        ss << "mode index " << mode << " out of range for " << s.num_modes() << "-mode state";
        throw ArgumentError(ss.str());
    }
}

void check_pair(const FockArray &s, ModePair p) {
    check_mode(s, p.i);
    check_mode(s, p.j);
    if (p.i == p.j) {
        throw ArgumentError("mode pair must name two distinct modes");
    }
}

std::vector<int> without(const std::vector<int> &v, std::vector<size_t> drop) {
    std::sort(drop.begin(), drop.end());
    std::vector<int> out;
    for (size_t k = 0; k < v.size(); k++) {
        if (!std::binary_search(drop.begin(), drop.end(), k)) {
            out.push_back(v[k]);
        }
    }
    return out;
}

// Maps a flat index of `full` to the flat index of the array obtained by
// deleting the modes in `drop` (sorted).
size_t reduced_index(const FockArray &full, size_t flat, const std::vector<size_t> &drop,
                     const std::vector<size_t> &reduced_strides) {
    size_t out = 0;
    size_t r = 0;
    for (size_t k = 0; k < full.num_modes(); k++) {
        if (std::binary_search(drop.begin(), drop.end(), k)) {
            continue;
        }
        out += (size_t)full.photons_at(flat, k) * reduced_strides[r++];
    }
    return out;
}

std::vector<size_t> strides_of(const std::vector<int> &cutoffs) {
    std::vector<size_t> s(cutoffs.size());
    size_t acc = 1;
    for (size_t k = cutoffs.size(); k-- > 0;) {
        s[k] = acc;
        acc *= (size_t)(cutoffs[k] + 1);
    }
    return s;
}

long double log_factorial(int n) {
    return std::lgamma((long double)n + 1);
}

// Pascal triangle up to row `n`, in long double (exact through row 60).
std::vector<std::vector<long double>> binomials(int n) {
    std::vector<std::vector<long double>> t((size_t)n + 1);
    for (int r = 0; r <= n; r++) {
        t[(size_t)r].assign((size_t)r + 1, 1.0L);
        for (int k = 1; k < r; k++) {
            t[(size_t)r][(size_t)k] = t[(size_t)r - 1][(size_t)k - 1] + t[(size_t)r - 1][(size_t)k];
        }
    }
    return t;
}

// Beam splitter on one total-photon sector: element (k, n) is the amplitude
// of |k, N-k> in U|n, N-n>, from the binomial expansion of the transformed
// creation operators.
Eigen::MatrixXd beam_splitter_sector(int total, long double c, long double s,
                                     const std::vector<std::vector<long double>> &binom) {
    std::vector<long double> cp((size_t)total + 1, 1.0L), sp((size_t)total + 1, 1.0L);
    for (int e = 1; e <= total; e++) {
        cp[(size_t)e] = cp[(size_t)e - 1] * c;
        sp[(size_t)e] = sp[(size_t)e - 1] * s;
    }
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(total + 1, total + 1);
    for (int n = 0; n <= total; n++) {
        int m = total - n;
        for (int k = 0; k <= total; k++) {
            long double acc = 0;
            for (int p = std::max(0, k - m); p <= std::min(n, k); p++) {
                int q = k - p;
                long double term = binom[(size_t)n][(size_t)p] * binom[(size_t)m][(size_t)q] *
                                   cp[(size_t)(p + m - q)] * sp[(size_t)(n - p + q)];
                acc += (q % 2 == 0) ? term : -term;
            }
            long double norm =
                std::exp(0.5L * (log_factorial(k) + log_factorial(total - k) - log_factorial(n) - log_factorial(m)));
            out(k, n) = (double)(acc * norm);
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// FockArray

FockArray::FockArray(size_t num_modes, int cutoff) : FockArray(std::vector<int>(num_modes, cutoff)) {
}

FockArray::FockArray(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
    for (int c : cutoffs_) {
        if (c < 0) {
            throw ArgumentError("cutoff must be non-negative");
        }
    }
    init_strides();
    amps_[0] = 1.0;
}

void FockArray::init_strides() {
    strides_ = strides_of(cutoffs_);
    size_t total = 1;
    for (int c : cutoffs_) {
        total *= (size_t)(c + 1);
    }
    amps_.assign(total, cplx(0));
}

FockArray FockArray::basis(const std::vector<int> &photons, int cutoff) {
    return basis(photons, std::vector<int>(photons.size(), cutoff));
}

FockArray FockArray::basis(const std::vector<int> &photons, std::vector<int> cutoffs) {
    FockArray out = zeros(std::move(cutoffs));
    out.at(photons) = 1.0;
    return out;
}

FockArray FockArray::zeros(std::vector<int> cutoffs) {
    FockArray out(std::move(cutoffs));
    out.amps_[0] = 0.0;
    return out;
}

int FockArray::cutoff() const {
    return cutoffs_.empty() ? 0 : *std::max_element(cutoffs_.begin(), cutoffs_.end());
}

size_t FockArray::index(const std::vector<int> &photons) const {
    if (photons.size() != cutoffs_.size()) {
        throw ArgumentError("photon-number tuple has wrong length");
    }
    size_t flat = 0;
    for (size_t k = 0; k < photons.size(); k++) {
        if (photons[k] < 0 || photons[k] > cutoffs_[k]) {
            throw ArgumentError("photon number outside truncated support");
        }
        flat += (size_t)photons[k] * strides_[k];
    }
    return flat;
}

double FockArray::norm_squared() const {
    double acc = 0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return acc;
}

FockArray &FockArray::operator*=(cplx s) {
    for (auto &a : amps_) {
        a *= s;
    }
    return *this;
}

FockArray FockArray::tensor(const FockArray &other) const {
    std::vector<int> cut = cutoffs_;
    cut.insert(cut.end(), other.cutoffs_.begin(), other.cutoffs_.end());
    FockArray out = zeros(cut);
    size_t n2 = other.size();
    for (size_t a = 0; a < size(); a++) {
        if (amps_[a] == cplx(0)) {
            continue;
        }
        for (size_t b = 0; b < n2; b++) {
            out.amps_[a * n2 + b] = amps_[a] * other.amps_[b];
        }
    }
    return out;
}

FockArray FockArray::with_cutoff(size_t mode, int new_cutoff) const {
    check_mode(*this, mode);
    if (new_cutoff < 0) {
        throw ArgumentError("cutoff must be non-negative");
    }
    std::vector<int> cut = cutoffs_;
    cut[mode] = new_cutoff;
    FockArray out = zeros(cut);
    for (size_t f = 0; f < size(); f++) {
        if (amps_[f] == cplx(0)) {
            continue;
        }
        int n = photons_at(f, mode);
        if (n > new_cutoff) {
            continue;
        }
        size_t g = 0;
        for (size_t k = 0; k < num_modes(); k++) {
            g += (size_t)photons_at(f, k) * out.strides_[k];
        }
        out.amps_[g] = amps_[f];
    }
    return out;
}

// ---------------------------------------------------------------------------
// DensityOperator

DensityOperator::DensityOperator(std::vector<int> cutoffs, Matrix matrix)
    : cutoffs_(std::move(cutoffs)), matrix_(std::move(matrix)) {
    size_t d = 1;
    for (int c : cutoffs_) {
        d *= (size_t)(c + 1);
    }
    if (matrix_.rows() != (Eigen::Index)d || matrix_.cols() != (Eigen::Index)d) {
        throw ArgumentError("density matrix side does not match the mode cutoffs");
    }
}

DensityOperator DensityOperator::from_pure(const FockArray &psi) {
    Eigen::Map<const Eigen::VectorXcd> v(psi.data().data(), (Eigen::Index)psi.size());
    return DensityOperator(psi.cutoffs(), v * v.adjoint());
}

double DensityOperator::trace() const {
    return matrix_.trace().real();
}

DensityOperator DensityOperator::normalized() const {
    double tr = trace();
    if (!(tr > 0)) {
        throw DegenerateError("cannot normalize a density operator with zero trace");
    }
    return DensityOperator(cutoffs_, matrix_ / tr);
}

// ---------------------------------------------------------------------------
// Unitaries

FockArray cvr::fock::apply_beam_splitter(const FockArray &state, ModePair modes, double theta) {
    check_pair(state, modes);
    if (!std::isfinite(theta)) {
        throw ArgumentError("beam splitter angle must be finite");
    }
    int ci = state.cutoff(modes.i);
    int cj = state.cutoff(modes.j);
    long double c = std::cos((long double)theta);
    long double s = std::sin((long double)theta);
    auto binom = binomials(ci + cj);
    std::vector<Eigen::MatrixXd> sectors((size_t)(ci + cj + 1));

    FockArray out = FockArray::zeros(state.cutoffs());
    size_t si = state.stride(modes.i);
    size_t sj = state.stride(modes.j);
    for (size_t f = 0; f < state.size(); f++) {
        cplx amp = state[f];
        if (amp == cplx(0)) {
            continue;
        }
        int ni = state.photons_at(f, modes.i);
        int nj = state.photons_at(f, modes.j);
        int total = ni + nj;
        size_t base = f - (size_t)ni * si - (size_t)nj * sj;
        auto &m = sectors[(size_t)total];
        if (m.size() == 0) {
            m = beam_splitter_sector(total, c, s, binom);
        }
        for (int k = std::max(0, total - cj); k <= std::min(ci, total); k++) {
            out[base + (size_t)k * si + (size_t)(total - k) * sj] += m(k, ni) * amp;
        }
    }
    return out;
}

FockArray cvr::fock::apply_two_mode_squeezer(const FockArray &state, ModePair modes, double r) {
    check_pair(state, modes);
    if (!(r >= 0) || !std::isfinite(r)) {
        throw ArgumentError("squeezing magnitude must be finite and non-negative");
    }
    int ci = state.cutoff(modes.i);
    int cj = state.cutoff(modes.j);
    // exp(r (a_i^dag a_j^dag - a_i a_j)) conserves d = n_i - n_j. For each d the
    // block is indexed by m = min photon offset: (n_i, n_j) = (m + max(d,0), m + max(-d,0)).
    std::vector<Eigen::MatrixXd> blocks((size_t)(ci + cj + 1));
    for (int d = -cj; d <= ci; d++) {
        int oi = std::max(d, 0);
        int oj = std::max(-d, 0);
        int len = std::min(ci - oi, cj - oj) + 1;
        Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(len, len);
        for (int m = 0; m + 1 < len; m++) {
            double amp = r * std::sqrt((double)(m + oi + 1) * (double)(m + oj + 1));
            gen(m + 1, m) = amp;
            gen(m, m + 1) = -amp;
        }
        blocks[(size_t)(d + cj)] = gen.exp();
    }

    FockArray out = FockArray::zeros(state.cutoffs());
    size_t si = state.stride(modes.i);
    size_t sj = state.stride(modes.j);
    for (size_t f = 0; f < state.size(); f++) {
        cplx amp = state[f];
        if (amp == cplx(0)) {
            continue;
        }
        int ni = state.photons_at(f, modes.i);
        int nj = state.photons_at(f, modes.j);
        int d = ni - nj;
        int oi = std::max(d, 0);
        int oj = std::max(-d, 0);
        int m = ni - oi;
        size_t base = f - (size_t)ni * si - (size_t)nj * sj;
        const auto &e = blocks[(size_t)(d + cj)];
        for (Eigen::Index k = 0; k < e.rows(); k++) {
            out[base + (size_t)(k + oi) * si + (size_t)(k + oj) * sj] += e(k, m) * amp;
        }
    }
    return out;
}

Matrix cvr::fock::annihilation(int cutoff) {
    Matrix a = Matrix::Zero(cutoff + 1, cutoff + 1);
    for (int n = 1; n <= cutoff; n++) {
        a(n - 1, n) = std::sqrt((double)n);
    }
    return a;
}

Matrix cvr::fock::creation(int cutoff) {
    return annihilation(cutoff).adjoint();
}

Matrix cvr::fock::displacement_matrix(double lam, int rows, int cols) {
    if (!std::isfinite(lam)) {
        throw ArgumentError("displacement amplitude must be finite");
    }
    // The truncated generator is exact only far below its edge, so exponentiate
    // in a basis padded well past the coherent-state spread.
    int pad = 40 + (int)std::ceil(4 * lam * lam + 10 * std::abs(lam));
    int dim = std::max(rows, cols) + pad;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; n++) {
        double v = lam * std::sqrt((double)(n + 1));
        gen(n + 1, n) = v;
        gen(n, n + 1) = -v;
    }
    Eigen::MatrixXd e = gen.exp();
    return e.topLeftCorner(rows, cols).cast<cplx>();
}

FockArray cvr::fock::apply_displacement(const FockArray &state, size_t mode, double lam, double *tail_mass) {
    check_mode(state, mode);
    int c = state.cutoff(mode);
    if (lam == 0) {
        if (tail_mass) {
            *tail_mass = 0;
        }
        return state;
    }
    int wide = c + 40 + (int)std::ceil(4 * lam * lam + 10 * std::abs(lam));
    FockArray spread = apply_single_mode(state, mode, displacement_matrix(lam, wide + 1, c + 1));
    double total = spread.norm_squared();
    FockArray out = spread.with_cutoff(mode, c);
    double tail = std::max(0.0, total - out.norm_squared());
    if (tail_mass) {
        *tail_mass = tail;
    }
    if (tail > 1e-10) {
        std::stringstream ss;
        ss.precision(12);
        ss << "displacement by " << lam << " leaks tail mass " << tail << " above cutoff " << c;
        warn(ss.str());
    }
    return out;
}

FockArray cvr::fock::apply_single_mode(const FockArray &state, size_t mode, const Matrix &op) {
    check_mode(state, mode);
    int c = state.cutoff(mode);
    if (op.cols() != c + 1 || op.rows() < 1) {
        throw ArgumentError("single-mode operator has the wrong number of columns");
    }
    std::vector<int> cut = state.cutoffs();
    cut[mode] = (int)op.rows() - 1;
    FockArray out = FockArray::zeros(cut);

    size_t inner = state.stride(mode);
    size_t outer = state.size() / (inner * (size_t)(c + 1));
    size_t rows = (size_t)op.rows();
    for (size_t o = 0; o < outer; o++) {
        for (size_t in = 0; in < inner; in++) {
            for (int n = 0; n <= c; n++) {
                cplx amp = state[(o * (size_t)(c + 1) + (size_t)n) * inner + in];
                if (amp == cplx(0)) {
                    continue;
                }
                for (size_t k = 0; k < rows; k++) {
                    out[(o * rows + k) * inner + in] += op((Eigen::Index)k, n) * amp;
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Measurements and reductions

Projection cvr::fock::project_fock(const FockArray &state, size_t mode, int n) {
    check_mode(state, mode);
    if (n < 0 || n > state.cutoff(mode)) {
        throw ArgumentError("projection photon number outside truncated support");
    }
    std::vector<int> cut = without(state.cutoffs(), {mode});
    FockArray out = FockArray::zeros(cut);
    size_t inner = state.stride(mode);
    size_t c1 = (size_t)state.cutoff(mode) + 1;
    size_t outer = state.size() / (inner * c1);
    for (size_t o = 0; o < outer; o++) {
        for (size_t in = 0; in < inner; in++) {
            out[o * inner + in] = state[(o * c1 + (size_t)n) * inner + in];
        }
    }
    double p = out.norm_squared();
    return {std::move(out), p};
}

FockArray cvr::fock::project_two_modes(const FockArray &state, ModePair modes, const FockArray &ket) {
    check_pair(state, modes);
    if (ket.num_modes() != 2) {
        throw ArgumentError("projection ket must be a two-mode array");
    }
    std::vector<size_t> drop = {modes.i, modes.j};
    std::sort(drop.begin(), drop.end());
    std::vector<int> cut = without(state.cutoffs(), drop);
    FockArray out = FockArray::zeros(cut);
    std::vector<size_t> rs = strides_of(cut);
    for (size_t f = 0; f < state.size(); f++) {
        cplx amp = state[f];
        if (amp == cplx(0)) {
            continue;
        }
        int a = state.photons_at(f, modes.i);
        int b = state.photons_at(f, modes.j);
        if (a > ket.cutoff(0) || b > ket.cutoff(1)) {
            continue;
        }
        cplx w = std::conj(ket[(size_t)a * ket.stride(0) + (size_t)b]);
        if (w == cplx(0)) {
            continue;
        }
        out[reduced_index(state, f, drop, rs)] += w * amp;
    }
    return out;
}

DensityOperator cvr::fock::reduced_density(const FockArray &psi, const std::vector<size_t> &keep) {
    std::vector<size_t> k = keep;
    std::sort(k.begin(), k.end());
    if (k.empty() || std::adjacent_find(k.begin(), k.end()) != k.end() || k.back() >= psi.num_modes()) {
        throw ArgumentError("invalid mode subset to keep");
    }
    std::vector<size_t> drop;
    for (size_t m = 0; m < psi.num_modes(); m++) {
        if (!std::binary_search(k.begin(), k.end(), m)) {
            drop.push_back(m);
        }
    }
    std::vector<int> keep_cut;
    for (size_t m : k) {
        keep_cut.push_back(psi.cutoff(m));
    }
    std::vector<int> drop_cut = without(psi.cutoffs(), k);
    std::vector<size_t> ks = strides_of(keep_cut);
    std::vector<size_t> ds = strides_of(drop_cut);
    size_t dk = 1, dd = 1;
    for (int c : keep_cut) {
        dk *= (size_t)(c + 1);
    }
    for (int c : drop_cut) {
        dd *= (size_t)(c + 1);
    }
    Matrix m = Matrix::Zero((Eigen::Index)dk, (Eigen::Index)dd);
    for (size_t f = 0; f < psi.size(); f++) {
        if (psi[f] == cplx(0)) {
            continue;
        }
        m((Eigen::Index)reduced_index(psi, f, drop, ks), (Eigen::Index)reduced_index(psi, f, k, ds)) = psi[f];
    }
    return DensityOperator(keep_cut, m * m.adjoint());
}

DensityOperator cvr::fock::partial_trace(const DensityOperator &rho, const std::vector<size_t> &keep) {
    std::vector<size_t> k = keep;
    std::sort(k.begin(), k.end());
    if (k.empty() || std::adjacent_find(k.begin(), k.end()) != k.end() || k.back() >= rho.num_modes()) {
        throw ArgumentError("invalid mode subset to keep");
    }
    std::vector<size_t> drop;
    for (size_t m = 0; m < rho.num_modes(); m++) {
        if (!std::binary_search(k.begin(), k.end(), m)) {
            drop.push_back(m);
        }
    }
    std::vector<int> keep_cut;
    for (size_t m : k) {
        keep_cut.push_back(rho.cutoffs()[m]);
    }
    std::vector<int> drop_cut = without(rho.cutoffs(), k);
    std::vector<size_t> ks = strides_of(keep_cut);
    std::vector<size_t> ds = strides_of(drop_cut);
    size_t dk = 1, dd = 1;
    for (int c : keep_cut) {
        dk *= (size_t)(c + 1);
    }
    for (int c : drop_cut) {
        dd *= (size_t)(c + 1);
    }

    // Full index of (kept multi-index a, dropped multi-index r).
    FockArray shape = FockArray::zeros(rho.cutoffs());
    std::vector<size_t> full(dk * dd);
    for (size_t f = 0; f < shape.size(); f++) {
        full[reduced_index(shape, f, drop, ks) * dd + reduced_index(shape, f, k, ds)] = f;
    }
    Matrix out = Matrix::Zero((Eigen::Index)dk, (Eigen::Index)dk);
    const Matrix &m = rho.matrix();
    for (size_t r = 0; r < dd; r++) {
        for (size_t a = 0; a < dk; a++) {
            for (size_t b = 0; b < dk; b++) {
                out((Eigen::Index)a, (Eigen::Index)b) += m((Eigen::Index)full[a * dd + r], (Eigen::Index)full[b * dd + r]);
            }
        }
    }
    return DensityOperator(keep_cut, out);
}

// ---------------------------------------------------------------------------
// Entropies and distances

double cvr::fock::entropy_bits(const Eigen::VectorXd &eigenvalues) {
    double h = 0;
    for (Eigen::Index k = 0; k < eigenvalues.size(); k++) {
        double v = eigenvalues[k];
        if (v < -1e-9) {
            std::stringstream ss;
            ss.precision(12);
            ss << "density operator has eigenvalue " << v << " below -1e-9";
            throw NumericalError(ss.str());
        }
        if (v > 0) {
            h -= v * std::log2(v);
        }
    }
    return h;
}

double cvr::fock::von_neumann_entropy(const DensityOperator &rho) {
    const Matrix &m = rho.matrix();
    if (m.imag().cwiseAbs().maxCoeff() == 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real(), Eigen::EigenvaluesOnly);
        return entropy_bits(es.eigenvalues());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return entropy_bits(es.eigenvalues());
}

DensityOperator cvr::fock::thermal_state(double mean_photon, int cutoff) {
    if (!(mean_photon >= 0) || !std::isfinite(mean_photon)) {
        throw ArgumentError("mean photon number must be finite and non-negative");
    }
    double x = mean_photon / (mean_photon + 1);
    Eigen::VectorXd p(cutoff + 1);
    double w = 1;
    for (int n = 0; n <= cutoff; n++) {
        p[n] = w;
        w *= x;
    }
    p /= p.sum();
    return DensityOperator({cutoff}, p.cast<cplx>().asDiagonal().toDenseMatrix());
}

double cvr::fock::trace_distance(const DensityOperator &a, const DensityOperator &b) {
    if (a.dim() != b.dim()) {
        throw ArgumentError("trace distance needs operators of equal dimension");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double cvr::fock::fidelity(const DensityOperator &a, const DensityOperator &b) {
    if (a.dim() != b.dim()) {
        throw ArgumentError("fidelity needs operators of equal dimension");
    }
    // Round-off eigenvalues would contribute O(sqrt(eps)) after the square root.
    auto clipped_sqrt = [](Eigen::VectorXd ev) {
        double floor = 1e-14 * std::max(1.0, ev.cwiseAbs().maxCoeff());
        return ev.unaryExpr([floor](double v) { return v > floor ? std::sqrt(v) : 0.0; }).eval();
    };
    Eigen::SelfAdjointEigenSolver<Matrix> ea(a.matrix());
    Eigen::VectorXd s = clipped_sqrt(ea.eigenvalues());
    Matrix root = ea.eigenvectors() * s.cast<cplx>().asDiagonal() * ea.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> em(root * b.matrix() * root, Eigen::EigenvaluesOnly);
    double f = clipped_sqrt(em.eigenvalues()).sum();
    return f * f;
}
