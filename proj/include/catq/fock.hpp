#pragma once

#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "catq/errors.hpp"

namespace catq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kNormTol = 1e-10;      // unit-norm tolerance for states
inline constexpr double kHermTol = 1e-12;      // entrywise Hermiticity tolerance
inline constexpr double kTailTol = 1e-12;      // max allowed |c_{n_max}|^2
inline constexpr double kDualPathTol = 1e-8;   // agreement of independent fidelity routes
inline constexpr int kDefaultNmax = 64;

// Truncated number basis {|0>, ..., |n_max>}.
class FockSpace {
public:
    explicit FockSpace(int n_max = kDefaultNmax) : n_max_(n_max) {
        if (n_max_ < 1)
            throw ParameterError("FockSpace: n_max must be >= 1, got " + std::to_string(n_max_));
    }

    int n_max() const { return n_max_; }
    int dimension() const { return n_max_ + 1; }

    friend bool operator==(const FockSpace& a, const FockSpace& b) {
        return a.n_max_ == b.n_max_;
    }

private:
    int n_max_;
};

// Flat index for the two-mode product space: (n, m) <-> n*(n_max+1) + m.
class TwoModeIndex {
public:
    explicit TwoModeIndex(FockSpace space) : space_(space) {}

    int flat(int n, int m) const { return n * space_.dimension() + m; }
    std::pair<int, int> unflat(int index) const {
        return {index / space_.dimension(), index % space_.dimension()};
    }
    int dimension() const { return space_.dimension() * space_.dimension(); }
    const FockSpace& space() const { return space_; }

private:
    FockSpace space_;
};

// Complex amplitude vector over the truncated basis; one or two modes.
// Not forced to unit norm: intermediate unnormalized vectors are legitimate.
class FockVector {
public:
    FockVector(FockSpace space, Vector amplitudes, int modes = 1)
        : space_(space), modes_(modes), amps_(std::move(amplitudes)) {
        if (modes_ != 1 && modes_ != 2)
            throw ParameterError("FockVector: modes must be 1 or 2");
        const int want = modes_ == 1 ? space_.dimension()
                                     : space_.dimension() * space_.dimension();
        if (amps_.size() != want)
            throw ParameterError("FockVector: amplitude length " + std::to_string(amps_.size()) +
                                 " does not match space dimension " + std::to_string(want));
    }

    const FockSpace& space() const { return space_; }
    int modes() const { return modes_; }
    int size() const { return static_cast<int>(amps_.size()); }
    const Vector& amplitudes() const { return amps_; }
    Complex operator[](int i) const { return amps_[i]; }

    double norm() const { return amps_.norm(); }
    bool is_normalized(double tol = kNormTol) const {
        return std::abs(amps_.squaredNorm() - 1.0) <= tol;
    }

    FockVector normalized() const {
        const double n = norm();
        if (n == 0.0)
            throw ParameterError("FockVector: cannot normalize the zero vector");
        return FockVector(space_, amps_ / n, modes_);
    }

    // |c_{n_max}|^2 for a single mode; total mass on the boundary n = n_max or
    // m = n_max for two modes.
    double tail_mass() const {
        if (modes_ == 1) return std::norm(amps_[space_.n_max()]);
        const TwoModeIndex idx(space_);
        double mass = 0.0;
        const int top = space_.n_max();
        for (int m = 0; m <= top; ++m) mass += std::norm(amps_[idx.flat(top, m)]);
        for (int n = 0; n < top; ++n) mass += std::norm(amps_[idx.flat(n, top)]);
        return mass;
    }

private:
    FockSpace space_;
    int modes_;
    Vector amps_;
};

// Hermitian complex matrix on the truncated space (single- or two-mode).
// Hermiticity is checked at construction; positivity is a test-side property.
class DensityMatrix {
public:
    DensityMatrix(FockSpace space, Matrix entries, int modes = 1)
        : space_(space), modes_(modes), entries_(std::move(entries)) {
        if (modes_ != 1 && modes_ != 2)
            throw ParameterError("DensityMatrix: modes must be 1 or 2");
        const int want = modes_ == 1 ? space_.dimension()
                                     : space_.dimension() * space_.dimension();
        if (entries_.rows() != want || entries_.cols() != want)
            throw ParameterError("DensityMatrix: entries must be " + std::to_string(want) +
                                 "x" + std::to_string(want));
        const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
        if (herm > kHermTol)
            throw NumericError("DensityMatrix: not Hermitian, max defect " + std::to_string(herm));
    }

    const FockSpace& space() const { return space_; }
    int modes() const { return modes_; }
    int dimension() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }

    double trace_real() const { return entries_.trace().real(); }

private:
    FockSpace space_;
    int modes_;
    Matrix entries_;
};

struct LadderOperators {
    Matrix annihilation;  // <n-1|a|n> = sqrt(n)
    Matrix creation;      // adjoint of annihilation
    Matrix number;        // diag(0, 1, ..., n_max)
};

inline LadderOperators ladder_matrices(const FockSpace& space) {
    const int d = space.dimension();
    LadderOperators ops{Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d)};
    for (int n = 1; n < d; ++n)
        ops.annihilation(n - 1, n) = std::sqrt(static_cast<double>(n));
    ops.creation = ops.annihilation.adjoint();
    for (int n = 0; n < d; ++n)
        ops.number(n, n) = static_cast<double>(n);
    return ops;
}

// rho = |psi><psi| for a normalized psi.
inline DensityMatrix outer(const FockVector& psi) {
    if (!psi.is_normalized())
        throw ParameterError("outer: input state is not normalized, |norm^2 - 1| = " +
                             std::to_string(std::abs(psi.amplitudes().squaredNorm() - 1.0)));
    Matrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
    return DensityMatrix(psi.space(), std::move(rho), psi.modes());
}

// Re Tr(rho sigma); the imaginary residue must be negligible and is discarded.
inline double trace_product(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dimension() != sigma.dimension())
        throw ParameterError("trace_product: dimension mismatch " +
                             std::to_string(rho.dimension()) + " vs " +
                             std::to_string(sigma.dimension()));
    const Complex tr = (rho.entries() * sigma.entries()).trace();
    if (std::abs(tr.imag()) >= 1e-10)
        throw NumericError("trace_product: imaginary residue " + std::to_string(tr.imag()));
    return tr.real();
}

// Two-mode product state, c_{nm} = a_n b_m under the flat TwoModeIndex layout.
inline FockVector tensor(const FockVector& psiA, const FockVector& psiB) {
    if (psiA.modes() != 1 || psiB.modes() != 1)
        throw ParameterError("tensor: both factors must be single-mode");
    if (!(psiA.space() == psiB.space()))
        throw ParameterError("tensor: factors live on different spaces");
    const int d = psiA.space().dimension();
    const TwoModeIndex idx(psiA.space());
    Vector out(idx.dimension());
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m)
            out[idx.flat(n, m)] = psiA[n] * psiB[m];
    return FockVector(psiA.space(), std::move(out), 2);
}

} // namespace catq
