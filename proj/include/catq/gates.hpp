#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "catq/cat.hpp"
#include "catq/deformation.hpp"
#include "catq/fock.hpp"

namespace catq {

namespace detail {

// exp(M) by scaled Taylor summation: halve until the max-norm is <= 0.5,
// sum until the last term's max-norm drops below 1e-16, square back up.
inline Matrix matrix_exp_taylor(const Matrix& m) {
    const int d = static_cast<int>(m.rows());
    int squarings = 0;
    double norm = m.cwiseAbs().maxCoeff();
    while (norm > 0.5) {
        norm *= 0.5;
        ++squarings;
    }
    const Matrix scaled = m / std::pow(2.0, squarings);

    Matrix result = Matrix::Identity(d, d);
    Matrix term = Matrix::Identity(d, d);
    constexpr int kMaxTerms = 200;
    int k = 1;
    for (; k <= kMaxTerms; ++k) {
        term = (term * scaled) / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-16) break;
    }
    if (k > kMaxTerms)
        throw NumericError("matrix_exp_taylor: series did not converge");

    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

} // namespace detail

// Driving parameters for H_R = beta (A^dag + A); theta = 2 zeta beta t is the
// nominal logical rotation angle. beta is real throughout.
class RotationParams {
public:
    RotationParams(double beta, double t, double zeta)
        : beta_(beta), t_(t), theta_(2.0 * zeta * beta * t) {
        if (!(t >= 0.0))
            throw ParameterError("RotationParams: t must be >= 0");
    }

    static RotationParams from_theta(double theta, double zeta) {
        if (zeta == 0.0)
            throw ParameterError("RotationParams: zeta must be nonzero");
        return RotationParams(theta / (2.0 * zeta), 1.0, zeta);
    }

    double beta() const { return beta_; }
    double t() const { return t_; }
    double theta() const { return theta_; }

private:
    double beta_;
    double t_;
    double theta_;
};

// Split-operator propagator exp(-i beta t A^dag) exp(-i beta t A).
// First-order accurate in |beta| t and not exactly unitary; kept as the
// measurable counterpart of rotation_exact.
inline Matrix rotation_split(const RotationParams& params, const DeformationSpec& spec,
                             const FockSpace& space) {
    const Matrix a = deformed_annihilation(spec, space);
    const Complex factor(0.0, -params.beta() * params.t());
    return detail::matrix_exp_taylor(factor * a.adjoint()) *
           detail::matrix_exp_taylor(factor * a);
}

// Exact propagator exp(-i H_R t) through the Hermitian eigendecomposition of
// H_R = beta (A^dag + A); unitary to numerical precision.
inline Matrix rotation_exact(const RotationParams& params, const DeformationSpec& spec,
                             const FockSpace& space) {
    const Matrix a = deformed_annihilation(spec, space);
    const Matrix h = params.beta() * (a.adjoint() + a);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw NumericError("rotation_exact: eigendecomposition failed");
    const auto& w = solver.eigenvalues();
    const Matrix& v = solver.eigenvectors();
    Vector phases(w.size());
    for (int i = 0; i < w.size(); ++i)
        phases[i] = std::exp(Complex(0.0, -w[i] * params.t()));
    return v * phases.asDiagonal() * v.adjoint();
}

// The 2x2 matrix of U restricted to the logical subspace, M_ij = <ibar|U|jbar>,
// plus the population that leaked outside span{|0bar>, |1bar>}.
struct LogicalAction {
    Eigen::Matrix2cd matrix;
    double leakage = 0.0;
};

inline LogicalAction logical_action(const Matrix& u, const LogicalBasis& basis) {
    if (u.rows() != basis.space().dimension() || u.cols() != basis.space().dimension())
        throw ParameterError("logical_action: operator does not match the basis space");
    const Vector& k0 = basis.ket0().amplitudes();
    const Vector& k1 = basis.ket1().amplitudes();
    LogicalAction action;
    const Vector u0 = u * k0;
    const Vector u1 = u * k1;
    action.matrix(0, 0) = k0.dot(u0);
    action.matrix(0, 1) = k0.dot(u1);
    action.matrix(1, 0) = k1.dot(u0);
    action.matrix(1, 1) = k1.dot(u1);
    action.leakage = 1.0 - action.matrix.cwiseAbs2().sum() / 2.0;
    return action;
}

struct CpsParams {
    double chi_t = M_PI;  // dimensionless interaction time chi*t
};

// Conditional phase shift on a two-mode state: the (n, m) amplitude picks up
// exp(-i chi_t n m). Exact diagonal unitary.
inline FockVector cps_apply(const FockVector& state, const CpsParams& params) {
    if (state.modes() != 2)
        throw ParameterError("cps_apply: state must be two-mode");
    const TwoModeIndex idx(state.space());
    Vector out = state.amplitudes();
    for (int n = 0; n <= state.space().n_max(); ++n)
        for (int m = 0; m <= state.space().n_max(); ++m)
            out[idx.flat(n, m)] *=
                std::exp(Complex(0.0, -params.chi_t * static_cast<double>(n) * m));
    return FockVector(state.space(), std::move(out), 2);
}

// <xbar ybar| CPS |xbar ybar> for the four logical product states, in the
// order 00, 10, 01, 11. max_residual measures how far any output strays from
// phase * input, i.e. the gate's leakage out of the product state.
struct CpsTruthTable {
    std::array<Complex, 4> phases{};
    double max_residual = 0.0;
};

inline CpsTruthTable cps_truth_table(const LogicalBasis& basis, const CpsParams& params = {}) {
    const std::array<std::pair<int, int>, 4> pairs{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
    CpsTruthTable table;
    for (size_t i = 0; i < pairs.size(); ++i) {
        const FockVector& a = pairs[i].first == 0 ? basis.ket0() : basis.ket1();
        const FockVector& b = pairs[i].second == 0 ? basis.ket0() : basis.ket1();
        const FockVector input = tensor(a, b);
        const FockVector output = cps_apply(input, params);
        const Complex phase = input.amplitudes().dot(output.amplitudes());
        table.phases[i] = phase;
        const double residual = (output.amplitudes() - phase * input.amplitudes()).norm();
        table.max_residual = std::max(table.max_residual, residual);
    }
    return table;
}

} // namespace catq
