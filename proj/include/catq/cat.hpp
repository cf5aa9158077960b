#pragma once

#include <cmath>

#include "catq/deformation.hpp"
#include "catq/fock.hpp"

namespace catq {

// The encoded qubit: |0bar> = even cat, |1bar> = odd cat, with the analytic
// normalizations N (single cat), N+ and N- (superpositions).
class LogicalBasis {
public:
    LogicalBasis(double zeta, DeformationSpec spec, FockVector ket0, FockVector ket1,
                 double norm_single, double norm_plus, double norm_minus)
        : zeta_(zeta), spec_(spec), ket0_(std::move(ket0)), ket1_(std::move(ket1)),
          norm_single_(norm_single), norm_plus_(norm_plus), norm_minus_(norm_minus) {}

    double zeta() const { return zeta_; }
    const DeformationSpec& spec() const { return spec_; }
    const FockSpace& space() const { return ket0_.space(); }
    const FockVector& ket0() const { return ket0_; }
    const FockVector& ket1() const { return ket1_; }
    double norm_single() const { return norm_single_; }
    double norm_plus() const { return norm_plus_; }
    double norm_minus() const { return norm_minus_; }

private:
    double zeta_;
    DeformationSpec spec_;
    FockVector ket0_;
    FockVector ket1_;
    double norm_single_;
    double norm_plus_;
    double norm_minus_;
};

struct CatDiagnostics {
    double delta = 0.0;       // relative mismatch of N+ and N-
    double separation = 0.0;  // <zeta,f|(a + a^dag)|zeta,f>
};

// Even/odd cats are carved out of the single-cat coefficients by zeroing the
// opposite parity and renormalizing: parity is exact by construction, with no
// cancellation between |zeta,f> and |-zeta,f>.
inline LogicalBasis build_logical_basis(double zeta, const DeformationSpec& spec,
                                        const FockSpace& space) {
    if (zeta == 0.0)
        throw ParameterError("build_logical_basis: zeta must be nonzero (odd cat vanishes)");
    require_valid(spec, space);

    const FockVector cat = coherent_coefficients(zeta, spec, space);
    const int d = space.dimension();

    Vector even = Vector::Zero(d);
    Vector odd = Vector::Zero(d);
    double even_mass = 0.0;
    double odd_mass = 0.0;
    for (int n = 0; n < d; ++n) {
        if (n % 2 == 0) {
            even[n] = cat[n];
            even_mass += std::norm(cat[n]);
        } else {
            odd[n] = cat[n];
            odd_mass += std::norm(cat[n]);
        }
    }
    even /= std::sqrt(even_mass);
    odd /= std::sqrt(odd_mass);

    // Analytic normalizations from the deformed exponential, truncated at the
    // same n_max as the state.
    const double expf_pos = detail::exp_f_partial(zeta * zeta, spec, space.n_max());
    const double expf_neg = detail::exp_f_partial(-zeta * zeta, spec, space.n_max());
    const double n_single = 1.0 / std::sqrt(expf_pos);
    const double overlap = n_single * n_single * expf_neg;  // <-zeta,f|zeta,f>
    const double n_plus = 1.0 / std::sqrt(2.0 + 2.0 * overlap);
    const double n_minus = 1.0 / std::sqrt(2.0 - 2.0 * overlap);

    // Cross-check against the numerical norms: || |z,f> +- |-z,f> || is
    // 2 sqrt(parity mass) of the normalized cat.
    const double n_plus_num = 1.0 / (2.0 * std::sqrt(even_mass));
    const double n_minus_num = 1.0 / (2.0 * std::sqrt(odd_mass));
    const double f0 = f_value(spec, 0);
    const double n_single_num = std::abs(cat[0]) * std::sqrt(f0);
    if (std::abs(n_plus - n_plus_num) > 1e-10 || std::abs(n_minus - n_minus_num) > 1e-10 ||
        std::abs(n_single - n_single_num) > 1e-10)
        throw NumericError("build_logical_basis: analytic normalizations disagree with "
                           "numerical norms beyond 1e-10");

    return LogicalBasis(zeta, spec, FockVector(space, std::move(even)),
                        FockVector(space, std::move(odd)), n_single, n_plus, n_minus);
}

inline double delta(const LogicalBasis& basis) {
    const double np = basis.norm_plus();
    const double nm = basis.norm_minus();
    return std::abs(np - nm) / std::min(np, nm);
}

// Separation d computed two independent ways: the quadratic form with the
// undeformed a + a^dag matrix, and the explicit coefficient series built from
// the log-domain factorial table. Both must agree within 1e-10.
inline double separation_d(double zeta, const DeformationSpec& spec, const FockSpace& space) {
    require_valid(spec, space);
    if (zeta == 0.0) return 0.0;

    // Route 1: matrix expectation value on the numerically normalized state.
    const FockVector cat = coherent_coefficients(zeta, spec, space);
    const LadderOperators ops = ladder_matrices(space);
    const Matrix x_op = ops.annihilation + ops.creation;
    const double direct = (cat.amplitudes().adjoint() * x_op * cat.amplitudes())(0).real();

    // Route 2: the coefficient series with analytic normalization N^2.
    const DeformedFactorialTable table = deformed_factorial_log(spec, space);
    const double ln_abs_zeta = std::log(std::abs(zeta));
    const double sign = zeta > 0.0 ? 1.0 : -1.0;  // every term carries zeta^(2n+-1)
    const double n_sq = 1.0 / detail::exp_f_partial(zeta * zeta, spec, space.n_max());
    double series = 0.0;
    for (int n = 0; n <= space.n_max(); ++n) {
        // sqrt(n) zeta^(2n-1) / sqrt([n]! [n-1]!) term
        if (n >= 1)
            series += std::sqrt(static_cast<double>(n)) *
                      std::exp((2 * n - 1) * ln_abs_zeta -
                               0.5 * (table.log_at(n) + table.log_at(n - 1)));
        // sqrt(n+1) zeta^(2n+1) / sqrt([n]! [n+1]!) term, truncated at n_max
        if (n + 1 <= space.n_max())
            series += std::sqrt(static_cast<double>(n + 1)) *
                      std::exp((2 * n + 1) * ln_abs_zeta -
                               0.5 * (table.log_at(n) + table.log_at(n + 1)));
    }
    series *= sign * n_sq;

    if (std::abs(direct - series) > 1e-10)
        throw NumericError("separation_d: matrix and series routes disagree: " +
                           std::to_string(direct) + " vs " + std::to_string(series));
    return direct;
}

inline CatDiagnostics cat_diagnostics(double zeta, const DeformationSpec& spec,
                                      const FockSpace& space) {
    const LogicalBasis basis = build_logical_basis(zeta, spec, space);
    return {delta(basis), separation_d(zeta, spec, space)};
}

} // namespace catq
