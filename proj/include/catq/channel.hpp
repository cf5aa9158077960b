#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "catq/cat.hpp"
#include "catq/deformation.hpp"
#include "catq/fock.hpp"
#include "catq/parallel.hpp"

namespace catq {

// Dimensionless time gamma*t and the survival parameter eta = e^{-gamma t}.
class DampingPoint {
public:
    static DampingPoint from_gamma_t(double gamma_t) {
        if (!(gamma_t >= 0.0))
            throw ParameterError("DampingPoint: gamma_t must be >= 0");
        return DampingPoint(gamma_t, std::exp(-gamma_t));
    }

    double gamma_t() const { return gamma_t_; }
    double eta() const { return eta_; }

private:
    DampingPoint(double gamma_t, double eta) : gamma_t_(gamma_t), eta_(eta) {}

    double gamma_t_;
    double eta_;
};

namespace detail {

inline double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// b^(e/2) with the e = 0 case pinned to 1 so eta in {0, 1} stays exact.
inline double pow_half(double base, int e) {
    return e == 0 ? 1.0 : std::pow(base, 0.5 * e);
}

} // namespace detail

// The damping family: operator k removes exactly k quanta,
// <n-k| Y_k |n> = sqrt(C(n,k)) eta^{(n-k)/2} (1-eta)^{k/2}.
class KrausSet {
public:
    KrausSet(double eta, std::vector<Matrix> operators)
        : eta_(eta), ops_(std::move(operators)) {}

    double eta() const { return eta_; }
    const std::vector<Matrix>& operators() const { return ops_; }
    int dimension() const { return static_cast<int>(ops_.front().rows()); }

    // max-norm of sum_k Y_k^dag Y_k - I
    double completeness_defect() const {
        const int d = dimension();
        Matrix sum = Matrix::Zero(d, d);
        for (const Matrix& k : ops_) sum += k.adjoint() * k;
        return (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    }

private:
    double eta_;
    std::vector<Matrix> ops_;
};

inline KrausSet kraus_set(double eta, const FockSpace& space) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw ParameterError("kraus_set: eta must lie in [0, 1], got " + std::to_string(eta));
    const int d = space.dimension();
    std::vector<Matrix> ops;
    ops.reserve(static_cast<size_t>(d));
    for (int k = 0; k <= space.n_max(); ++k) {
        Matrix op = Matrix::Zero(d, d);
        for (int n = k; n <= space.n_max(); ++n)
            op(n - k, n) = std::exp(0.5 * detail::log_binomial(n, k)) *
                           detail::pow_half(eta, n - k) * detail::pow_half(1.0 - eta, k);
        ops.push_back(std::move(op));
    }
    return KrausSet(eta, std::move(ops));
}

// rho(t) = sum_k Y_k rho(0) Y_k^dag. Trace preservation is re-checked because
// it is the one channel property truncation could silently break.
inline DensityMatrix apply_channel(const DensityMatrix& rho, const KrausSet& kraus) {
    if (rho.dimension() != kraus.dimension())
        throw ParameterError("apply_channel: dimension mismatch " +
                             std::to_string(rho.dimension()) + " vs " +
                             std::to_string(kraus.dimension()));
    const int d = rho.dimension();
    Matrix out = Matrix::Zero(d, d);
    for (const Matrix& k : kraus.operators()) out += k * rho.entries() * k.adjoint();
    out = 0.5 * (out + out.adjoint().eval());  // scrub roundoff asymmetry
    DensityMatrix result(rho.space(), std::move(out), rho.modes());
    const double drift = std::abs(result.trace_real() - rho.trace_real());
    if (drift > 1e-10 * std::max(1.0, std::abs(rho.trace_real())))
        throw NumericError("apply_channel: trace drifted by " + std::to_string(drift));
    return result;
}

enum class CatKind { Plus, Minus };

inline const FockVector& cat_of(const LogicalBasis& basis, CatKind kind) {
    return kind == CatKind::Plus ? basis.ket0() : basis.ket1();
}

// F = Tr(rho(t) rho(0)) with rho(0) the chosen encoded cat.
inline double fidelity_direct(const LogicalBasis& basis, CatKind kind, double eta) {
    const KrausSet kraus = kraus_set(eta, basis.space());
    const DensityMatrix rho0 = outer(cat_of(basis, kind));
    return trace_product(apply_channel(rho0, kraus), rho0);
}

// The same fidelity as an explicit triple series over (k, n, m) with
// log-domain amplitudes and analytic normalizations: an independent route
// that never touches the matrix channel. Depends on zeta only through |zeta|.
inline double fidelity_series(double zeta, const DeformationSpec& spec, CatKind kind,
                              double eta, const FockSpace& cutoffs) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw ParameterError("fidelity_series: eta must lie in [0, 1]");
    if (zeta == 0.0)
        throw ParameterError("fidelity_series: zeta must be nonzero");
    require_valid(spec, cutoffs);

    const int n_max = cutoffs.n_max();
    const DeformedFactorialTable table = deformed_factorial_log(spec, cutoffs);
    const double expf_pos = detail::exp_f_partial(zeta * zeta, spec, n_max);
    const double expf_neg = detail::exp_f_partial(-zeta * zeta, spec, n_max);
    const double overlap = expf_neg / expf_pos;
    const double n4 = 1.0 / (expf_pos * expf_pos);  // N^4
    const double npm2 = kind == CatKind::Plus ? 1.0 / (2.0 + 2.0 * overlap)
                                              : 1.0 / (2.0 - 2.0 * overlap);
    const double prefactor = n4 * npm2 * npm2;  // N^4 N_pm^4

    const int parity = kind == CatKind::Plus ? 0 : 1;
    const double ln_zeta = std::log(std::abs(zeta));
    std::vector<double> ln_amp(static_cast<size_t>(n_max + 1),
                               -std::numeric_limits<double>::infinity());
    for (int j = parity; j <= n_max; j += 2)
        ln_amp[static_cast<size_t>(j)] = std::log(2.0) + j * ln_zeta - 0.5 * table.log_at(j);

    double total = 0.0;
    for (int k = 0; k <= n_max; k += 2) {  // odd k terms vanish by parity
        for (int n = k + parity; n <= n_max; n += 2) {
            const double ln_n = ln_amp[static_cast<size_t>(n)] +
                                ln_amp[static_cast<size_t>(n - k)] +
                                0.5 * detail::log_binomial(n, k);
            for (int m = k + parity; m <= n_max; m += 2) {
                const double ln_term = ln_n + ln_amp[static_cast<size_t>(m)] +
                                       ln_amp[static_cast<size_t>(m - k)] +
                                       0.5 * detail::log_binomial(m, k);
                total += std::exp(ln_term) * detail::pow_half(eta, n + m - 2 * k) *
                         detail::pow_half(1.0 - eta, 2 * k);
            }
        }
    }
    return prefactor * total;
}

struct FidelityPoint {
    double gamma_t = 0.0;
    double eta = 1.0;
    double f_plus = 1.0;
    double f_minus = 1.0;
};

struct FidelityCrossCheck {
    struct Point {
        double gamma_t;
        double direct_plus, series_plus;
        double direct_minus, series_minus;
    };
    std::vector<Point> points;
    double max_abs_discrepancy = 0.0;
};

// One row per gamma_t, computed through the Kraus channel; points are
// independent and evaluated concurrently with an ordered merge. The series
// route re-derives three of the points and must agree within kDualPathTol.
inline std::vector<FidelityPoint> fidelity_curve(double zeta, const DeformationSpec& spec,
                                                 const std::vector<double>& t_grid,
                                                 const FockSpace& space,
                                                 FidelityCrossCheck* check_out = nullptr,
                                                 int workers = 0) {
    const LogicalBasis basis = build_logical_basis(zeta, spec, space);
    const DensityMatrix rho_plus = outer(basis.ket0());
    const DensityMatrix rho_minus = outer(basis.ket1());

    const std::vector<FidelityPoint> rows = detail::parallel_map<FidelityPoint>(
        static_cast<int>(t_grid.size()), workers, [&](int i) -> FidelityPoint {
            const DampingPoint pt = DampingPoint::from_gamma_t(t_grid[static_cast<size_t>(i)]);
            const KrausSet kraus = kraus_set(pt.eta(), space);
            return {pt.gamma_t(), pt.eta(),
                    trace_product(apply_channel(rho_plus, kraus), rho_plus),
                    trace_product(apply_channel(rho_minus, kraus), rho_minus)};
        });

    FidelityCrossCheck check;
    std::vector<size_t> picks;
    if (rows.size() <= 3)
        for (size_t i = 0; i < rows.size(); ++i) picks.push_back(i);
    else
        picks = {0, rows.size() / 2, rows.size() - 1};
    for (const size_t i : picks) {
        const double sp = fidelity_series(zeta, spec, CatKind::Plus, rows[i].eta, space);
        const double sm = fidelity_series(zeta, spec, CatKind::Minus, rows[i].eta, space);
        check.points.push_back({rows[i].gamma_t, rows[i].f_plus, sp, rows[i].f_minus, sm});
        check.max_abs_discrepancy =
            std::max({check.max_abs_discrepancy, std::abs(rows[i].f_plus - sp),
                      std::abs(rows[i].f_minus - sm)});
    }
    if (check.max_abs_discrepancy > kDualPathTol)
        throw NumericError("fidelity_curve: series and channel routes disagree by " +
                           std::to_string(check.max_abs_discrepancy));
    if (check_out) *check_out = check;
    return rows;
}

} // namespace catq
