#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "catq/fock.hpp"

namespace catq {

// Associated Laguerre polynomial L^m_n(x) by the three-term recurrence
//   (n+1) L^m_{n+1} = (2n+1+m-x) L^m_n - (n+m) L^m_{n-1},
// seeded L^m_0 = 1, L^m_1 = 1+m-x. Upward recurrence is stable for the
// m <= 1, x >= 0 regime used here.
inline double laguerre(int n, int m, double x) {
    if (n < 0 || m < 0)
        throw ParameterError("laguerre: n and m must be non-negative");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 + m - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + m - x) * cur - (k + m) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

enum class DeformationKind { Identity, Laguerre };

// f(n) defining the deformed algebra A = a sqrt(f(a^dag a)).
// Identity: f == 1. Laguerre: f(n) = L^1_n(xi^2) / ((n+1) L^0_n(xi^2)).
class DeformationSpec {
public:
    static DeformationSpec identity() { return DeformationSpec(DeformationKind::Identity, 0.0); }

    static DeformationSpec laguerre(double xi) {
        if (!(xi >= 0.0))
            throw ParameterError("DeformationSpec: xi must be >= 0");
        return DeformationSpec(DeformationKind::Laguerre, xi);
    }

    DeformationKind kind() const { return kind_; }
    double xi() const { return xi_; }
    bool is_identity() const { return kind_ == DeformationKind::Identity; }

    std::string label() const {
        return is_identity() ? "identity" : "laguerre(xi=" + std::to_string(xi_) + ")";
    }

private:
    DeformationSpec(DeformationKind kind, double xi) : kind_(kind), xi_(xi) {}

    DeformationKind kind_;
    double xi_;
};

enum class FStatus { Ok, ZeroDenominator, NonPositive, NonFinite };

struct FValue {
    FStatus status = FStatus::Ok;
    double value = 1.0;
};

inline const char* to_string(FStatus s) {
    switch (s) {
        case FStatus::Ok: return "Ok";
        case FStatus::ZeroDenominator: return "ZeroDenominator";
        case FStatus::NonPositive: return "NonPositive";
        case FStatus::NonFinite: return "NonFinite";
    }
    return "?";
}

// Non-throwing evaluation of f(n); the status tells why a value is unusable.
inline FValue f_value_checked(const DeformationSpec& spec, int n) {
    if (n < 0) return {FStatus::NonFinite, 0.0};
    if (spec.is_identity()) return {FStatus::Ok, 1.0};
    const double x = spec.xi() * spec.xi();
    const double den = laguerre(n, 0, x);
    if (std::abs(den) < 1e-14) return {FStatus::ZeroDenominator, 0.0};
    const double v = laguerre(n, 1, x) / ((n + 1.0) * den);
    if (!std::isfinite(v)) return {FStatus::NonFinite, v};
    if (v <= 0.0) return {FStatus::NonPositive, v};
    return {FStatus::Ok, v};
}

inline double f_value(const DeformationSpec& spec, int n) {
    const FValue f = f_value_checked(spec, n);
    if (f.status == FStatus::ZeroDenominator)
        throw ParameterError("f_value: ZeroDenominator at n=" + std::to_string(n) +
                             " (L^0_n(xi^2) vanishes)");
    if (f.status == FStatus::NonPositive)
        throw ParameterError("f_value: NonPositive at n=" + std::to_string(n) +
                             " (f(n) = " + std::to_string(f.value) + ")");
    if (f.status == FStatus::NonFinite)
        throw ParameterError("f_value: non-finite at n=" + std::to_string(n));
    return f.value;
}

struct ValidityReport {
    bool ok = true;
    int first_bad_n = -1;
    FStatus reason = FStatus::Ok;

    std::string describe() const {
        if (ok) return "ok";
        return std::string(to_string(reason)) + " at n=" + std::to_string(first_bad_n);
    }
};

// The whole space is accepted or rejected: a deformation must satisfy
// f(n) > 0 and finite for every n <= n_max before sqrt(f) is meaningful.
inline ValidityReport validate_on_space(const DeformationSpec& spec, const FockSpace& space) {
    for (int n = 0; n <= space.n_max(); ++n) {
        const FValue f = f_value_checked(spec, n);
        if (f.status != FStatus::Ok) return {false, n, f.status};
    }
    return {};
}

inline void require_valid(const DeformationSpec& spec, const FockSpace& space) {
    const ValidityReport report = validate_on_space(spec, space);
    if (!report.ok)
        throw ParameterError("deformation " + spec.label() + " invalid on n_max=" +
                             std::to_string(space.n_max()) + ": " + report.describe());
}

// ln [n]_f! with the convention [0]_f! = f(0), so that
// [n]_f! / [n-1]_f! = n f(n) for every n >= 1.
class DeformedFactorialTable {
public:
    explicit DeformedFactorialTable(std::vector<double> log_values)
        : log_values_(std::move(log_values)) {}

    double log_at(int n) const { return log_values_.at(static_cast<size_t>(n)); }
    int size() const { return static_cast<int>(log_values_.size()); }

private:
    std::vector<double> log_values_;
};

inline DeformedFactorialTable deformed_factorial_log(const DeformationSpec& spec,
                                                     const FockSpace& space) {
    require_valid(spec, space);
    std::vector<double> logs(static_cast<size_t>(space.dimension()));
    logs[0] = std::log(f_value(spec, 0));
    for (int n = 1; n <= space.n_max(); ++n)
        logs[static_cast<size_t>(n)] =
            logs[static_cast<size_t>(n - 1)] + std::log(n * f_value(spec, n));
    return DeformedFactorialTable(std::move(logs));
}

namespace detail {

// Truncated deformed exponential: sum_{n <= n_max} x^n / [n]_f!, accumulated
// in long double. This is the normalization consistent with a state truncated
// at the same n_max, so analytic and numerical norms agree to rounding for
// any truncation. Callers must have validated the deformation on the space.
inline double exp_f_partial(double x, const DeformationSpec& spec, int n_max) {
    long double term = 1.0L / static_cast<long double>(f_value(spec, 0));
    long double sum = term;
    for (int n = 1; n <= n_max; ++n) {
        term *= static_cast<long double>(x) / (n * static_cast<long double>(f_value(spec, n)));
        sum += term;
    }
    return static_cast<double>(sum);
}

} // namespace detail

// Deformed exponential: partial sum of x^n / [n]_f! by term ratios.
// Only needs n f(n) finite and nonzero; f may change sign (the series is
// defined without any square root). Accumulates in long double so the
// alternating x < 0 case keeps full double accuracy.
inline double exp_f(double x, const DeformationSpec& spec, int n_terms) {
    if (n_terms < 0)
        throw ParameterError("exp_f: n_terms must be >= 0");
    const FValue f0 = f_value_checked(spec, 0);
    if (f0.status == FStatus::ZeroDenominator || f0.status == FStatus::NonFinite || f0.value == 0.0)
        throw ParameterError("exp_f: f(0) unusable (" + std::string(to_string(f0.status)) + ")");
    long double term = 1.0L / static_cast<long double>(f0.value);
    long double sum = term;
    for (int n = 1; n <= n_terms; ++n) {
        const FValue fn = f_value_checked(spec, n);
        if (fn.status == FStatus::ZeroDenominator || fn.status == FStatus::NonFinite)
            throw ParameterError("exp_f: f(" + std::to_string(n) + ") unusable (" +
                                 std::string(to_string(fn.status)) + ")");
        term *= static_cast<long double>(x) / (n * static_cast<long double>(fn.value));
        sum += term;
        if (std::abs(static_cast<double>(term)) < 1e-16 * std::abs(static_cast<double>(sum)))
            return static_cast<double>(sum);
    }
    if (x == 0.0) return static_cast<double>(sum);
    throw NumericError("exp_f: NonConvergence, stopping rule unmet after " +
                       std::to_string(n_terms) + " terms at x=" + std::to_string(x));
}

// Coefficients of |zeta, f>: c_n = c_{n-1} * zeta / sqrt(n f(n)), c_0 = 1,
// then normalized. Tail mass above kTailTol means the truncation cannot
// represent the state and is rejected.
inline FockVector coherent_coefficients(double zeta, const DeformationSpec& spec,
                                        const FockSpace& space) {
    require_valid(spec, space);
    const int d = space.dimension();
    Vector c(d);
    c[0] = 1.0;
    for (int n = 1; n < d; ++n)
        c[n] = c[n - 1] * (zeta / std::sqrt(n * f_value(spec, n)));
    c /= c.norm();
    const double tail = std::norm(c[d - 1]);
    if (tail > kTailTol)
        throw NumericError("coherent_coefficients: TailTooHeavy, |c_{n_max}|^2 = " +
                           std::to_string(tail) + " at n_max=" + std::to_string(space.n_max()) +
                           "; increase n_max");
    return FockVector(space, std::move(c));
}

// A = a sqrt(f(a^dag a)): <n-1|A|n> = sqrt(n f(n)).
inline Matrix deformed_annihilation(const DeformationSpec& spec, const FockSpace& space) {
    require_valid(spec, space);
    const int d = space.dimension();
    Matrix A = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n)
        A(n - 1, n) = std::sqrt(n * f_value(spec, n));
    return A;
}

} // namespace catq
