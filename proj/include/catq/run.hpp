#pragma once

#include <algorithm>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "catq/cat.hpp"
#include "catq/channel.hpp"
#include "catq/deformation.hpp"
#include "catq/fock.hpp"
#include "catq/gates.hpp"
#include "catq/parallel.hpp"

namespace catq {

using nlohmann::json;

namespace detail {

// 12 significant digits: enough that re-parsing reproduces the value to
// better than 1e-10 relative, and stable across runs.
inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace detail

struct GridSpec {
    double min = 0.0;
    double max = 1.0;
    int count = 2;

    void validate(const std::string& name) const {
        if (count < 2)
            throw ParameterError(name + " grid: count must be >= 2");
        if (!(max > min))
            throw ParameterError(name + " grid: max must exceed min");
    }

    std::vector<double> values() const {
        std::vector<double> v(static_cast<size_t>(count));
        const double step = (max - min) / (count - 1);
        for (int i = 0; i < count; ++i) v[static_cast<size_t>(i)] = min + step * i;
        v.back() = max;
        return v;
    }
};

enum class OutputFormat { Csv, Json };

struct RunConfig {
    double zeta_sq = 3.0;
    int n_max = kDefaultNmax;
    GridSpec xi_grid{0.0, 2.0, 201};
    GridSpec t_grid{0.0, 3.0, 61};
    std::string out;
    OutputFormat format = OutputFormat::Csv;
    int workers = 0;  // 0: use hardware concurrency

    void validate() const {
        if (!(zeta_sq > 0.0))
            throw ParameterError("config: zeta_sq must be > 0");
        if (n_max < 1)
            throw ParameterError("config: n_max must be >= 1");
        xi_grid.validate("xi");
        t_grid.validate("t");
        if (!(t_grid.min >= 0.0))
            throw ParameterError("config: t grid must start at gamma_t >= 0");
    }

    double zeta() const { return std::sqrt(zeta_sq); }
    FockSpace space() const { return FockSpace(n_max); }

    json to_json() const {
        return json{{"zeta_sq", zeta_sq},
                    {"n_max", n_max},
                    {"xi_grid", {{"min", xi_grid.min}, {"max", xi_grid.max}, {"count", xi_grid.count}}},
                    {"t_grid", {{"min", t_grid.min}, {"max", t_grid.max}, {"count", t_grid.count}}},
                    {"out", out},
                    {"format", format == OutputFormat::Csv ? "csv" : "json"},
                    {"workers", workers}};
    }

    static RunConfig from_json(const json& j) {
        RunConfig cfg;
        cfg.zeta_sq = j.value("zeta_sq", cfg.zeta_sq);
        cfg.n_max = j.value("n_max", cfg.n_max);
        if (j.contains("xi_grid")) {
            const json& g = j.at("xi_grid");
            cfg.xi_grid = {g.value("min", cfg.xi_grid.min), g.value("max", cfg.xi_grid.max),
                           g.value("count", cfg.xi_grid.count)};
        }
        if (j.contains("t_grid")) {
            const json& g = j.at("t_grid");
            cfg.t_grid = {g.value("min", cfg.t_grid.min), g.value("max", cfg.t_grid.max),
                          g.value("count", cfg.t_grid.count)};
        }
        cfg.out = j.value("out", cfg.out);
        if (j.contains("format")) {
            const std::string f = j.at("format").get<std::string>();
            if (f == "csv") cfg.format = OutputFormat::Csv;
            else if (f == "json") cfg.format = OutputFormat::Json;
            else throw ParameterError("config: format must be csv or json, got " + f);
        }
        cfg.workers = j.value("workers", cfg.workers);
        return cfg;
    }
};

// --- sweep over the deformation parameter ---------------------------------

struct SweepRow {
    bool is_identity = false;  // the undeformed baseline row
    double xi = 0.0;
    bool valid = true;
    double delta = 0.0;
    double distance = 0.0;
    std::string invalid_reason;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // identity baseline first, then the xi grid
    std::optional<double> xi_star;
    double delta_at_star = 0.0;
    double d_at_star = 0.0;
};

inline SweepResult run_sweep(const RunConfig& config) {
    config.validate();
    const FockSpace space = config.space();
    const double zeta = config.zeta();
    const std::vector<double> xis = config.xi_grid.values();

    const auto evaluate = [&](int i) -> SweepRow {
        SweepRow row;
        if (i == 0) {
            row.is_identity = true;
            const CatDiagnostics diag = cat_diagnostics(zeta, DeformationSpec::identity(), space);
            row.delta = diag.delta;
            row.distance = diag.separation;
            return row;
        }
        row.xi = xis[static_cast<size_t>(i - 1)];
        const DeformationSpec spec = DeformationSpec::laguerre(row.xi);
        const ValidityReport report = validate_on_space(spec, space);
        if (!report.ok) {
            row.valid = false;
            row.invalid_reason = report.describe();
            return row;
        }
        const CatDiagnostics diag = cat_diagnostics(zeta, spec, space);
        row.delta = diag.delta;
        row.distance = diag.separation;
        return row;
    };

    SweepResult result;
    result.rows = detail::parallel_map<SweepRow>(static_cast<int>(xis.size()) + 1,
                                                 config.workers, evaluate);

    // xi* = the valid grid point minimizing d subject to delta < 0.01.
    for (const SweepRow& row : result.rows) {
        if (row.is_identity || !row.valid || !(row.delta < 0.01)) continue;
        if (!result.xi_star || row.distance < result.d_at_star) {
            result.xi_star = row.xi;
            result.delta_at_star = row.delta;
            result.d_at_star = row.distance;
        }
    }
    return result;
}

inline std::string sweep_csv(const RunConfig& config, const SweepResult& result) {
    std::ostringstream os;
    os << "# catq sweep zeta_sq=" << detail::fmt12(config.zeta_sq) << " n_max=" << config.n_max
       << " xi_grid=" << detail::fmt12(config.xi_grid.min) << ":"
       << detail::fmt12(config.xi_grid.max) << ":" << config.xi_grid.count << "\n";
    os << "xi,valid,delta,distance\n";
    for (const SweepRow& row : result.rows) {
        os << (row.is_identity ? "identity" : detail::fmt12(row.xi)) << ","
           << (row.valid ? 1 : 0) << ",";
        if (row.valid)
            os << detail::fmt12(row.delta) << "," << detail::fmt12(row.distance);
        else
            os << ",";
        os << "\n";
    }
    return os.str();
}

inline json sweep_row_json(const SweepRow& row) {
    json j{{"valid", row.valid}};
    if (row.is_identity) j["xi"] = "identity";
    else j["xi"] = row.xi;
    if (row.valid) {
        j["delta"] = row.delta;
        j["distance"] = row.distance;
    } else {
        j["reason"] = row.invalid_reason;
    }
    return j;
}

inline json sweep_json(const RunConfig& config, const SweepResult& result) {
    json rows = json::array();
    for (const SweepRow& row : result.rows) rows.push_back(sweep_row_json(row));
    return json{{"command", "sweep"}, {"config", config.to_json()}, {"rows", rows}};
}

inline json sweep_meta(const RunConfig& config, const SweepResult& result) {
    json meta{{"config", config.to_json()}};
    if (result.xi_star) {
        meta["xi_star"] = *result.xi_star;
        meta["delta_at_star"] = result.delta_at_star;
        meta["d_at_star"] = result.d_at_star;
    } else {
        meta["xi_star"] = nullptr;
    }
    return meta;
}

// --- fidelity curves --------------------------------------------------------

struct FidelityRun {
    std::vector<FidelityPoint> rows;
    FidelityCrossCheck check;
};

inline DeformationSpec spec_for(const std::optional<double>& xi) {
    return xi ? DeformationSpec::laguerre(*xi) : DeformationSpec::identity();
}

inline FidelityRun run_fidelity(const RunConfig& config, const std::optional<double>& xi) {
    config.validate();
    const DeformationSpec spec = spec_for(xi);
    require_valid(spec, config.space());
    FidelityRun run;
    run.rows = fidelity_curve(config.zeta(), spec, config.t_grid.values(), config.space(),
                              &run.check, config.workers);
    return run;
}

inline std::string fidelity_csv(const RunConfig& config, const std::optional<double>& xi,
                                const FidelityRun& run) {
    std::ostringstream os;
    os << "# catq fidelity zeta_sq=" << detail::fmt12(config.zeta_sq)
       << " n_max=" << config.n_max << " xi="
       << (xi ? detail::fmt12(*xi) : std::string("identity"))
       << " t_grid=" << detail::fmt12(config.t_grid.min) << ":"
       << detail::fmt12(config.t_grid.max) << ":" << config.t_grid.count << "\n";
    os << "gamma_t,eta,f_plus,f_minus\n";
    for (const FidelityPoint& row : run.rows)
        os << detail::fmt12(row.gamma_t) << "," << detail::fmt12(row.eta) << ","
           << detail::fmt12(row.f_plus) << "," << detail::fmt12(row.f_minus) << "\n";
    return os.str();
}

inline json fidelity_json(const RunConfig& config, const std::optional<double>& xi,
                          const FidelityRun& run) {
    json rows = json::array();
    for (const FidelityPoint& row : run.rows)
        rows.push_back(json{{"gamma_t", row.gamma_t},
                            {"eta", row.eta},
                            {"f_plus", row.f_plus},
                            {"f_minus", row.f_minus}});
    json j{{"command", "fidelity"}, {"config", config.to_json()}, {"rows", rows}};
    if (xi) j["xi"] = *xi;
    else j["xi"] = "identity";
    return j;
}

inline json fidelity_check_json(const FidelityRun& run) {
    json points = json::array();
    for (const FidelityCrossCheck::Point& p : run.check.points)
        points.push_back(json{{"gamma_t", p.gamma_t},
                              {"f_plus_direct", p.direct_plus},
                              {"f_plus_series", p.series_plus},
                              {"f_minus_direct", p.direct_minus},
                              {"f_minus_series", p.series_minus}});
    return json{{"max_abs_discrepancy", run.check.max_abs_discrepancy}, {"points", points}};
}

// --- gate demos --------------------------------------------------------------

inline json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline json logical_matrix_json(const Eigen::Matrix2cd& m) {
    return json::array({json::array({complex_json(m(0, 0)), complex_json(m(0, 1))}),
                        json::array({complex_json(m(1, 0)), complex_json(m(1, 1))})});
}

inline json run_gates(const RunConfig& config, const std::optional<double>& xi, double theta,
                      double chi_t) {
    config.validate();
    const DeformationSpec spec = spec_for(xi);
    const FockSpace space = config.space();
    require_valid(spec, space);

    const LogicalBasis basis = build_logical_basis(config.zeta(), spec, space);
    const RotationParams params = RotationParams::from_theta(theta, config.zeta());
    const Matrix u_exact = rotation_exact(params, spec, space);
    const Matrix u_split = rotation_split(params, spec, space);
    const LogicalAction act_exact = logical_action(u_exact, basis);
    const LogicalAction act_split = logical_action(u_split, basis);

    // Deviations measured on the logical states, where the gate acts.
    double split_exact_deviation = 0.0;
    double split_norm_defect = 0.0;
    for (const FockVector* ket : {&basis.ket0(), &basis.ket1()}) {
        const Vector ve = u_exact * ket->amplitudes();
        const Vector vs = u_split * ket->amplitudes();
        split_exact_deviation = std::max(split_exact_deviation, (vs - ve).norm());
        split_norm_defect = std::max(split_norm_defect, std::abs(vs.norm() - 1.0));
    }

    const CpsTruthTable cps = cps_truth_table(basis, CpsParams{chi_t});
    json phases = json::array();
    for (const Complex& p : cps.phases) phases.push_back(complex_json(p));

    return json{{"command", "gates"},
                {"config", config.to_json()},
                {"xi", xi ? json(*xi) : json("identity")},
                {"theta", theta},
                {"beta_t", params.beta() * params.t()},
                {"chi_t", chi_t},
                {"logical_exact", logical_matrix_json(act_exact.matrix)},
                {"logical_split", logical_matrix_json(act_split.matrix)},
                {"leakage_exact", act_exact.leakage},
                {"leakage_split", act_split.leakage},
                {"split_exact_deviation", split_exact_deviation},
                {"split_norm_defect", split_norm_defect},
                {"cps_phases", phases},
                {"cps_max_residual", cps.max_residual}};
}

// --- selftest ----------------------------------------------------------------

struct SelftestResult {
    bool pass = true;
    json summary;
};

inline SelftestResult run_selftest(const RunConfig& config) {
    config.validate();
    const FockSpace space = config.space();
    const double zeta = config.zeta();

    json checks = json::array();
    bool all_pass = true;
    const auto check = [&](const std::string& name, const std::function<std::string()>& body) {
        json entry{{"name", name}};
        try {
            entry["detail"] = body();
            entry["pass"] = true;
        } catch (const std::exception& e) {
            entry["detail"] = e.what();
            entry["pass"] = false;
            all_pass = false;
        }
        checks.push_back(entry);
    };
    const auto expect = [](bool ok, const std::string& msg) {
        if (!ok) throw NumericError(msg);
    };

    // A deformed comparison point: the first valid xi from a short fixed list.
    std::optional<double> probe_xi;
    for (const double xi : {0.1, 0.05, 0.02, 0.01})
        if (validate_on_space(DeformationSpec::laguerre(xi), space).ok) {
            probe_xi = xi;
            break;
        }

    check("ladder_algebra", [&] {
        const LadderOperators ops = ladder_matrices(space);
        const Matrix nn = ops.creation * ops.annihilation;
        const double defect = (nn - ops.number).cwiseAbs().maxCoeff();
        expect(defect < 1e-12, "a^dag a strays from the number operator by " +
                                   detail::fmt12(defect));
        return "a^dag a = n on the truncated space, max defect " + detail::fmt12(defect);
    });

    check("tail_mass", [&] {
        const FockVector cat = coherent_coefficients(zeta, DeformationSpec::identity(), space);
        return "tail |c_nmax|^2 = " + detail::fmt12(cat.tail_mass());
    });

    check("reduction_at_xi_zero", [&] {
        const LogicalBasis undeformed = build_logical_basis(zeta, DeformationSpec::identity(), space);
        const LogicalBasis at_zero = build_logical_basis(zeta, DeformationSpec::laguerre(0.0), space);
        const double diff = std::max(
            (undeformed.ket0().amplitudes() - at_zero.ket0().amplitudes()).cwiseAbs().maxCoeff(),
            (undeformed.ket1().amplitudes() - at_zero.ket1().amplitudes()).cwiseAbs().maxCoeff());
        expect(diff <= 1e-12, "xi=0 basis deviates from identity by " + detail::fmt12(diff));
        return "max entrywise deviation " + detail::fmt12(diff);
    });

    check("parity_purity", [&] {
        std::vector<DeformationSpec> specs{DeformationSpec::identity()};
        if (probe_xi) specs.push_back(DeformationSpec::laguerre(*probe_xi));
        for (const DeformationSpec& spec : specs) {
            const LogicalBasis basis = build_logical_basis(zeta, spec, space);
            for (int n = 0; n <= space.n_max(); ++n) {
                if (n % 2 == 1) expect(basis.ket0()[n] == 0.0, "odd amplitude in ket0");
                else expect(basis.ket1()[n] == 0.0, "even amplitude in ket1");
            }
        }
        return probe_xi ? "exact parity (identity and xi=" + detail::fmt12(*probe_xi) + ")"
                        : "exact parity (identity)";
    });

    check("kraus_completeness", [&] {
        double worst = 0.0;
        for (const double eta : {0.1, 0.5, 0.9})
            worst = std::max(worst, kraus_set(eta, space).completeness_defect());
        expect(worst < 1e-10, "completeness defect " + detail::fmt12(worst));
        return "max defect " + detail::fmt12(worst);
    });

    check("dual_path_fidelity", [&] {
        double worst = 0.0;
        std::vector<DeformationSpec> specs{DeformationSpec::identity()};
        if (probe_xi) specs.push_back(DeformationSpec::laguerre(*probe_xi));
        for (const DeformationSpec& spec : specs) {
            const LogicalBasis basis = build_logical_basis(zeta, spec, space);
            for (const double eta : {0.9, 0.5, 0.1})
                for (const CatKind kind : {CatKind::Plus, CatKind::Minus}) {
                    const double direct = fidelity_direct(basis, kind, eta);
                    const double series = fidelity_series(zeta, spec, kind, eta, space);
                    worst = std::max(worst, std::abs(direct - series));
                }
        }
        expect(worst < kDualPathTol, "dual-path discrepancy " + detail::fmt12(worst));
        return "max |direct - series| = " + detail::fmt12(worst);
    });

    check("parameter_guard", [&] {
        for (const double eta : {-0.1, 1.5}) {
            bool thrown = false;
            try {
                kraus_set(eta, space);
            } catch (const ParameterError&) {
                thrown = true;
            }
            expect(thrown, "kraus_set accepted eta=" + detail::fmt12(eta));
        }
        return "eta outside [0,1] rejected";
    });

    check("cps_phases", [&] {
        const LogicalBasis basis = build_logical_basis(zeta, DeformationSpec::identity(), space);
        const CpsTruthTable table = cps_truth_table(basis, CpsParams{M_PI});
        const std::array<double, 4> expected{1.0, 1.0, 1.0, -1.0};
        for (size_t i = 0; i < 4; ++i)
            expect(std::abs(table.phases[i] - expected[i]) < 1e-12, "phase mismatch");
        expect(table.max_residual < 1e-12, "residual " + detail::fmt12(table.max_residual));
        return "phases (+1, +1, +1, -1), residual " + detail::fmt12(table.max_residual);
    });

    check("rotation_unitarity", [&] {
        const RotationParams params = RotationParams::from_theta(M_PI / 4.0, zeta);
        const Matrix u = rotation_exact(params, DeformationSpec::identity(), space);
        const double defect =
            (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
        expect(defect < 1e-10, "unitarity defect " + detail::fmt12(defect));
        return "U^dag U - I max entry " + detail::fmt12(defect);
    });

    SelftestResult result;
    result.pass = all_pass;
    result.summary = json{{"command", "selftest"},
                          {"pass", all_pass},
                          {"config", config.to_json()},
                          {"checks", checks}};
    return result;
}

} // namespace catq
