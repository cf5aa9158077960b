// catq command-line driver: deformation sweeps, fidelity curves, gate demos,
// and the invariant selftest. Emits CSV/JSON for offline plotting.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "catq/run.hpp"

namespace {

namespace fs = std::filesystem;
using catq::json;

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw catq::ParameterError("cannot open output path " + path.string());
    out << content;
    if (!out.good())
        throw catq::ParameterError("failed writing " + path.string());
}

fs::path sidecar_path(const fs::path& out, const std::string& name) {
    return out.has_parent_path() ? out.parent_path() / name : fs::path(name);
}

std::optional<double> parse_xi(const std::string& text) {
    if (text == "identity") return std::nullopt;
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw catq::ParameterError("--xi expects a number or 'identity', got '" + text + "'");
    }
}

struct Cli {
    catq::RunConfig config;
    std::string xi_text = "identity";
    double theta = M_PI / 4.0;
    double chi_t = M_PI;
    std::string command;
};

int run(const Cli& cli) {
    const catq::RunConfig& config = cli.config;

    if (cli.command == "sweep") {
        const catq::SweepResult result = catq::run_sweep(config);
        const fs::path out = config.out.empty() ? "sweep.csv" : config.out;
        if (config.format == catq::OutputFormat::Csv)
            write_file(out, catq::sweep_csv(config, result));
        else
            write_file(out, catq::sweep_json(config, result).dump(2) + "\n");
        write_file(sidecar_path(out, "sweep_meta.json"),
                   catq::sweep_meta(config, result).dump(2) + "\n");
        std::cerr << "wrote " << out.string() << " and sweep_meta.json\n";
        return 0;
    }

    if (cli.command == "fidelity") {
        const std::optional<double> xi = parse_xi(cli.xi_text);
        const catq::FidelityRun result = catq::run_fidelity(config, xi);
        const fs::path out = config.out.empty() ? "fidelity.csv" : config.out;
        if (config.format == catq::OutputFormat::Csv)
            write_file(out, catq::fidelity_csv(config, xi, result));
        else
            write_file(out, catq::fidelity_json(config, xi, result).dump(2) + "\n");
        write_file(sidecar_path(out, "fidelity_check.json"),
                   catq::fidelity_check_json(result).dump(2) + "\n");
        std::cerr << "wrote " << out.string() << " and fidelity_check.json\n";
        return 0;
    }

    if (cli.command == "gates") {
        const std::optional<double> xi = parse_xi(cli.xi_text);
        const json report = catq::run_gates(config, xi, cli.theta, cli.chi_t);
        const fs::path out = config.out.empty() ? "gates.json" : config.out;
        write_file(out, report.dump(2) + "\n");
        std::cerr << "wrote " << out.string() << "\n";
        return 0;
    }

    // selftest: machine-readable summary on stdout, nonzero exit on failure
    const catq::SelftestResult result = catq::run_selftest(config);
    std::cout << result.summary.dump(2) << "\n";
    return result.pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    Cli cli;
    CLI::App app{"deformed cat-state qubits under amplitude damping"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values");
    // Flag values land in overrides so the config file can be applied first.
    std::optional<double> zeta_sq, xi_min, xi_max, t_max;
    std::optional<int> n_max, xi_count, t_count, workers;
    std::optional<std::string> out, format;
    app.add_option("--zeta-sq", zeta_sq, "coherent amplitude squared (default 3)");
    app.add_option("--n-max", n_max, "Fock truncation (default 64)");
    app.add_option("--xi-min", xi_min, "sweep grid start (default 0)");
    app.add_option("--xi-max", xi_max, "sweep grid end (default 2)");
    app.add_option("--xi-count", xi_count, "sweep grid points (default 201)");
    app.add_option("--t-max", t_max, "largest gamma_t (default 3)");
    app.add_option("--t-count", t_count, "time grid points (default 61)");
    app.add_option("--out", out, "output path (default per command)");
    app.add_option("--format", format, "csv or json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--workers", workers, "worker threads, 0 = auto");

    CLI::App* sweep = app.add_subcommand("sweep", "delta and separation across the xi grid");
    CLI::App* fidelity =
        app.add_subcommand("fidelity", "fidelity decay curve for one deformation");
    CLI::App* gates = app.add_subcommand("gates", "logical rotation and CPS report");
    CLI::App* selftest = app.add_subcommand("selftest", "run the invariant suite");
    // global flags remain usable after the subcommand name
    for (CLI::App* sub : {sweep, fidelity, gates, selftest}) sub->fallthrough();
    fidelity->add_option("--xi", cli.xi_text, "deformation parameter or 'identity'");
    gates->add_option("--xi", cli.xi_text, "deformation parameter or 'identity'");
    gates->add_option("--theta", cli.theta, "rotation angle 2 zeta beta t (default pi/4)");
    gates->add_option("--chi-t", cli.chi_t, "CPS interaction time chi*t (default pi)");

    try {
        app.parse(argc, argv);

        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in)
                throw catq::ParameterError("cannot read config file " + config_path);
            json parsed;
            try {
                parsed = json::parse(in);
            } catch (const json::parse_error& e) {
                throw catq::ParameterError(std::string("config file is not valid JSON: ") +
                                           e.what());
            }
            cli.config = catq::RunConfig::from_json(parsed);
        }
        if (zeta_sq) cli.config.zeta_sq = *zeta_sq;
        if (n_max) cli.config.n_max = *n_max;
        if (xi_min) cli.config.xi_grid.min = *xi_min;
        if (xi_max) cli.config.xi_grid.max = *xi_max;
        if (xi_count) cli.config.xi_grid.count = *xi_count;
        if (t_max) cli.config.t_grid.max = *t_max;
        if (t_count) cli.config.t_grid.count = *t_count;
        if (out) cli.config.out = *out;
        if (format) cli.config.format =
            *format == "json" ? catq::OutputFormat::Json : catq::OutputFormat::Csv;
        if (workers) cli.config.workers = *workers;
        cli.command = app.get_subcommands().front()->get_name();

        return run(cli);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the CLI11 message / help text
        return e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success) ? 0 : 1;
    } catch (const catq::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}
