#include "sgf/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>

#include <CLI11.hpp>

#include "sgf/errors.hpp"
#include "sgf/fitting.hpp"
#include "sgf/io.hpp"
#include "sgf/laws.hpp"
#include "sgf/presets.hpp"
#include "sgf/ssa.hpp"
#include "sgf/steady_state.hpp"

namespace sgf {

namespace {

struct ParamsSource {
    std::string params_path;
    std::string preset;
    std::optional<double> c_s;
    std::optional<double> c_g;

    void attach(CLI::App* app) {
        auto* p = app->add_option("--params", params_path, "parameter JSON file");
        auto* q = app->add_option("--preset", preset, "table1 or table2:<system>");
        p->excludes(q);
        app->add_option("--cs", c_s, "override c_s");
        app->add_option("--cg", c_g, "override c_g");
    }

    ParamsDocument load() const {
        ParamsDocument doc;
        if (!params_path.empty()) {
            doc = params_from_json(read_file(params_path));
        } else if (!preset.empty()) {
            doc = load_preset(preset);
        } else {
            throw InvalidInput("one of --params or --preset is required");
        }
        if (c_s) doc.contribution.c_s = *c_s;
        if (c_g) doc.contribution.c_g = *c_g;
        doc.contribution.validate();
        return doc;
    }
};

struct IntegrationOptions {
    IntegrationSettings settings;

    void attach(CLI::App* app) {
        app->add_option("--tol", settings.steady_tol, "steady-state residual tolerance");
        app->add_option("--t-max", settings.t_max, "integration horizon cap");
        app->add_option("--max-steps", settings.max_steps, "integration step cap");
    }
};

struct SizeRange {
    double n_min = 1.0;
    double n_max = 0.0;
    std::size_t n_steps = 0;

    void attach(CLI::App* app, bool need_min) {
        auto* lo = app->add_option("--n-min", n_min, "smallest system size");
        if (need_min) lo->required();
        app->add_option("--n-max", n_max, "largest system size")->required();
        app->add_option("--n-steps", n_steps, "number of evenly spaced sizes (default: unit steps)");
    }

    std::vector<double> grid() const { return size_grid(n_min, n_max, n_steps); }
};

void emit(const std::string& out_path, const std::string& text, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
    } else {
        write_file_atomic(resolve_output_path(out_path), text);
    }
}

std::pair<Param, double> parse_fix(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw InvalidInput("--fix expects name=value, got '" + spec + "'");
    const auto param = param_from_name(spec.substr(0, eq));
    if (!param) throw InvalidInput("--fix: unknown parameter '" + spec.substr(0, eq) + "'");
    const auto value = parse_double(spec.substr(eq + 1));
    if (!value) throw InvalidInput("--fix: non-numeric value in '" + spec + "'");
    return {*param, *value};
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Three-state (solo/grupo/fermo) scalability model", "sgf"};
    app.require_subcommand(1);

    // steady
    ParamsSource steady_params;
    IntegrationOptions steady_int;
    double steady_n = 0.0;
    auto* steady_cmd = app.add_subcommand("steady", "fixed point for one system size (JSON)");
    steady_params.attach(steady_cmd);
    steady_int.attach(steady_cmd);
    steady_cmd->add_option("--n", steady_n, "system size")->required();

    // sweep
    ParamsSource sweep_params;
    IntegrationOptions sweep_int;
    SizeRange sweep_range;
    std::string sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "fixed points over a range of sizes (CSV)");
    sweep_params.attach(sweep_cmd);
    sweep_int.attach(sweep_cmd);
    sweep_range.attach(sweep_cmd, false);
    sweep_cmd->add_option("--out", sweep_out, "output CSV (default: stdout)");

    // laws
    auto* laws_cmd = app.add_subcommand("laws", "classical scalability laws (CSV)");
    laws_cmd->require_subcommand(1);
    SizeRange laws_range;
    std::string laws_out;
    double sigma = 0.0, kappa = 0.0, a = 1.0, b = 1.0, c = -0.1, k2 = 0.0, k4 = 1.0;
    auto add_common = [&](CLI::App* sub) {
        laws_range.attach(sub, false);
        sub->add_option("--out", laws_out, "output CSV (default: stdout)");
    };
    auto* amdahl_cmd = laws_cmd->add_subcommand("amdahl", "N / (1 + sigma (N - 1))");
    amdahl_cmd->add_option("--sigma", sigma)->required();
    add_common(amdahl_cmd);
    auto* gustafson_cmd = laws_cmd->add_subcommand("gustafson", "N + (1 - N) sigma");
    gustafson_cmd->add_option("--sigma", sigma)->required();
    add_common(gustafson_cmd);
    auto* usl_cmd = laws_cmd->add_subcommand("usl", "N / (1 + sigma (N - 1) + kappa N (N - 1))");
    usl_cmd->add_option("--sigma", sigma)->required();
    usl_cmd->add_option("--kappa", kappa)->required();
    add_common(usl_cmd);
    auto* swarm_cmd = laws_cmd->add_subcommand("swarm", "a N^b exp(c N)");
    swarm_cmd->add_option("--a", a)->required();
    swarm_cmd->add_option("--b", b)->required();
    swarm_cmd->add_option("--c", c)->required();
    add_common(swarm_cmd);
    auto* usl_approx_cmd =
        laws_cmd->add_subcommand("usl-approx", "N / ((k2/k4)^2 N^2 + (k2/k4) N + 1)");
    usl_approx_cmd->add_option("--k2", k2)->required();
    usl_approx_cmd->add_option("--k4", k4)->required();
    add_common(usl_approx_cmd);

    // ssa
    ParamsSource ssa_params;
    std::int64_t ssa_n = 0;
    std::size_t ssa_runs = 1;
    SsaSettings ssa_settings;
    std::optional<double> ssa_record;
    std::string ssa_out;
    auto* ssa_cmd = app.add_subcommand("ssa", "stochastic ensemble statistics (CSV)");
    ssa_params.attach(ssa_cmd);
    ssa_cmd->add_option("--n", ssa_n, "system size")->required();
    ssa_cmd->add_option("--runs", ssa_runs, "number of runs")->required();
    ssa_cmd->add_option("--t-end", ssa_settings.t_end, "simulated horizon")->required();
    ssa_cmd->add_option("--seed", ssa_settings.seed, "master seed")->required();
    ssa_cmd->add_option("--record-interval", ssa_record, "sampling period (default t-end/100)");
    ssa_cmd->add_option("--out", ssa_out, "output CSV (default: stdout)");

    // fit
    std::string fit_data;
    std::string fit_norm = "none";
    std::vector<std::string> fit_fix;
    bool fit_pin = false;
    std::uint64_t fit_seed = 0;
    std::string fit_out;
    double fit_cg = 0.0;
    std::optional<std::size_t> fit_generations;
    std::optional<std::size_t> fit_pop;
    IntegrationOptions fit_int;
    auto* fit_cmd = app.add_subcommand("fit", "fit rates to a throughput dataset (JSON)");
    fit_cmd->add_option("--data", fit_data, "dataset CSV with header n,x")->required();
    fit_cmd->add_option("--normalize", fit_norm, "none | first-to-one | range-1-100");
    fit_cmd->add_option("--fix", fit_fix, "pin a parameter, e.g. k5=0 (repeatable)");
    fit_cmd->add_flag("--pin-cs-first", fit_pin, "pin c_s to the first data point's throughput");
    fit_cmd->add_option("--cg", fit_cg, "pinned c_g (default 0)");
    fit_cmd->add_option("--seed", fit_seed, "optimizer seed")->required();
    fit_cmd->add_option("--max-generations", fit_generations, "generation cap (default 300)");
    fit_cmd->add_option("--popsize", fit_pop, "population size (default 15 x free parameters)");
    fit_cmd->add_option("--out", fit_out, "output JSON (default: stdout)");
    fit_int.attach(fit_cmd);

    // critical
    ParamsSource crit_params;
    IntegrationOptions crit_int;
    double crit_n_min = 1.0;
    double crit_n_max = 0.0;
    auto* crit_cmd = app.add_subcommand("critical", "size of maximal throughput, or none");
    crit_params.attach(crit_cmd);
    crit_int.attach(crit_cmd);
    crit_cmd->add_option("--n-min", crit_n_min, "smallest size (default 1)");
    crit_cmd->add_option("--n-max", crit_n_max, "largest size")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << e.what() << "\n";
        return 2;
    }

    try {
        if (steady_cmd->parsed()) {
            const ParamsDocument doc = steady_params.load();
            const FixedPoint fp = integrate_to_steady(
                SystemConfig{doc.rates, doc.contribution, steady_n}, steady_int.settings);
            out << fixed_point_json(fp, doc.contribution);
        } else if (sweep_cmd->parsed()) {
            const ParamsDocument doc = sweep_params.load();
            const auto grid = sweep_range.grid();
            const SweepResult result = sweep(doc.rates, doc.contribution, grid, sweep_int.settings);
            emit(sweep_out, curve_csv(curve_rows(result)), out);
        } else if (laws_cmd->parsed()) {
            const auto grid = laws_range.grid();
            std::string csv;
            if (amdahl_cmd->parsed()) {
                const AmdahlParams p(sigma);
                csv = "n,speedup\n";
                for (double n : grid) csv += format_double(n) + "," + format_double(amdahl_speedup(p, n)) + "\n";
            } else if (gustafson_cmd->parsed()) {
                const GustafsonParams p(sigma);
                csv = "n,speedup\n";
                for (double n : grid) csv += format_double(n) + "," + format_double(gustafson_speedup(p, n)) + "\n";
            } else if (usl_cmd->parsed()) {
                const UslParams p(sigma, kappa);
                csv = "n,speedup\n";
                for (double n : grid) csv += format_double(n) + "," + format_double(usl_speedup(p, n)) + "\n";
            } else if (swarm_cmd->parsed()) {
                const SwarmParams p(a, b, c);
                csv = "n,performance\n";
                for (double n : grid) csv += format_double(n) + "," + format_double(swarm_performance(p, n)) + "\n";
            } else {
                csv = "n,speedup\n";
                for (double n : grid) csv += format_double(n) + "," + format_double(usl_approx_speedup(k2, k4, n)) + "\n";
            }
            emit(laws_out, csv, out);
        } else if (ssa_cmd->parsed()) {
            const ParamsDocument doc = ssa_params.load();
            ssa_settings.record_interval = ssa_record.value_or(ssa_settings.t_end / 100.0);
            const EnsembleStats stats = run_ensemble(ssa_n, doc.rates, ssa_settings, ssa_runs);
            emit(ssa_out, ssa_stats_csv(stats), out);
        } else if (fit_cmd->parsed()) {
            Dataset data = parse_dataset(read_file(fit_data));
            data = normalize_axis(data, parse_normalization(fit_norm));
            data.label = std::filesystem::path(fit_data).stem().string();

            FitSpec spec;
            for (const auto& f : fit_fix) {
                const auto [param, value] = parse_fix(f);
                spec.fixed[static_cast<std::size_t>(param)] = value;
            }
            spec.pin_cs_first = fit_pin;
            spec.c_g = fit_cg;
            spec.de.seed = fit_seed;
            if (fit_generations) spec.de.max_generations = *fit_generations;
            if (fit_pop) spec.de.population = *fit_pop;

            const FitResult fit = fit_dataset(data, spec, fit_int.settings);
            emit(fit_out, fit_result_json(fit, data.label), out);
            if (!fit_out.empty()) {
                out << "mse=" << format_double(fit.mse) << " generations=" << fit.generations_used
                    << " converged=" << (fit.converged ? "true" : "false") << "\n";
            }
        } else if (crit_cmd->parsed()) {
            const ParamsDocument doc = crit_params.load();
            const auto grid = size_grid(crit_n_min, crit_n_max);
            const auto cp = find_critical_n(sweep(doc.rates, doc.contribution, grid, crit_int.settings));
            if (cp) {
                out << "n_c=" << format_double(cp->n_c) << " x_max=" << format_double(cp->x_max) << "\n";
            } else {
                out << "none\n";
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.kind() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace sgf
