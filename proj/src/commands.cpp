#include "fluxres/commands.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "fluxres/config.hpp"
#include "fluxres/output.hpp"

namespace fluxres {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct CommonOptions {
    std::string config;
    std::string preset;
    std::string preset_dir;
    std::string out_dir;
    std::vector<double> horizon;
    std::vector<double> window;
    std::vector<double> search;
    std::optional<double> tol;
    bool quiet{false};
};

RunConfig resolve_config(const CommonOptions &o) {
    if (o.config.empty() == o.preset.empty())
        throw InvalidArgument("exactly one of --config or --preset is required");
    RunConfig c;
    if (!o.config.empty()) {
        c = load_run_config(o.config);
    } else {
        std::optional<fs::path> dir;
        if (!o.preset_dir.empty()) dir = o.preset_dir;
        c = load_run_config(preset_path(o.preset, dir));
    }
    if (!o.horizon.empty()) {
        c.scenario.horizon = o.horizon.size() == 1 ? TimeInterval{0.0, o.horizon[0]}
                                                   : TimeInterval{o.horizon[0], o.horizon[1]};
        if (!(c.scenario.horizon.end >= c.scenario.horizon.start))
            throw InvalidArgument("--horizon must satisfy start <= end");
    }
    if (!o.window.empty()) c.scenario.window = TimeInterval{o.window[0], o.window[1]};
    if (!o.search.empty()) c.optimize.search = {o.search[0], o.search[1]};
    if (o.tol) c.optimize.tol = *o.tol;
    if (!o.out_dir.empty()) c.output_dir = o.out_dir;
    return c;
}

json interval_json(TimeInterval t) { return json::array({t.start, t.end}); }

void require_valid(const Scenario &s, TimeInterval horizon) {
    // validate_params throws with the positivity-bound message when invalid.
    validate_params(s.params, s.drive, horizon);
}

// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig &c, const CommonOptions &o, std::ostream &out) {
    const Scenario &s = c.scenario;
    require_valid(s, s.horizon);
    const auto trajectory = integrate(s.params, s.drive, s.init, s.integrator, s.horizon);
    const InitialConditions cf_init = as_energy_init(s.params, s.drive, s.init);

    json summary;
    summary["command"] = "simulate";

    std::optional<InvariantSeries> numerical;
    try {
        numerical = invariant_series_numerical(trajectory);
    } catch (const InsufficientCycles &e) {
        summary["numerical_note"] = e.what();
    }

    // Numerical invariant sits on the sample row nearest each cycle midpoint.
    const Eigen::Index n = trajectory.size();
    std::vector<std::optional<double>> sparse(static_cast<std::size_t>(n));
    if (numerical) {
        const auto t = trajectory.time();
        for (Eigen::Index i = 0; i < numerical->size(); ++i) {
            const double tc = numerical->times[i];
            const double dt = s.integrator.sample_dt;
            auto row = static_cast<Eigen::Index>(std::llround((tc - t[0]) / dt));
            row = std::clamp<Eigen::Index>(row, 0, n - 1);
            sparse[static_cast<std::size_t>(row)] = numerical->values[i];
        }
    }

    InvariantSeries closed;
    closed.source = SeriesSource::kClosedForm;
    closed.times = trajectory.time();
    closed.values.resize(n);

    std::string csv = "t,phi,phidot,q,energy_num,omega,energy_cf,invariant_cf,invariant_num\n";
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto st = trajectory.state(i);
        const double inv = closed_form_invariant(s.params, s.drive, cf_init, st.t);
        closed.values[i] = inv;
        csv += format_double(st.t) + ',' + format_double(st.phi) + ',' + format_double(st.phidot) +
               ',' + format_double(trajectory.charge()[i]) + ',' +
               format_double(trajectory.energy()[i]) + ',' +
               format_double(eval_omega(s.params, st.t)) + ',' +
               format_double(closed_form_energy(s.params, s.drive, cf_init, st.t)) + ',' +
               format_double(inv) + ',';
        if (const auto &v = sparse[static_cast<std::size_t>(i)]) csv += format_double(*v);
        csv += '\n';
    }

    const TimeInterval window = s.resolved_window();
    auto metrics_or_null = [&](const std::optional<InvariantSeries> &series, const char *key) {
        if (!series) {
            summary[key] = nullptr;
            return;
        }
        try {
            summary[key] = to_json(drift_metrics(*series, window));
        } catch (const EmptyWindow &e) {
            summary[key] = nullptr;
            summary[std::string(key) + "_note"] = e.what();
        }
    };
    metrics_or_null(closed, "closed_form");
    metrics_or_null(numerical, "numerical");
    summary["window"] = interval_json(window);
    summary["horizon"] = interval_json(s.horizon);
    summary["samples"] = n;
    summary["cycles"] = numerical ? numerical->size() : 0;
    summary["provenance"] = provenance(to_json(c));

    const fs::path dir = c.output_dir;
    const fs::path csv_path = dir / (c.name + ".csv");
    const fs::path json_path = dir / (c.name + "_summary.json");
    summary["csv"] = csv_path.filename().string();
    write_file_atomic(csv_path, csv);
    write_file_atomic(json_path, summary.dump(2) + '\n');
    if (!o.quiet)
        out << "simulate: wrote " << csv_path.string() << " (" << n << " rows) and "
            << json_path.string() << '\n';
    return kExitOk;
}

int cmd_sweep(const RunConfig &c, const CommonOptions &o, std::ostream &out) {
    if (!c.sweep) throw InvalidArgument("sweep requires a 'sweep' block (axis, values) in the config");
    SweepSpec spec{c.scenario, c.sweep->axis, c.sweep->values, c.sweep->numerical};
    const SweepResult result = run_sweep(spec);

    const fs::path dir = c.output_dir;
    json table;
    table["command"] = "sweep";
    table["axis"] = result.axis;
    table["points"] = json::array();
    for (const auto &pt : result.points) {
        const std::string stem = c.name + "_" + result.axis + "_" + format_double(pt.value);
        const auto &p = pt.resolved.params;
        const InitialConditions cf_init = as_energy_init(p, pt.resolved.drive, pt.resolved.init);
        std::string csv = "t,omega,energy_cf,invariant_cf\n";
        for (Eigen::Index i = 0; i < pt.closed_form.size(); ++i) {
            const double t = pt.closed_form.times[i];
            csv += format_double(t) + ',' + format_double(eval_omega(p, t)) + ',' +
                   format_double(closed_form_energy(p, pt.resolved.drive, cf_init, t)) + ',' +
                   format_double(pt.closed_form.values[i]) + '\n';
        }
        write_file_atomic(dir / (stem + ".csv"), csv);

        json entry = to_json(pt.metrics);
        entry["value"] = pt.value;
        entry["csv"] = stem + ".csv";
        entry["provenance"] = provenance(to_json(pt.resolved));
        if (pt.numerical) {
            std::string ncsv = "t,invariant_num\n";
            for (Eigen::Index i = 0; i < pt.numerical->size(); ++i)
                ncsv += format_double(pt.numerical->times[i]) + ',' +
                        format_double(pt.numerical->values[i]) + '\n';
            write_file_atomic(dir / (stem + "_numerical.csv"), ncsv);
            entry["numerical"] = to_json(*pt.numerical_metrics);
        }
        table["points"].push_back(entry);
    }
    table["provenance"] = provenance(to_json(c));
    const fs::path json_path = dir / (c.name + "_metrics.json");
    write_file_atomic(json_path, table.dump(2) + '\n');
    if (!o.quiet)
        out << "sweep: " << result.points.size() << " values of " << result.axis << "; wrote "
            << json_path.string() << '\n';
    return kExitOk;
}

double drive_amplitude(const DriveSpec &drive) {
    if (const auto *d = std::get_if<PowerOfOmegaDrive>(&drive)) return d->xi0;
    if (const auto *d = std::get_if<SinusoidDrive>(&drive)) return d->xi0;
    if (std::holds_alternative<ZeroDrive>(drive)) return 0.0;
    throw InvalidArgument("optimize needs a zero, sinusoid or power_of_omega drive for xi0");
}

int cmd_optimize(const RunConfig &c, const CommonOptions &o, std::ostream &out) {
    const Scenario &s = c.scenario;
    const double xi0 = drive_amplitude(s.drive);
    const TimeInterval window = s.resolved_window();
    const InitialConditions cf_init = as_energy_init(s.params, s.drive, s.init);
    const auto r = find_optimal_exponent(s.params, cf_init, xi0, c.optimize.search, c.optimize.tol,
                                         window, {s.integrator.sample_dt});
    json j;
    j["command"] = "optimize";
    j["p_star"] = r.p_star;
    j["objective"] = r.objective_at_p_star;
    j["evaluations"] = r.evaluations;
    j["bracket"] = json::array({r.bracket.lo, r.bracket.hi});
    j["trace"] = json::array();
    for (const auto &[p, f] : r.trace) j["trace"].push_back(json::array({p, f}));
    j["xi0"] = xi0;
    j["window"] = interval_json(window);
    j["search"] = json::array({c.optimize.search.lo, c.optimize.search.hi});
    j["tol"] = c.optimize.tol;
    j["provenance"] = provenance(to_json(c));
    const fs::path path = fs::path(c.output_dir) / (c.name + "_optimize.json");
    write_file_atomic(path, j.dump(2) + '\n');
    if (!o.quiet) out << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_validate(const RunConfig &c, const CommonOptions &o, std::ostream &out, std::ostream &err) {
    const Scenario &s = c.scenario;
    const auto report = check_params(s.params, s.drive, s.horizon);
    json j;
    j["command"] = "validate";
    j["pass"] = report.valid;
    j["min_omega_sq"] = report.min_omega_sq;
    j["t_at_min"] = report.t_at_min;
    j["omega_sq_lower_bound"] = report.omega_sq_lower_bound;
    j["certified_by_bound"] = report.certified_by_bound;
    j["samples"] = report.samples;
    j["horizon"] = interval_json(report.horizon);
    j["provenance"] = provenance(to_json(c));
    if (!o.out_dir.empty())
        write_file_atomic(fs::path(o.out_dir) / (c.name + "_validate.json"), j.dump(2) + '\n');
    if (!o.quiet) out << j.dump(2) << '\n';
    if (!report.valid) {
        err << "error: " << describe_failure(report) << '\n';
        return kExitInvalid;
    }
    return kExitOk;
}

void add_common(CLI::App *cmd, CommonOptions &o) {
    cmd->add_option("--config", o.config, "Run configuration (JSON)");
    cmd->add_option("--preset", o.preset, "Shipped preset name (e.g. fig1, fig2, fig3)");
    cmd->add_option("--out", o.out_dir, "Output directory");
    cmd->add_option("--horizon", o.horizon, "Time horizon: END or START END")->expected(1, 2);
    cmd->add_option("--window", o.window, "Drift window START END")->expected(2);
    cmd->add_flag("--quiet", o.quiet, "Write files only; no status output");
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Simulation and optimization of the pumped flux-qubit resonator invariant", "fluxres"};
    app.require_subcommand(1);
    CommonOptions o;
    app.add_option("--preset-dir", o.preset_dir, "Directory holding preset files");

    auto *simulate = app.add_subcommand("simulate", "Integrate the resonator and write CSV + JSON summary");
    auto *sweep = app.add_subcommand("sweep", "Sweep one parameter and tabulate invariant drift");
    auto *optimize = app.add_subcommand("optimize", "Find the drive exponent that flattens the late invariant");
    auto *validate = app.add_subcommand("validate", "Check omega^2 > 0 over the horizon");
    for (auto *cmd : {simulate, sweep, optimize, validate}) add_common(cmd, o);
    optimize->add_option("--search", o.search, "Search interval LO HI")->expected(2);
    optimize->add_option("--tol", o.tol, "Final bracket width");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    try {
        const RunConfig c = resolve_config(o);
        if (*simulate) return cmd_simulate(c, o, out);
        if (*sweep) return cmd_sweep(c, o, out);
        if (*optimize) return cmd_optimize(c, o, out);
        return cmd_validate(c, o, out, err);
    } catch (const NumericalFailure &e) {
        err << "error: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const FlatObjective &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
}

}  // namespace fluxres
