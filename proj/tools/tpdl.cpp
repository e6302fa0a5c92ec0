// Command-line laboratory for the two-phase decay model: closure constants,
// mode spectra, linear/nonlinear decay runs, and verdict reports.

#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "tpdl/closure.hpp"
#include "tpdl/config.hpp"
#include "tpdl/decay_lab.hpp"
#include "tpdl/io.hpp"
#include "tpdl/linear_engine.hpp"
#include "tpdl/nonlinear_engine.hpp"
#include "tpdl/spectral.hpp"

namespace {

volatile std::sig_atomic_t g_interrupted = 0;
extern "C" void handle_interrupt(int) { g_interrupted = 1; }

using namespace tpdl;

std::string out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

ExperimentConfig load_experiment(const std::string& config_path) {
    KeyValues kv;
    if (!config_path.empty()) kv = read_config_file(config_path);
    ExperimentConfig cfg = experiment_from_kv(kv);
    cfg.cancel_requested = [] { return g_interrupted != 0; };
    return cfg;
}

void provenance(CsvBuilder& csv, const ExperimentConfig& cfg) {
    csv.comment("config_hash=" + config_hash(experiment_to_kv(cfg)));
    csv.comment("experiment_id=" + cfg.experiment_id);
    csv.comment("backend=" + cfg.backend);
}

int cmd_closure(const ExperimentConfig& cfg, const std::string& out_dir) {
    const EquilibriumClosure eq = build_equilibrium(cfg.params);
    const TaylorConstants tc = taylor_constants(eq);
    const std::vector<std::pair<std::string, double>> rows = {
        {"rho_plus_eq", eq.rho_plus_eq},     {"rho_minus_eq", eq.rho_minus_eq},
        {"alpha_plus_eq", eq.alpha_plus_eq}, {"alpha_minus_eq", eq.alpha_minus_eq},
        {"s2_plus", eq.s2_plus},             {"s2_minus", eq.s2_minus},
        {"c2", eq.C2},                       {"alpha1", eq.alpha1},
        {"alpha2", eq.alpha2},               {"alpha3", eq.alpha3},
        {"alpha4", eq.alpha4},               {"beta1", eq.beta1},
        {"beta2", eq.beta2},                 {"beta3", eq.beta3},
        {"beta4", eq.beta4},                 {"beta_plus", eq.beta_plus},
        {"beta_minus", eq.beta_minus},       {"nu1_plus", eq.nu1_plus},
        {"nu2_plus", eq.nu2_plus},           {"nu1_minus", eq.nu1_minus},
        {"nu2_minus", eq.nu2_minus},         {"nu_plus", eq.nu_plus()},
        {"nu_minus", eq.nu_minus()},         {"wave_coupling_gap", eq.wave_coupling_gap()},
        {"kappa1", tc.kappa1},               {"kappa2", tc.kappa2},
        {"nu_bar1", tc.nu_bar1},             {"nu_bar2", tc.nu_bar2},
        {"omega_slow", tc.omega_slow},       {"omega_fast", tc.omega_fast},
    };
    CsvBuilder csv;
    provenance(csv, cfg);
    csv.header({"quantity", "value"});
    for (const auto& [name, value] : rows) {
        csv.row({name, format_double(value)});
        std::printf("%-18s %s\n", name.c_str(), format_double(value).c_str());
    }
    atomic_write_file(out_path(out_dir, "closure.csv"), csv.str());
    return 0;
}

int cmd_spectrum(const ExperimentConfig& cfg, const std::string& out_dir, double r_min,
                 double r_max, int samples) {
    if (!(r_min > 0.0) || !(r_max > r_min) || samples < 2)
        throw ConfigError("spectrum sweep needs 0 < r_min < r_max and samples >= 2");
    const EquilibriumClosure eq = build_equilibrium(cfg.params);
    CsvBuilder csv;
    provenance(csv, cfg);
    std::vector<std::string> cols = {"r"};
    for (int i = 1; i <= 4; ++i) {
        cols.push_back("re_exact_" + std::to_string(i));
        cols.push_back("im_exact_" + std::to_string(i));
    }
    for (int i = 1; i <= 4; ++i) {
        cols.push_back("re_taylor_" + std::to_string(i));
        cols.push_back("im_taylor_" + std::to_string(i));
    }
    for (int i = 1; i <= 4; ++i) cols.push_back("abs_err_" + std::to_string(i));
    csv.header(cols);
    const double step = std::log(r_max / r_min) / (samples - 1);
    for (int k = 0; k < samples; ++k) {
        const double r = r_min * std::exp(step * k);
        const auto exact = exact_eigenvalues(mode_matrix(eq, r), r);
        const auto taylor = taylor_eigenvalues(eq, r);
        std::vector<std::string> cells = {format_double(r)};
        for (const auto& l : exact) {
            cells.push_back(format_double(l.real()));
            cells.push_back(format_double(l.imag()));
        }
        for (const auto& l : taylor) {
            cells.push_back(format_double(l.real()));
            cells.push_back(format_double(l.imag()));
        }
        for (int i = 0; i < 4; ++i) cells.push_back(format_double(std::abs(exact[i] - taylor[i])));
        csv.row(cells);
    }
    atomic_write_file(out_path(out_dir, "spectrum.csv"), csv.str());
    std::printf("spectrum written for %d wavenumbers in [%g, %g]\n", samples, r_min, r_max);
    return 0;
}

void write_series_csvs(const DecayReport& report, const ExperimentConfig& cfg,
                       const std::string& out_dir, const std::string& base) {
    CsvBuilder l2;
    provenance(l2, cfg);
    l2.header({"t", "field_group", "ell", "norm"});
    bool have_lp = false;
    for (const auto& rec : report.series) {
        if (rec.kind == "L2grad")
            l2.row({format_double(rec.t), field_group_name(rec.group), format_double(rec.order),
                    format_double(rec.value)});
        if (rec.kind == "Lp") have_lp = true;
    }
    atomic_write_file(out_path(out_dir, base + ".csv"), l2.str());
    if (have_lp) {
        CsvBuilder lp;
        provenance(lp, cfg);
        lp.header({"t", "field_group", "p", "norm"});
        for (const auto& rec : report.series)
            if (rec.kind == "Lp")
                lp.row({format_double(rec.t), field_group_name(rec.group), format_double(rec.order),
                        format_double(rec.value)});
        atomic_write_file(out_path(out_dir, base + "_lp.csv"), lp.str());
    }
}

void write_report_csv(const DecayReport& report, const ExperimentConfig& cfg,
                      const std::string& out_dir) {
    CsvBuilder csv;
    provenance(csv, cfg);
    csv.header({"experiment_id", "backend", "field_group", "norm_kind", "ell_or_p", "exponent",
                "stderr", "target", "verdict"});
    for (const auto& row : report.rows)
        csv.row({report.experiment_id, report.backend, row.field_group, row.norm_kind,
                 format_double(row.ell_or_p), format_double(row.exponent),
                 format_double(row.std_error), format_double(row.target),
                 row.pass ? "pass" : "fail"});
    atomic_write_file(out_path(out_dir, "report.csv"), csv.str());
}

void write_summary(const DecayReport& report, const std::string& out_dir, double runtime_s) {
    std::string text;
    for (const auto& row : report.rows)
        if (!row.pass)
            text += "FAIL " + row.field_group + " " + row.norm_kind + " order=" +
                    format_double(row.ell_or_p) + " exponent=" + format_double(row.exponent) +
                    " target=" + format_double(row.target) + "\n";
    for (const auto& row : report.rows)
        if (row.pass)
            text += "pass " + row.field_group + " " + row.norm_kind + " order=" +
                    format_double(row.ell_or_p) + " exponent=" + format_double(row.exponent) +
                    " target=" + format_double(row.target) + " stderr=" +
                    format_double(row.std_error) + "\n";
    for (const auto& note : report.notes) text += "note: " + note + "\n";
    text += "experiment_id=" + report.experiment_id + "\n";
    text += "backend=" + report.backend + "\n";
    text += "config_hash=" + report.config_hash + "\n";
    text += std::string("overall=") + (report.all_pass ? "pass" : "fail") + "\n";
    text += "runtime_seconds=" + format_double(runtime_s) + "\n";
    atomic_write_file(out_path(out_dir, "summary.txt"), text);
}

int finish_report(DecayReport& report, const ExperimentConfig& cfg, const std::string& out_dir,
                  double runtime_s, const std::string& series_base) {
    write_series_csvs(report, cfg, out_dir, series_base);
    write_report_csv(report, cfg, out_dir);
    write_summary(report, out_dir, runtime_s);
    for (const auto& note : report.notes) std::fprintf(stderr, "note: %s\n", note.c_str());
    std::printf("%s: %s (%zu verdict rows)\n", report.experiment_id.c_str(),
                report.all_pass ? "pass" : "fail", report.rows.size());
    if (g_interrupted) return 1;
    return report.all_pass ? 0 : 2;
}

int cmd_linear_decay(const ExperimentConfig& cfg, const std::string& out_dir) {
    if (cfg.backend == "nonlinear")
        throw ConfigError("linear-decay requires a linear backend (linear-grid or linear-radial)");
    DecayReport report = run_experiment(cfg);
    write_series_csvs(report, cfg, out_dir, "linear_decay");
    for (const auto& note : report.notes) std::fprintf(stderr, "note: %s\n", note.c_str());
    std::printf("linear decay series written (%zu records)\n", report.series.size());
    return g_interrupted ? 1 : 0;
}

int cmd_nonlinear_decay(ExperimentConfig cfg, const std::string& out_dir, bool snapshots,
                        bool single_precision) {
    cfg.backend = "nonlinear";
    const EquilibriumClosure eq = build_equilibrium(cfg.params);
    const Grid g = cfg.grid();
    FieldState state = cfg.generator == "lower_bound"
                           ? gen_lower_bound_data(g, cfg.eta1, cfg.n0, cfg.delta0)
                           : gen_generic_data(g, cfg.delta0, cfg.seed);
    const std::vector<double> times = cfg.times();
    SolverConfig sc;
    sc.dt = cfg.dt;
    sc.t_end = sc.dt * std::ceil(*std::max_element(times.begin(), times.end()) / sc.dt - 1e-12);
    sc.sample_times = times;
    sc.norm_max_ell = cfg.norm_max_ell;
    sc.lp_orders = cfg.lp_orders;
    sc.cancel_requested = cfg.cancel_requested;
    TrajectoryResult result = evolve_nonlinear(std::move(state), eq, sc);

    CsvBuilder csv;
    provenance(csv, cfg);
    csv.header({"t", "field_group", "norm_kind", "order", "value"});
    for (const auto& rec : result.records)
        csv.row({format_double(rec.t), field_group_name(rec.group), rec.kind,
                 format_double(rec.order), format_double(rec.value)});
    atomic_write_file(out_path(out_dir, "nonlinear_decay.csv"), csv.str());

    if (snapshots) {
        const char* names[8] = {"n_plus", "u_plus_x", "u_plus_y", "u_plus_z",
                                "n_minus", "u_minus_x", "u_minus_y", "u_minus_z"};
        auto comps = result.final_state.components();
        for (int c = 0; c < 8; ++c)
            write_field_snapshot(out_path(out_dir, std::string(names[c]) + ".bin"),
                                 result.final_state.grid, names[c], *comps[c], single_precision);
    }

    switch (result.status) {
        case RunStatus::Ok:
            std::printf("nonlinear run finished at t=%s\n", format_double(result.end_time).c_str());
            return 0;
        case RunStatus::Cancelled:
            std::fprintf(stderr, "partial: cancelled at t=%s\n",
                         format_double(result.end_time).c_str());
            return 1;
        default:
            std::fprintf(stderr, "run ended early: %s (t=%s); partial results written\n",
                         result.message.c_str(), format_double(result.end_time).c_str());
            return 1;
    }
}

int cmd_report(ExperimentConfig cfg, const std::string& out_dir, bool force_lower_bound) {
    if (force_lower_bound) {
        cfg.generator = "lower_bound";
        cfg.min_component_verdict = true;
        if (cfg.backend == "nonlinear")
            throw ConfigError("lower-bound requires a linear backend");
    }
    const auto start = std::chrono::steady_clock::now();
    DecayReport report = run_experiment(cfg);
    const double runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.runtime_seconds = runtime_s;
    return finish_report(report, cfg, out_dir, runtime_s, "series");
}

} // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, handle_interrupt);
    CLI::App app{"numerical laboratory for two-phase flow decay rates"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    double r_min = 1e-4, r_max = 10.0;
    int samples = 121;
    bool snapshots = false, single_precision = false;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value configuration file");
        sub->add_option("--out", out_dir, "output directory (default: current)");
    };
    CLI::App* closure = app.add_subcommand("closure", "solve the equilibrium closure and print constants");
    add_common(closure);
    CLI::App* spectrum = app.add_subcommand("spectrum", "sweep mode eigenvalues vs Taylor expansion");
    add_common(spectrum);
    spectrum->add_option("--r-min", r_min, "smallest wavenumber (default 1e-4)");
    spectrum->add_option("--r-max", r_max, "largest wavenumber (default 10)");
    spectrum->add_option("--samples", samples, "log-spaced sample count (default 121)");
    CLI::App* linear = app.add_subcommand("linear-decay", "norm history of the linearized flow");
    add_common(linear);
    CLI::App* nonlinear = app.add_subcommand("nonlinear-decay", "norm history of the full flow");
    add_common(nonlinear);
    nonlinear->add_flag("--snapshots", snapshots, "write final-state field snapshots");
    nonlinear->add_flag("--single-precision", single_precision, "complex64 snapshots");
    CLI::App* lower = app.add_subcommand("lower-bound", "min-component decay verdict experiment");
    add_common(lower);
    CLI::App* report = app.add_subcommand("report", "full experiment with fitted-exponent verdicts");
    add_common(report);

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = load_experiment(config_path);
        if (closure->parsed()) return cmd_closure(cfg, out_dir);
        if (spectrum->parsed()) return cmd_spectrum(cfg, out_dir, r_min, r_max, samples);
        if (linear->parsed()) return cmd_linear_decay(cfg, out_dir);
        if (nonlinear->parsed()) return cmd_nonlinear_decay(cfg, out_dir, snapshots, single_precision);
        if (lower->parsed()) return cmd_report(cfg, out_dir, /*force_lower_bound=*/true);
        if (report->parsed()) return cmd_report(cfg, out_dir, /*force_lower_bound=*/false);
        throw ConfigError("no subcommand selected");
    } catch (const ConfigError& err) {
        std::fprintf(stderr, "config error: %s\n", err.what());
        return 1;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
}
