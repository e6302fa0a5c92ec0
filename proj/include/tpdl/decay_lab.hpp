#pragma once

// Decay-rate experiments: deterministic data generators, power-law fitting of
// norm histories, and the orchestration that turns a configuration into a
// verdict table (measured exponent vs. theoretical target per norm).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tpdl/closure.hpp"
#include "tpdl/config.hpp"
#include "tpdl/field.hpp"
#include "tpdl/io.hpp"
#include "tpdl/linear_engine.hpp"
#include "tpdl/nonlinear_engine.hpp"
#include "tpdl/norms.hpp"
#include "tpdl/operators.hpp"
#include "tpdl/transforms.hpp"

namespace tpdl {

// --- conversions between solver (scaled) variables and raw perturbations ---

inline FieldState to_unscaled(FieldState s, const EquilibriumClosure& eq) {
    const double sa1 = std::sqrt(eq.alpha1), sa4 = std::sqrt(eq.alpha4);
    for (auto& v : s.n_plus) v /= eq.alpha1;
    for (auto& v : s.n_minus) v /= eq.alpha4;
    for (auto& c : s.u_plus)
        for (auto& v : c) v /= sa1;
    for (auto& c : s.u_minus)
        for (auto& v : c) v /= sa4;
    return s;
}

inline FieldState to_scaled(FieldState s, const EquilibriumClosure& eq) {
    const double sa1 = std::sqrt(eq.alpha1), sa4 = std::sqrt(eq.alpha4);
    for (auto& v : s.n_plus) v *= eq.alpha1;
    for (auto& v : s.n_minus) v *= eq.alpha4;
    for (auto& c : s.u_plus)
        for (auto& v : c) v *= sa1;
    for (auto& c : s.u_minus)
        for (auto& v : c) v *= sa4;
    return s;
}

// --- data generators -------------------------------------------------------

namespace detail {
// Portable uniform double in [0, 1): upper 53 bits of the engine output.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
} // namespace detail

// Smooth random periodic data: each component is a sum of three periodic
// Gaussian-like bumps exp(kappa (cos(2 pi (x - x0)/L) - 1)) (separable per axis),
// densities are made mean-free, and the whole state is rescaled so its combined
// H^2 norm equals delta0.  Fully determined by the seed.
inline FieldState gen_generic_data(const Grid& g, double delta0, std::uint64_t seed) {
    if (!(delta0 > 0.0)) throw ConfigError("delta0 must be positive");
    std::mt19937_64 rng(seed);
    const int M = g.points_per_axis;
    FieldState s(g);

    auto comps = s.components();
    std::vector<double> axis_factor[3];
    for (auto& a : axis_factor) a.resize(M);
    for (int comp = 0; comp < 8; ++comp) {
        ScalarField& f = *comps[comp];
        for (int bump = 0; bump < 3; ++bump) {
            const double amp = 2.0 * detail::uniform01(rng) - 1.0;
            double center[3];
            for (auto& c : center) c = detail::uniform01(rng) * g.box_length;
            const double kappa = 2.0 + 4.0 * detail::uniform01(rng);
            for (int axis = 0; axis < 3; ++axis) {
                for (int i = 0; i < M; ++i) {
                    const double x = i * g.spacing();
                    const double c =
                        std::cos(2.0 * 3.14159265358979323846 * (x - center[axis]) / g.box_length);
                    axis_factor[axis][i] = std::exp(kappa * (c - 1.0));
                }
            }
            std::size_t flat = 0;
            for (int i = 0; i < M; ++i)
                for (int j = 0; j < M; ++j) {
                    const double pre = amp * axis_factor[0][i] * axis_factor[1][j];
                    for (int k = 0; k < M; ++k, ++flat) f[flat] += pre * axis_factor[2][k];
                }
        }
    }

    // Mean-free components, then Fourier coefficients.
    for (auto* fp : comps) {
        std::complex<double> mean{};
        for (const auto& v : *fp) mean += v;
        mean /= static_cast<double>(g.size());
        for (auto& v : *fp) v -= mean;
        to_fourier(g, *fp);
    }

    const double h2 = state_h_norm(s, FieldGroup::All, 2);
    if (!(h2 > 0.0)) throw NumericError("generated data has zero norm");
    s.scale(delta0 / h2);
    return s;
}

// Low-frequency concentrated data for lower-bound experiments: the plus-phase
// density perturbation has transform 1.5 N0 sqrt(delta0) on |xi| <= eta1,
// smoothly cut to zero by 2 eta1; all other components vanish.  The lattice
// coefficients carry the Riemann-sum weight that makes the box field the
// periodization of the whole-space one, so box norms converge to mesh-free
// norms as the box grows and the physical amplitude stays O(sqrt(delta0)).
inline FieldState gen_lower_bound_data(const Grid& g, double eta1, double N0, double delta0) {
    if (!(eta1 > 0.0)) throw ConfigError("eta1 must be positive");
    const double nyquist = g.wavenumber_step() * (g.points_per_axis / 2);
    if (2.0 * eta1 >= nyquist)
        throw ConfigError("eta1 support extends beyond the grid Nyquist frequency");
    const double amp = 1.5 * N0 * std::sqrt(delta0) * grid_coefficient_factor(g);
    const CutoffProfile cut{2.0 * eta1};
    FieldState s(g);
    const double dk = g.wavenumber_step();
    for_each_mode(g, [&](std::size_t flat, int m1, int m2, int m3) {
        const double r = dk * std::sqrt(double(m1) * m1 + double(m2) * m2 + double(m3) * m3);
        s.n_plus[flat] = amp * cut(r);
    });
    s.n_plus[0] = 0.0; // keep the density mean-free on the torus
    return s;
}

// Whole-space version of the same data for the radial backend.
inline RadialProfile lower_bound_profile(double eta1, double N0, double delta0,
                                         double r_max = 20.0) {
    if (!(eta1 > 0.0)) throw ConfigError("eta1 must be positive");
    const double amp = 1.5 * N0 * std::sqrt(delta0);
    const CutoffProfile cut{2.0 * eta1};
    RadialProfile p;
    p.r_max = r_max;
    p.value = [amp, cut](double r) {
        CVec4 v = CVec4::Zero();
        v(0) = amp * cut(r);
        return v;
    };
    return p;
}

// Smooth full-band radial data exciting all four wave components.
inline RadialProfile generic_radial_profile(double r_max = 20.0) {
    RadialProfile p;
    p.r_max = r_max;
    p.value = [](double r) {
        const double env = std::exp(-r * r);
        CVec4 v;
        v << env, 0.7 * env, -0.5 * env, 0.3 * env;
        return v;
    };
    return p;
}

// --- power-law fitting ------------------------------------------------------

struct PowerLawFit {
    double exponent = 0.0;
    double std_error = 0.0;
    int points = 0;
};

// Least-squares slope of log(value) against log(1 + t) over t in [t1, t2].
inline PowerLawFit fit_power_law(const std::vector<double>& t, const std::vector<double>& v,
                                 double t1, double t2) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t1 || t[i] > t2) continue;
        if (!(v[i] > 0.0)) throw FitError("power-law fit: non-positive value in window");
        x.push_back(std::log1p(t[i]));
        y.push_back(std::log(v[i]));
    }
    const int n = static_cast<int>(x.size());
    if (n < 5) throw FitError("power-law fit: fewer than 5 samples in window");
    double xm = 0.0, ym = 0.0;
    for (int i = 0; i < n; ++i) {
        xm += x[i];
        ym += y[i];
    }
    xm /= n;
    ym /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
    }
    PowerLawFit fit;
    fit.points = n;
    fit.exponent = sxy / sxx;
    double ss_res = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - ym - fit.exponent * (x[i] - xm);
        ss_res += r * r;
    }
    fit.std_error = n > 2 ? std::sqrt(ss_res / ((n - 2) * sxx)) : 0.0;
    return fit;
}

// --- experiment orchestration ------------------------------------------------

struct ExperimentConfig {
    std::string experiment_id = "lower-bound-radial";
    std::string backend = "linear-radial"; // linear-radial | linear-grid | nonlinear
    std::string generator = "lower_bound"; // lower_bound | generic
    RawParams params;

    double box_length = 32.0 * 3.14159265358979323846;
    int points_per_axis = 64;

    double delta0 = 1e-3;
    double n0 = 1.0;
    double eta1 = 0.1;
    double eta0 = 1.0;
    std::uint64_t seed = 1;
    double r_max = 20.0;

    std::string time_grid = "geometric:1:10000:25";
    std::vector<int> ells = {0, 1, 2, 3};
    std::vector<double> lp_orders;
    double fit_t1 = 100.0, fit_t2 = 1e4;
    double tol_linear = 0.05, tol_lp = 0.1, tol_nonlinear = 0.15;
    bool min_component_verdict = false;
    std::vector<double> t1_sensitivity = {50.0, 100.0, 200.0};

    double dt = 0.25; // nonlinear backend only
    int norm_max_ell = 2;

    // cooperative cancellation hook (not part of the file config)
    std::function<bool()> cancel_requested;

    Grid grid() const { return Grid(box_length, points_per_axis); }
    std::vector<double> times() const { return parse_time_grid(time_grid, "time_grid"); }

    void validate() const {
        params.validate();
        grid().validate();
        if (backend != "linear-radial" && backend != "linear-grid" && backend != "nonlinear")
            throw ConfigError("unknown backend '" + backend + "'");
        if (generator != "lower_bound" && generator != "generic")
            throw ConfigError("unknown generator '" + generator + "'");
        if (!(delta0 > 0.0)) throw ConfigError("delta0 must be positive");
        if (!(eta1 > 0.0) || !(eta0 > 0.0)) throw ConfigError("cutoff scales must be positive");
        if (!(fit_t2 > fit_t1)) throw ConfigError("fit window must satisfy t1 < t2");
        for (int ell : ells)
            if (ell < 0 || ell > 8) throw ConfigError("ladder orders must lie in [0, 8]");
        for (double p : lp_orders)
            if (!(p >= 2.0)) throw ConfigError("L^p orders must satisfy p >= 2");
        if (backend == "linear-radial")
            for (double p : lp_orders)
                if (!std::isinf(p))
                    throw ConfigError(
                        "linear-radial computes the sup-norm surrogate (p = inf) only");
        (void)times();
    }
};

struct ReportRow {
    std::string field_group; // "n+", "u+", "n-", "u-", "all", "min"
    std::string norm_kind;   // "L2grad", "Lp", "min_L2", "min_L2[t1=...]"
    double ell_or_p = 0.0;
    double exponent = 0.0;
    double std_error = 0.0;
    double target = 0.0;
    bool pass = false;
};

struct DecayReport {
    std::string experiment_id, backend, config_hash;
    std::vector<ReportRow> rows;
    std::vector<TrajectoryRecord> series;
    std::vector<std::string> notes;
    bool all_pass = true;
    double runtime_seconds = 0.0; // filled by callers; never serialized into CSV
};

inline double l2_target_exponent(double ell) { return -(0.75 + 0.5 * ell); }
inline double lp_target_exponent(double p) {
    return std::isinf(p) ? -1.5 : -1.5 * (1.0 - 1.0 / p);
}

// --- config <-> key/value mapping ---------------------------------------------

inline const std::set<std::string>& experiment_known_keys() {
    static const std::set<std::string> keys = {
        "experiment_id", "backend", "generator", "gamma_plus", "gamma_minus", "a_plus", "a_minus",
        "mu_plus", "mu_minus", "lambda_plus", "lambda_minus", "f_slope", "eta_gap", "r_plus_inf",
        "r_minus_inf", "box_length", "points_per_axis", "delta0", "n0", "eta1", "eta0", "seed",
        "r_max", "time_grid", "ells", "lp_orders", "fit_t1", "fit_t2", "tol_linear", "tol_lp",
        "tol_nonlinear", "min_component_verdict", "t1_sensitivity", "dt", "norm_max_ell"};
    return keys;
}

inline ExperimentConfig experiment_from_kv(KeyValues kv, bool with_env = true) {
    if (with_env) apply_env_overrides(kv, experiment_known_keys());
    reject_unknown_keys(kv, experiment_known_keys());
    ExperimentConfig cfg;
    const auto str = [&](const char* k, std::string& dst) {
        if (kv.count(k)) dst = kv.at(k);
    };
    const auto num = [&](const char* k, double& dst) {
        if (kv.count(k)) dst = parse_double(kv.at(k), k);
    };
    const auto inum = [&](const char* k, int& dst) {
        if (kv.count(k)) dst = static_cast<int>(parse_long(kv.at(k), k));
    };
    str("experiment_id", cfg.experiment_id);
    str("backend", cfg.backend);
    str("generator", cfg.generator);
    num("gamma_plus", cfg.params.gamma_plus);
    num("gamma_minus", cfg.params.gamma_minus);
    num("a_plus", cfg.params.A_plus);
    num("a_minus", cfg.params.A_minus);
    num("mu_plus", cfg.params.mu_plus);
    num("mu_minus", cfg.params.mu_minus);
    num("lambda_plus", cfg.params.lambda_plus);
    num("lambda_minus", cfg.params.lambda_minus);
    num("f_slope", cfg.params.f_slope);
    num("eta_gap", cfg.params.eta_gap);
    num("r_plus_inf", cfg.params.R_plus_inf);
    num("r_minus_inf", cfg.params.R_minus_inf);
    num("box_length", cfg.box_length);
    inum("points_per_axis", cfg.points_per_axis);
    num("delta0", cfg.delta0);
    num("n0", cfg.n0);
    num("eta1", cfg.eta1);
    num("eta0", cfg.eta0);
    if (kv.count("seed")) cfg.seed = static_cast<std::uint64_t>(parse_long(kv.at("seed"), "seed"));
    num("r_max", cfg.r_max);
    str("time_grid", cfg.time_grid);
    if (kv.count("ells")) {
        cfg.ells.clear();
        for (double v : parse_double_list(kv.at("ells"), "ells"))
            cfg.ells.push_back(static_cast<int>(v));
    }
    if (kv.count("lp_orders")) cfg.lp_orders = parse_double_list(kv.at("lp_orders"), "lp_orders");
    num("fit_t1", cfg.fit_t1);
    num("fit_t2", cfg.fit_t2);
    num("tol_linear", cfg.tol_linear);
    num("tol_lp", cfg.tol_lp);
    num("tol_nonlinear", cfg.tol_nonlinear);
    if (kv.count("min_component_verdict"))
        cfg.min_component_verdict = parse_bool(kv.at("min_component_verdict"), "min_component_verdict");
    if (kv.count("t1_sensitivity"))
        cfg.t1_sensitivity = parse_double_list(kv.at("t1_sensitivity"), "t1_sensitivity");
    num("dt", cfg.dt);
    inum("norm_max_ell", cfg.norm_max_ell);
    cfg.validate();
    return cfg;
}

inline KeyValues experiment_to_kv(const ExperimentConfig& cfg) {
    KeyValues kv;
    kv["experiment_id"] = cfg.experiment_id;
    kv["backend"] = cfg.backend;
    kv["generator"] = cfg.generator;
    kv["gamma_plus"] = format_double(cfg.params.gamma_plus);
    kv["gamma_minus"] = format_double(cfg.params.gamma_minus);
    kv["a_plus"] = format_double(cfg.params.A_plus);
    kv["a_minus"] = format_double(cfg.params.A_minus);
    kv["mu_plus"] = format_double(cfg.params.mu_plus);
    kv["mu_minus"] = format_double(cfg.params.mu_minus);
    kv["lambda_plus"] = format_double(cfg.params.lambda_plus);
    kv["lambda_minus"] = format_double(cfg.params.lambda_minus);
    kv["f_slope"] = format_double(cfg.params.f_slope);
    kv["eta_gap"] = format_double(cfg.params.eta_gap);
    kv["r_plus_inf"] = format_double(cfg.params.R_plus_inf);
    kv["r_minus_inf"] = format_double(cfg.params.R_minus_inf);
    kv["box_length"] = format_double(cfg.box_length);
    kv["points_per_axis"] = std::to_string(cfg.points_per_axis);
    kv["delta0"] = format_double(cfg.delta0);
    kv["n0"] = format_double(cfg.n0);
    kv["eta1"] = format_double(cfg.eta1);
    kv["eta0"] = format_double(cfg.eta0);
    kv["seed"] = std::to_string(cfg.seed);
    kv["r_max"] = format_double(cfg.r_max);
    kv["time_grid"] = cfg.time_grid;
    std::string ells;
    for (std::size_t i = 0; i < cfg.ells.size(); ++i)
        ells += (i ? "," : "") + std::to_string(cfg.ells[i]);
    kv["ells"] = ells;
    std::string lps;
    for (std::size_t i = 0; i < cfg.lp_orders.size(); ++i)
        lps += (i ? "," : "") + (std::isinf(cfg.lp_orders[i]) ? std::string("inf")
                                                              : format_double(cfg.lp_orders[i]));
    kv["lp_orders"] = lps;
    kv["fit_t1"] = format_double(cfg.fit_t1);
    kv["fit_t2"] = format_double(cfg.fit_t2);
    kv["tol_linear"] = format_double(cfg.tol_linear);
    kv["tol_lp"] = format_double(cfg.tol_lp);
    kv["tol_nonlinear"] = format_double(cfg.tol_nonlinear);
    kv["min_component_verdict"] = cfg.min_component_verdict ? "true" : "false";
    std::string sens;
    for (std::size_t i = 0; i < cfg.t1_sensitivity.size(); ++i)
        sens += (i ? "," : "") + format_double(cfg.t1_sensitivity[i]);
    kv["t1_sensitivity"] = sens;
    kv["dt"] = format_double(cfg.dt);
    kv["norm_max_ell"] = std::to_string(cfg.norm_max_ell);
    return kv;
}

// --- the experiment runner -----------------------------------------------------

namespace detail {

inline std::pair<std::vector<double>, std::vector<double>> extract_series(
    const std::vector<TrajectoryRecord>& series, FieldGroup gr, const std::string& kind,
    double order) {
    std::vector<double> t, v;
    for (const auto& rec : series) {
        if (rec.group == gr && rec.kind == kind && rec.order == order) {
            t.push_back(rec.t);
            v.push_back(rec.value);
        }
    }
    return {t, v};
}

inline void sort_series(std::vector<TrajectoryRecord>& series) {
    std::stable_sort(series.begin(), series.end(),
                     [](const TrajectoryRecord& a, const TrajectoryRecord& b) {
                         if (a.group != b.group) return static_cast<int>(a.group) < static_cast<int>(b.group);
                         if (a.kind != b.kind) return a.kind < b.kind;
                         if (a.order != b.order) return a.order < b.order;
                         return a.t < b.t;
                     });
}

} // namespace detail

inline DecayReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    DecayReport report;
    report.experiment_id = cfg.experiment_id;
    report.backend = cfg.backend;
    report.config_hash = config_hash(experiment_to_kv(cfg));
    const EquilibriumClosure eq = build_equilibrium(cfg.params);
    const std::vector<double> times = cfg.times();
    static const FieldGroup component_groups[4] = {FieldGroup::NPlus, FieldGroup::UPlus,
                                                   FieldGroup::NMinus, FieldGroup::UMinus};

    double fit_t2 = cfg.fit_t2;
    const bool is_grid_backend = cfg.backend != "linear-radial";
    if (cfg.backend != "nonlinear" && is_grid_backend) {
        const double t_sat = box_saturation_time(cfg.grid(), eq);
        if (fit_t2 > t_sat) {
            fit_t2 = t_sat;
            report.notes.push_back("fit window clipped at box saturation time t=" +
                                   format_double(t_sat));
        }
    }

    bool cancelled = false;
    const auto cancel_now = [&]() {
        if (cfg.cancel_requested && cfg.cancel_requested()) cancelled = true;
        return cancelled;
    };

    // --- produce the norm series ---
    if (cfg.backend == "linear-radial") {
        const RadialProfile profile = cfg.generator == "lower_bound"
                                          ? lower_bound_profile(cfg.eta1, cfg.n0, cfg.delta0, cfg.r_max)
                                          : generic_radial_profile(cfg.r_max);
        for (double t : times) {
            if (cancel_now()) break;
            for (int ell : cfg.ells) {
                double all2 = 0.0;
                for (FieldGroup gr : component_groups) {
                    const double v =
                        radial_decay_norm(eq, profile, t, ell, gr, cfg.eta1, cfg.eta0);
                    all2 += v * v;
                    report.series.push_back({t, gr, "L2grad", double(ell), v});
                }
                report.series.push_back({t, FieldGroup::All, "L2grad", double(ell), std::sqrt(all2)});
            }
            for (double p : cfg.lp_orders)
                report.series.push_back(
                    {t, FieldGroup::All, "Lp", p,
                     radial_lp_norm(eq, profile, t, p, FieldGroup::All, cfg.eta1, cfg.eta0)});
        }
    } else if (cfg.backend == "linear-grid") {
        const Grid g = cfg.grid();
        FieldState state = cfg.generator == "lower_bound"
                               ? gen_lower_bound_data(g, cfg.eta1, cfg.n0, cfg.delta0)
                               : gen_generic_data(g, cfg.delta0, cfg.seed);
        std::vector<double> sorted_times(times);
        std::sort(sorted_times.begin(), sorted_times.end());
        for (double t : sorted_times) {
            if (cancel_now()) break;
            state = evolve_linear(std::move(state), eq, t);
            for (int ell : cfg.ells) {
                double all2 = 0.0;
                for (FieldGroup gr : component_groups) {
                    const double v = state_sobolev_norm(state, gr, ell);
                    all2 += v * v;
                    report.series.push_back({t, gr, "L2grad", double(ell), v});
                }
                report.series.push_back({t, FieldGroup::All, "L2grad", double(ell), std::sqrt(all2)});
            }
            for (double p : cfg.lp_orders)
                report.series.push_back(
                    {t, FieldGroup::All, "Lp", p, detail::state_lp_norm(state, FieldGroup::All, p)});
        }
    } else { // nonlinear
        const Grid g = cfg.grid();
        FieldState state = cfg.generator == "lower_bound"
                               ? gen_lower_bound_data(g, cfg.eta1, cfg.n0, cfg.delta0)
                               : gen_generic_data(g, cfg.delta0, cfg.seed);
        SolverConfig sc;
        sc.dt = cfg.dt;
        const double t_max = *std::max_element(times.begin(), times.end());
        sc.t_end = sc.dt * std::ceil(t_max / sc.dt - 1e-12);
        sc.sample_times = times;
        sc.norm_max_ell = cfg.norm_max_ell;
        sc.lp_orders = cfg.lp_orders;
        sc.cancel_requested = cfg.cancel_requested;
        TrajectoryResult result = evolve_nonlinear(std::move(state), eq, sc);
        report.series = std::move(result.records);
        cancelled = result.status == RunStatus::Cancelled;
        if (result.status != RunStatus::Ok && !cancelled) {
            report.notes.push_back("run ended early (" + result.message + ") at t=" +
                                   format_double(result.end_time));
            report.all_pass = false;
        }
    }

    if (cancelled) {
        report.notes.push_back("partial: cancelled before completion");
        report.all_pass = false;
    }

    // --- fits and verdicts ---
    const double tol_l2 = cfg.backend == "nonlinear" ? cfg.tol_nonlinear : cfg.tol_linear;
    const auto add_fit = [&](const std::string& group_name, const std::string& kind_name,
                             double order, double target, double tol, double t1, double t2,
                             const std::vector<double>& t, const std::vector<double>& v) {
        ReportRow row;
        row.field_group = group_name;
        row.norm_kind = kind_name;
        row.ell_or_p = order;
        row.target = target;
        try {
            const PowerLawFit fit = fit_power_law(t, v, t1, t2);
            row.exponent = fit.exponent;
            row.std_error = fit.std_error;
            row.pass = std::abs(fit.exponent - target) <= tol;
        } catch (const FitError& err) {
            row.exponent = std::numeric_limits<double>::quiet_NaN();
            row.std_error = std::numeric_limits<double>::quiet_NaN();
            row.pass = false;
            report.notes.push_back(std::string(err.what()) + " [" + group_name + " " + kind_name +
                                   " " + format_double(order) + "]");
        }
        report.rows.push_back(row);
        report.all_pass = report.all_pass && row.pass;
    };

    for (int ell : cfg.ells) {
        const auto [t, v] = detail::extract_series(report.series, FieldGroup::All, "L2grad", ell);
        add_fit("all", "L2grad", ell, l2_target_exponent(ell), tol_l2, cfg.fit_t1, fit_t2, t, v);
    }
    for (double p : cfg.lp_orders) {
        const auto [t, v] = detail::extract_series(report.series, FieldGroup::All, "Lp", p);
        add_fit("all", "Lp", p, lp_target_exponent(p), cfg.tol_lp, cfg.fit_t1, fit_t2, t, v);
    }

    if (cfg.min_component_verdict) {
        // min over the four component L2 norms at each sample time
        const auto [t0s, n_p] = detail::extract_series(report.series, FieldGroup::NPlus, "L2grad", 0.0);
        const auto [t1s, u_p] = detail::extract_series(report.series, FieldGroup::UPlus, "L2grad", 0.0);
        const auto [t2s, n_m] = detail::extract_series(report.series, FieldGroup::NMinus, "L2grad", 0.0);
        const auto [t3s, u_m] = detail::extract_series(report.series, FieldGroup::UMinus, "L2grad", 0.0);
        if (u_p.size() != t0s.size() || n_m.size() != t0s.size() || u_m.size() != t0s.size())
            throw NumericError("component norm series have mismatched lengths");
        std::vector<double> mins(t0s.size());
        for (std::size_t i = 0; i < t0s.size(); ++i)
            mins[i] = std::min(std::min(n_p[i], u_p[i]), std::min(n_m[i], u_m[i]));
        for (std::size_t i = 0; i < t0s.size(); ++i)
            report.series.push_back({t0s[i], FieldGroup::All, "min_L2", 0.0, mins[i]});
        add_fit("min", "min_L2", 0.0, l2_target_exponent(0), tol_l2, cfg.fit_t1, fit_t2, t0s, mins);
        for (double t1_alt : cfg.t1_sensitivity)
            add_fit("min", "min_L2[t1=" + format_double(t1_alt) + "]", 0.0, l2_target_exponent(0),
                    tol_l2, t1_alt, fit_t2, t0s, mins);
    }

    detail::sort_series(report.series);
    return report;
}

} // namespace tpdl
