#pragma once

// Pseudo-spectral solver for the full scaled system: the linear part is applied
// exactly per mode (integrating factor), the quadratic part is evaluated on the
// grid with 2/3-rule dealiasing, and time stepping is fourth-order RK on the
// integrating-factor form.

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "tpdl/closure.hpp"
#include "tpdl/field.hpp"
#include "tpdl/linear_engine.hpp"
#include "tpdl/norms.hpp"
#include "tpdl/operators.hpp"
#include "tpdl/transforms.hpp"

namespace tpdl {

struct SolverConfig {
    double dt = 0.25;
    double t_end = 50.0;
    double dealias_fraction = 2.0 / 3.0;
    double vacuum_floor = 0.1;          // min allowed physical partial density
    int norm_max_ell = 2;               // record grad^ell, ell = 0..this
    std::vector<double> lp_orders = {std::numeric_limits<double>::infinity()};
    std::vector<double> sample_times;   // snapped to the step grid

    // hooks (not part of file-based config)
    std::function<void(const FieldState&)> sample_callback;
    std::function<bool()> cancel_requested;

    void validate() const {
        if (!(dt > 0.0)) throw ConfigError("dt must be positive");
        if (!(t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
        if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
            throw ConfigError("dealias fraction must lie in (0, 1]");
        if (!(vacuum_floor >= 0.0)) throw ConfigError("vacuum floor must be nonnegative");
        if (norm_max_ell < 0 || norm_max_ell > 8)
            throw ConfigError("norm_max_ell must lie in [0, 8]");
    }
};

namespace detail {

// Physical-space realization of a spectrally differentiated coefficient array.
// weight(m1, m2, m3) multiplies each mode before the inverse transform.
template <typename W>
inline ScalarField spectral_to_physical(const Grid& g, const ScalarField& chat, W&& weight) {
    ScalarField out(chat);
    for_each_mode(g, [&](std::size_t flat, int m1, int m2, int m3) {
        out[flat] *= weight(m1, m2, m3);
    });
    to_physical(g, out);
    return out;
}

} // namespace detail

// Quadratic right-hand side of the scaled system, returned in state layout
// (Fourier coefficients, dealiased).  The input state is scaled; the physical
// coefficient functions are evaluated on the unscaled perturbations.
inline FieldState nonlinear_rhs(const FieldState& s, const EquilibriumClosure& eq,
                                double dealias_fraction = 2.0 / 3.0,
                                double vacuum_floor = 0.1) {
    const Grid& g = s.grid;
    const std::size_t n = g.size();
    const double dk = g.wavenumber_step();
    const std::complex<double> I(0.0, 1.0);
    const double sa1 = std::sqrt(eq.alpha1), sa4 = std::sqrt(eq.alpha4);

    // Unscaled spectral coefficients.
    ScalarField a_hat(s.n_plus), c_hat(s.n_minus);
    for (auto& v : a_hat) v /= eq.alpha1;
    for (auto& v : c_hat) v /= eq.alpha4;
    std::array<ScalarField, 3> b_hat, d_hat;
    for (int c = 0; c < 3; ++c) {
        b_hat[c] = s.u_plus[c];
        for (auto& v : b_hat[c]) v /= sa1;
        d_hat[c] = s.u_minus[c];
        for (auto& v : d_hat[c]) v /= sa4;
    }

    const auto ident = [](int, int, int) { return 1.0; };
    const auto grad = [&](int axis) {
        return [axis, dk, I](int m1, int m2, int m3) {
            const int m[3] = {m1, m2, m3};
            return I * (dk * m[axis]);
        };
    };
    const auto laplace = [&](int m1, int m2, int m3) {
        const double q2 = double(m1) * m1 + double(m2) * m2 + double(m3) * m3;
        return -dk * dk * q2;
    };

    // Physical fields and derivatives.
    ScalarField A = detail::spectral_to_physical(g, a_hat, ident);
    ScalarField C = detail::spectral_to_physical(g, c_hat, ident);
    std::array<ScalarField, 3> B, D, dA, dC, lapB, lapD, gdivB, gdivD;
    std::array<std::array<ScalarField, 3>, 3> dB, dD; // dB[j][i] = d_j b_i
    ScalarField divb_hat(n), divd_hat(n);
    for (int c = 0; c < 3; ++c) {
        for_each_mode(g, [&](std::size_t flat, int m1, int m2, int m3) {
            const int m[3] = {m1, m2, m3};
            divb_hat[flat] += I * (dk * m[c]) * b_hat[c][flat];
            divd_hat[flat] += I * (dk * m[c]) * d_hat[c][flat];
        });
    }
    for (int c = 0; c < 3; ++c) {
        B[c] = detail::spectral_to_physical(g, b_hat[c], ident);
        D[c] = detail::spectral_to_physical(g, d_hat[c], ident);
        dA[c] = detail::spectral_to_physical(g, a_hat, grad(c));
        dC[c] = detail::spectral_to_physical(g, c_hat, grad(c));
        lapB[c] = detail::spectral_to_physical(g, b_hat[c], laplace);
        lapD[c] = detail::spectral_to_physical(g, d_hat[c], laplace);
        gdivB[c] = detail::spectral_to_physical(g, divb_hat, grad(c));
        gdivD[c] = detail::spectral_to_physical(g, divd_hat, grad(c));
        for (int i = 0; i < 3; ++i) {
            dB[c][i] = detail::spectral_to_physical(g, b_hat[i], grad(c));
            dD[c][i] = detail::spectral_to_physical(g, d_hat[i], grad(c));
        }
    }

    // Vacuum guard on the physical partial densities.
    const double floor_p = eq.params.R_plus_inf * vacuum_floor;
    const double floor_m = eq.params.R_minus_inf * vacuum_floor;
    for (std::size_t p = 0; p < n; ++p) {
        if (eq.params.R_plus_inf + A[p].real() <= floor_p ||
            eq.params.R_minus_inf + C[p].real() <= floor_m)
            throw VacuumError("partial density approached vacuum", s.time);
    }

    // Pointwise coefficient functions, warm-starting each closure solve with the
    // previous cell's root (deterministic scan order; neighbouring cells differ
    // by O(perturbation) so Newton converges in a couple of iterations).
    ScalarField gp(n), gm(n), gbp(n), gbm(n), hp(n), hm(n), kp(n), km(n), lp(n), lm(n);
    std::optional<double> warm;
    for (std::size_t p = 0; p < n; ++p) {
        const PhasePoint pt = closure_at(eq.params.R_plus_inf + A[p].real(),
                                         eq.params.R_minus_inf + C[p].real(), eq.params, warm);
        warm = pt.rho_plus;
        const CoefficientSample cs = coefficients_from_point(pt, eq);
        gp[p] = cs.g_plus;
        gm[p] = cs.g_minus;
        gbp[p] = cs.gbar_plus;
        gbm[p] = cs.gbar_minus;
        hp[p] = cs.h_plus;
        hm[p] = cs.h_minus;
        kp[p] = cs.k_plus;
        km[p] = cs.k_minus;
        lp[p] = cs.l_plus;
        lm[p] = cs.l_minus;
    }

    FieldState out(g);
    out.time = s.time;

    // Mass equations: F1 = -div(a b), F3 = -div(c d), assembled spectrally from
    // the physical products so the means stay exactly zero.
    {
        std::array<ScalarField, 3> Pb, Pd;
        for (int c = 0; c < 3; ++c) {
            Pb[c].resize(n);
            Pd[c].resize(n);
            for (std::size_t p = 0; p < n; ++p) {
                Pb[c][p] = A[p] * B[c][p];
                Pd[c][p] = C[p] * D[c][p];
            }
            to_fourier(g, Pb[c]);
            to_fourier(g, Pd[c]);
        }
        for_each_mode(g, [&](std::size_t flat, int m1, int m2, int m3) {
            const int m[3] = {m1, m2, m3};
            std::complex<double> f1{}, f3{};
            for (int c = 0; c < 3; ++c) {
                f1 -= I * (dk * m[c]) * Pb[c][flat];
                f3 -= I * (dk * m[c]) * Pd[c][flat];
            }
            out.n_plus[flat] = eq.alpha1 * f1;
            out.n_minus[flat] = eq.alpha4 * f3;
        });
    }

    // Momentum equations.
    const double mu_p = eq.params.mu_plus, la_p = eq.params.lambda_plus;
    const double mu_m = eq.params.mu_minus, la_m = eq.params.lambda_minus;
    for (int i = 0; i < 3; ++i) {
        ScalarField f2(n), f4(n);
        for (std::size_t p = 0; p < n; ++p) {
            std::complex<double> advect_p{}, advect_m{}, mix_p{}, mix_m{};
            std::complex<double> divb{}, divd{};
            for (int j = 0; j < 3; ++j) {
                advect_p += B[j][p] * dB[j][i][p];
                advect_m += D[j][p] * dD[j][i][p];
                // d_j n d_j u_i + d_j n d_i u_j contractions
                mix_p += dA[j][p] * (dB[j][i][p] + dB[i][j][p]) * hp[p] +
                         dC[j][p] * (dB[j][i][p] + dB[i][j][p]) * kp[p];
                mix_m += dA[j][p] * (dD[j][i][p] + dD[i][j][p]) * hm[p] +
                         dC[j][p] * (dD[j][i][p] + dD[i][j][p]) * km[p];
                divb += dB[j][j][p];
                divd += dD[j][j][p];
            }
            f2[p] = -gp[p] * dA[i][p] - gbp[p] * dC[i][p] - advect_p + mu_p * mix_p +
                    la_p * (hp[p] * dA[i][p] + kp[p] * dC[i][p]) * divb +
                    mu_p * lp[p] * lapB[i][p] + (mu_p + la_p) * lp[p] * gdivB[i][p];
            f4[p] = -gm[p] * dC[i][p] - gbm[p] * dA[i][p] - advect_m + mu_m * mix_m +
                    la_m * (hm[p] * dA[i][p] + km[p] * dC[i][p]) * divd +
                    mu_m * lm[p] * lapD[i][p] + (mu_m + la_m) * lm[p] * gdivD[i][p];
        }
        to_fourier(g, f2);
        to_fourier(g, f4);
        for (std::size_t p = 0; p < n; ++p) {
            out.u_plus[i][p] = sa1 * f2[p];
            out.u_minus[i][p] = sa4 * f4[p];
        }
    }

    for (auto* c : out.components()) apply_dealias(g, *c, dealias_fraction);
    return out;
}

// Result of a nonlinear run: flat norm records plus the final state and status.
struct TrajectoryRecord {
    double t;
    FieldGroup group;
    std::string kind;  // "L2grad", "Hk", "Lp", "time_weighted"
    double order;      // ell, k, or p
    double value;
};

enum class RunStatus { Ok, Vacuum, BlowUp, Cancelled };

struct TrajectoryResult {
    std::vector<TrajectoryRecord> records;
    FieldState final_state;
    RunStatus status = RunStatus::Ok;
    std::string message;
    double end_time = 0.0;
};

// Fourth-order integrating-factor RK stepper with the linear semigroup applied
// exactly.  Stage algebra (E = half-step propagator applied twice):
//   z = E2 y,  k1 = N(y),            ya = z + (h/2) E2 k1,   k2 = N(ya),
//   yb = z + (h/2) k2,  k3 = N(yb),  yc = E2(z + h k3),      k4 = N(yc),
//   y' = E2( z + (h/6) E2 k1 + (h/3) k2 + (h/3) k3 ) + (h/6) k4.
class NonlinearIntegrator {
public:
    NonlinearIntegrator(const Grid& g, const EquilibriumClosure& eq, const SolverConfig& cfg)
        : grid_(g), eq_(eq), cfg_(cfg), half_(build_semigroup_table(g, eq, 0.5 * cfg.dt)) {
        cfg_.validate();
    }

    FieldState step(FieldState y) const {
        const double h = cfg_.dt;
        const double da = cfg_.dealias_fraction, vf = cfg_.vacuum_floor;
        FieldState k1 = nonlinear_rhs(y, eq_, da, vf);
        apply_semigroup(y, half_); // y is now z
        FieldState u = std::move(k1);
        apply_semigroup(u, half_); // E2 k1 (time tag on stages is irrelevant)

        FieldState ya = y;
        ya.add_scaled(u, 0.5 * h);
        FieldState k2 = nonlinear_rhs(ya, eq_, da, vf);

        FieldState yb = y;
        yb.add_scaled(k2, 0.5 * h);
        FieldState k3 = nonlinear_rhs(yb, eq_, da, vf);

        FieldState yc = y;
        yc.add_scaled(k3, h);
        apply_semigroup(yc, half_);
        FieldState k4 = nonlinear_rhs(yc, eq_, da, vf);

        FieldState out = std::move(y);
        out.add_scaled(u, h / 6.0);
        out.add_scaled(k2, h / 3.0);
        out.add_scaled(k3, h / 3.0);
        apply_semigroup(out, half_);
        out.add_scaled(k4, h / 6.0);
        return out;
    }

private:
    Grid grid_;
    EquilibriumClosure eq_;
    SolverConfig cfg_;
    SemigroupTable half_;
};

namespace detail {

// L^p norm of the pointwise magnitude over a component group.
inline double state_lp_norm(const FieldState& s, FieldGroup gr, double p) {
    std::vector<double> mag2(s.grid.size(), 0.0);
    for_group(s, gr, [&](const ScalarField& chat) {
        ScalarField phys(chat);
        to_physical(s.grid, phys);
        for (std::size_t i = 0; i < phys.size(); ++i) mag2[i] += std::norm(phys[i]);
    });
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : mag2) m = std::max(m, v);
        return std::sqrt(m);
    }
    double acc = 0.0;
    for (double v : mag2) acc += std::pow(v, 0.5 * p);
    return std::pow(s.grid.cell_volume() * acc, 1.0 / p);
}

} // namespace detail

// Records the norm set for one sample into out.  The "Hk" record is the
// energy-weighted H^N norm (see state_weighted_norm): that is the quantity
// whose linear part never amplifies, so it is the right boundedness monitor; the
// per-component "L2grad" records stay unweighted.
inline void record_sample_norms(const FieldState& s, const EquilibriumClosure& eq,
                                const SolverConfig& cfg, std::vector<TrajectoryRecord>& out) {
    static const FieldGroup groups[5] = {FieldGroup::NPlus, FieldGroup::UPlus, FieldGroup::NMinus,
                                         FieldGroup::UMinus, FieldGroup::All};
    const int N = cfg.norm_max_ell;
    std::array<double, 16> all_ell{}; // grad^ell norms of the full state
    for (FieldGroup gr : groups) {
        for (int ell = 0; ell <= N; ++ell) {
            const double v = state_sobolev_norm(s, gr, ell);
            if (gr == FieldGroup::All) all_ell[ell] = v;
            out.push_back({s.time, gr, "L2grad", double(ell), v});
        }
    }
    double hk2 = 0.0;
    for (int ell = 0; ell <= N; ++ell) {
        const double v = state_weighted_norm(s, ell, eq.energy_weight_plus(),
                                             eq.energy_weight_minus());
        hk2 += v * v;
    }
    out.push_back({s.time, FieldGroup::All, "Hk", double(N), std::sqrt(hk2)});
    for (double p : cfg.lp_orders)
        out.push_back({s.time, FieldGroup::All, "Lp", p, detail::state_lp_norm(s, FieldGroup::All, p)});
    // time-weighted decay monitor: (1+t)^(3/4 + ell/2) ||grad^ell .||_{H^{N-ell}}
    for (int ell = 0; ell <= N; ++ell) {
        double h2 = 0.0;
        for (int j = ell; j <= N; ++j) h2 += all_ell[j] * all_ell[j];
        const double w = std::pow(1.0 + s.time, 0.75 + 0.5 * ell) * std::sqrt(h2);
        out.push_back({s.time, FieldGroup::All, "time_weighted", double(ell), w});
    }
}

inline TrajectoryResult evolve_nonlinear(FieldState state, const EquilibriumClosure& eq,
                                         const SolverConfig& cfg) {
    cfg.validate();
    const long n_steps = std::lround(cfg.t_end / cfg.dt);
    if (std::abs(n_steps * cfg.dt - cfg.t_end) > 1e-9 * std::max(1.0, cfg.t_end))
        throw ConfigError("t_end must be an integer multiple of dt");

    // Snap sample times to step indices.
    std::vector<long> sample_steps;
    for (double t : cfg.sample_times) {
        long idx = std::lround(t / cfg.dt);
        if (idx >= 0 && idx <= n_steps) sample_steps.push_back(idx);
    }
    std::sort(sample_steps.begin(), sample_steps.end());
    sample_steps.erase(std::unique(sample_steps.begin(), sample_steps.end()), sample_steps.end());

    for (auto* c : state.components()) apply_dealias(state.grid, *c, cfg.dealias_fraction);

    TrajectoryResult result;
    NonlinearIntegrator integrator(state.grid, eq, cfg);
    std::size_t next_sample = 0;

    const auto maybe_sample = [&](const FieldState& s, long step_idx) {
        if (next_sample < sample_steps.size() && sample_steps[next_sample] == step_idx) {
            if (!s.finite()) throw BlowUpError("non-finite state", s.time);
            record_sample_norms(s, eq, cfg, result.records);
            if (cfg.sample_callback) cfg.sample_callback(s);
            ++next_sample;
        }
    };

    try {
        maybe_sample(state, 0);
        for (long i = 0; i < n_steps; ++i) {
            if (cfg.cancel_requested && cfg.cancel_requested()) {
                result.status = RunStatus::Cancelled;
                result.message = "cancelled";
                break;
            }
            state = integrator.step(std::move(state));
            // cheap per-step sanity probe on the density energy
            double e = 0.0;
            for (const auto& v : state.n_plus) e += std::norm(v);
            if (!std::isfinite(e)) throw BlowUpError("non-finite state", state.time);
            maybe_sample(state, i + 1);
        }
    } catch (const VacuumError& err) {
        result.status = RunStatus::Vacuum;
        result.message = err.what();
    } catch (const BlowUpError& err) {
        result.status = RunStatus::BlowUp;
        result.message = err.what();
    }
    result.end_time = state.time;
    result.final_state = std::move(state);
    return result;
}

} // namespace tpdl
