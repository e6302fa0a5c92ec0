#pragma once

// Pointwise algebraic closure of the two-phase mixture: given the two partial
// densities R+ = alpha+ rho+ and R- = alpha- rho-, the phase densities are pinned
// by the pressure-difference relation P+(rho+) - P-(rho-) = f(R-) together with
// alpha+ + alpha- = 1.  This header solves that closure, evaluates the reference
// (equilibrium) state and all constants derived from it, and evaluates the ten
// state-dependent coefficient functions that drive the quadratic part of the flow.

#include <cmath>
#include <optional>
#include <string>

#include "tpdl/errors.hpp"

namespace tpdl {

struct RawParams {
    double gamma_plus = 2.0;   // adiabatic exponent, plus phase (>1)
    double gamma_minus = 2.0;  // adiabatic exponent, minus phase (>1)
    double A_plus = 1.0;       // pressure prefactors, fixed to 1
    double A_minus = 1.0;
    double mu_plus = 1.0;      // shear viscosities (>0)
    double mu_minus = 1.0;
    double lambda_plus = 0.0;  // bulk viscosities, 2mu + 3lambda >= 0
    double lambda_minus = 0.0;
    double f_slope = -7.95;    // slope of the linear interface law f(z) = f_slope*(z-1)
    double eta_gap = 0.05;     // margin in the admissibility band for f_slope
    double R_plus_inf = 1.0;   // far-field partial densities defining the reference state
    double R_minus_inf = 1.0;

    void validate() const {
        if (!(gamma_plus > 1.0) || !(gamma_minus > 1.0))
            throw ConfigError("adiabatic exponents must exceed 1");
        if (!(A_plus > 0.0) || !(A_minus > 0.0))
            throw ConfigError("pressure prefactors must be positive");
        if (!(mu_plus > 0.0) || !(mu_minus > 0.0))
            throw ConfigError("shear viscosities must be positive");
        if (2.0 * mu_plus + 3.0 * lambda_plus < 0.0 || 2.0 * mu_minus + 3.0 * lambda_minus < 0.0)
            throw ConfigError("bulk viscosity violates 2*mu + 3*lambda >= 0");
        if (!(f_slope < 0.0))
            throw ConfigError("interface-law slope f'(1) must be negative");
        if (!(eta_gap > 0.0))
            throw ConfigError("admissibility margin eta_gap must be positive");
        if (!(R_plus_inf > 0.0) || !(R_minus_inf > 0.0))
            throw ConfigError("far-field partial densities must be positive");
    }

    // Barotropic pressure laws and squared sound speeds of the pure phases.
    double pressure_plus(double rho) const { return A_plus * std::pow(rho, gamma_plus); }
    double pressure_minus(double rho) const { return A_minus * std::pow(rho, gamma_minus); }
    double sound2_plus(double rho) const {
        return gamma_plus * A_plus * std::pow(rho, gamma_plus - 1.0);
    }
    double sound2_minus(double rho) const {
        return gamma_minus * A_minus * std::pow(rho, gamma_minus - 1.0);
    }

    // Interface pressure-jump law and its derivative.
    double f(double z) const { return f_slope * (z - 1.0); }
    double f_prime(double /*z*/) const { return f_slope; }
};

// Everything the closure determines at one point (R+, R-).
struct PhasePoint {
    double R_plus, R_minus;        // inputs
    double rho_plus, rho_minus;    // phase densities
    double alpha_plus, alpha_minus; // volume fractions (sum to 1)
    double s2_plus, s2_minus;      // squared sound speeds at the phase densities
    double C2;                     // mixture sound speed squared
};

// Root of phi(rho) = P+(rho) - P-(R- rho / (rho - R+)) - f(R-) on (R+, inf).
// phi is strictly increasing there (phi' = s+^2 + s-^2 R- R+ / (rho - R+)^2 > 0),
// -> -inf as rho -> R+ and -> +inf as rho -> inf, so the root exists and is unique.
// Safeguarded Newton: keep a sign-changing bracket, bisect whenever the Newton step
// leaves it.  Converges to relative tolerance 1e-13.
inline double solve_rho_plus(double R_plus, double R_minus, const RawParams& p,
                             std::optional<double> warm_start = std::nullopt) {
    if (!(R_plus > 0.0) || !(R_minus > 0.0))
        throw std::domain_error("solve_rho_plus: partial densities must be positive");

    const auto phi = [&](double rho) {
        const double rho_minus = R_minus * rho / (rho - R_plus);
        return p.pressure_plus(rho) - p.pressure_minus(rho_minus) - p.f(R_minus);
    };
    const auto phi_prime = [&](double rho) {
        const double rho_minus = R_minus * rho / (rho - R_plus);
        const double d = rho - R_plus;
        return p.sound2_plus(rho) + p.sound2_minus(rho_minus) * R_minus * R_plus / (d * d);
    };

    // Bracket the root.  Just above R+ the minus-phase density blows up and phi < 0.
    double lo = R_plus * (1.0 + 1e-12);
    if (!(phi(lo) < 0.0)) lo = R_plus * (1.0 + 1e-15); // extremely stiff P-; stay closer
    double hi = 2.0 * (R_plus + R_minus);
    int doublings = 0;
    while (phi(hi) <= 0.0) {
        hi *= 2.0;
        if (++doublings > 200)
            throw SolveError("solve_rho_plus: failed to bracket root", lo, hi);
    }

    double x = (warm_start && *warm_start > lo && *warm_start < hi) ? *warm_start
                                                                    : 0.5 * (lo + hi);
    const double rel_tol = 1e-13;
    for (int it = 0; it < 200; ++it) {
        const double fx = phi(x);
        if (fx == 0.0) return x;
        (fx < 0.0 ? lo : hi) = x;
        const double step = fx / phi_prime(x);
        double x_next = x - step;
        if (!(x_next > lo) || !(x_next < hi)) x_next = 0.5 * (lo + hi);
        const double dx = std::abs(x_next - x);
        x = x_next;
        if (dx <= rel_tol * std::abs(x)) return x;
    }
    throw SolveError("solve_rho_plus: no convergence", lo, hi);
}

// Full closure state at (R+, R-).
inline PhasePoint closure_at(double R_plus, double R_minus, const RawParams& p,
                             std::optional<double> warm_start = std::nullopt) {
    PhasePoint pt{};
    pt.R_plus = R_plus;
    pt.R_minus = R_minus;
    pt.rho_plus = solve_rho_plus(R_plus, R_minus, p, warm_start);
    pt.alpha_plus = R_plus / pt.rho_plus;
    pt.alpha_minus = 1.0 - pt.alpha_plus;
    pt.rho_minus = R_minus / pt.alpha_minus;
    pt.s2_plus = p.sound2_plus(pt.rho_plus);
    pt.s2_minus = p.sound2_minus(pt.rho_minus);
    // Mixture sound speed: harmonic-type mean weighted by the cross volume fractions.
    pt.C2 = pt.s2_minus * pt.s2_plus /
            (pt.alpha_minus * pt.rho_plus * pt.s2_plus + pt.alpha_plus * pt.rho_minus * pt.s2_minus);
    return pt;
}

// Reference state plus every derived constant used by the linear and nonlinear
// solvers.  Built once per parameter set.
struct EquilibriumClosure {
    RawParams params;

    // reference state
    double rho_plus_eq, rho_minus_eq;
    double alpha_plus_eq, alpha_minus_eq;
    double s2_plus, s2_minus, C2;

    // coupling constants of the linearized first-order part
    double alpha1, alpha2, alpha3, alpha4;

    // symmetrizing constants: beta1 = sqrt(alpha1), beta2 = alpha2 sqrt(alpha1)/alpha4,
    // beta3 = alpha3 sqrt(alpha4)/alpha1, beta4 = sqrt(alpha4)
    double beta1, beta2, beta3, beta4;
    double beta_plus, beta_minus; // sqrt(beta1/beta2), sqrt(beta4/beta3)

    // kinematic viscosities: nu1 = mu/rho, nu2 = (mu+lambda)/rho
    double nu1_plus, nu2_plus, nu1_minus, nu2_minus;

    double nu_plus() const { return nu1_plus + nu2_plus; }
    double nu_minus() const { return nu1_minus + nu2_minus; }

    // positive combination beta1*beta4 - beta2*beta3 = -C2 f'(1) / (sqrt(a1 a4) rho+)
    double wave_coupling_gap() const { return beta1 * beta4 - beta2 * beta3; }

    // Weights of the quadratic form that the frequency-wise linearized
    // evolution never amplifies (the model's natural energy); plain unweighted
    // component sums can transiently grow by a factor of several.
    double energy_weight_plus() const { return beta1 / beta2; }
    double energy_weight_minus() const { return beta4 / beta3; }
};

inline EquilibriumClosure build_equilibrium(const RawParams& p) {
    p.validate();
    EquilibriumClosure eq{};
    eq.params = p;

    const PhasePoint ref = closure_at(p.R_plus_inf, p.R_minus_inf, p);
    eq.rho_plus_eq = ref.rho_plus;
    eq.rho_minus_eq = ref.rho_minus;
    eq.alpha_plus_eq = ref.alpha_plus;
    eq.alpha_minus_eq = ref.alpha_minus;
    eq.s2_plus = ref.s2_plus;
    eq.s2_minus = ref.s2_minus;
    eq.C2 = ref.C2;

    // Admissibility band for the interface-law slope:
    //   -s-^2/alpha- < f'(1) < (eta_gap - s-^2)/alpha- < 0.
    const double fp = p.f_prime(1.0);
    const double band_lo = -eq.s2_minus / eq.alpha_minus_eq;
    const double band_hi = (p.eta_gap - eq.s2_minus) / eq.alpha_minus_eq;
    if (!(band_hi < 0.0))
        throw ConfigError("admissibility margin too large: need eta_gap < s-^2, got eta_gap=" +
                          std::to_string(p.eta_gap) + ", s-^2=" + std::to_string(eq.s2_minus));
    if (!(fp > band_lo))
        throw ConfigError("interface slope below admissible band: need f'(1) > -s-^2/alpha- = " +
                          std::to_string(band_lo) + ", got " + std::to_string(fp));
    if (!(fp < band_hi))
        throw ConfigError("interface slope above admissible band: need f'(1) < (eta_gap - s-^2)/alpha- = " +
                          std::to_string(band_hi) + ", got " + std::to_string(fp));

    eq.alpha1 = eq.C2 * eq.rho_minus_eq / eq.rho_plus_eq;
    eq.alpha2 = eq.C2 + eq.C2 * eq.alpha_minus_eq * fp / eq.s2_minus;
    eq.alpha3 = eq.C2;
    eq.alpha4 = eq.C2 * eq.rho_plus_eq / eq.rho_minus_eq - eq.C2 * eq.alpha_plus_eq * fp / eq.s2_plus;

    if (!(eq.alpha1 > 0.0) || !(eq.alpha2 > 0.0) || !(eq.alpha3 > 0.0) || !(eq.alpha4 > 0.0))
        throw NumericError("coupling constants alpha1..alpha4 must be positive");

    eq.beta1 = std::sqrt(eq.alpha1);
    eq.beta2 = eq.alpha2 * std::sqrt(eq.alpha1) / eq.alpha4;
    eq.beta3 = eq.alpha3 * std::sqrt(eq.alpha4) / eq.alpha1;
    eq.beta4 = std::sqrt(eq.alpha4);
    eq.beta_plus = std::sqrt(eq.beta1 / eq.beta2);
    eq.beta_minus = std::sqrt(eq.beta4 / eq.beta3);

    eq.nu1_plus = p.mu_plus / eq.rho_plus_eq;
    eq.nu2_plus = (p.mu_plus + p.lambda_plus) / eq.rho_plus_eq;
    eq.nu1_minus = p.mu_minus / eq.rho_minus_eq;
    eq.nu2_minus = (p.mu_minus + p.lambda_minus) / eq.rho_minus_eq;

    // Wave-coupling identity: beta1 beta4 - beta2 beta3 = -C2 f'(1)/(sqrt(a1 a4) rho+),
    // strictly positive for admissible slopes.
    const double gap = eq.wave_coupling_gap();
    const double gap_ref = -eq.C2 * fp / (std::sqrt(eq.alpha1 * eq.alpha4) * eq.rho_plus_eq);
    if (!(gap > 0.0) || std::abs(gap - gap_ref) > 1e-10 * std::abs(gap_ref))
        throw NumericError("wave-coupling identity violated: gap=" + std::to_string(gap) +
                           " expected " + std::to_string(gap_ref));
    return eq;
}

// The ten state-dependent coefficients of the quadratic part of the momentum
// equations, evaluated at perturbation amplitudes (n+, n-) around the reference
// state (so the physical partial densities are R+_inf (1+... ) -- here simply
// R = R_inf + n R_inf? No: n are the relative perturbations of R around R_inf).
struct CoefficientSample {
    double g_plus, g_minus;     // own-phase pressure-gradient coefficients
    double gbar_plus, gbar_minus; // cross-phase pressure-gradient coefficients
    double h_plus, h_minus;     // viscosity modulation by grad n+
    double k_plus, k_minus;     // viscosity modulation by grad n-
    double l_plus, l_minus;     // deviation of 1/rho from its reference value
};

// Coefficient functions evaluated at an already-solved closure point.
inline CoefficientSample coefficients_from_point(const PhasePoint& pt,
                                                 const EquilibriumClosure& eq) {
    const RawParams& p = eq.params;
    const double fp_pt = p.f_prime(pt.R_minus); // f'(1 + n-)
    const double fp_eq = p.f_prime(1.0);

    CoefficientSample c{};
    c.g_plus = pt.C2 * pt.rho_minus / pt.rho_plus - eq.C2 * eq.rho_minus_eq / eq.rho_plus_eq;
    c.g_minus = (pt.C2 * pt.rho_plus / pt.rho_minus - fp_pt * pt.C2 * pt.alpha_plus / pt.s2_plus) -
                (eq.C2 * eq.rho_plus_eq / eq.rho_minus_eq - fp_eq * eq.C2 * eq.alpha_plus_eq / eq.s2_plus);
    c.gbar_plus = (pt.C2 + fp_pt * pt.C2 * pt.alpha_minus / pt.s2_minus) -
                  (eq.C2 + fp_eq * eq.C2 * eq.alpha_minus_eq / eq.s2_minus);
    c.gbar_minus = pt.C2 - eq.C2;

    c.h_plus = pt.C2 * pt.alpha_minus / (pt.R_plus * pt.s2_minus);
    c.h_minus = -pt.C2 / (pt.rho_minus * pt.s2_minus);
    c.k_plus = -(pt.C2 / (pt.R_plus * pt.s2_plus * pt.rho_plus) +
                 fp_pt * pt.C2 / (pt.rho_plus * pt.rho_minus * pt.s2_plus * pt.s2_minus));
    c.k_minus = -pt.alpha_plus * pt.C2 / (pt.R_minus * pt.s2_plus) +
                fp_pt * pt.alpha_plus * pt.C2 / (pt.rho_minus * pt.s2_plus * pt.s2_minus);

    c.l_plus = 1.0 / pt.rho_plus - 1.0 / eq.rho_plus_eq;
    c.l_minus = 1.0 / pt.rho_minus - 1.0 / eq.rho_minus_eq;
    return c;
}

// Evaluates the coefficient functions at (n+, n-), where n± are the deviations
// of the partial densities from their far-field values: R± = R±_inf + n±.
// g±, gbar±, l± vanish at (0,0); h± and k± tend to nonzero constants there.
inline CoefficientSample coefficients_at(double n_plus, double n_minus,
                                         const EquilibriumClosure& eq,
                                         std::optional<double> warm_start = std::nullopt) {
    const RawParams& p = eq.params;
    return coefficients_from_point(
        closure_at(p.R_plus_inf + n_plus, p.R_minus_inf + n_minus, p, warm_start), eq);
}

} // namespace tpdl
