#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <tpdl/closure.hpp>

#include "oracles.hpp"

using tpdl::RawParams;

namespace {
bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }
bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}
}  // namespace

TEST_CASE("default equilibrium reproduces the symmetric reference state") {
  const auto eq = tpdl::build_equilibrium(RawParams{});
  // With quadratic pressure laws, unit prefactors, and unit far-field partial
  // densities the closure has the exact solution rho+ = rho- = 2.
  CHECK(close(eq.rho_plus_eq, 2.0, 1e-12));
  CHECK(close(eq.rho_minus_eq, 2.0, 1e-12));
  CHECK(close(eq.alpha_plus_eq, 0.5, 1e-13));
  CHECK(close(eq.alpha_minus_eq, 0.5, 1e-13));
  CHECK(close(eq.s2_plus, 4.0, 1e-11));
  CHECK(close(eq.s2_minus, 4.0, 1e-11));
  CHECK(close(eq.C2, 2.0, 1e-11));

  CHECK(close(eq.alpha1, 2.0, 1e-11));
  CHECK(close(eq.alpha2, 0.0125, 1e-11));
  CHECK(close(eq.alpha3, 2.0, 1e-11));
  CHECK(close(eq.alpha4, 3.9875, 1e-11));

  CHECK(close_rel(eq.beta1, std::sqrt(2.0), 1e-12));
  CHECK(close_rel(eq.beta2, 0.0125 * std::sqrt(2.0) / 3.9875, 1e-11));
  CHECK(close_rel(eq.beta3, std::sqrt(3.9875), 1e-11));
  CHECK(close_rel(eq.beta4, std::sqrt(3.9875), 1e-11));

  CHECK(close(eq.nu1_plus, 0.5, 1e-12));
  CHECK(close(eq.nu2_plus, 0.5, 1e-12));
  CHECK(close(eq.nu1_minus, 0.5, 1e-12));
  CHECK(close(eq.nu2_minus, 0.5, 1e-12));
  CHECK(close(eq.nu_plus(), 1.0, 1e-12));
  CHECK(close(eq.nu_minus(), 1.0, 1e-12));

  // coupling gap identity at the default point: 7.95 / sqrt(7.975)
  CHECK(close_rel(eq.wave_coupling_gap(), 7.95 / std::sqrt(7.975), 1e-12));

  // energy weights are the (positive) squared phase amplitudes
  CHECK(eq.energy_weight_plus() > 0.0);
  CHECK(eq.energy_weight_minus() > 0.0);
  CHECK(close_rel(eq.energy_weight_plus(), eq.beta_plus * eq.beta_plus, 1e-12));
  CHECK(close_rel(eq.energy_weight_minus(), eq.beta_minus * eq.beta_minus, 1e-12));
}

TEST_CASE("closure root matches the bisection oracle on a parameter grid") {
  const RawParams p{};
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double rp = 0.5 + i * (1.0 / 9.0);
      const double rm = 0.5 + j * (1.0 / 9.0);
      const double mine = tpdl::solve_rho_plus(rp, rm, p);
      const double ref = oracle::bisect_rho_plus(rp, rm, p);
      INFO("R+=" << rp << " R-=" << rm);
      CHECK(close_rel(mine, ref, 1e-11));
    }
  }
}

TEST_CASE("closure root satisfies the defining equation and its constraints") {
  oracle::Uniform rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    RawParams p{};
    p.gamma_plus = rng.range(1.2, 3.0);
    p.gamma_minus = rng.range(1.2, 3.0);
    p.mu_plus = rng.range(0.1, 2.0);
    p.mu_minus = rng.range(0.1, 2.0);
    const double rp = rng.range(0.4, 1.6);
    const double rm = rng.range(0.4, 1.6);
    const double rho = tpdl::solve_rho_plus(rp, rm, p);
    REQUIRE(rho > rp);
    const double rho_m = rm * rho / (rho - rp);
    const double resid = p.pressure_plus(rho) - p.pressure_minus(rho_m) - p.f(rm);
    const double scale = 1.0 + std::abs(p.pressure_plus(rho));
    CHECK(std::abs(resid) <= 1e-10 * scale);

    // volume fractions consistent and positive
    const auto pt = tpdl::closure_at(rp, rm, p);
    CHECK(close(pt.alpha_plus + pt.alpha_minus, 1.0, 1e-14));
    CHECK(pt.alpha_plus > 0.0);
    CHECK(pt.alpha_minus > 0.0);
    CHECK(close_rel(pt.alpha_plus * pt.rho_plus, rp, 1e-12));
    CHECK(close_rel(pt.alpha_minus * pt.rho_minus, rm, 1e-12));
  }
}

TEST_CASE("warm-started solve returns the same root") {
  const RawParams p{};
  const double cold = tpdl::solve_rho_plus(1.07, 0.93, p);
  const double warm = tpdl::solve_rho_plus(1.07, 0.93, p, cold * 1.000001);
  CHECK(close_rel(cold, warm, 1e-12));
  const double far = tpdl::solve_rho_plus(1.07, 0.93, p, 5.0);
  CHECK(close_rel(cold, far, 1e-12));
}

TEST_CASE("invalid inputs are rejected with informative types") {
  const RawParams p{};
  CHECK_THROWS_AS(tpdl::solve_rho_plus(-1.0, 1.0, p), std::domain_error);
  CHECK_THROWS_AS(tpdl::solve_rho_plus(1.0, 0.0, p), std::domain_error);

  RawParams bad = p;
  bad.gamma_plus = 1.0;
  CHECK_THROWS_AS(tpdl::build_equilibrium(bad), tpdl::ConfigError);
  bad = p;
  bad.mu_minus = 0.0;
  CHECK_THROWS_AS(tpdl::build_equilibrium(bad), tpdl::ConfigError);
  bad = p;
  bad.f_slope = 0.5;
  CHECK_THROWS_AS(tpdl::build_equilibrium(bad), tpdl::ConfigError);

  // interface slope band at the defaults is (-8, -7.9)
  bad = p;
  bad.f_slope = -8.5;
  CHECK_THROWS_AS(tpdl::build_equilibrium(bad), tpdl::ConfigError);
  bad = p;
  bad.f_slope = -7.5;
  CHECK_THROWS_AS(tpdl::build_equilibrium(bad), tpdl::ConfigError);
  bad = p;
  bad.f_slope = -7.925;
  CHECK_NOTHROW(tpdl::build_equilibrium(bad));
}

TEST_CASE("coupling-gap identity holds on randomized admissible parameters") {
  oracle::Uniform rng(11);
  int built = 0;
  for (int trial = 0; trial < 50; ++trial) {
    RawParams p{};
    p.gamma_plus = rng.range(1.2, 3.0);
    p.gamma_minus = rng.range(1.2, 3.0);
    p.mu_plus = rng.range(0.1, 2.0);
    p.mu_minus = rng.range(0.1, 2.0);
    p.lambda_plus = rng.range(0.0, 1.0);
    p.lambda_minus = rng.range(0.0, 1.0);
    p.R_plus_inf = rng.range(0.7, 1.3);
    p.R_minus_inf = rng.range(0.7, 1.3);

    // Find the admissible band for the interface slope.  The band depends on
    // the reference state, which itself shifts with the slope through the
    // far-field pressure balance when R-_inf != 1, so iterate to a fixed point.
    const double frac = rng.range(0.1, 0.9);
    double slope = -1e-9;
    for (int it = 0; it < 6; ++it) {
      RawParams probe = p;
      probe.f_slope = slope;
      const auto ref = tpdl::closure_at(p.R_plus_inf, p.R_minus_inf, probe);
      p.eta_gap = std::min(0.05, 0.1 * ref.s2_minus);
      const double band_lo = -ref.s2_minus / ref.alpha_minus;
      const double band_hi = (p.eta_gap - ref.s2_minus) / ref.alpha_minus;
      slope = band_lo + frac * (band_hi - band_lo);
    }
    p.f_slope = slope;

    tpdl::EquilibriumClosure eq;
    try {
      eq = tpdl::build_equilibrium(p);
    } catch (const tpdl::ConfigError&) {
      // probe-based band can shift slightly through f(R-_inf); skip borderline draws
      continue;
    }
    ++built;
    const double gap = eq.wave_coupling_gap();
    const double ref_gap = -eq.C2 * p.f_slope /
                           (std::sqrt(eq.alpha1 * eq.alpha4) * eq.rho_plus_eq);
    CHECK(gap > 0.0);
    CHECK(close_rel(gap, ref_gap, 1e-10));
  }
  CHECK(built >= 40);
}

TEST_CASE("coefficient functions at the reference point take their closed-form values") {
  const auto eq = tpdl::build_equilibrium(RawParams{});
  const auto c = tpdl::coefficients_at(0.0, 0.0, eq);

  // differences of identical closure evaluations: zero up to solver tolerance
  CHECK(std::abs(c.g_plus) <= 1e-11);
  CHECK(std::abs(c.g_minus) <= 1e-11);
  CHECK(std::abs(c.gbar_plus) <= 1e-11);
  CHECK(std::abs(c.gbar_minus) <= 1e-11);
  CHECK(std::abs(c.l_plus) <= 1e-12);
  CHECK(std::abs(c.l_minus) <= 1e-12);

  // nonvanishing viscous-modulation coefficients, exact rational values
  CHECK(close(c.h_plus, 0.25, 1e-11));
  CHECK(close(c.h_minus, -0.25, 1e-11));
  CHECK(close(c.k_plus, -0.0015625, 1e-11));
  CHECK(close(c.k_minus, -0.4984375, 1e-11));
}

TEST_CASE("coefficient functions match an independent evaluation off equilibrium") {
  const RawParams p{};
  const auto eq = tpdl::build_equilibrium(p);
  const double np = 0.05, nm = -0.03;
  const auto c = tpdl::coefficients_at(np, nm, eq);

  // Recompute from scratch through the bisection oracle.
  const double Rp = p.R_plus_inf + np, Rm = p.R_minus_inf + nm;
  const double rho_p = oracle::bisect_rho_plus(Rp, Rm, p);
  const double a_p = Rp / rho_p, a_m = 1.0 - a_p;
  const double rho_m = Rm / a_m;
  const double s2p = p.sound2_plus(rho_p), s2m = p.sound2_minus(rho_m);
  const double C2 = s2m * s2p / (a_m * rho_p * s2p + a_p * rho_m * s2m);
  const double fp = p.f_slope;

  const double e_rho_p = eq.rho_plus_eq, e_rho_m = eq.rho_minus_eq;
  const double e_C2 = eq.C2, e_s2p = eq.s2_plus, e_s2m = eq.s2_minus;
  const double e_ap = eq.alpha_plus_eq, e_am = eq.alpha_minus_eq;

  const double g_plus = C2 * rho_m / rho_p - e_C2 * e_rho_m / e_rho_p;
  const double g_minus = (C2 * rho_p / rho_m - fp * C2 * a_p / s2p) -
                         (e_C2 * e_rho_p / e_rho_m - fp * e_C2 * e_ap / e_s2p);
  const double gbar_plus =
      (C2 + fp * C2 * a_m / s2m) - (e_C2 + fp * e_C2 * e_am / e_s2m);
  const double gbar_minus = C2 - e_C2;
  const double h_plus = C2 * a_m / (Rp * s2m);
  const double h_minus = -C2 / (rho_m * s2m);
  const double k_plus = -(C2 / (Rp * s2p * rho_p) + fp * C2 / (rho_p * rho_m * s2p * s2m));
  const double k_minus =
      -a_p * C2 / (Rm * s2p) + fp * a_p * C2 / (rho_m * s2p * s2m);
  const double l_plus = 1.0 / rho_p - 1.0 / e_rho_p;
  const double l_minus = 1.0 / rho_m - 1.0 / e_rho_m;

  CHECK(close_rel(c.g_plus, g_plus, 1e-9));
  CHECK(close_rel(c.g_minus, g_minus, 1e-9));
  CHECK(close_rel(c.gbar_plus, gbar_plus, 1e-9));
  CHECK(close_rel(c.gbar_minus, gbar_minus, 1e-9));
  CHECK(close_rel(c.h_plus, h_plus, 1e-10));
  CHECK(close_rel(c.h_minus, h_minus, 1e-10));
  CHECK(close_rel(c.k_plus, k_plus, 1e-10));
  CHECK(close_rel(c.k_minus, k_minus, 1e-10));
  CHECK(close_rel(c.l_plus, l_plus, 1e-9));
  CHECK(close_rel(c.l_minus, l_minus, 1e-9));
}

TEST_CASE("coefficient functions vary smoothly near the reference point") {
  const auto eq = tpdl::build_equilibrium(RawParams{});
  // central differences of g+ in the n+ direction at two step sizes agree
  const auto d_at = [&](double h) {
    const auto a = tpdl::coefficients_at(h, 0.0, eq);
    const auto b = tpdl::coefficients_at(-h, 0.0, eq);
    return (a.g_plus - b.g_plus) / (2.0 * h);
  };
  const double d1 = d_at(1e-4);
  const double d2 = d_at(5e-5);
  CHECK(std::abs(d1 - d2) <= 1e-5 * (1.0 + std::abs(d1)));
}

TEST_CASE("closure evaluation is deterministic") {
  const auto eq = tpdl::build_equilibrium(RawParams{});
  const auto a = tpdl::coefficients_at(0.01, -0.02, eq);
  const auto b = tpdl::coefficients_at(0.01, -0.02, eq);
  CHECK(a.g_plus == b.g_plus);
  CHECK(a.k_minus == b.k_minus);
  CHECK(a.l_plus == b.l_plus);
}
