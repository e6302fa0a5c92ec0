#pragma once

// Norms on periodic fields.  Fourier-side norms use Parseval for the series
// convention: ||f||_L2^2 = L^3 sum_k |c_k|^2, and homogeneous derivative norms
// weight each mode by |xi|^(2 ell).  Physical-side L^p norms use the grid
// quadrature (cell volume times lattice sum).

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tpdl/field.hpp"
#include "tpdl/grid.hpp"

namespace tpdl {

namespace detail {
// sum_k |xi_k|^(2 ell) |c_k|^2, zero mode excluded for ell < 0.
inline double weighted_mode_sum(const Grid& g, const ScalarField& c, double ell) {
    const double dk = g.wavenumber_step();
    double acc = 0.0;
    double max_abs2 = 0.0;
    double zero_abs2 = 0.0;
    for_each_mode(g, [&](std::size_t flat, int m1, int m2, int m3) {
        const double q2 = static_cast<double>(m1) * m1 + static_cast<double>(m2) * m2 +
                          static_cast<double>(m3) * m3;
        const double a2 = std::norm(c[flat]);
        max_abs2 = std::max(max_abs2, a2);
        if (q2 == 0.0) {
            zero_abs2 = a2;
            if (ell > 0.0) return;   // |xi|^(2 ell) = 0
            if (ell < 0.0) return;   // handled by mean check below
            acc += a2;
            return;
        }
        acc += (ell == 0.0 ? a2 : std::pow(dk * dk * q2, ell) * a2);
    });
    if (ell < 0.0 && zero_abs2 > 1e-26 * std::max(max_abs2, 1e-300))
        throw std::domain_error("negative-order norm of a field with nonzero mean");
    return acc;
}
} // namespace detail

// Homogeneous Sobolev seminorm ||grad^ell f||_L2 (ell >= -1; non-integer allowed).
inline double sobolev_norm(const Grid& g, const ScalarField& c, double ell) {
    if (ell < -1.0) throw ConfigError("derivative order below -1 not supported");
    const double L3 = g.box_length * g.box_length * g.box_length;
    return std::sqrt(L3 * detail::weighted_mode_sum(g, c, ell));
}

// Inhomogeneous H^k norm: sqrt(sum over ell = 0..k of the squared seminorms).
inline double h_norm(const Grid& g, const ScalarField& c, int k) {
    if (k < 0) throw ConfigError("H^k order must be nonnegative");
    const double L3 = g.box_length * g.box_length * g.box_length;
    double acc = 0.0;
    for (int ell = 0; ell <= k; ++ell) acc += detail::weighted_mode_sum(g, c, ell);
    return std::sqrt(L3 * acc);
}

// L^p norm of a physical-space field (p in [2, inf]; use p = infinity for sup).
inline double lp_norm(const Grid& g, const ScalarField& physical, double p) {
    if (!(p >= 2.0)) throw ConfigError("L^p norms supported for p >= 2 only");
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& v : physical) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (const auto& v : physical) acc += std::pow(std::abs(v), p);
    return std::pow(g.cell_volume() * acc, 1.0 / p);
}

// Which components of a FieldState a norm covers.
enum class FieldGroup { NPlus, UPlus, NMinus, UMinus, All };

inline const char* field_group_name(FieldGroup gr) {
    switch (gr) {
        case FieldGroup::NPlus: return "n+";
        case FieldGroup::UPlus: return "u+";
        case FieldGroup::NMinus: return "n-";
        case FieldGroup::UMinus: return "u-";
        default: return "all";
    }
}

namespace detail {
template <typename F>
inline void for_group(const FieldState& s, FieldGroup gr, F&& fn) {
    const bool all = gr == FieldGroup::All;
    if (all || gr == FieldGroup::NPlus) fn(s.n_plus);
    if (all || gr == FieldGroup::UPlus)
        for (const auto& c : s.u_plus) fn(c);
    if (all || gr == FieldGroup::NMinus) fn(s.n_minus);
    if (all || gr == FieldGroup::UMinus)
        for (const auto& c : s.u_minus) fn(c);
}
} // namespace detail

// ||grad^ell (group)||_L2, components summed in quadrature.
inline double state_sobolev_norm(const FieldState& s, FieldGroup gr, double ell) {
    if (ell < -1.0) throw ConfigError("derivative order below -1 not supported");
    const double L3 = std::pow(s.grid.box_length, 3);
    double acc = 0.0;
    detail::for_group(s, gr, [&](const ScalarField& c) {
        acc += detail::weighted_mode_sum(s.grid, c, ell);
    });
    return std::sqrt(L3 * acc);
}

inline double state_h_norm(const FieldState& s, FieldGroup gr, int k) {
    double acc = 0.0;
    for (int ell = 0; ell <= k; ++ell) {
        const double v = state_sobolev_norm(s, gr, ell);
        acc += v * v;
    }
    return std::sqrt(acc);
}

// Phase-weighted seminorm of order ell,
//   norm^2 = w_plus (||grad^ell n+||^2 + ||grad^ell u+||^2)
//          + w_minus (||grad^ell n-||^2 + ||grad^ell u-||^2).
// With the equilibrium's energy weights this is the quadratic form the
// frequency-wise linear evolution never amplifies; plain component sums can
// transiently grow by a factor of several.
inline double state_weighted_norm(const FieldState& s, double ell, double w_plus,
                                  double w_minus) {
    if (ell < -1.0) throw ConfigError("derivative order below -1 not supported");
    const double L3 = std::pow(s.grid.box_length, 3);
    double plus = detail::weighted_mode_sum(s.grid, s.n_plus, ell);
    for (const auto& c : s.u_plus) plus += detail::weighted_mode_sum(s.grid, c, ell);
    double minus = detail::weighted_mode_sum(s.grid, s.n_minus, ell);
    for (const auto& c : s.u_minus) minus += detail::weighted_mode_sum(s.grid, c, ell);
    return std::sqrt(L3 * (w_plus * plus + w_minus * minus));
}

} // namespace tpdl
