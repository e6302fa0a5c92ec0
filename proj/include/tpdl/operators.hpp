#pragma once

// Fourier-side operators: fractional Laplacian powers, the longitudinal /
// transverse (Hodge) velocity split, smooth low/high frequency splitting, and
// the dealiasing mask for pseudo-spectral products.

#include <array>
#include <cmath>
#include <complex>

#include "tpdl/field.hpp"
#include "tpdl/grid.hpp"

namespace tpdl {

// Smooth radial cutoff: 1 on [0, eta0/2], 0 on [eta0, inf), C-infinity in between
// (standard exp(-1/s) smoothstep).
struct CutoffProfile {
    double eta0 = 1.0;

    double operator()(double r) const {
        if (r <= 0.5 * eta0) return 1.0;
        if (r >= eta0) return 0.0;
        const double s = (r - 0.5 * eta0) / (0.5 * eta0); // in (0,1)
        const double a = std::exp(-1.0 / (1.0 - s));
        const double b = std::exp(-1.0 / s);
        return a / (a + b);
    }
};

// In-place multiply by |xi|^s.  For s < 0 the zero mode is annihilated (the
// operator is only defined on mean-free fields; norms reject a nonzero mean).
inline void lambda_power(const Grid& g, ScalarField& f, double s) {
    if (s == 0.0) return;
    const double dk = g.wavenumber_step();
    for_each_mode(g, [&](std::size_t flat, int m1, int m2, int m3) {
        const double q2 = static_cast<double>(m1) * m1 + static_cast<double>(m2) * m2 +
                          static_cast<double>(m3) * m3;
        if (q2 == 0.0) {
            if (s < 0.0) f[flat] = 0.0;
            return;
        }
        f[flat] *= std::pow(dk * std::sqrt(q2), s);
    });
}

struct HodgeParts {
    ScalarField longitudinal;             // scalar potential of the curl-free part
    std::array<ScalarField, 3> transverse; // divergence-free remainder
};

// Splits a velocity field into its longitudinal scalar (i xi . u / |xi|) and the
// transverse remainder.  The zero mode (spatial mean) has no direction and is
// carried whole on the transverse channel.
inline HodgeParts hodge_decompose(const Grid& g, const std::array<ScalarField, 3>& u) {
    HodgeParts parts;
    parts.longitudinal.assign(g.size(), {});
    for (auto& c : parts.transverse) c.assign(g.size(), {});
    const std::complex<double> I(0.0, 1.0);
    for_each_mode(g, [&](std::size_t flat, int m1, int m2, int m3) {
        const double q2 = static_cast<double>(m1) * m1 + static_cast<double>(m2) * m2 +
                          static_cast<double>(m3) * m3;
        if (q2 == 0.0) {
            for (int c = 0; c < 3; ++c) parts.transverse[c][flat] = u[c][flat];
            return;
        }
        const double m[3] = {double(m1), double(m2), double(m3)};
        const std::complex<double> dot = m[0] * u[0][flat] + m[1] * u[1][flat] + m[2] * u[2][flat];
        const double q = std::sqrt(q2);
        parts.longitudinal[flat] = I * dot / q; // wavenumber step cancels in xi/|xi|
        for (int c = 0; c < 3; ++c) parts.transverse[c][flat] = u[c][flat] - m[c] * dot / q2;
    });
    return parts;
}

// Rebuilds the curl-free velocity from its longitudinal scalar: u = -i xi phi/|xi|.
inline std::array<ScalarField, 3> longitudinal_velocity(const Grid& g, const ScalarField& phi) {
    std::array<ScalarField, 3> u;
    for (auto& c : u) c.assign(g.size(), {});
    const std::complex<double> I(0.0, 1.0);
    for_each_mode(g, [&](std::size_t flat, int m1, int m2, int m3) {
        const double q2 = static_cast<double>(m1) * m1 + static_cast<double>(m2) * m2 +
                          static_cast<double>(m3) * m3;
        if (q2 == 0.0) return;
        const double q = std::sqrt(q2);
        const double m[3] = {double(m1), double(m2), double(m3)};
        for (int c = 0; c < 3; ++c) u[c][flat] = -I * m[c] * phi[flat] / q;
    });
    return u;
}

struct FrequencyParts {
    ScalarField low, high;
};

// Smooth partition f = f_low + f_high; exact by construction (high = f - low).
inline FrequencyParts freq_split(const Grid& g, const ScalarField& f, const CutoffProfile& cut) {
    FrequencyParts parts;
    parts.low.assign(g.size(), {});
    parts.high.assign(g.size(), {});
    const double dk = g.wavenumber_step();
    for_each_mode(g, [&](std::size_t flat, int m1, int m2, int m3) {
        const double q2 = static_cast<double>(m1) * m1 + static_cast<double>(m2) * m2 +
                          static_cast<double>(m3) * m3;
        const double w = cut(dk * std::sqrt(q2));
        parts.low[flat] = w * f[flat];
        parts.high[flat] = f[flat] - parts.low[flat];
    });
    return parts;
}

// Zeroes every mode with any |m_i| above fraction*(M/2); idempotent by
// construction.  fraction = 2/3 is the usual quadratic-product rule.
inline void apply_dealias(const Grid& g, ScalarField& f, double fraction = 2.0 / 3.0) {
    const int keep = static_cast<int>(fraction * (g.points_per_axis / 2) + 1e-9);
    for_each_mode(g, [&](std::size_t flat, int m1, int m2, int m3) {
        if (std::abs(m1) > keep || std::abs(m2) > keep || std::abs(m3) > keep) f[flat] = 0.0;
    });
}

} // namespace tpdl
