#pragma once

// Spectral analysis of the 4x4 compressible-mode system at radial wavenumber r:
// exact eigenvalues, small-r Taylor expansions, spectral projectors, and the
// one-mode semigroup e^{t M(r)} with a scaling-and-squaring fallback where the
// spectrum degenerates.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "tpdl/closure.hpp"
#include "tpdl/errors.hpp"

namespace tpdl {

using Mat4 = Eigen::Matrix4d;
using CMat4 = Eigen::Matrix4cd;
using CVec4 = Eigen::Vector4cd;
using Complex = std::complex<double>;

// Constants of the small-r eigenvalue expansion
//   lambda_{1,2} = -nu_bar1 r^2 ± i omega_slow r + O(r^3),
//   lambda_{3,4} = -nu_bar2 r^2 ± i omega_fast r + O(r^3).
struct TaylorConstants {
    double kappa1, kappa2;     // kappa1 = sqrt((b1^2-b4^2)^2/4 + b1 b2 b3 b4), kappa2 = (b1^2+b4^2)/2
    double nu_bar1, nu_bar2;   // effective damping rates of the slow/fast wave pairs
    double omega_slow, omega_fast; // sqrt(kappa2 -+ kappa1)
};

inline TaylorConstants taylor_constants(const EquilibriumClosure& eq) {
    TaylorConstants tc{};
    const double b1 = eq.beta1, b2 = eq.beta2, b3 = eq.beta3, b4 = eq.beta4;
    const double d = b1 * b1 - b4 * b4;
    tc.kappa1 = std::sqrt(0.25 * d * d + b1 * b2 * b3 * b4);
    tc.kappa2 = 0.5 * (b1 * b1 + b4 * b4);
    const double np = eq.nu_plus(), nm = eq.nu_minus();
    tc.nu_bar1 = 0.25 * (np + nm) - (np - nm) * d / (8.0 * tc.kappa1);
    tc.nu_bar2 = 0.25 * (np + nm) + (np - nm) * d / (8.0 * tc.kappa1);
    if (!(tc.kappa2 > tc.kappa1))
        throw NumericError("wave speeds degenerate: kappa2 <= kappa1");
    if (!(tc.nu_bar1 > 0.0) || !(tc.nu_bar2 > 0.0))
        throw NumericError("effective damping rates must be positive");
    tc.omega_slow = std::sqrt(tc.kappa2 - tc.kappa1);
    tc.omega_fast = std::sqrt(tc.kappa2 + tc.kappa1);
    return tc;
}

// Generator of the coupled acoustic system at radial wavenumber r, acting on
// (n+, varphi+, n-, varphi-) where varphi± are the longitudinal velocity parts.
inline Mat4 mode_matrix(const EquilibriumClosure& eq, double r) {
    Mat4 m = Mat4::Zero();
    const double r2 = r * r;
    m(0, 1) = -eq.beta1 * r;
    m(1, 0) = eq.beta1 * r;
    m(1, 1) = -eq.nu_plus() * r2;
    m(1, 2) = eq.beta2 * r;
    m(2, 3) = -eq.beta4 * r;
    m(3, 0) = eq.beta3 * r;
    m(3, 2) = eq.beta4 * r;
    m(3, 3) = -eq.nu_minus() * r2;
    return m;
}

namespace detail {
// Deterministic eigenvalue ordering: snap near-real values onto the real axis,
// then sort lexicographically by (Im, Re).
inline void sort_eigenvalues(std::array<Complex, 4>& ev) {
    for (auto& l : ev)
        if (std::abs(l.imag()) <= 1e-12 * (1.0 + std::abs(l))) l = Complex(l.real(), 0.0);
    std::sort(ev.begin(), ev.end(), [](const Complex& a, const Complex& b) {
        if (a.imag() != b.imag()) return a.imag() < b.imag();
        return a.real() < b.real();
    });
}
} // namespace detail

// Eigenvalues of a mode matrix via the QR algorithm, deterministically ordered.
// Each root is validated against the characteristic polynomial residual.
inline std::array<Complex, 4> exact_eigenvalues(const Mat4& m, double r) {
    Eigen::EigenSolver<Mat4> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigenvalue iteration failed at r=" + std::to_string(r));
    std::array<Complex, 4> ev;
    for (int i = 0; i < 4; ++i) ev[i] = solver.eigenvalues()(i);
    detail::sort_eigenvalues(ev);

    const double bound = 1e-9 * std::pow(1.0 + r, 4);
    for (const auto& l : ev) {
        const CMat4 shifted = CMat4(m.cast<Complex>()) - l * CMat4::Identity();
        if (std::abs(shifted.determinant()) > bound)
            throw NumericError("eigenvalue residual too large at r=" + std::to_string(r));
    }
    return ev;
}

// Leading-order eigenvalues from the small-r expansion, same ordering convention.
inline std::array<Complex, 4> taylor_eigenvalues(const EquilibriumClosure& eq, double r) {
    const TaylorConstants tc = taylor_constants(eq);
    std::array<Complex, 4> ev = {
        Complex(-tc.nu_bar1 * r * r, tc.omega_slow * r),
        Complex(-tc.nu_bar1 * r * r, -tc.omega_slow * r),
        Complex(-tc.nu_bar2 * r * r, tc.omega_fast * r),
        Complex(-tc.nu_bar2 * r * r, -tc.omega_fast * r),
    };
    detail::sort_eigenvalues(ev);
    return ev;
}

// One wavenumber's worth of spectral data.  If the eigenvalue spacing falls under
// gap_threshold*(1+r^2) the projector representation is ill-conditioned and the
// mode is flagged degenerate; the semigroup then falls back to a direct matrix
// exponential.
struct SpectralMode {
    double r = 0.0;
    Mat4 matrix = Mat4::Zero();
    std::array<Complex, 4> eigenvalues{};
    std::array<CMat4, 4> projectors{};
    bool degenerate = false;
};

inline SpectralMode spectral_mode(const EquilibriumClosure& eq, double r,
                                  double gap_threshold = 1e-8) {
    SpectralMode mode;
    mode.r = r;
    mode.matrix = mode_matrix(eq, r);
    mode.eigenvalues = exact_eigenvalues(mode.matrix, r);

    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            min_gap = std::min(min_gap, std::abs(mode.eigenvalues[i] - mode.eigenvalues[j]));
    mode.degenerate = min_gap <= gap_threshold * (1.0 + r * r);
    if (mode.degenerate) return mode;

    const CMat4 a = mode.matrix.cast<Complex>();
    for (int i = 0; i < 4; ++i) {
        CMat4 p = CMat4::Identity();
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            p = p * (a - mode.eigenvalues[j] * CMat4::Identity()) /
                (mode.eigenvalues[i] - mode.eigenvalues[j]);
        }
        mode.projectors[i] = p;
    }
    return mode;
}

// Scaling-and-squaring matrix exponential of t*m (the library route; used as the
// independent cross-check and as the degenerate-spectrum fallback).
inline Mat4 matrix_exponential(const Mat4& m, double t) { return Mat4((t * m).exp()); }

// e^{t M(r)} for one mode.  Mathematically real; returned as such.
inline Mat4 semigroup_matrix(const SpectralMode& mode, double t) {
    if (mode.degenerate) return matrix_exponential(mode.matrix, t);
    CMat4 e = CMat4::Zero();
    for (int i = 0; i < 4; ++i)
        e += std::exp(mode.eigenvalues[i] * t) * mode.projectors[i];
    return e.real();
}

inline CVec4 semigroup_apply(const SpectralMode& mode, double t, const CVec4& v) {
    return semigroup_matrix(mode, t).cast<Complex>() * v;
}

} // namespace tpdl
