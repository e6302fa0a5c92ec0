#pragma once

// State container for the scaled two-phase system: two scalar density
// perturbations and two velocity fields, stored as Fourier coefficients on a
// periodic grid (series convention: field(x) = sum_k c_k e^{i xi_k . x}).

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "tpdl/grid.hpp"

namespace tpdl {

using ScalarField = std::vector<std::complex<double>>;

struct FieldState {
    Grid grid;
    double time = 0.0;
    ScalarField n_plus, n_minus;
    std::array<ScalarField, 3> u_plus, u_minus;

    FieldState() = default;
    explicit FieldState(const Grid& g) : grid(g) { allocate(); }

    void allocate() {
        const std::size_t n = grid.size();
        n_plus.assign(n, {});
        n_minus.assign(n, {});
        for (auto& c : u_plus) c.assign(n, {});
        for (auto& c : u_minus) c.assign(n, {});
    }

    // All eight scalar component arrays, fixed order.
    std::array<ScalarField*, 8> components() {
        return {&n_plus, &u_plus[0], &u_plus[1], &u_plus[2],
                &n_minus, &u_minus[0], &u_minus[1], &u_minus[2]};
    }
    std::array<const ScalarField*, 8> components() const {
        return {&n_plus, &u_plus[0], &u_plus[1], &u_plus[2],
                &n_minus, &u_minus[0], &u_minus[1], &u_minus[2]};
    }

    // this += a * other (coefficient-wise over all components)
    void add_scaled(const FieldState& other, double a) {
        auto mine = components();
        auto theirs = other.components();
        for (int c = 0; c < 8; ++c) {
            auto& dst = *mine[c];
            const auto& src = *theirs[c];
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += a * src[i];
        }
    }

    void scale(double a) {
        for (auto* c : components())
            for (auto& v : *c) v *= a;
    }

    bool finite() const {
        for (const auto* c : components())
            for (const auto& v : *c)
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }
};

} // namespace tpdl
