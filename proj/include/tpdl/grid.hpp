#pragma once

// Periodic cubic grid and its Fourier lattice.  Physical points x_j = j L/M,
// wavenumbers xi = (2 pi / L) m with m on the centered integer lattice
// m_i in {-M/2, ..., M/2 - 1}.  Storage is row-major (i, j, k) with k contiguous.

#include <cstddef>
#include <cstdint>

#include "tpdl/errors.hpp"

namespace tpdl {

struct Grid {
    double box_length = 2.0 * 3.14159265358979323846;
    int points_per_axis = 16;

    Grid() = default;
    Grid(double L, int M) : box_length(L), points_per_axis(M) { validate(); }

    void validate() const {
        if (!(box_length > 0.0)) throw ConfigError("box length must be positive");
        if (points_per_axis < 2 || points_per_axis % 2 != 0)
            throw ConfigError("points per axis must be even and >= 2");
    }

    std::size_t size() const {
        const std::size_t m = static_cast<std::size_t>(points_per_axis);
        return m * m * m;
    }
    double spacing() const { return box_length / points_per_axis; }
    double cell_volume() const { return spacing() * spacing() * spacing(); }
    double wavenumber_step() const { return 2.0 * 3.14159265358979323846 / box_length; }

    // Signed integer frequency of axis index i.
    int freq(int i) const { return i < points_per_axis / 2 ? i : i - points_per_axis; }

    std::size_t flat_index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * points_per_axis + j) * points_per_axis + k;
    }

    // Largest |m|^2 on the lattice: 3 (M/2)^2.
    int max_freq_norm2() const {
        const int h = points_per_axis / 2;
        return 3 * h * h;
    }

    bool operator==(const Grid& o) const {
        return box_length == o.box_length && points_per_axis == o.points_per_axis;
    }
};

// Calls fn(flat, m1, m2, m3) for every lattice point, k-contiguous order.
template <typename F>
inline void for_each_mode(const Grid& g, F&& fn) {
    const int M = g.points_per_axis;
    std::size_t flat = 0;
    for (int i = 0; i < M; ++i) {
        const int m1 = g.freq(i);
        for (int j = 0; j < M; ++j) {
            const int m2 = g.freq(j);
            for (int k = 0; k < M; ++k, ++flat) {
                fn(flat, m1, m2, g.freq(k));
            }
        }
    }
}

} // namespace tpdl
