#pragma once

// Thin wrapper over FFTW for in-place 3-D complex transforms.  Conventions:
// to_fourier turns physical samples into Fourier-series coefficients
// (divides by M^3), to_physical is its exact inverse (unnormalized FFTW
// backward pass).  Plans are created once per grid size with FFTW_ESTIMATE
// only, so planning never depends on runtime measurements and results are
// reproducible run to run.

#include <fftw3.h>

#include <map>

#include "tpdl/field.hpp"
#include "tpdl/grid.hpp"

namespace tpdl {
namespace detail {

struct FftwPlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

inline std::map<int, FftwPlanPair>& plan_registry() {
    static std::map<int, FftwPlanPair> registry;
    return registry;
}

// Lazily created in-place plans.  FFTW_UNALIGNED lets one plan serve every
// buffer of this size via the new-array execute interface.
inline const FftwPlanPair& plans_for(int M, std::complex<double>* buffer) {
    auto& registry = plan_registry();
    auto it = registry.find(M);
    if (it != registry.end()) return it->second;
    auto* b = reinterpret_cast<fftw_complex*>(buffer);
    FftwPlanPair pair;
    pair.forward = fftw_plan_dft_3d(M, M, M, b, b, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    pair.backward = fftw_plan_dft_3d(M, M, M, b, b, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    return registry.emplace(M, pair).first->second;
}

} // namespace detail

inline void to_fourier(const Grid& g, ScalarField& f) {
    auto* b = reinterpret_cast<fftw_complex*>(f.data());
    fftw_execute_dft(detail::plans_for(g.points_per_axis, f.data()).forward, b, b);
    const double inv = 1.0 / static_cast<double>(g.size());
    for (auto& v : f) v *= inv;
}

inline void to_physical(const Grid& g, ScalarField& f) {
    auto* b = reinterpret_cast<fftw_complex*>(f.data());
    fftw_execute_dft(detail::plans_for(g.points_per_axis, f.data()).backward, b, b);
}

} // namespace tpdl
