#pragma once

#include <cmath>

#include "deco/errors.hpp"

namespace deco {

// Gaussian coherence damping exp(-rate * t * separation^2). Both the
// scattering and the gravitational estimators reduce to this one kernel,
// so they share it verbatim.
inline double gaussian_damping(double rate, double t, double separation) {
    if (t < 0.0) throw DomainError("damping factor: negative time");
    if (rate < 0.0) throw DomainError("damping factor: negative rate");
    return std::exp(-rate * t * separation * separation);
}

} // namespace deco
