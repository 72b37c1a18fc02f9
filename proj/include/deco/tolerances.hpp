#pragma once

namespace deco {

// Every numerical tolerance used for validation lives here, so a scenario
// can tighten or relax them in one place. Values are absolute unless noted.
struct Tolerances {
    double state_norm = 1e-12;        // | ||psi||^2 - 1 |
    double hermiticity = 1e-12;       // |rho - rho^dagger|, elementwise
    double density_trace = 1e-10;     // |tr rho - 1|
    double density_eigen_floor = -1e-8; // smallest admissible eigenvalue
    double orthonormality = 1e-10;    // Schmidt vector Gram residue
    double schmidt_weights = 1e-10;   // |sum p_n - 1|
    double schmidt_cutoff = 1e-12;    // relative singular-value cut
    double schmidt_degeneracy = 1e-12; // weight tie-break window
    double phase_anchor = 1e-9;       // "first nonzero" amplitude threshold
    double grid_hermiticity = 1e-10;
    double grid_trace = 1e-8;
    double boundary_leak = 1e-8;      // edge density relative to peak
    double moments_imag = 1e-8;       // imaginary residue of real moments
    double overlap_psd_floor = -1e-10;
    double fock_norm = 1e-10;
    double fock_tail = 1e-8;          // |amplitude[cutoff]|^2
};

inline Tolerances& tolerances() {
    static Tolerances t;
    return t;
}

} // namespace deco
