#pragma once

// Scattering-induced localization: the localization rate Lambda = k^2 * flux
// * sigma_eff, Gaussian spatial-coherence damping, and a catalog of named
// environment presets reproducing the classic order-of-magnitude table of
// localization rates for three dust-particle sizes.

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "deco/constants.hpp"
#include "deco/csv.hpp"
#include "deco/damping.hpp"
#include "deco/errors.hpp"

namespace deco::scattering {

struct ScatteringEnvironment {
    std::string name;
    double k = 0.0;         // wavenumber of incoming particles, cm^-1
    double flux = 0.0;      // incident particle flux N v / V, cm^-2 s^-1
    double sigma_eff = 0.0; // effective cross section, cm^2
    std::string notes;      // provenance of the inputs

    void validate() const {
        if (!(k > 0.0) || !(flux > 0.0) || !(sigma_eff > 0.0))
            throw DomainError("scattering environment '" + name + "': k, flux, sigma_eff must be > 0");
    }
};

struct LocalizationRate {
    double lambda = 0.0; // cm^-2 s^-1
};

// Lambda = k^2 * flux * sigma_eff, exactly, CGS.
inline LocalizationRate localization_rate(const ScatteringEnvironment& env) {
    env.validate();
    return {env.k * env.k * env.flux * env.sigma_eff};
}

// exp(-Lambda t dx^2); shared kernel with the gravitational estimator.
inline double decoherence_factor(double dx, double lambda, double t) {
    if (lambda < 0.0) throw DomainError("decoherence factor: negative localization rate");
    return gaussian_damping(lambda, t, dx);
}

// Model matrix element <chi| S_x'^dag S_x |chi| for a single scattering
// event: isotropic Gaussian exp(-k^2 dx^2 / 2). Close to unity for
// k dx << 1, orthogonal scattered states for k dx >> 1.
inline std::complex<double> single_scattering_overlap(double dx, double k) {
    if (!(k > 0.0)) throw DomainError("single scattering overlap: k must be > 0");
    return {std::exp(-0.5 * k * k * dx * dx), 0.0};
}

// Separation at which the damping factor falls to 1/e.
inline double coherence_length(double lambda, double t) {
    if (!(lambda * t > 0.0)) throw DomainError("coherence length: Lambda * t must be > 0");
    return 1.0 / std::sqrt(lambda * t);
}

// In the short-wavelength regime a single scattering event already resolves
// the separation, so the effective exponential rate at separation dx cannot
// exceed the total scattering rate flux * sigma_eff.
inline double capped_decoherence_rate(const ScatteringEnvironment& env, double dx) {
    env.validate();
    const double quadratic = localization_rate(env).lambda * dx * dx;
    const double event_rate = env.flux * env.sigma_eff;
    return std::min(quadratic, event_rate);
}

// ---------------------------------------------------------------------------
// Preset catalog.

struct PresetRow {
    ScatteringEnvironment env;
    double radius_cm = 0.0;     // object size a
    double lambda_paper = 0.0;  // table target, cm^-2 s^-1
    bool saturated = false;     // k * a > 1: quadratic law overestimates
};

namespace detail {

// Photon number density of a blackbody, (2 zeta(3)/pi^2) (kT/hbar c)^3
// (about 20.3 T^3 cm^-3).
inline double blackbody_photon_density(double temp_k) {
    const double kt = cgs::k_boltzmann * temp_k / (cgs::hbar * cgs::c_light);
    return 2.0 * cgs::zeta3 / (cgs::pi * cgs::pi) * kt * kt * kt;
}

// Mean thermal photon wavenumber, <E>/hbar c with <E> = (pi^4/30 zeta3) kT.
inline double blackbody_mean_wavenumber(double temp_k) {
    const double mean_energy_factor = std::pow(cgs::pi, 4) / (30.0 * cgs::zeta3); // ~2.701
    return mean_energy_factor * cgs::k_boltzmann * temp_k / (cgs::hbar * cgs::c_light);
}

// Rayleigh cross section of a dielectric sphere in the long-wavelength
// regime with unit polarizability factor, capped by the geometric value
// once k a ~ 1.
inline double sphere_cross_section(double k, double radius) {
    const double rayleigh = 8.0 * cgs::pi / 3.0 * std::pow(k, 4) * std::pow(radius, 6);
    const double geometric = cgs::pi * radius * radius;
    return std::min(rayleigh, geometric);
}

// Mean thermal speed sqrt(8 kT / pi m) of a gas particle.
inline double gas_mean_speed(double mass_g, double temp_k) {
    return std::sqrt(8.0 * cgs::k_boltzmann * temp_k / (cgs::pi * mass_g));
}

struct RadiationSource {
    std::string name;
    double temp_k;
    double photon_flux;  // cm^-2 s^-1
    double wavenumber;   // cm^-1
    std::string notes;
    std::array<double, 3> targets; // a = 1e-3, 1e-5, 1e-6 cm
};

struct GasSource {
    std::string name;
    double density; // cm^-3
    double mass_g;
    double temp_k;
    std::string notes;
    std::array<double, 3> targets;
};

} // namespace detail

// Mean air molecule under ordinary conditions; the gravitational module uses
// the same record.
struct AirData {
    double density = 2.687e19;  // cm^-3
    double mass_g = 4.81e-23;   // 28.97 u
    double temp_k = 300.0;
};

inline constexpr std::array<double, 3> preset_radii_cm = {1e-3, 1e-5, 1e-6};

// The five environments x three object sizes of the localization-rate table.
// Inputs are back-computed from standard physical data (blackbody photon
// density and mean wavenumber, solar constant, kinetic theory of gases,
// Rayleigh/geometric cross sections); each row records them in `notes`.
inline std::vector<PresetRow> preset_environments() {
    using namespace detail;
    const AirData air;

    std::vector<RadiationSource> radiation;
    {
        const double t_cmb = 2.725;
        radiation.push_back({"cosmic background radiation", t_cmb,
                             blackbody_photon_density(t_cmb) * cgs::c_light,
                             blackbody_mean_wavenumber(t_cmb),
                             "blackbody at 2.725 K: n = 20.3 T^3 cm^-3, flux = n c, "
                             "k = mean thermal wavenumber 2.701 kT/(hbar c)",
                             {1e6, 1e-6, 1e-12}});
        const double t_room = 300.0;
        radiation.push_back({"300 K photons", t_room,
                             blackbody_photon_density(t_room) * cgs::c_light,
                             blackbody_mean_wavenumber(t_room),
                             "blackbody at 300 K: n = 20.3 T^3 cm^-3, flux = n c, "
                             "k = mean thermal wavenumber 2.701 kT/(hbar c)",
                             {1e19, 1e12, 1e6}});
        const double t_sun = 5778.0;
        const double solar_constant = 1.361e6; // erg cm^-2 s^-1 at the surface of earth
        const double mean_energy = std::pow(cgs::pi, 4) / (30.0 * cgs::zeta3) *
                                   cgs::k_boltzmann * t_sun;
        radiation.push_back({"sunlight on earth", t_sun, solar_constant / mean_energy,
                             mean_energy / (cgs::hbar * cgs::c_light),
                             "solar constant 1.361e6 erg cm^-2 s^-1 divided by the mean "
                             "photon energy of a 5778 K blackbody; k from that energy",
                             {1e21, 1e17, 1e13}});
    }

    std::vector<GasSource> gases;
    gases.push_back({"air molecules", air.density, air.mass_g, air.temp_k,
                     "air at ordinary conditions: n = 2.687e19 cm^-3, mean molecular mass "
                     "4.81e-23 g, T = 300 K; v = sqrt(8kT/pi m), k = m v/hbar, geometric "
                     "cross section",
                     {1e36, 1e32, 1e30}});
    gases.push_back({"laboratory vacuum", 1e3, air.mass_g, air.temp_k,
                     "residual gas with air parameters at n = 1e3 cm^-3; v = sqrt(8kT/pi m), "
                     "k = m v/hbar, geometric cross section",
                     {1e23, 1e19, 1e17}});

    std::vector<PresetRow> rows;
    for (const auto& src : radiation)
        for (std::size_t s = 0; s < preset_radii_cm.size(); ++s) {
            const double a = preset_radii_cm[s];
            PresetRow row;
            row.env = {src.name, src.wavenumber, src.photon_flux, sphere_cross_section(src.wavenumber, a),
                       src.notes};
            row.radius_cm = a;
            row.lambda_paper = src.targets[s];
            row.saturated = src.wavenumber * a > 1.0;
            rows.push_back(std::move(row));
        }
    for (const auto& src : gases)
        for (std::size_t s = 0; s < preset_radii_cm.size(); ++s) {
            const double a = preset_radii_cm[s];
            const double v = gas_mean_speed(src.mass_g, src.temp_k);
            const double k = src.mass_g * v / cgs::hbar;
            PresetRow row;
            row.env = {src.name, k, src.density * v, cgs::pi * a * a, src.notes};
            row.radius_cm = a;
            row.lambda_paper = src.targets[s];
            row.saturated = k * a > 1.0;
            rows.push_back(std::move(row));
        }
    return rows;
}

inline double log10_error(const PresetRow& row) {
    return std::log10(localization_rate(row.env).lambda) - std::log10(row.lambda_paper);
}

inline void export_catalog(const std::string& path) {
    csv::Writer w(path, {"name", "size", "k", "flux", "sigma_eff", "lambda_computed",
                         "lambda_paper", "log10_error"});
    for (const auto& row : preset_environments()) {
        w.row({row.env.name, csv::num(row.radius_cm), csv::num(row.env.k), csv::num(row.env.flux),
               csv::num(row.env.sigma_eff), csv::num(localization_rate(row.env).lambda),
               csv::num(row.lambda_paper), csv::num(log10_error(row))});
    }
}

} // namespace deco::scattering
