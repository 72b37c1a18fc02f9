#pragma once

// Time evolution of 1-D position-grid density matrices rho(x, x') under the
// pure-decoherence master equation and the Caldeira-Leggett equation, in
// natural units (hbar = 1, k_B = 1). Spatial derivatives are second-order
// central differences with one-sided boundary stencils; time stepping is
// explicit RK4 on the full matrix, or a Strang split that applies the
// decoherence factor exactly.

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "deco/constants.hpp"
#include "deco/csv.hpp"
#include "deco/errors.hpp"
#include "deco/quantum.hpp"
#include "deco/tolerances.hpp"

namespace deco::evolution {

struct GridSpec {
    double x_min = -1.0;
    double x_max = 1.0;
    Eigen::Index n_points = 8;

    void validate() const {
        if (n_points < 8) throw ConfigError("grid: need at least 8 points");
        if (!(x_max > x_min)) throw ConfigError("grid: x_max must exceed x_min");
    }
    double dx() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
    double x(Eigen::Index i) const { return x_min + dx() * static_cast<double>(i); }
};

class GridDensityMatrix {
  public:
    GridDensityMatrix(GridSpec grid, CMat values) : grid_(grid), values_(std::move(values)) {
        grid_.validate();
        if (values_.rows() != grid_.n_points || values_.cols() != grid_.n_points)
            throw ShapeError("grid density matrix: values do not match the grid");
        const auto& tol = tolerances();
        const double herm = (values_ - values_.adjoint()).cwiseAbs().maxCoeff();
        if (herm > tol.grid_hermiticity)
            throw InvalidStateError("grid density matrix not Hermitian, residue " +
                                    std::to_string(herm));
        const double tr = values_.diagonal().real().sum() * grid_.dx();
        if (std::abs(tr - 1.0) > tol.grid_trace)
            throw InvalidStateError("grid density matrix trace != 1: " + std::to_string(tr));
        const double peak = values_.diagonal().real().maxCoeff();
        const Eigen::Index n = grid_.n_points;
        if (values_(0, 0).real() > tol.boundary_leak * peak ||
            values_(n - 1, n - 1).real() > tol.boundary_leak * peak)
            throw InvalidStateError("grid density matrix: density at the box edge");
    }

    const GridSpec& grid() const { return grid_; }
    const CMat& values() const { return values_; }

  private:
    GridSpec grid_;
    CMat values_;
};

// ---------------------------------------------------------------------------
// Initial states.

namespace detail {

inline CVec normalized_on_grid(CVec psi, double dx) {
    psi /= std::sqrt(psi.squaredNorm() * dx);
    return psi;
}

} // namespace detail

// Gaussian wave packet with <x> = x0, <p> = p0 and position spread sigma.
inline GridDensityMatrix gaussian_packet(const GridSpec& grid, double x0, double p0, double sigma) {
    grid.validate();
    if (!(sigma > 0.0)) throw DomainError("gaussian packet: sigma must be > 0");
    CVec psi(grid.n_points);
    for (Eigen::Index i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        psi(i) = std::exp(Complex(-(x - x0) * (x - x0) / (4.0 * sigma * sigma), p0 * x));
    }
    psi = detail::normalized_on_grid(std::move(psi), grid.dx());
    return GridDensityMatrix(grid, psi * psi.adjoint() );
}

// Superposition of two packets at +/- separation/2 with a relative phase.
inline GridDensityMatrix two_packet_superposition(const GridSpec& grid, double separation,
                                                  double phase, double sigma, double p0 = 0.0) {
    grid.validate();
    if (!(sigma > 0.0)) throw DomainError("two-packet state: sigma must be > 0");
    CVec psi(grid.n_points);
    const Complex rel = std::polar(1.0, phase);
    for (Eigen::Index i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        const double xl = x - 0.5 * separation;
        const double xr = x + 0.5 * separation;
        const Complex carrier = std::exp(Complex(0.0, p0 * x));
        psi(i) = carrier * (std::exp(Complex(-xl * xl / (4.0 * sigma * sigma), 0.0)) +
                            rel * std::exp(Complex(-xr * xr / (4.0 * sigma * sigma), 0.0)));
    }
    psi = detail::normalized_on_grid(std::move(psi), grid.dx());
    return GridDensityMatrix(grid, psi * psi.adjoint());
}

// ---------------------------------------------------------------------------
// Parameters and trajectory records.

enum class Scheme { rk4, split };

struct EvolutionParams {
    double mass = 1.0;
    double lambda = 0.0;      // localization rate (natural units)
    double gamma = 0.0;       // damping constant (Caldeira-Leggett only)
    double temperature = 0.0; // natural energy units (k_B = 1)
    double dt = 1e-3;
    long steps = 100;
    Scheme scheme = Scheme::rk4;
    long snapshot_stride = 0;  // 0: first and last only
    bool kinetic_term = true;  // test hook: false freezes the free dynamics (m -> infinity)
    bool lambda_override = false; // keep `lambda` even when gamma > 0

    void validate() const {
        if (!(mass > 0.0)) throw ConfigError("evolution: mass must be > 0");
        if (lambda < 0.0 || gamma < 0.0) throw ConfigError("evolution: rates must be >= 0");
        if (!(dt > 0.0) || steps < 1) throw ConfigError("evolution: dt > 0 and steps >= 1 required");
    }
};

struct SummaryRow {
    double t = 0.0;
    double trace = 0.0;
    double purity = 0.0;
    double x_mean = 0.0;
    double p_mean = 0.0;
    double offdiag_peak = 0.0;
};

struct Trajectory {
    GridSpec grid;
    std::vector<double> snapshot_times;
    std::vector<GridDensityMatrix> snapshots;
    std::vector<double> snapshot_min_eigenvalues;
    std::vector<SummaryRow> summary; // one row per step, step 0 included
    std::vector<std::string> warnings;
    int workers = 1; // row-parallel RHS worker count (fixed: single worker)

    const GridDensityMatrix& final_state() const { return snapshots.back(); }
};

struct Moments {
    double x_mean = 0.0;
    double p_mean = 0.0;
    double x2_mean = 0.0;
    double p2_mean = 0.0;
};

namespace detail {

inline Moments moments_impl(const CMat& r, const GridSpec& g, bool check_residue) {
    const Eigen::Index n = g.n_points;
    const double dx = g.dx();
    Moments m;
    Complex p_acc(0.0, 0.0), p2_acc(0.0, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = r(i, i).real();
        m.x_mean += g.x(i) * d * dx;
        m.x2_mean += g.x(i) * g.x(i) * d * dx;
        Complex dcol, d2col;
        if (i == 0) {
            dcol = (-3.0 * r(i, 0) + 4.0 * r(i, 1) - r(i, 2)) / (2.0 * dx);
            d2col = (2.0 * r(i, 0) - 5.0 * r(i, 1) + 4.0 * r(i, 2) - r(i, 3)) / (dx * dx);
        } else if (i == n - 1) {
            dcol = (3.0 * r(i, n - 1) - 4.0 * r(i, n - 2) + r(i, n - 3)) / (2.0 * dx);
            d2col = (2.0 * r(i, n - 1) - 5.0 * r(i, n - 2) + 4.0 * r(i, n - 3) - r(i, n - 4)) /
                    (dx * dx);
        } else {
            dcol = (r(i, i + 1) - r(i, i - 1)) / (2.0 * dx);
            d2col = (r(i, i + 1) - 2.0 * r(i, i) + r(i, i - 1)) / (dx * dx);
        }
        p_acc += Complex(0.0, 1.0) * dcol * dx;
        p2_acc -= d2col * dx;
    }
    const double residue = std::max(std::abs(p_acc.imag()), std::abs(p2_acc.imag()));
    if (check_residue && residue > tolerances().moments_imag)
        throw InvalidStateError("moments: imaginary residue above tolerance");
    m.p_mean = p_acc.real();
    m.p2_mean = p2_acc.real();
    return m;
}

} // namespace detail

// <x>, <x^2> from the diagonal; <p>, <p^2> from transverse finite
// differences at the diagonal. All four are real within tolerance.
inline Moments moments(const GridDensityMatrix& rho) {
    return detail::moments_impl(rho.values(), rho.grid(), true);
}

// Largest |rho(x, x')| over pairs separated by at least min_separation.
inline double off_diag_peak(const CMat& values, const GridSpec& grid, double min_separation) {
    const Eigen::Index n = grid.n_points;
    const auto gap = static_cast<Eigen::Index>(std::ceil(min_separation / grid.dx()));
    double peak = 0.0;
    for (Eigen::Index i = 0; i + gap < n; ++i)
        for (Eigen::Index j = i + gap; j < n; ++j) peak = std::max(peak, std::abs(values(i, j)));
    return peak;
}

// ---------------------------------------------------------------------------
// Finite-difference machinery.

namespace detail {

// Second derivative along rows (the x index). One-sided second-order
// stencils on the first and last row.
inline CMat d2_rows(const CMat& r, double dx) {
    const Eigen::Index n = r.rows();
    const double s = 1.0 / (dx * dx);
    CMat out(n, r.cols());
    out.middleRows(1, n - 2) =
        s * (r.topRows(n - 2) - 2.0 * r.middleRows(1, n - 2) + r.bottomRows(n - 2));
    out.row(0) = s * (2.0 * r.row(0) - 5.0 * r.row(1) + 4.0 * r.row(2) - r.row(3));
    out.row(n - 1) =
        s * (2.0 * r.row(n - 1) - 5.0 * r.row(n - 2) + 4.0 * r.row(n - 3) - r.row(n - 4));
    return out;
}

inline CMat d2_cols(const CMat& r, double dx) { return d2_rows(r.transpose(), dx).transpose(); }

// First derivative along rows, antisymmetric interior stencil.
inline CMat d1_rows(const CMat& r, double dx) {
    const Eigen::Index n = r.rows();
    const double s = 1.0 / (2.0 * dx);
    CMat out(n, r.cols());
    out.middleRows(1, n - 2) = s * (r.bottomRows(n - 2) - r.topRows(n - 2));
    out.row(0) = s * (-3.0 * r.row(0) + 4.0 * r.row(1) - r.row(2));
    out.row(n - 1) = s * (3.0 * r.row(n - 1) - 4.0 * r.row(n - 2) + r.row(n - 3));
    return out;
}

inline CMat d1_cols(const CMat& r, double dx) { return d1_rows(r.transpose(), dx).transpose(); }

struct Generator {
    GridSpec grid;
    double mass = 1.0;
    double lambda = 0.0;
    double gamma = 0.0;
    bool kinetic = true;
    Eigen::MatrixXd sep;  // x_i - x_j
    Eigen::MatrixXd sep2; // (x_i - x_j)^2

    Generator(const GridSpec& g, double m, double lam, double gam, bool kin)
        : grid(g), mass(m), lambda(lam), gamma(gam), kinetic(kin) {
        const Eigen::Index n = g.n_points;
        Eigen::VectorXd xs(n);
        for (Eigen::Index i = 0; i < n; ++i) xs(i) = g.x(i);
        sep = xs.replicate(1, n) - xs.transpose().replicate(n, 1);
        sep2 = sep.cwiseProduct(sep);
    }

    // d rho / dt, optionally without the decoherence part (used by the
    // split scheme, which applies that factor exactly).
    CMat rhs(const CMat& r, bool with_decoherence) const {
        const double dx = grid.dx();
        const Eigen::Index n = grid.n_points;
        CMat out = CMat::Zero(n, n);
        if (kinetic)
            out += Complex(0.0, 0.5 / mass) * (d2_rows(r, dx) - d2_cols(r, dx));
        if (gamma != 0.0)
            out += gamma * sep.cast<Complex>().cwiseProduct(d1_cols(r, dx) - d1_rows(r, dx));
        if (with_decoherence && lambda != 0.0)
            out -= lambda * sep2.cast<Complex>().cwiseProduct(r);
        return out;
    }
};

inline void rk4_step(const Generator& gen, CMat& rho, double dt, bool with_decoherence) {
    const CMat k1 = gen.rhs(rho, with_decoherence);
    const CMat k2 = gen.rhs(rho + 0.5 * dt * k1, with_decoherence);
    const CMat k3 = gen.rhs(rho + 0.5 * dt * k2, with_decoherence);
    const CMat k4 = gen.rhs(rho + dt * k3, with_decoherence);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace detail

// ---------------------------------------------------------------------------
// The engine.

namespace detail {

inline void check_stability(const GridSpec& grid, const EvolutionParams& p, double lambda_eff) {
    const double dx = grid.dx();
    if (p.kinetic_term) {
        const double bound = 0.25 * p.mass * dx * dx;
        if (p.dt > bound)
            throw ConfigError("evolution: dt = " + std::to_string(p.dt) +
                              " violates the kinetic stability bound dt <= 0.25 m dx^2 = " +
                              std::to_string(bound));
    }
    const double span = grid.x_max - grid.x_min;
    if (lambda_eff > 0.0 && p.scheme == Scheme::rk4) {
        const double bound = 1.0 / (lambda_eff * span * span);
        if (p.dt > bound)
            throw ConfigError("evolution: dt = " + std::to_string(p.dt) +
                              " violates the decoherence stability bound dt <= 1/(Lambda L^2) = " +
                              std::to_string(bound));
    }
    if (p.gamma > 0.0) {
        const double bound = dx / (p.gamma * span);
        if (p.dt > bound)
            throw ConfigError("evolution: dt = " + std::to_string(p.dt) +
                              " violates the friction stability bound dt <= dx/(gamma L) = " +
                              std::to_string(bound));
    }
}

inline Trajectory run(const GridDensityMatrix& rho0, const EvolutionParams& p, double lambda_eff,
                      double gamma, bool positivity_fatal) {
    p.validate();
    const GridSpec grid = rho0.grid();
    check_stability(grid, p, lambda_eff);

    const Eigen::Index n = grid.n_points;
    const double dx = grid.dx();
    const Generator gen(grid, p.mass, lambda_eff, gamma, p.kinetic_term);

    // Exact per-step decoherence factor for the split scheme (half step).
    Eigen::MatrixXd half_factor;
    if (p.scheme == Scheme::split)
        half_factor = (-0.5 * p.dt * lambda_eff * gen.sep2).array().exp();

    Trajectory traj;
    traj.grid = grid;
    CMat rho = rho0.values();

    const auto record_summary = [&](double t) {
        SummaryRow row;
        row.t = t;
        row.trace = rho.diagonal().real().sum() * dx;
        row.purity = rho.squaredNorm() * dx * dx;
        Moments m = detail::moments_impl(rho, grid, false);
        row.x_mean = m.x_mean;
        row.p_mean = m.p_mean;
        row.offdiag_peak = off_diag_peak(rho, grid, 0.25 * (grid.x_max - grid.x_min));
        traj.summary.push_back(row);
    };
    const auto record_snapshot = [&](double t) {
        GridDensityMatrix state(grid, rho);
        Eigen::SelfAdjointEigenSolver<CMat> es(state.values(), Eigen::EigenvaluesOnly);
        const double min_eig = es.eigenvalues().minCoeff() * dx;
        traj.snapshot_times.push_back(t);
        traj.snapshots.push_back(std::move(state));
        traj.snapshot_min_eigenvalues.push_back(min_eig);
        if (min_eig < -1e-6) {
            const std::string msg = "negative eigenvalue " + std::to_string(min_eig) + " at t = " +
                                    std::to_string(t);
            if (positivity_fatal)
                throw InvalidStateError("evolution: " + msg);
            traj.warnings.push_back(msg);
        }
    };

    record_summary(0.0);
    record_snapshot(0.0);
    for (long step = 1; step <= p.steps; ++step) {
        if (p.scheme == Scheme::split) {
            if (lambda_eff != 0.0) rho = rho.cwiseProduct(half_factor.cast<Complex>());
            detail::rk4_step(gen, rho, p.dt, false);
            if (lambda_eff != 0.0) rho = rho.cwiseProduct(half_factor.cast<Complex>());
        } else {
            detail::rk4_step(gen, rho, p.dt, true);
        }
        const double t = p.dt * static_cast<double>(step);

        const double peak = rho.diagonal().real().maxCoeff();
        if (rho(0, 0).real() > tolerances().boundary_leak * peak ||
            rho(n - 1, n - 1).real() > tolerances().boundary_leak * peak)
            throw DomainEscapeError("evolution: density reached the box edge",
                                    static_cast<std::size_t>(step));

        record_summary(t);
        const bool snapshot_due =
            (p.snapshot_stride > 0 && step % p.snapshot_stride == 0) || step == p.steps;
        if (snapshot_due) record_snapshot(t);
    }
    return traj;
}

} // namespace detail

// i d rho/dt = (1/2m)(d^2/dx'^2 - d^2/dx^2) rho - i Lambda (x - x')^2 rho.
// Positivity violations are fatal: this flow is completely positive.
inline Trajectory evolve_pure_decoherence(const GridDensityMatrix& rho0, const EvolutionParams& p) {
    return detail::run(rho0, p, p.lambda, 0.0, true);
}

// Adds the friction term +i gamma (x - x')(d/dx' - d/dx) rho, with
// Lambda = m gamma T (k_B = 1) unless explicitly overridden. Negative
// eigenvalue excursions are logged, not fatal.
inline Trajectory evolve_caldeira_leggett(const GridDensityMatrix& rho0, const EvolutionParams& p) {
    const double lambda_eff =
        p.lambda_override ? p.lambda : p.mass * p.gamma * p.temperature;
    return detail::run(rho0, p, lambda_eff, p.gamma, false);
}

// ---------------------------------------------------------------------------
// Decoherence/relaxation ratio in laboratory units: m k_B T (dx)^2 / hbar^2,
// together with the thermal de Broglie wavelength hbar / sqrt(m k_B T), so
// the ratio equals (dx / lambda_th)^2.

struct RatioResult {
    double ratio = 0.0;
    double thermal_wavelength_cm = 0.0;
};

inline RatioResult decoherence_relaxation_ratio(double mass_g, double temp_k, double dx_cm) {
    if (!(mass_g > 0.0) || !(temp_k > 0.0) || dx_cm < 0.0)
        throw DomainError("ratio: mass and temperature must be > 0, dx >= 0");
    const double mkt = mass_g * cgs::k_boltzmann * temp_k;
    RatioResult r;
    r.thermal_wavelength_cm = cgs::hbar / std::sqrt(mkt);
    r.ratio = mkt * dx_cm * dx_cm / (cgs::hbar * cgs::hbar);
    return r;
}

// ---------------------------------------------------------------------------
// CSV export.

inline void export_summary(const Trajectory& traj, const std::string& path) {
    csv::Writer w(path, {"t", "trace", "purity", "x_mean", "p_mean", "offdiag_peak"});
    for (const auto& row : traj.summary)
        w.row({csv::num(row.t), csv::num(row.trace), csv::num(row.purity), csv::num(row.x_mean),
               csv::num(row.p_mean), csv::num(row.offdiag_peak)});
}

// One row per snapshot: t followed by |rho| over the grid, row-major.
inline void export_snapshots(const Trajectory& traj, const std::string& path) {
    const Eigen::Index n = traj.grid.n_points;
    std::vector<std::string> header = {"t"};
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            header.push_back("abs_rho_" + std::to_string(i) + "_" + std::to_string(j));
    csv::Writer w(path, header);
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        std::vector<std::string> cells = {csv::num(traj.snapshot_times[s])};
        const CMat& r = traj.snapshots[s].values();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) cells.push_back(csv::num(std::abs(r(i, j))));
        w.row(std::move(cells));
    }
}

} // namespace deco::evolution
