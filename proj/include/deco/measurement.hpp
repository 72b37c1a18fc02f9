#pragma once

// Von Neumann measurement dynamics: the correlated system-pointer state
// produced by an ideal measurement interaction, and the local density matrix
// left behind once environment states of given overlaps have carried the
// phases away.

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "deco/errors.hpp"
#include "deco/quantum.hpp"
#include "deco/tolerances.hpp"

namespace deco::measurement {

struct MeasurementInteraction {
    std::vector<std::string> system_basis;                // labels for |n>
    std::map<std::string, StateVector> pointer_states;    // n -> |Phi_n>
    StateVector initial_pointer;                          // |Phi_0>

    void validate() const {
        if (system_basis.empty()) throw ShapeError("measurement: empty system basis");
        for (const auto& label : system_basis) {
            const auto it = pointer_states.find(label);
            if (it == pointer_states.end())
                throw ShapeError("measurement: no pointer state for label " + label);
            if (it->second.dim() != initial_pointer.dim())
                throw ShapeError("measurement: pointer dimensions disagree");
        }
    }
};

// (sum_n c_n |n>) |Phi_0>  ->  sum_n c_n |n>|Phi_n>. If all pointer states
// coincide the result factorizes.
inline BipartiteState apply_measurement(const CVec& coeffs, const MeasurementInteraction& mi) {
    mi.validate();
    if (static_cast<std::size_t>(coeffs.size()) != mi.system_basis.size())
        throw ShapeError("measurement: coefficient count does not match the system basis");
    const Eigen::Index db = mi.initial_pointer.dim();
    CMat c(coeffs.size(), db);
    for (Eigen::Index n = 0; n < coeffs.size(); ++n) {
        const auto& phi = mi.pointer_states.at(mi.system_basis[static_cast<std::size_t>(n)]);
        c.row(n) = coeffs(n) * phi.amplitudes().transpose();
    }
    return BipartiteState(coeffs.size(), db, std::move(c));
}

// Gram matrix of environment states: Hermitian, unit diagonal, moduli <= 1,
// positive semidefinite.
class OverlapMatrix {
  public:
    explicit OverlapMatrix(CMat entries) : entries_(std::move(entries)) {
        const auto& tol = tolerances();
        if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
            throw ShapeError("overlap matrix must be square");
        if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > tol.hermiticity)
            throw InvalidEnvironmentError("overlap matrix not Hermitian");
        for (Eigen::Index i = 0; i < entries_.rows(); ++i)
            if (std::abs(entries_(i, i) - 1.0) > tol.hermiticity)
                throw InvalidEnvironmentError("overlap matrix diagonal must be 1");
        if ((entries_.cwiseAbs().array() > 1.0 + tol.hermiticity).any())
            throw InvalidEnvironmentError("overlap matrix has modulus above 1");
        Eigen::SelfAdjointEigenSolver<CMat> es(entries_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < tol.overlap_psd_floor)
            throw InvalidEnvironmentError("overlap matrix is not positive semidefinite");
    }

    Eigen::Index dim() const { return entries_.rows(); }
    const CMat& entries() const { return entries_; }

  private:
    CMat entries_;
};

// rho_nm = c_n conj(c_m) <E_m|E_n>: orthogonal environments leave the
// diagonal mixture |c_n|^2, a shared environment state factors out.
inline DensityMatrix local_density_matrix(const CVec& coeffs, const OverlapMatrix& overlaps) {
    if (coeffs.size() != overlaps.dim())
        throw ShapeError("local density matrix: coefficients do not match the overlap matrix");
    CMat rho(coeffs.size(), coeffs.size());
    for (Eigen::Index n = 0; n < coeffs.size(); ++n)
        for (Eigen::Index m = 0; m < coeffs.size(); ++m)
            rho(n, m) = coeffs(n) * std::conj(coeffs(m)) * std::conj(overlaps.entries()(m, n));
    return DensityMatrix(std::move(rho));
}

} // namespace deco::measurement
