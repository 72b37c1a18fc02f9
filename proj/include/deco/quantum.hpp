#pragma once

// Finite-dimensional quantum kinematics: labeled states, density matrices,
// bipartite pure states, Schmidt decomposition, partial trace and coherence
// diagnostics. Everything is dense (Eigen) and immutable after construction.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "deco/errors.hpp"
#include "deco/tolerances.hpp"

namespace deco {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline std::vector<std::string> default_labels(Eigen::Index n, const std::string& prefix = "") {
    std::vector<std::string> labels(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = prefix + std::to_string(i);
    return labels;
}

inline std::vector<std::string> product_labels(const std::vector<std::string>& a,
                                               const std::vector<std::string>& b) {
    std::vector<std::string> out;
    out.reserve(a.size() * b.size());
    for (const auto& la : a)
        for (const auto& lb : b) out.push_back(la + "." + lb);
    return out;
}

// ---------------------------------------------------------------------------
// StateVector: normalized ket over an ordered label basis.

class StateVector {
  public:
    StateVector(std::vector<std::string> labels, CVec amplitudes)
        : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)) {
        validate();
    }

    explicit StateVector(CVec amplitudes) : amplitudes_(std::move(amplitudes)) {
        labels_ = default_labels(amplitudes_.size());
        validate();
    }

    Eigen::Index dim() const { return amplitudes_.size(); }
    const CVec& amplitudes() const { return amplitudes_; }
    const std::vector<std::string>& labels() const { return labels_; }

  private:
    void validate() const {
        if (amplitudes_.size() < 1 ||
            static_cast<std::size_t>(amplitudes_.size()) != labels_.size())
            throw ShapeError("state vector: labels and amplitudes must match and be nonempty");
        const double n2 = amplitudes_.squaredNorm();
        if (std::abs(n2 - 1.0) > tolerances().state_norm)
            throw InvalidStateError("state vector not normalized: |psi|^2 = " + std::to_string(n2));
    }

    std::vector<std::string> labels_;
    CVec amplitudes_;
};

inline Complex inner(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw ShapeError("inner product: dimension mismatch");
    return a.amplitudes().dot(b.amplitudes()); // Eigen dot conjugates the left argument
}

// ---------------------------------------------------------------------------
// DensityMatrix: Hermitian, unit-trace, positive within tolerance.

class DensityMatrix {
  public:
    DensityMatrix(std::vector<std::string> labels, CMat entries)
        : labels_(std::move(labels)), entries_(std::move(entries)) {
        validate();
    }

    explicit DensityMatrix(CMat entries) : entries_(std::move(entries)) {
        labels_ = default_labels(entries_.rows());
        validate();
    }

    Eigen::Index dim() const { return entries_.rows(); }
    const CMat& entries() const { return entries_; }
    const std::vector<std::string>& labels() const { return labels_; }

    static DensityMatrix pure(const StateVector& psi) {
        return DensityMatrix(psi.labels(), psi.amplitudes() * psi.amplitudes().adjoint());
    }

  private:
    void validate() const {
        if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
            throw ShapeError("density matrix must be square and nonempty");
        if (static_cast<std::size_t>(entries_.rows()) != labels_.size())
            throw ShapeError("density matrix: label count does not match dimension");
        const auto& tol = tolerances();
        const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
        if (herm > tol.hermiticity)
            throw InvalidStateError("density matrix not Hermitian, residue " + std::to_string(herm));
        const double tr = entries_.trace().real();
        if (std::abs(tr - 1.0) > tol.density_trace ||
            std::abs(entries_.trace().imag()) > tol.density_trace)
            throw InvalidStateError("density matrix trace != 1: " + std::to_string(tr));
        Eigen::SelfAdjointEigenSolver<CMat> es(entries_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < tol.density_eigen_floor)
            throw InvalidStateError("density matrix has eigenvalue below floor: " +
                                    std::to_string(es.eigenvalues().minCoeff()));
    }

    std::vector<std::string> labels_;
    CMat entries_;
};

// ---------------------------------------------------------------------------
// BipartiteState: pure state of A (x) B as the coefficient matrix c_ab.

class BipartiteState {
  public:
    BipartiteState(Eigen::Index dim_a, Eigen::Index dim_b, CMat coefficients)
        : coefficients_(std::move(coefficients)) {
        if (coefficients_.rows() != dim_a || coefficients_.cols() != dim_b)
            throw ShapeError("bipartite state: coefficient matrix shape mismatch");
        validate();
    }

    explicit BipartiteState(CMat coefficients) : coefficients_(std::move(coefficients)) {
        validate();
    }

    Eigen::Index dim_a() const { return coefficients_.rows(); }
    Eigen::Index dim_b() const { return coefficients_.cols(); }
    const CMat& coefficients() const { return coefficients_; }

    // Joint density matrix over the product basis, index = a * dimB + b.
    DensityMatrix to_density() const {
        CVec flat(dim_a() * dim_b());
        for (Eigen::Index a = 0; a < dim_a(); ++a)
            for (Eigen::Index b = 0; b < dim_b(); ++b) flat(a * dim_b() + b) = coefficients_(a, b);
        return DensityMatrix(product_labels(default_labels(dim_a()), default_labels(dim_b())),
                             flat * flat.adjoint());
    }

  private:
    void validate() const {
        if (coefficients_.rows() < 1 || coefficients_.cols() < 1)
            throw ShapeError("bipartite state: empty coefficient matrix");
        const double n2 = coefficients_.squaredNorm();
        if (std::abs(n2 - 1.0) > tolerances().state_norm)
            throw InvalidStateError("bipartite state not normalized: |c|^2 = " + std::to_string(n2));
    }

    CMat coefficients_;
};

inline BipartiteState random_bipartite_state(Eigen::Index dim_a, Eigen::Index dim_b,
                                             std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMat c(dim_a, dim_b);
    for (Eigen::Index i = 0; i < dim_a; ++i)
        for (Eigen::Index j = 0; j < dim_b; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            c(i, j) = Complex(re, im);
        }
    c /= std::sqrt(c.squaredNorm());
    return BipartiteState(dim_a, dim_b, std::move(c));
}

// ---------------------------------------------------------------------------
// SchmidtDecomposition: descending weights with biorthonormal vector pairs.

class SchmidtDecomposition {
  public:
    SchmidtDecomposition(RVec weights, std::vector<StateVector> left, std::vector<StateVector> right)
        : weights_(std::move(weights)), left_(std::move(left)), right_(std::move(right)) {
        const auto& tol = tolerances();
        if (static_cast<std::size_t>(weights_.size()) != left_.size() || left_.size() != right_.size())
            throw ShapeError("schmidt decomposition: component count mismatch");
        if (weights_.size() < 1) throw ShapeError("schmidt decomposition: empty");
        if (weights_.minCoeff() < 0.0)
            throw InvalidStateError("schmidt weights must be nonnegative");
        if (std::abs(weights_.sum() - 1.0) > tol.schmidt_weights)
            throw InvalidStateError("schmidt weights must sum to 1");
        for (Eigen::Index k = 0; k + 1 < weights_.size(); ++k)
            if (weights_(k) < weights_(k + 1) - tol.schmidt_degeneracy)
                throw InvalidStateError("schmidt weights must be descending");
        check_orthonormal(left_, tol.orthonormality);
        check_orthonormal(right_, tol.orthonormality);
    }

    Eigen::Index rank() const { return weights_.size(); }
    const RVec& weights() const { return weights_; }
    const std::vector<StateVector>& left_vectors() const { return left_; }
    const std::vector<StateVector>& right_vectors() const { return right_; }

  private:
    static void check_orthonormal(const std::vector<StateVector>& vs, double tol) {
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i; j < vs.size(); ++j) {
                const Complex g = inner(vs[i], vs[j]);
                const double expect = (i == j) ? 1.0 : 0.0;
                if (std::abs(g - expect) > tol)
                    throw InvalidStateError("schmidt vectors not orthonormal");
            }
    }

    RVec weights_;
    std::vector<StateVector> left_;
    std::vector<StateVector> right_;
};

namespace detail {

// Lexicographic order on amplitude sequences, (re, im) pairwise.
inline bool lex_less(const CVec& a, const CVec& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
        if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
    }
    return false;
}

} // namespace detail

// Schmidt decomposition via SVD of the coefficient matrix. Phase convention:
// the first amplitude of each left vector above the anchor threshold is made
// real positive and the compensating phase is pushed into the right vector.
// Near-degenerate weights are ordered lexicographically by left amplitudes.
inline SchmidtDecomposition schmidt_decompose(const BipartiteState& state) {
    const auto& tol = tolerances();
    Eigen::JacobiSVD<CMat> svd(state.coefficients(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec& sigma = svd.singularValues();
    const double cut = tol.schmidt_cutoff * sigma(0);

    struct Term {
        double weight;
        CVec left;
        CVec right;
    };
    std::vector<Term> terms;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
        if (sigma(k) <= cut) break; // singular values are descending
        CVec u = svd.matrixU().col(k);
        CVec v = svd.matrixV().col(k).conjugate();
        Eigen::Index anchor = 0;
        while (anchor < u.size() - 1 && std::abs(u(anchor)) <= tol.phase_anchor) ++anchor;
        const Complex phase = u(anchor) / std::abs(u(anchor));
        u *= std::conj(phase);
        v *= phase;
        terms.push_back({sigma(k) * sigma(k), std::move(u), std::move(v)});
    }

    // Stable tie-break inside degenerate weight groups.
    std::stable_sort(terms.begin(), terms.end(), [&](const Term& a, const Term& b) {
        if (std::abs(a.weight - b.weight) < tol.schmidt_degeneracy)
            return detail::lex_less(a.left, b.left);
        return a.weight > b.weight;
    });

    RVec weights(static_cast<Eigen::Index>(terms.size()));
    std::vector<StateVector> left;
    std::vector<StateVector> right;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        weights(static_cast<Eigen::Index>(k)) = terms[k].weight;
        left.emplace_back(std::move(terms[k].left));
        right.emplace_back(std::move(terms[k].right));
    }
    return SchmidtDecomposition(std::move(weights), std::move(left), std::move(right));
}

// Rebuild the coefficient matrix sum_k sqrt(p_k) |left_k>|right_k>.
inline BipartiteState compose(const SchmidtDecomposition& sd) {
    const Eigen::Index da = sd.left_vectors()[0].dim();
    const Eigen::Index db = sd.right_vectors()[0].dim();
    CMat c = CMat::Zero(da, db);
    for (Eigen::Index k = 0; k < sd.rank(); ++k)
        c += std::sqrt(sd.weights()(k)) * sd.left_vectors()[static_cast<std::size_t>(k)].amplitudes() *
             sd.right_vectors()[static_cast<std::size_t>(k)].amplitudes().transpose();
    return BipartiteState(da, db, std::move(c));
}

// ---------------------------------------------------------------------------
// Partial trace over one factor of A (x) B, index = a * dimB + b.

enum class Subsystem { A, B };

inline DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep,
                                   std::pair<Eigen::Index, Eigen::Index> dims) {
    const auto [da, db] = dims;
    if (da < 1 || db < 1 || rho.dim() != da * db)
        throw ShapeError("partial trace: dims do not factor the density matrix");
    const CMat& r = rho.entries();
    if (keep == Subsystem::A) {
        CMat out = CMat::Zero(da, da);
        for (Eigen::Index a = 0; a < da; ++a)
            for (Eigen::Index ap = 0; ap < da; ++ap)
                for (Eigen::Index b = 0; b < db; ++b) out(a, ap) += r(a * db + b, ap * db + b);
        return DensityMatrix(std::move(out));
    }
    CMat out = CMat::Zero(db, db);
    for (Eigen::Index b = 0; b < db; ++b)
        for (Eigen::Index bp = 0; bp < db; ++bp)
            for (Eigen::Index a = 0; a < da; ++a) out(b, bp) += r(a * db + b, a * db + bp);
    return DensityMatrix(std::move(out));
}

// ---------------------------------------------------------------------------
// Entanglement entropy of a Schmidt spectrum, in nats, with 0 ln 0 := 0.

inline double entanglement_entropy(const SchmidtDecomposition& sd) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < sd.rank(); ++k) {
        const double p = sd.weights()(k);
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Coherence across a basis-label partition: Frobenius norm of all entries
// connecting different blocks. Zero iff rho is block diagonal.

using LabelPartition = std::vector<std::vector<std::string>>;

namespace detail {

inline std::vector<int> block_index(const std::vector<std::string>& labels,
                                    const LabelPartition& partition) {
    std::vector<int> block(labels.size(), -1);
    for (std::size_t b = 0; b < partition.size(); ++b)
        for (const auto& lbl : partition[b]) {
            const auto it = std::find(labels.begin(), labels.end(), lbl);
            if (it == labels.end())
                throw PartitionError("partition names unknown label: " + lbl);
            const auto i = static_cast<std::size_t>(it - labels.begin());
            if (block[i] != -1) throw PartitionError("partition repeats label: " + lbl);
            block[i] = static_cast<int>(b);
        }
    for (std::size_t i = 0; i < block.size(); ++i)
        if (block[i] == -1) throw PartitionError("partition does not cover label: " + labels[i]);
    return block;
}

} // namespace detail

inline double coherence_norm(const DensityMatrix& rho, const LabelPartition& partition) {
    const auto block = detail::block_index(rho.labels(), partition);
    double s2 = 0.0;
    for (Eigen::Index i = 0; i < rho.dim(); ++i)
        for (Eigen::Index j = 0; j < rho.dim(); ++j)
            if (block[static_cast<std::size_t>(i)] != block[static_cast<std::size_t>(j)])
                s2 += std::norm(rho.entries()(i, j));
    return std::sqrt(s2);
}

// Full dephasing with respect to a partition: off-block entries are removed.
inline DensityMatrix block_dephase(const DensityMatrix& rho, const LabelPartition& partition) {
    const auto block = detail::block_index(rho.labels(), partition);
    CMat out = rho.entries();
    for (Eigen::Index i = 0; i < rho.dim(); ++i)
        for (Eigen::Index j = 0; j < rho.dim(); ++j)
            if (block[static_cast<std::size_t>(i)] != block[static_cast<std::size_t>(j)])
                out(i, j) = Complex(0.0, 0.0);
    return DensityMatrix(rho.labels(), std::move(out));
}

} // namespace deco
