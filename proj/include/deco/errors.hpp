#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deco {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A state or density matrix failed its own invariants (norm, trace, ...).
struct InvalidStateError : Error {
    using Error::Error;
};

// Dimension mismatch between operands.
struct ShapeError : Error {
    using Error::Error;
};

// A basis-label partition does not cover (or multiply covers) the basis.
struct PartitionError : Error {
    using Error::Error;
};

// Numerical-domain violation (nonpositive rate, negative time, ...).
struct DomainError : Error {
    using Error::Error;
};

// Bad run configuration (step size above stability bound, unknown key, ...).
struct ConfigError : Error {
    using Error::Error;
};

// An operator argument is not what the operation requires (e.g. not Hermitian).
struct InvalidOperatorError : Error {
    using Error::Error;
};

// An overlap (Gram) matrix is not positive semidefinite.
struct InvalidEnvironmentError : Error {
    using Error::Error;
};

// Input vectors expected to be orthonormal are not.
struct InvalidBasisError : Error {
    using Error::Error;
};

// Fock-space cutoff too small for the requested coherent amplitude.
struct TruncationError : Error {
    using Error::Error;
};

// Probability density reached the edge of the simulation box mid-run.
struct DomainEscapeError : Error {
    DomainEscapeError(const std::string& what, std::size_t step)
        : Error(what + " (step " + std::to_string(step) + ")"), step_index(step) {}
    std::size_t step_index;
};

} // namespace deco
