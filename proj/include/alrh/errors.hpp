#pragma once

#include <stdexcept>
#include <string>

namespace alrh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A lattice amplitude reached the defocusing bound |q| < 1.
class AdmissibilityError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of a formula (z = 0, |ξ| >= 1, pole of Γ, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Computed scattering data violates an identity it must satisfy.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

/// Grid too coarse for the requested quadrature or oscillation.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Linear solve failed or was numerically singular.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Input/output or configuration problem.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace alrh
