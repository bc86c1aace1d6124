#pragma once

#include <stdexcept>
#include <string>

namespace driftgreen {

/// Base for failures of the numerics (as opposed to bad arguments).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    /// Short class name reported by the CLI ("Divergence", "NonConvergence", ...).
    virtual const char* error_class() const noexcept = 0;
};

/// An integral that does not exist: the partial sums grow without bound under refinement.
class Divergence : public NumericalError {
public:
    using NumericalError::NumericalError;
    const char* error_class() const noexcept override { return "Divergence"; }
};

/// The subdivision or node budget ran out before the tolerance was met.
class NonConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
    const char* error_class() const noexcept override { return "NonConvergence"; }
};

/// Monte Carlo subsample was empty, so the requested mean is undefined.
class InsufficientData : public NumericalError {
public:
    using NumericalError::NumericalError;
    const char* error_class() const noexcept override { return "InsufficientData"; }
};

/// Argument outside the domain where the quantity is defined (e.g. x at a boundary).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace driftgreen
