#pragma once

#include <stdexcept>
#include <string>

namespace spinor {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A state or polar decomposition violates the unit-norm contract.
class NormViolation : public Error {
public:
    using Error::Error;
};

/// Matrix/vector dimensions are incompatible or not a supported size.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// The effective precession rate is zero where a finite one is required.
class DegenerateDelta : public Error {
public:
    using Error::Error;
};

/// A rotation axis is not unit length.
class NonUnitAxis : public Error {
public:
    using Error::Error;
};

/// A multi-spin request exceeds the dense-matrix capacity cap.
class CapacityExceeded : public Error {
public:
    using Error::Error;
};

/// A matrix that must be Hermitian is not, beyond tolerance.
class NotHermitian : public Error {
public:
    using Error::Error;
};

/// The integrator's norm drift exceeded its budget; the step is too coarse.
class StepTooLarge : public Error {
public:
    using Error::Error;
};

/// A sampled Hamiltonian evaluation is not Hermitian.
class NonHermitianSample : public Error {
public:
    using Error::Error;
};

/// A closed form requires a nonzero static field.
class ZeroField : public Error {
public:
    using Error::Error;
};

/// Thermal polarization is undefined at non-positive temperature.
class NonPositiveTemperature : public Error {
public:
    using Error::Error;
};

/// Sampling rate too low for the signal's highest frequency.
class NyquistViolation : public Error {
public:
    using Error::Error;
};

/// A sequence program combines events the engine does not model.
class UnsupportedCombination : public Error {
public:
    using Error::Error;
};

/// Malformed sequence text. Carries the 1-based position of the offence.
class SyntaxError : public Error {
public:
    int line = 0;
    int col = 0;
    SyntaxError(int line_, int col_, const std::string& what)
        : Error("line " + std::to_string(line_) + ", col " + std::to_string(col_) + ": " + what),
          line(line_),
          col(col_) {}
    explicit SyntaxError(const std::string& what) : Error(what) {}
};

/// A unit suffix the sequence language does not define.
class UnknownUnit : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

/// A sequence declares more than one acquisition window.
class DuplicateAcquire : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

/// A statement names a domain that was never declared.
class UndeclaredDomain : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

}  // namespace spinor
