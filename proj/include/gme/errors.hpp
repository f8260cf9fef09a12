#pragma once

#include <stdexcept>
#include <string>

namespace gme {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: mismatched dimensions, negative entries, broken invariants.
/// The CLI maps this to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Structurally valid input outside the capabilities of the requested
/// algorithm (elimination beyond dimension 3, subset enumeration beyond
/// dimension 20, ...). The CLI maps this to exit code 3.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// A degenerate instance whose solution set is not finite or whose
/// rescaling is undefined (identically zero polynomial, vanishing
/// resultant, zero power-method limit on a reducible tensor).
class DegenerateError : public Error {
public:
    using Error::Error;
};

}  // namespace gme
