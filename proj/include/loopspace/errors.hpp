#pragma once

#include <stdexcept>
#include <string>

namespace loopspace {

/// Base class for all engine errors.
struct AlgebraError : std::runtime_error {
    explicit AlgebraError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Two operands belong to different algebras.
struct DomainMismatchError : AlgebraError {
    using AlgebraError::AlgebraError;
};

/// A degree argument exceeds the algebra's validated range.
struct CutoffExceededError : AlgebraError {
    using AlgebraError::AlgebraError;
};

/// A derivation was applied to a generator it has no value for.
struct IncompleteDerivationError : AlgebraError {
    using AlgebraError::AlgebraError;
};

/// An iterated series failed to vanish within its hard cap.
struct SeriesDivergenceError : AlgebraError {
    using AlgebraError::AlgebraError;
};

/// A model or morphism violates a structural requirement
/// (non-1-connected base, missing image, failed chain-map check, ...).
struct ConstructionError : AlgebraError {
    using AlgebraError::AlgebraError;
};

/// A cocycle was expected but d(z) != 0.
struct NotClosedError : AlgebraError {
    using AlgebraError::AlgebraError;
};

/// The cohomology of the base fails Poincare duality requirements
/// (degenerate pairing, H^m not one-dimensional, classes above the top degree).
struct PoincareDualityError : AlgebraError {
    using AlgebraError::AlgebraError;
};

/// Syntax or validation failure in a model description, with source position.
struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int line_, int column_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ", column " +
                             std::to_string(column_) + ": " + msg),
          line(line_),
          column(column_) {}
};

}  // namespace loopspace
