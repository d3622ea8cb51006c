#pragma once

#include "qgeom/linear_solve.hpp"

#include <stdexcept>
#include <string>

namespace qgeom {

class QgeomError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed graph or mismatched data sizes.
class GraphError : public QgeomError {
public:
    using QgeomError::QgeomError;
};

/// Input that is well formed but violates a precondition (non-stochastic
/// weights, singular metric, wrong parameter count, ...).
class ValidationError : public QgeomError {
public:
    using QgeomError::QgeomError;
};

/// The generalized braiding of a connection could not be determined.
class SigmaError : public QgeomError {
public:
    SigmaError(SolveStatus status, const std::string& what)
        : QgeomError(what + ": " + to_string(status)), status_(status) {}
    SolveStatus status() const { return status_; }

private:
    SolveStatus status_;
};

}  // namespace qgeom
