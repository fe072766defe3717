#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace trgsvd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A normalization or orthogonalization produced a (numerically) zero vector.
class BreakdownError : public Error {
public:
    using Error::Error;
};

/// The stacked matrix [A; B] is numerically rank deficient.
class NotRegularError : public Error {
public:
    using Error::Error;
};

/// The mass matrix of a symmetric-definite pencil is not positive definite.
class SemiDefiniteError : public Error {
public:
    using Error::Error;
};

/// Input to the CS decomposition does not satisfy J^T J + Jc^T Jc = I.
class NotCsPairError : public Error {
public:
    using Error::Error;
};

/// An iteration hit its cap. Carries the best iterate when there is one.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, std::vector<double> best = {})
        : Error(what), best_iterate(std::move(best)) {}

    std::vector<double> best_iterate;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace trgsvd
