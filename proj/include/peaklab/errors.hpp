#pragma once

#include <stdexcept>
#include <string>

namespace peaklab {

// Base class for all toolkit errors. Every failure mode named in a module
// contract has its own type so callers can dispatch on it.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation requested outside a function's declared domain.
class DomainViolation : public Error {
public:
    using Error::Error;
};

// ExpInvLog argument left the open left half-plane, where the principal
// logarithm branch backing the construction is no longer valid.
class BranchViolation : public Error {
public:
    using Error::Error;
};

// Simultaneous root iteration failed to reach the residual target.
class NonConvergence : public Error {
public:
    using Error::Error;
};

// Fractional-map denominator n + lambda*z1 vanished (within tolerance).
class PoleHit : public Error {
public:
    using Error::Error;
};

// lambda* search did not reach the boundary band after grid + refinement.
class SearchFailure : public Error {
public:
    using Error::Error;
};

class NotInClosure : public Error {
public:
    using Error::Error;
};

class NotInSet : public Error {
public:
    using Error::Error;
};

class NotExtreme : public Error {
public:
    using Error::Error;
};

class NotOnBoundary : public Error {
public:
    using Error::Error;
};

class AxisPoint : public Error {
public:
    using Error::Error;
};

class RecursionBudgetExceeded : public Error {
public:
    using Error::Error;
};

class ScopeViolation : public Error {
public:
    using Error::Error;
};

class FiberBoundaryMismatch : public Error {
public:
    using Error::Error;
};

class IndistinctPoints : public Error {
public:
    using Error::Error;
};

class ExponentSearchFailure : public Error {
public:
    using Error::Error;
};

// Malformed input file / flag (CLI layer maps this to exit code 2).
class InputError : public Error {
public:
    using Error::Error;
};

} // namespace peaklab
