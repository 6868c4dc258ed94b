#pragma once

#include <stdexcept>
#include <string>

namespace bkmod {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: shapes, degrees, field mismatches, bad documents.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A result cannot be certified from the coefficients currently known.
class InsufficientPrecision : public Error {
public:
    using Error::Error;
};

/// No nonzero coefficient is visible within the known window.
class ZeroLeadingCoefficient : public InsufficientPrecision {
public:
    using InsufficientPrecision::InsufficientPrecision;
};

class RootNotInField : public Error {
public:
    using Error::Error;
};

class NotAUnitMatrix : public Error {
public:
    using Error::Error;
};

class DegreeIncompatible : public Error {
public:
    using Error::Error;
};

class NotStronglyDivisible : public Error {
public:
    using Error::Error;
};

class AmbientNotRestrictedRankOne : public Error {
public:
    using Error::Error;
};

/// Two routes to the same quantity disagree. Always a bug or a precision defect.
class MethodDisagreement : public Error {
public:
    using Error::Error;
};

class FormulaMismatch : public Error {
public:
    using Error::Error;
};

class RegressionMismatch : public Error {
public:
    using Error::Error;
};

class CounterexampleFound : public Error {
public:
    using Error::Error;
};

class SearchBudgetExceeded : public Error {
public:
    using Error::Error;
};

} // namespace bkmod
