#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace drift_spectral {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

/// A series failed to converge within its iteration cap.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double partial, double bnd)
        : Error(what), partial_sum(partial), bound(bnd) {}
    double partial_sum;
    double bound;
};

/// Amplitude pole: the mode degenerates to a resonant polynomial.
class ResonanceError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class AccuracyError : public Error {
public:
    using Error::Error;
};

/// Trace data has mass at degrees that must be empty.
class AdmissibilityError : public Error {
public:
    AdmissibilityError(const std::string& what, std::vector<int> bad)
        : Error(what), degrees(std::move(bad)) {}
    std::vector<int> degrees;
};

class RegularityError : public Error {
public:
    using Error::Error;
};

class NotComparableError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class PathError : public Error {
public:
    using Error::Error;
};

class SeedError : public Error {
public:
    using Error::Error;
};

class ZeroFieldError : public Error {
public:
    using Error::Error;
};

}  // namespace drift_spectral
