#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace relwave {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or incomplete configuration. The message names the offending field.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Real part of the amplitude exponent left the representable range.
class AmplitudeRangeError : public Error {
public:
    AmplitudeRangeError(const std::string& what, double log_modulus)
        : Error(what), log_modulus_(log_modulus) {}
    double log_modulus() const noexcept { return log_modulus_; }

private:
    double log_modulus_;
};

/// Base for every failure to produce a life time.
class StationarityError : public Error {
public:
    using Error::Error;
};

class NoRealRootError : public StationarityError {
public:
    NoRealRootError(const std::string& what, double discriminant)
        : StationarityError(what), discriminant_(discriminant) {}
    double discriminant() const noexcept { return discriminant_; }

private:
    double discriminant_;
};

class DegenerateQuadraticError : public StationarityError {
public:
    using StationarityError::StationarityError;
};

class NoAdmissibleRootError : public StationarityError {
public:
    using StationarityError::StationarityError;
};

/// (C, dLambda/dC) pairs inspected by the bracket search.
using DerivativeSamples = std::vector<std::pair<double, double>>;

class NoStationaryPointError : public StationarityError {
public:
    NoStationaryPointError(const std::string& what, DerivativeSamples samples)
        : StationarityError(what), samples_(std::move(samples)) {}
    const DerivativeSamples& samples() const noexcept { return samples_; }

private:
    DerivativeSamples samples_;
};

/// Quadrature or grid resolution check failed.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double coarse, double fine)
        : Error(what), coarse_(coarse), fine_(fine) {}
    double coarse() const noexcept { return coarse_; }
    double fine() const noexcept { return fine_; }

private:
    double coarse_;
    double fine_;
};

}  // namespace relwave
