#pragma once

#include <stdexcept>
#include <string>

namespace rwos {

/// Malformed or invalid problem description (syntax, schema, invariants).
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Geometric operation undefined for its input (inversion at the center, ...).
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid solver configuration (stencil leaves the domain, bad epsilon, ...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure of an estimate (exhausted resamples, ill-conditioned ratio).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rwos
