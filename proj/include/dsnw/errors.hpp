#pragma once

#include <stdexcept>
#include <string>

namespace dsnw {

// Gamma-function pole (nonpositive integer argument).
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Argument outside the documented domain (e.g. on a branch cut).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// M = 1 is not a supported configuration.
class ExcludedMassError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Finite-difference stencil would touch a chart singularity (theta near 0 or pi).
class SingularChartError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DegenerateParameterError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// |T| vanished where a reciprocal was required.
class ZeroCrossingError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dsnw
