#pragma once

#include <stdexcept>
#include <string>

namespace selfnorm {

// An expectation that is infinite, or that the quadrature could not resolve.
// Callers that work in the extended reals map it to +inf.
class Divergent : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// invert_monotone could not enclose the requested level.
class NotBracketed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A supremum over an unbounded grid kept growing through its last decade.
class Unbounded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the range where a bound is stated (e.g. power bound with B < e).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Bound curves handed to verification do not cover the requested (n, B) grid.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Bad distribution spec, flag value, or config-file entry.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace selfnorm
