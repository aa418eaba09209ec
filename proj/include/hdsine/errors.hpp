#pragma once

#include <stdexcept>
#include <string>

namespace hdsine {

/// Malformed arguments: mismatched dimensions, out-of-range parameters.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Well-formed arguments that violate an operation's stated precondition.
class PreconditionError : public std::domain_error {
public:
    explicit PreconditionError(const std::string& what) : std::domain_error(what) {}
};

/// Evaluation point outside the domain of a function (e.g. a zero divisor).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Internal numerical inconsistency beyond the accepted rounding band.
class ConsistencyError : public std::logic_error {
public:
    explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace hdsine
