#pragma once

#include <stdexcept>
#include <string>

namespace tgeo {

/// Bad input: violated precondition, malformed config, mismatched shapes.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation ran but could not produce a valid result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A root-form expression hit a negative radicand.
class DomainError : public NumericalError {
public:
    DomainError(const std::string& term, double radicand)
        : NumericalError("negative radicand in " + term + " (" + std::to_string(radicand) + ")"),
          term_(term) {}

    const std::string& term() const noexcept { return term_; }

private:
    std::string term_;
};

}  // namespace tgeo
