#pragma once

#include <stdexcept>
#include <string>

namespace cqm {

/// Malformed input: schema violations, broken preconditions, dimension or
/// boundary mismatches. The CLI maps these to exit status 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An exponential operation was asked to run above the configured bound.
class SizeGuardError : public InputError {
public:
    using InputError::InputError;
};

/// Boundary mismatch between two composable things, naming both sides.
class DomainMismatch : public InputError {
public:
    DomainMismatch(const std::string& what, const std::string& left, const std::string& right)
        : InputError(what + ": '" + left + "' vs '" + right + "'"), left_(left), right_(right) {}

    const std::string& left() const noexcept { return left_; }
    const std::string& right() const noexcept { return right_; }

private:
    std::string left_;
    std::string right_;
};

}  // namespace cqm
