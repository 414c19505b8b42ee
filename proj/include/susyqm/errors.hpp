#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace susyqm {

/// Invalid input to a numerical routine (non-confining potential, K > n, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its requested accuracy.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The transition classifier found contradictory or insufficient evidence.
class UnresolvedError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

/// Syntax error in a textual expression; `position` is a 0-based offset.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace susyqm
