#pragma once

#include <stdexcept>
#include <string>

namespace gridsolve {

/// Precondition or invariant violation in library operations
/// (bad coordinates, singular setup, mismatched sizes, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    explicit ConfigError(const std::string& what) : std::runtime_error(what), line_(0) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// File creation or write failure; carries the offending path in the message.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gridsolve
