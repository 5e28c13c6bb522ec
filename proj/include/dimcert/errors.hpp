#pragma once

#include <stdexcept>
#include <string>

namespace dimcert {

struct PoleError : std::runtime_error {
    explicit PoleError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IncidenceError : std::runtime_error {
    explicit IncidenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnsupportedDimension : std::runtime_error {
    explicit UnsupportedDimension(const std::string& msg) : std::runtime_error(msg) {}
};

struct CoverageError : std::runtime_error {
    explicit CoverageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotFoundError : std::runtime_error {
    explicit NotFoundError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ErrTooLarge : std::runtime_error {
    explicit ErrTooLarge(const std::string& msg) : std::runtime_error(msg) {}
};

struct RangeError : std::runtime_error {
    explicit RangeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PositivityError : std::runtime_error {
    explicit PositivityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct OverlapError : std::runtime_error {
    explicit OverlapError(const std::string& msg) : std::runtime_error(msg) {}
};

struct BracketFailure : std::runtime_error {
    explicit BracketFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct VerificationFailure : std::runtime_error {
    explicit VerificationFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace dimcert
