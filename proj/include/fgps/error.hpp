#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fgps {

enum class ErrorKind {
    InvalidParameter,
    InvalidInput,
    NumericalFailure,
    SingularSystem,
    InconsistentInitialData,
    Unsupported,
    Format,
    Io,
};

inline const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid parameter";
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::NumericalFailure: return "numerical failure";
    case ErrorKind::SingularSystem: return "singular system";
    case ErrorKind::InconsistentInitialData: return "inconsistent initial data";
    case ErrorKind::Unsupported: return "unsupported operation";
    case ErrorKind::Format: return "format error";
    case ErrorKind::Io: return "i/o error";
    }
    return "error";
}

/// Single exception type for the library; `kind()` distinguishes the failure class.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when an iterative refinement gives up. Carries the offending index
/// (root number, panel level, ...) and the last estimate it had.
class NumericalFailure : public Error {
public:
    NumericalFailure(const std::string& what, std::size_t index, double last_estimate)
        : Error(ErrorKind::NumericalFailure, what), index_(index), last_estimate_(last_estimate)
    {
    }

    std::size_t index() const noexcept { return index_; }
    double last_estimate() const noexcept { return last_estimate_; }

private:
    std::size_t index_;
    double last_estimate_;
};

class SingularSystem : public Error {
public:
    SingularSystem(const std::string& what, std::size_t pivot)
        : Error(ErrorKind::SingularSystem, what), pivot_(pivot)
    {
    }

    std::size_t pivot_index() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const std::string& what)
{
    if (!condition)
        fail(kind, what);
}

} // namespace detail
} // namespace fgps
