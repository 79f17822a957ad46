#pragma once

#include <stdexcept>
#include <string>

namespace specgraph {

/// Failure categories. Each maps to a distinct process exit code in the CLI.
enum class ErrorKind {
    Io = 3,
    Parse = 4,
    Validation = 5,
    Numerical = 6,
    Degenerate = 7,
};

inline const char *to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Degenerate: return "degenerate";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string &what)
        : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what), line_(line) {}

    /// 1-based line number of the offending input row (0 when not line-specific).
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string &what) : Error(ErrorKind::Validation, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string &what) : Error(ErrorKind::Numerical, what) {}
};

class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string &what) : Error(ErrorKind::Degenerate, what) {}
};

} // namespace specgraph
