#pragma once

#include <stdexcept>
#include <string>

namespace sgf {

// Base of every error thrown by the library. kind() is a stable, lower-case
// tag used by the CLI for machine-parsable error lines.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error("invalid-input", what) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

class UndefinedSpeedup : public Error {
public:
    explicit UndefinedSpeedup(const std::string& what) : Error("undefined-speedup", what) {}
};

class SingularFormula : public Error {
public:
    explicit SingularFormula(const std::string& what) : Error("singular-formula", what) {}
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("parse", "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace sgf
