// errors.hpp — Error taxonomy shared by the library and the CLI.

#pragma once

#include <stdexcept>
#include <string>

namespace eitcool {

// One class per failure mode; the CLI maps these 1:1 onto exit codes.
enum class ErrorClass : int {
    none = 0,
    unexpected = 1,
    invalid_parameter = 2,
    io = 3,
    truncation = 4,
    divergence = 5,
    degenerate_steady_state = 6,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorClass cls, const std::string& msg)
        : std::runtime_error(msg), cls_(cls) {}

    ErrorClass error_class() const noexcept { return cls_; }
    int exit_code() const noexcept { return static_cast<int>(cls_); }

  private:
    ErrorClass cls_;
};

// Invalid input value; carries the offending field name.
class InvalidParameter : public Error {
  public:
    InvalidParameter(const std::string& field, const std::string& msg)
        : Error(ErrorClass::invalid_parameter, field + ": " + msg), field_(field) {}

    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

class IoError : public Error {
  public:
    explicit IoError(const std::string& msg) : Error(ErrorClass::io, msg) {}
};

// Fock-space truncation too small for the requested evolution.
class TruncationError : public Error {
  public:
    explicit TruncationError(const std::string& msg) : Error(ErrorClass::truncation, msg) {}
};

// Poles of the steady state, heating regimes, geometric divergences.
class DivergenceError : public Error {
  public:
    explicit DivergenceError(const std::string& msg) : Error(ErrorClass::divergence, msg) {}
};

// The stationary state is not unique (e.g. decoupled motion).
class DegenerateSteadyState : public Error {
  public:
    explicit DegenerateSteadyState(const std::string& msg)
        : Error(ErrorClass::degenerate_steady_state, msg) {}
};

}  // namespace eitcool
