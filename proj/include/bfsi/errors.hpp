#pragma once

#include <stdexcept>
#include <string>

namespace bfsi {

/// Buckets map onto CLI exit codes: config -> 1, solver -> 2, io -> 3.
/// `logic` covers misuse of the library API (bad arguments, degenerate
/// inputs) and also exits with code 1 when it reaches the CLI.
enum class ErrorCategory { config, solver, io, logic };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

struct InvalidConfig : Error {
    explicit InvalidConfig(const std::string& m) : Error(ErrorCategory::config, m) {}
};

struct EvaluationError : Error {
    explicit EvaluationError(const std::string& m) : Error(ErrorCategory::config, m) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error(ErrorCategory::logic, m) {}
};

struct GeometryError : Error {
    explicit GeometryError(const std::string& m) : Error(ErrorCategory::solver, m) {}
};

/// Picard iteration exhausted its budget; carries the simulation time.
struct NonConvergence : Error {
    NonConvergence(double time, const std::string& m)
        : Error(ErrorCategory::solver, m), t(time) {}
    double t;
};

/// Particle reached a wall. Loud by contract: the state is never clamped.
struct CollisionAbort : Error {
    CollisionAbort(double time, double position, const std::string& m)
        : Error(ErrorCategory::solver, m), t(time), h(position) {}
    double t;
    double h;
};

struct LinearSolveFailure : Error {
    explicit LinearSolveFailure(const std::string& m) : Error(ErrorCategory::solver, m) {}
};

struct QuadratureError : Error {
    explicit QuadratureError(const std::string& m) : Error(ErrorCategory::logic, m) {}
};

struct DegenerateFit : Error {
    explicit DegenerateFit(const std::string& m) : Error(ErrorCategory::logic, m) {}
};

struct NotApplicable : Error {
    explicit NotApplicable(const std::string& m) : Error(ErrorCategory::logic, m) {}
};

struct DegenerateStudy : Error {
    explicit DegenerateStudy(const std::string& m) : Error(ErrorCategory::logic, m) {}
};

struct IoError : Error {
    explicit IoError(const std::string& m) : Error(ErrorCategory::io, m) {}
};

}  // namespace bfsi
