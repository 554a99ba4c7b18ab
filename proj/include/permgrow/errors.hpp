#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace permgrow {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegreeError : Error {
    explicit DegreeError(const std::string& msg) : Error(msg) {}
};

struct NotInvariantError : Error {
    explicit NotInvariantError(const std::string& msg) : Error(msg) {}
};

// Parse failures carry a position when one is known (1-based; 0 = unknown).
struct ParseError : Error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& msg, int line_ = 0, int col_ = 0)
        : Error(line_ ? msg + " (line " + std::to_string(line_) + ", col " +
                            std::to_string(col_) + ")"
                      : msg),
          line(line_), column(col_) {}
};

struct ConventionError : Error {
    explicit ConventionError(const std::string& msg) : Error(msg) {}
};

struct NoWitnessError : Error {
    explicit NoWitnessError(const std::string& msg) : Error(msg) {}
};

struct BaseMismatchError : Error {
    explicit BaseMismatchError(const std::string& msg) : Error(msg) {}
};

struct NotTransitiveError : Error {
    explicit NotTransitiveError(const std::string& msg) : Error(msg) {}
};

struct NotFullGroupError : Error {
    explicit NotFullGroupError(const std::string& msg) : Error(msg) {}
};

struct CosetCoverageError : Error {
    explicit CosetCoverageError(const std::string& msg) : Error(msg) {}
};

struct TooSmallError : Error {
    explicit TooSmallError(const std::string& msg) : Error(msg) {}
};

struct TooSmallDeltaError : Error {
    explicit TooSmallDeltaError(const std::string& msg) : Error(msg) {}
};

struct DeltaTooSmallError : Error {
    explicit DeltaTooSmallError(const std::string& msg) : Error(msg) {}
};

struct CoverageError : Error {
    explicit CoverageError(const std::string& msg) : Error(msg) {}
};

struct ParamError : Error {
    explicit ParamError(const std::string& msg) : Error(msg) {}
};

struct RetryExhaustedError : Error {
    explicit RetryExhaustedError(const std::string& msg) : Error(msg) {}
};

struct HypothesisError : Error {
    explicit HypothesisError(const std::string& msg) : Error(msg) {}
};

struct BudgetError : Error {
    // Largest radius fully explored before the budget was hit (-1 if none).
    std::int64_t completed_radius = -1;
    explicit BudgetError(const std::string& msg, std::int64_t radius = -1)
        : Error(msg), completed_radius(radius) {}
};

// A theory-guaranteed condition failed; indicates a bug, not bad input.
struct InvariantViolation : Error {
    explicit InvariantViolation(const std::string& msg) : Error(msg) {}
};

}  // namespace permgrow
