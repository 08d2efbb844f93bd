#pragma once
#include <stdexcept>
#include <string>

namespace mkflow {

// Exit-code contract used by the CLI: validation 2, solver 3, invariant 4.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& m) : std::runtime_error(m) {}
};

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& m) : std::runtime_error(m) {}
};

struct InvariantError : std::runtime_error {
    explicit InvariantError(const std::string& m) : std::runtime_error(m) {}
};

// Non-finite value in input data; message names the offending node.
struct CorruptInputError : ValidationError {
    explicit CorruptInputError(const std::string& m) : ValidationError(m) {}
};

// |Du| exceeded 1 - theta somewhere; message carries the worst node.
struct NonSpacelikeError : ValidationError {
    explicit NonSpacelikeError(const std::string& m) : ValidationError(m) {}
};

struct PreconditionError : ValidationError {
    explicit PreconditionError(const std::string& m) : ValidationError(m) {}
};

// Newton left the admissible cone with no acceptable step.
struct ConeViolationError : SolverError {
    explicit ConeViolationError(const std::string& m) : SolverError(m) {}
};

struct NewtonFailure : SolverError {
    explicit NewtonFailure(const std::string& m) : SolverError(m) {}
};

struct FlowFailure : SolverError {
    explicit FlowFailure(const std::string& m) : SolverError(m) {}
};

struct BarrierConstructionFailure : SolverError {
    explicit BarrierConstructionFailure(const std::string& m) : SolverError(m) {}
};

struct UnsupportedArcError : ValidationError {
    explicit UnsupportedArcError(const std::string& m) : ValidationError(m) {}
};

struct EnlargeDomainError : SolverError {
    explicit EnlargeDomainError(const std::string& m) : SolverError(m) {}
};

} // namespace mkflow
