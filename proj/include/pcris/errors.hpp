#pragma once

#include <stdexcept>
#include <string>

namespace pcris {

struct PcrisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// operation called outside its domain
struct PreconditionError : PcrisError {
    using PcrisError::PcrisError;
};

struct NoUnitPivot : PcrisError {
    NoUnitPivot() : PcrisError("no unit pivot") {}
    explicit NoUnitPivot(const std::string& what) : PcrisError("no unit pivot: " + what) {}
};

struct InconsistentSystem : PcrisError {
    InconsistentSystem() : PcrisError("inconsistent") {}
    explicit InconsistentSystem(const std::string& what) : PcrisError("inconsistent: " + what) {}
};

struct DivisionObstruction : PcrisError {
    explicit DivisionObstruction(const std::string& what) : PcrisError("division obstruction: " + what) {}
};

struct ExponentOverflow : PcrisError {
    explicit ExponentOverflow(const std::string& what) : PcrisError("exponent overflow: " + what) {}
};

struct VerificationFailure : PcrisError {
    explicit VerificationFailure(const std::string& what) : PcrisError("verification failed: " + what) {}
};

}  // namespace pcris
