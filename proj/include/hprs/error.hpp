#ifndef HPRS_ERROR_HPP
#define HPRS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hprs {

enum class Errc {
    // specification language
    SyntaxError,
    UnknownVariable,
    DuplicateName,
    NonNormalizablePredicate,
    TriviallySatisfied,
    TriviallyViolated,
    UnboundedSignal,
    // task validation
    NoTarget,
    MultipleTargets,
    EmptyTask,
    UnknownRequirement,
    // traces and semantics
    EmptyTrace,
    NotComfort,
    EmptyInput,
    // shaping
    WeightDimensionMismatch,
    EmptyWindow,
    // episodes, environments, solvers
    AlreadyTerminated,
    InvalidAction,
    NonStochasticRow,
    NonDiscreteEnvironment,
    // plumbing
    BadConfig,
    IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace hprs

#endif  // HPRS_ERROR_HPP
