#pragma once

#include <stdexcept>
#include <string>

namespace dnls {

// exit code 2
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// exit code 3
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// exit code 4: eigenvalue or resonance present
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dnls
