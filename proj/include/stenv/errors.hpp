#pragma once
#include <stdexcept>

namespace stenv {

// DomainError: argument outside the supported domain of an operation.
// NonConvergence: an iterative scheme (series, quadrature, inversion) hit its cap.
// CapExceeded: a simulation exceeded a configured resource cap; callers may retry.
// InsufficientPath: a simulated window does not determine the requested
// functional (e.g. the pinning extremum is not flanked on both sides);
// callers should retry on a fresh stream.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace stenv
