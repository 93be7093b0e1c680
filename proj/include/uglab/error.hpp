// Error types shared across the library. The CLI maps these to exit codes.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uglab {

// Bad arguments or out-of-domain inputs (CLI exit code 2).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numeric failure such as non-convergence (CLI exit code 3).
// Carries the best value obtained before giving up, when one exists.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg, double partial_value = 0.0)
        : std::runtime_error(msg), partial(partial_value) {}
    double partial;
};

// Tolerance ambiguity: two matrices too close to separate, too far to merge.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Group closure did not terminate under the element cap.
struct ClosureCapError : std::runtime_error {
    ClosureCapError(const std::string& msg, std::size_t count)
        : std::runtime_error(msg), partial_count(count) {}
    std::size_t partial_count;
};

// Requested computation needs an exact distribution or enumeration that the
// given group spec cannot provide.
struct UnsupportedSpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace uglab
