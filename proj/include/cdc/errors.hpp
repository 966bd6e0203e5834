#pragma once

#include <stdexcept>
#include <string>

namespace cdc {

// Parameters outside a scheme's domain (bad K, r, sizes, counts).
struct InvalidParams : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Scheme is well formed but cannot exist for these parameters,
// e.g. a resolvable-design load query with non-integer K/r.
struct NotFeasible : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Refusal to materialize a plan whose file count exceeds the configured cap.
struct FileLimitExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LengthMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SizeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A shuffle plan that is internally inconsistent: bad coverage, a sender
// or recipient without the intermediate values the plan assumes, unequal
// coded operands, and similar.
struct PlanDefect : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DecodeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KeyOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SortViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cdc
