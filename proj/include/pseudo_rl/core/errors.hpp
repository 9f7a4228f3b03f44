#pragma once

#include <stdexcept>
#include <string>

namespace pseudo_rl {

/// Invalid user-facing configuration (unknown key, out-of-range value, shape mismatch).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Broken internal invariant, e.g. a replay chain that does not line up.
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// NaN/Inf where a finite value is required.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sampler has no valid windows for the requested repeat length.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace pseudo_rl
