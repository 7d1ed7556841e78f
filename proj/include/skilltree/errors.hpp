#pragma once

#include <stdexcept>
#include <string>

namespace skilltree {

// Malformed input: unreadable files, bad JSON, missing fields.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally readable input that violates a library invariant.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inconsistent or missing run configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace skilltree
