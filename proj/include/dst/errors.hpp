#pragma once

#include <stdexcept>
#include <string>

namespace dst {

// Invalid or inconsistent configuration (bad key, out-of-range value, missing
// required setting). Maps to exit code 2 in the CLI.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or mismatched data: bad magic, truncation, checksum mismatch,
// non-monotone delta indices. Maps to exit code 3 in the CLI.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem failures. Maps to exit code 1 in the CLI.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dst
