#pragma once

#include <stdexcept>

namespace bailin {

// Invalid data or arguments. The CLI maps this to exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Capacities handed to the waterfall do not line up with the ladder.
struct LadderMismatchError : ValidationError {
    using ValidationError::ValidationError;
};

// Invalid configuration: flags, manifest keys, ladder definitions. Exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Missing or unreadable files, failed writes. Exit code 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bailin
