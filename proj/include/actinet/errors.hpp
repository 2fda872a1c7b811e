#pragma once

#include <stdexcept>
#include <string>

namespace actinet {

// Bad parameters or configuration (CLI exit code 1).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data (CLI exit code 2).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Training aborted with a diagnostic, e.g. non-finite error surface
// (CLI exit code 3).
struct TrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace actinet
