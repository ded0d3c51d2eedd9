#pragma once

#include <stdexcept>
#include <string>

namespace profitscape {

// Error taxonomy. The CLI maps these onto exit codes (validation/config -> 1,
// I/O -> 2) and the C API onto pl_status values.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad data or bad parameters (non-positive price, invalid fraction, ...).
struct ValidationError : Error {
    using Error::Error;
};

// Bad experiment/CLI configuration (mismatched resolutions, d >= T, ...).
struct ConfigError : ValidationError {
    using ValidationError::ValidationError;
};

// Malformed file contents; message carries the line number where known.
struct ParseError : Error {
    using Error::Error;
};

// Filesystem level failure (missing file, unwritable directory).
struct IoError : Error {
    using Error::Error;
};

// Index out of range in a series accessor.
struct RangeError : Error {
    using Error::Error;
};

// Power-law fit asked for with fewer than three positive points.
struct InsufficientDataError : Error {
    using Error::Error;
};

}  // namespace profitscape
