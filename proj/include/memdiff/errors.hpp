#pragma once

#include <stdexcept>
#include <string>

namespace memdiff {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed kernel/nonlinearity/config specification.
struct InvalidSpecError : Error { using Error::Error; };
// Argument outside the mathematical domain of an operation.
struct DomainArgError : Error { using Error::Error; };
// Container size mismatch between coupled objects.
struct ShapeError : Error { using Error::Error; };
// Out-of-range mode or cutoff index.
struct IndexError : Error { using Error::Error; };
// Mismatched sampling between runs that must be compared sample-wise.
struct AlignmentError : Error { using Error::Error; };
// Operation outside the implemented subset (e.g. multi-term oracle).
struct UnsupportedError : Error { using Error::Error; };
// Config file diagnostics; message names the offending key.
struct ConfigError : Error { using Error::Error; };

}  // namespace memdiff
