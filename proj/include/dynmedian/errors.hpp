#pragma once

#include <stdexcept>

namespace dynmedian {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent input data (bad file contents, shape mismatches,
/// instances that fail validation).
struct DataError : Error {
    using Error::Error;
};

/// An argument outside the domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// A solver declined the instance because an enumeration cap was exceeded.
struct CapExceeded : Error {
    using Error::Error;
};

/// Problems reading or writing a text serialization format.
struct FormatError : Error {
    using Error::Error;
};

}  // namespace dynmedian
