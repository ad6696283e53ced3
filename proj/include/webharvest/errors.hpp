#pragma once

#include <stdexcept>
#include <string>

namespace webharvest {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad configuration or malformed input files (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A stage or operation was invoked without its inputs in place (CLI exit code 3).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Too many per-item failures inside an otherwise running stage (CLI exit code 4).
class PartialFailure : public Error {
public:
    using Error::Error;
};

} // namespace webharvest
