#pragma once

#include <stdexcept>
#include <string>

namespace twolevel {

// Error taxonomy. Each class maps 1:1 onto a C-API status code and (via the
// CLI) onto a process exit code, so throw the most specific one that applies.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid physical argument (negative field, non-finite detuning, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Bad preset / configuration content (unknown atom, malformed preset file).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Guard rails tripped (e.g. grid sample count above the hard cap).
class ResourceError : public Error {
public:
    using Error::Error;
};

// Numerical integration could not reach the requested accuracy.
class IntegrationError : public Error {
public:
    using Error::Error;
};

// API misuse (mismatched trace grids, unknown suite name, bad format tag).
class UsageError : public Error {
public:
    using Error::Error;
};

// File I/O or (de)serialization failure, including checksum mismatch.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace twolevel
