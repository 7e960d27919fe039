#pragma once

#include <stdexcept>
#include <string>

namespace stomo {

// Base class for all errors thrown by this library.
class StomoError : public std::runtime_error {
public:
    explicit StomoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument to a library function (shape mismatch, bad subset index, ...).
class ArgumentError : public StomoError {
public:
    explicit ArgumentError(const std::string& msg) : StomoError(msg) {}
};

// Invalid or malformed experiment configuration (unknown key, bad value, ...).
class ConfigError : public StomoError {
public:
    explicit ConfigError(const std::string& msg) : StomoError(msg) {}
};

// File I/O failure or malformed on-disk artifact.
class IoError : public StomoError {
public:
    explicit IoError(const std::string& msg) : StomoError(msg) {}
};

// Refusal to materialize a dense operator beyond the size guard.
class SizeGuardError : public ArgumentError {
public:
    explicit SizeGuardError(const std::string& msg) : ArgumentError(msg) {}
};

// A solver aborted (line-search cap hit before any usable iterate).
class SolverAbortError : public StomoError {
public:
    explicit SolverAbortError(const std::string& msg) : StomoError(msg) {}
};

} // namespace stomo
