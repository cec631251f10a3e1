#pragma once

#include <stdexcept>
#include <string>

namespace sscfem {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller supplied something outside an operation's domain.
class InputError : public Error {
public:
    using Error::Error;
};

// The control problem itself violates a model invariant (e.g. sigma <= 0 on the grid).
class ModelError : public Error {
public:
    using Error::Error;
};

// An object is in the wrong state for the request (e.g. extracting a non-optimal LP).
class StateError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace sscfem
