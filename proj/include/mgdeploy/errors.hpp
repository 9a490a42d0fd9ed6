#pragma once

#include <stdexcept>
#include <string>

namespace mgdeploy {

// Bad input data or parameters. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The optimizer failed to produce an acceptable solution. Exit code 2.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unreadable input or unwritable output. Exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mgdeploy
