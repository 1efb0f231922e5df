#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsor {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A diagonal block of the splitting (or a matrix fed to the direct solver)
// is numerically singular.
class SingularBlockError : public Error {
public:
    SingularBlockError(std::size_t block_index, const std::string& what)
        : Error(what), block_index(block_index) {}
    std::size_t block_index;
};

// An iterative estimate failed to converge; carries the best value seen.
class NumericalFailureError : public Error {
public:
    NumericalFailureError(double best_estimate, const std::string& what)
        : Error(what), best_estimate(best_estimate) {}
    double best_estimate;
};

// Problem exceeds a hard size guard (brute force scan, explicit iteration matrix).
class CapacityError : public Error {
public:
    using Error::Error;
};

// A backend failed while solving one block of a sweep.
class SweepError : public Error {
public:
    SweepError(std::size_t block_index, const std::string& what)
        : Error(what), block_index(block_index) {}
    std::size_t block_index;
};

// The iteration error grew past the divergence guard.
class DivergenceError : public Error {
public:
    using Error::Error;
};

// Configuration file rejected; names the offending field.
class ConfigError : public Error {
public:
    ConfigError(std::string field_name, const std::string& what)
        : Error(what), field(std::move(field_name)) {}
    std::string field;
};

// Malformed persisted data (system files, QUBO files, traces).
class FormatError : public Error {
public:
    using Error::Error;
};

// Remote sampler client failures, one type per protocol contract violation.
class RemoteError : public Error {
public:
    using Error::Error;
};

class ConnectionError : public RemoteError {
public:
    using RemoteError::RemoteError;
};

class TimeoutError : public RemoteError {
public:
    using RemoteError::RemoteError;
};

class MalformedResponseError : public RemoteError {
public:
    using RemoteError::RemoteError;
};

class EnergyInconsistencyError : public RemoteError {
public:
    using RemoteError::RemoteError;
};

class ProtocolError : public RemoteError {
public:
    using RemoteError::RemoteError;
};

} // namespace qsor
