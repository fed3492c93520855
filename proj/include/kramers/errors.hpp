#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kramers {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// raw configuration is contradictory or incomplete
class ConfigError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// fields living on different grids
class ShapeError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class DivergenceError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class ContractError : public Error {
public:
    using Error::Error;
};

// Collects non-fatal events (boundary leakage, accuracy warnings).
struct Diagnostics {
    std::vector<std::string> warnings;

    void warn(std::string msg) { warnings.push_back(std::move(msg)); }
    bool empty() const { return warnings.empty(); }
};

inline void warn(Diagnostics* diag, std::string msg)
{
    if (diag) diag->warn(std::move(msg));
}

} // namespace kramers
