#pragma once

#include <stdexcept>
#include <string>

namespace oscnet {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Argument outside its mathematical domain (coordinates off [0,1], bad index, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// A matrix / system could not be constructed (e.g. Bernoulli probability > 1).
class ConstructionError : public Error {
public:
    explicit ConstructionError(const std::string& msg) : Error(msg) {}
};

/// Time integration failed; carries the time at which the state became non-finite.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& msg, double t) : Error(msg), time(t) {}
    double time;
};

/// Fixed-point iteration stopped contracting.
class ContractionError : public Error {
public:
    ContractionError(const std::string& msg, int window) : Error(msg), window_index(window) {}
    int window_index;
};

/// A design / solve precondition failed; carries a witness location when known.
class InfeasibleError : public Error {
public:
    explicit InfeasibleError(const std::string& msg, double witness_x = 0.0)
        : Error(msg), witness(witness_x) {}
    double witness;
};

/// Experiment configuration is malformed; message carries the field path.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace oscnet
