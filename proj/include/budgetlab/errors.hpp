#pragma once

#include <stdexcept>
#include <string>

namespace budgetlab {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Precondition violations: bad arguments, invalid records, malformed config.
class DomainError : public Error {
  public:
    using Error::Error;
};

// A budget split cannot satisfy the per-item minimum (m * min_budget > total).
class InfeasibleError : public DomainError {
  public:
    using DomainError::DomainError;
};

// An iterative solver stopped without reaching tolerance.
class SolverError : public Error {
  public:
    SolverError(const std::string& message, double residual)
        : Error(message), residual(residual) {}

    double residual;
};

// Text or JSON that could not be interpreted; keeps the raw payload for logs.
class ParseError : public Error {
  public:
    ParseError(const std::string& message, std::string raw_text)
        : Error(message), raw(std::move(raw_text)) {}

    std::string raw;
};

// Transient failure of a single attempt (HTTP 429/5xx, timeout, connect error).
// Internal signal: the gateway retry loop consumes these.
class RetryableError : public Error {
  public:
    RetryableError(const std::string& message, int status)
        : Error(message), status(status) {}

    int status;  // HTTP status, or 0 for connection-level failures
};

// All retry attempts exhausted, or a non-recoverable transport failure.
class TransportError : public Error {
  public:
    TransportError(const std::string& message, int status, int attempts)
        : Error(message), status(status), attempts(attempts) {}

    int status;
    int attempts;
};

// The server rejected the request for a non-retryable reason (4xx other than 429).
class RequestError : public Error {
  public:
    RequestError(const std::string& message, int status)
        : Error(message), status(status) {}

    int status;
};

// The response arrived but its body does not match the expected wire shape.
class ProtocolError : public Error {
  public:
    using Error::Error;
};

// A scripted backend received a call after its script ran out.
class ScriptExhaustedError : public Error {
  public:
    using Error::Error;
};

}  // namespace budgetlab
