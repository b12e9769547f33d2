#ifndef NETCF_ERRORS_HPP
#define NETCF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace netcf {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened/read/written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed input row; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

/// Input violated a declared constraint (e.g. rating outside the rating domain).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Bad argument combination (unsupported axis, unknown measure name, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Experiment configuration file problem.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Iterative solver did not converge; carries the last estimate and residual.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double last_estimate, double residual)
        : Error(msg), last_estimate_(last_estimate), residual_(residual) {}
    double last_estimate() const { return last_estimate_; }
    double residual() const { return residual_; }

private:
    double last_estimate_;
    double residual_;
};

} // namespace netcf

#endif
