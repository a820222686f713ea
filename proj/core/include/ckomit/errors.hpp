#pragma once

#include <complex>
#include <memory>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ckomit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input problems: malformed files, unknown keys, out-of-range values.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class ValidationError : public ConfigError {
public:
    ValidationError(std::string field, const std::string& what)
        : ConfigError(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// Everything that goes wrong while computing.
class NumericalError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public NumericalError {
public:
    NonConvergence(const std::string& what, int iterations, double residual)
        : NumericalError(what), iterations_(iterations), residual_(residual) {}
    int iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    int iterations_;
    double residual_;
};

struct SteadyState;

class MultistabilityDetected : public NumericalError {
public:
    MultistabilityDetected(const std::string& what, std::vector<SteadyState> solutions);
    const std::vector<SteadyState>& solutions() const;

private:
    std::shared_ptr<const std::vector<SteadyState>> solutions_;
};

class UnstableDrift : public NumericalError {
public:
    UnstableDrift(const std::string& what, double max_real_part)
        : NumericalError(what), max_real_part_(max_real_part) {}
    double max_real_part() const { return max_real_part_; }

private:
    double max_real_part_;
};

class IllConditioned : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PoleEncountered : public NumericalError {
public:
    PoleEncountered(const std::string& what, double delta, std::ptrdiff_t index = -1)
        : NumericalError(what + " at delta = " + std::to_string(delta)), delta_(delta), index_(index) {}
    double delta() const { return delta_; }
    std::ptrdiff_t index() const { return index_; }

private:
    double delta_;
    std::ptrdiff_t index_;
};

class NoWindowDetected : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoShiftDefined : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class EigenSolverFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ExportError : public Error {
public:
    ExportError(const std::string& what, std::string path)
        : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

} // namespace ckomit
