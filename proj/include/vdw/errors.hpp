#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vdw {

// State outside the entropy definition domain (tau > b, a/tau + e > 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// One of the two phasic states built from a fraction vector left the domain.
class PhasicOutOfDomain : public DomainError {
public:
    PhasicOutOfDomain(int phase, const std::string& what)
        : DomainError(what), phase_(phase) {}
    int phase() const noexcept { return phase_; }

private:
    int phase_;
};

class NoConvergence : public std::runtime_error {
public:
    NoConvergence(const std::string& what, std::vector<double> residuals = {})
        : std::runtime_error(what), residuals_(std::move(residuals)) {}
    // Residual norm per iteration, oldest first.
    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

class InvalidTemperature : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotUnderDome : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoDistinctRoot : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StepSizeUnderflow : public std::runtime_error {
public:
    StepSizeUnderflow(const std::string& what, double t)
        : std::runtime_error(what), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

class NonPositiveDensity : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class FractionOutOfRange : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Mixture sound speed squared is not positive; cell is -1 when unknown.
class NonHyperbolicState : public std::runtime_error {
public:
    NonHyperbolicState(const std::string& what, std::ptrdiff_t cell = -1)
        : std::runtime_error(what), cell_(cell) {}
    std::ptrdiff_t cell() const noexcept { return cell_; }

private:
    std::ptrdiff_t cell_;
};

// Failure inside a flow run, with the time and cell where it happened.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double t, std::ptrdiff_t cell)
        : std::runtime_error(what), t_(t), cell_(cell) {}
    double time() const noexcept { return t_; }
    std::ptrdiff_t cell() const noexcept { return cell_; }

private:
    double t_;
    std::ptrdiff_t cell_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vdw
