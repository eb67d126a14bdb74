// errors.hpp — exception types shared by all sbparity modules

#pragma once

#include <stdexcept>
#include <string>

namespace sbparity {

// Invalid physical or numerical parameter (alpha < 0, Lambda <= 1, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A requested basis, table or matrix exceeds a configured size guard.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bare-Fock expansion did not capture the state norm to the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double deficit)
        : std::runtime_error(what), deficit_(deficit) {}
    double deficit() const noexcept { return deficit_; }

private:
    double deficit_;
};

// Eigensolver ran out of iterations or missed its residual target.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double best_residual)
        : std::runtime_error(what), best_residual_(best_residual) {}
    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

// Root bracketing for the critical dissipation failed.
class SearchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// <phi+|phi-> too small for the gap identity to be evaluated.
class OverlapGuardError : public std::runtime_error {
public:
    OverlapGuardError(const std::string& what, double overlap)
        : std::runtime_error(what), overlap_(overlap) {}
    double overlap() const noexcept { return overlap_; }

private:
    double overlap_;
};

} // namespace sbparity
