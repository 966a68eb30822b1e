#pragma once

#include <stdexcept>
#include <string>

namespace tricomi {

// Argument outside the domain of a formula (t < 0, ell = -2, r beyond the
// singular circle, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Evaluation hit a genuine singularity: a gamma pole, (phi(t)+phi(b))^2 = r^2,
// phi'' at t = 0 for ell < 2.
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

// A requested case exists mathematically but is not implemented.
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// An iterative method or quadrature did not reach its tolerance. The best
// estimate obtained so far is carried along.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double est_error)
        : std::runtime_error(what), best_estimate_(best_estimate), est_error_(est_error) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double est_error() const noexcept { return est_error_; }

private:
    double best_estimate_;
    double est_error_;
};

} // namespace tricomi
