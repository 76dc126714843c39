#pragma once

#include <stdexcept>
#include <string>

namespace bohmlab {

/// Configuration (two or more points closer than the coincidence
/// tolerance) lies off the quotient manifold.
struct CoincidenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Candidate topological factor violates the group law.
struct NotMultiplicativeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Symmetrized/antisymmetrized state has (numerically) zero norm.
struct DegenerateStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// |psi| fell below the node floor; the velocity field is undefined there.
struct NodeProximityError : std::runtime_error {
    double abs_psi;
    double time;
    NodeProximityError(const std::string& what, double abs_psi_, double time_)
        : std::runtime_error(what), abs_psi(abs_psi_), time(time_) {}
};

/// Adaptive step size underflowed without satisfying the error control.
struct IntegrationStalled : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Wave function does not satisfy the periodicity condition for any
/// character, so projected dynamics are not defined.
struct PeriodicityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Too many ensemble members failed to transport.
struct TransportDegraded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grid is not symmetric under coordinate swap.
struct GridAsymmetryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grid domain cannot hold the requested state's support.
struct DomainTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Linear solve hit a (near-)singular pivot.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quadrature failed to reach the requested accuracy.
struct QuadratureError : std::runtime_error {
    double estimate;
    double error_estimate;
    QuadratureError(const std::string& what, double estimate_, double error_estimate_)
        : std::runtime_error(what), estimate(estimate_), error_estimate(error_estimate_) {}
};

/// Invalid experiment configuration (schema violation).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bohmlab
