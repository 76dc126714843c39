#pragma once

#include <cstdint>
#include <vector>

#include "bohmlab/configuration.hpp"
#include "bohmlab/wavefunction.hpp"

namespace bohmlab {

/// Relative node floor: a step is rejected (and eventually the
/// integration aborted) when |psi| drops below this fraction of the
/// running peak |psi| seen along the trajectory.
constexpr double kNodeFloorRel = 1e-12;

/// An integrated path in the quotient space, together with the lift that
/// was actually integrated and the integrator diagnostics.
struct Trajectory {
    std::vector<double> times;                      // strictly increasing
    std::vector<UnorderedConfiguration> states;     // projections of the lift
    std::vector<OrderedConfiguration> lift_states;  // the integrated lift
    // diagnostics
    long steps_accepted = 0;
    long steps_rejected = 0;
    double min_abs_psi = 0.0;
    double min_pair_dist = 0.0;

    std::size_t size() const { return times.size(); }
};

/// Bohmian velocity on the covering space:
///   v_{i,a} = (hbar / m_i) Im( (d_{i,a} psi) / psi ).
/// Throws NodeProximityError when |psi| <= node_floor.
std::vector<double> velocity_field(const WaveFunction& psi, const OrderedConfiguration& q, double t,
                                   const ModelParams& params, double node_floor = 0.0);

struct IntegrateOptions {
    double tol = 1e-8;   // absolute and relative error control
    int samples = 129;   // dense-output sample count (>= 2, includes endpoints)
    long max_steps = 200000;
};

/// Adaptive RK4(5) (Dormand-Prince) integration of dq/dt = v(q, t) from
/// the canonical (lexicographically sorted) lift of q0. Dense output by
/// cubic Hermite interpolation on the accepted steps. Node proximity
/// triggers step halving and, if persistent, NodeProximityError;
/// step-size underflow raises IntegrationStalled.
Trajectory integrate_trajectory(const WaveFunction& psi, const UnorderedConfiguration& q0, double t0,
                                double t1, const ModelParams& params, const IntegrateOptions& opt = {});

/// Endpoint-only integration (same stepper, no dense output).
UnorderedConfiguration propagate(const WaveFunction& psi, const UnorderedConfiguration& q0, double t0,
                                 double t1, const ModelParams& params, double tol = 1e-8);

struct LiftIndependenceReport {
    double max_quotient_deviation = 0.0;
    int lifts_integrated = 0;
    TopologicalFactor character;  // the character psi was found to obey
};

/// Integrates from every lift of q0 (N <= 4), projects, and returns the
/// max quotient distance over time samples and lift pairs. Verifies
/// first that psi obeys the periodicity condition for some character
/// (residual < periodicity_tol), else throws PeriodicityViolation.
LiftIndependenceReport lift_independence_check(const WaveFunction& psi, const UnorderedConfiguration& q0,
                                               double t0, double t1, const ModelParams& params,
                                               double tol = 1e-8, int samples = 65,
                                               double periodicity_tol = 1e-8,
                                               std::uint64_t seed = 20200920);

/// Minimum over time samples and particle pairs of the Euclidean
/// separation.
double min_pair_distance(const Trajectory& traj);

/// d = 1 only: true iff the sorted order of the lift coordinates is the
/// same at every sample (no pair swaps sides). Crossing would require a
/// coincidence, where the velocity field is undefined.
bool crossing_check_1d(const Trajectory& traj);

}  // namespace bohmlab
