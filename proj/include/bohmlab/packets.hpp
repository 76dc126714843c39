#pragma once

#include <complex>
#include <span>
#include <vector>

namespace bohmlab {

enum class Evolution { free, harmonic };

/// Single-particle Gaussian packet in d dimensions (hbar = 1 units by
/// default, overridable through the evaluation calls). At t = 0:
///
///   phi(x) = (2 pi w^2)^(-d/4) exp( -|x - c|^2 / (4 w^2) + i k.(x - c) )
///
/// so w is the position-space standard deviation of |phi|^2 per axis.
/// Closed-form evolution is available for zero potential and for the
/// isotropic harmonic potential V(x) = (1/2) m omega^2 |x|^2 centered at
/// the origin.
struct GaussianPacket {
    std::vector<double> center;
    std::vector<double> momentum;
    double width = 1.0;
    Evolution evolution = Evolution::free;
    double omega = 0.0;  // used when evolution == harmonic

    int dim() const { return static_cast<int>(center.size()); }
    void validate() const;
    bool same_parameters(const GaussianPacket& other) const;
};

/// Time-evolved amplitude data of a packet: the complex quadratic-form
/// coefficient, drifted center/momentum and accumulated phase, enough to
/// evaluate phi and grad phi pointwise:
///
///   phi(x,t) = exp( log_prefactor - a |x - c_t|^2 + i p_t.(x - c_t)/hbar )
struct PacketState {
    std::complex<double> a;              // quadratic coefficient, Re a > 0
    std::vector<double> center_t;
    std::vector<double> momentum_t;
    std::complex<double> log_prefactor;  // includes normalization and action phase
    double width_t = 0.0;                // |phi|^2 std per axis at time t
    double hbar = 1.0;

    std::complex<double> value(std::span<const double> x) const;
    /// d/dx_a phi(x,t) for all axes.
    void gradient(std::span<const double> x, std::span<std::complex<double>> out) const;
    /// grad phi / phi (analytic, no cancellation at small |phi|).
    void log_gradient(std::span<const double> x, std::span<std::complex<double>> out) const;
};

/// Closed-form evolution parameters of the packet at time t.
PacketState packet_at(const GaussianPacket& p, double t, double hbar = 1.0, double mass = 1.0);

/// <phi_j | phi_k> at t = 0 from the analytic Gaussian integral. Both
/// packets must share the dimension. Preserved in time when both evolve
/// under the same Hamiltonian.
std::complex<double> packet_overlap(const GaussianPacket& pj, const GaussianPacket& pk,
                                    double hbar = 1.0);

}  // namespace bohmlab
