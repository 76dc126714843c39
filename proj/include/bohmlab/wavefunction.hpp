#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "bohmlab/characters.hpp"
#include "bohmlab/configuration.hpp"
#include "bohmlab/packets.hpp"
#include "bohmlab/parallel.hpp"
#include "bohmlab/rng.hpp"

namespace bohmlab {

/// Physical constants of the model. Identical particles share one mass.
struct ModelParams {
    double hbar = 1.0;
    std::vector<double> masses;  // one per particle, all equal
    int dim = 1;
    int particles = 1;

    static ModelParams natural(int particles, int dim, double mass = 1.0, double hbar = 1.0);
    void validate() const;
    double mass_of(int i) const { return masses[static_cast<std::size_t>(i)]; }
};

enum class Statistics { none, boson, fermion };

/// Complex-valued function on the covering space R^(dN), evaluatable with
/// its analytic gradient for all times in the evolution window. Values
/// are immutable after construction; evaluation is pure and reentrant.
class WaveFunction {
public:
    virtual ~WaveFunction() = default;

    virtual int particles() const = 0;
    virtual int dim() const = 0;

    virtual std::complex<double> value(std::span<const double> q, double t) const = 0;
    /// Analytic gradient, dN components, particle-block layout.
    virtual void gradient(std::span<const double> q, double t,
                          std::span<std::complex<double>> out) const = 0;

    /// Characteristic amplitude scale (peak-ish |psi|), used for node
    /// floors and relative residuals.
    virtual double amplitude_scale(double t) const = 0;

    /// Suggested axis-aligned bounding box [lo, hi] per flat coordinate
    /// containing essentially all of |psi_t|^2 (for quadrature/sampling).
    virtual void support_box(double t, std::vector<double>& lo, std::vector<double>& hi) const = 0;
};

inline std::complex<double> value_at(const WaveFunction& psi, const OrderedConfiguration& q, double t) {
    return psi.value(std::span<const double>(q.coords), t);
}
std::vector<std::complex<double>> gradient_at(const WaveFunction& psi, const OrderedConfiguration& q, double t);

/// Product of N single-particle Gaussian packets, optionally symmetrized
/// (permanent) or antisymmetrized (determinant) over particle labels.
/// All packets must share one evolution law so the construction-time
/// normalization stays exact for all t.
class PacketWaveFunction final : public WaveFunction {
public:
    PacketWaveFunction(std::vector<GaussianPacket> packets, Statistics stats, ModelParams params);

    int particles() const override { return static_cast<int>(packets_.size()); }
    int dim() const override { return params_.dim; }
    Statistics statistics() const { return stats_; }
    const ModelParams& params() const { return params_; }
    const std::vector<GaussianPacket>& packets() const { return packets_; }
    double normalization() const { return norm_; }

    std::complex<double> value(std::span<const double> q, double t) const override;
    void gradient(std::span<const double> q, double t,
                  std::span<std::complex<double>> out) const override;

    double amplitude_scale(double t) const override;
    void support_box(double t, std::vector<double>& lo, std::vector<double>& hi) const override;

private:
    std::vector<GaussianPacket> packets_;
    Statistics stats_;
    ModelParams params_;
    double norm_ = 1.0;  // psi = (combination) / norm_
};

/// N=2; M[i][j] = packet_j at particle position i, determinant.
/// Throws DegenerateStateError when the state vanishes identically.
std::shared_ptr<PacketWaveFunction> antisymmetrize(std::vector<GaussianPacket> packets, ModelParams params);
/// Permanent of the same matrix.
std::shared_ptr<PacketWaveFunction> symmetrize(std::vector<GaussianPacket> packets, ModelParams params);
/// Plain (unsymmetrized) product state.
std::shared_ptr<PacketWaveFunction> product_state(std::vector<GaussianPacket> packets, ModelParams params);

/// conj(psi) run backward from pivot time: psi'(q, t) = conj(psi(q, pivot - t)).
/// The guidance flow of psi' retraces the flow of psi.
class TimeReversedWaveFunction final : public WaveFunction {
public:
    TimeReversedWaveFunction(std::shared_ptr<const WaveFunction> base, double pivot)
        : base_(std::move(base)), pivot_(pivot) {}

    int particles() const override { return base_->particles(); }
    int dim() const override { return base_->dim(); }
    std::complex<double> value(std::span<const double> q, double t) const override {
        return std::conj(base_->value(q, pivot_ - t));
    }
    void gradient(std::span<const double> q, double t,
                  std::span<std::complex<double>> out) const override;
    double amplitude_scale(double t) const override { return base_->amplitude_scale(pivot_ - t); }
    void support_box(double t, std::vector<double>& lo, std::vector<double>& hi) const override {
        base_->support_box(pivot_ - t, lo, hi);
    }

private:
    std::shared_ptr<const WaveFunction> base_;
    double pivot_;
};

/// Max over `samples` random (q, sigma, t) of
/// |psi(sigma q) - gamma_sigma psi(q)| / max(|psi(q)|, floor).
/// Deterministic given the seed (and independent of ExecMode: the sample
/// tuples are drawn serially, residuals evaluated in parallel). Samples
/// come from a Gaussian cloud over the state's support box, t uniform in
/// [t_lo, t_hi].
struct PeriodicityCheck {
    double max_residual = 0.0;
    int samples = 0;
};
PeriodicityCheck check_periodicity(const WaveFunction& psi, const TopologicalFactor& gamma,
                                   int samples, std::uint64_t seed, double t_lo = 0.0,
                                   double t_hi = 1.0, double floor = 1e-300,
                                   ExecMode exec = ExecMode::openmp);

/// GRWm-style mass density: m(x,t) = sum_i m_i * (marginal of |psi_t|^2
/// for particle i at x), by adaptive quadrature over the remaining
/// coordinates. Supported for total quadrature dimension d*(N-1) <= 2.
/// Throws QuadratureError (with the estimate) if refinement stalls.
double mass_density(const WaveFunction& psi, std::span<const double> x, double t,
                    const ModelParams& params, double rel_tol = 1e-6);

}  // namespace bohmlab
