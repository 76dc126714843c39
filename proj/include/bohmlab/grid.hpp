#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bohmlab/characters.hpp"
#include "bohmlab/packets.hpp"
#include "bohmlab/parallel.hpp"
#include "bohmlab/wavefunction.hpp"

namespace bohmlab {

/// Uniform rectangular grid, dimension 1 or 2, Dirichlet boundaries.
struct GridSpec {
    int dim = 1;
    std::vector<int> points;  // per axis, >= 8
    std::vector<double> lo;
    std::vector<double> hi;

    static GridSpec line(int n, double lo, double hi);
    static GridSpec square(int n, double lo, double hi);

    void validate() const;
    double spacing(int axis) const {
        return (hi[static_cast<std::size_t>(axis)] - lo[static_cast<std::size_t>(axis)]) /
               (points[static_cast<std::size_t>(axis)] - 1);
    }
    double coord(int axis, int i) const {
        return lo[static_cast<std::size_t>(axis)] + spacing(axis) * i;
    }
    std::size_t total_points() const;
    bool is_square() const;
};

/// Discretized wave function with its tabulated potential. Norm is
/// conserved by each propagation step (unitary Cayley factors), checked
/// to 1e-12 relative in the tests.
struct GridState {
    GridSpec spec;
    std::vector<std::complex<double>> amplitudes;  // row-major, [ix*ny + iy] for dim 2
    std::vector<double> potential;                 // same layout
    std::string potential_name = "zero";
    double time = 0.0;
    double hbar = 1.0;
    double mass = 1.0;
    ExecMode exec = ExecMode::openmp;

    std::complex<double>& at(int ix, int iy) {
        return amplitudes[static_cast<std::size_t>(ix) * spec.points[1] + static_cast<std::size_t>(iy)];
    }
    std::complex<double> at(int ix, int iy) const {
        return amplitudes[static_cast<std::size_t>(ix) * spec.points[1] + static_cast<std::size_t>(iy)];
    }
};

/// sqrt(sum |psi|^2 * cell volume).
double discrete_norm(const GridState& state);

/// Sampled single 1D packet, discretely normalized.
GridState init_packet_1d(const GaussianPacket& packet, const GridSpec& spec, double hbar = 1.0,
                         double mass = 1.0);

/// Two distinct 1D packets on a square 2D grid, combined with the given
/// exchange statistics and discretely normalized. Throws DomainTooSmall
/// when the domain cannot hold 6 widths of either packet's support, and
/// DegenerateStateError for identical packets under fermion statistics.
GridState init_pair_state(const GaussianPacket& p1, const GaussianPacket& p2, const GridSpec& spec,
                          Statistics stats, double hbar = 1.0, double mass = 1.0);

inline GridState init_antisymmetric(const GaussianPacket& p1, const GaussianPacket& p2,
                                    const GridSpec& spec, double hbar = 1.0, double mass = 1.0) {
    return init_pair_state(p1, p2, spec, Statistics::fermion, hbar, mass);
}

/// Tabulate a potential. 1D grids take v(x); 2D grids are filled
/// separably as v(x1) + v(x2), which keeps the field exchange-symmetric.
void set_potential(GridState& state, const std::function<double(double)>& v, const std::string& name);
/// General 2D field V(x1, x2).
void set_potential_2d(GridState& state, const std::function<double(double, double)>& v,
                      const std::string& name);

/// One propagation step of size dt.
///   dim 1: Crank-Nicolson, (1 + i dt H / 2 hbar) psi' = (1 - i dt H / 2 hbar) psi.
///   dim 2: Strang split - half potential phase, Cayley kinetic sweep
///          along each axis, half potential phase. The kinetic factors
///          commute exactly (they act on different tensor slots), so
///          coordinate swap is an exact symmetry of the step whenever
///          the potential table is swap-symmetric.
/// Both forms are unitary in the discrete norm.
GridState step(const GridState& state, double dt);

/// In-place stepping for long runs.
void advance(GridState& state, double dt, long steps);

/// max over the grid of |psi(x2,x1) - gamma_swap psi(x1,x2)| / peak.
/// Requires a 2D swap-symmetric (square) grid; throws GridAsymmetryError
/// otherwise.
double symmetry_sector_error(const GridState& state, const TopologicalFactor& gamma);

/// CSV snapshot: '#'-prefixed metadata header (dim, points, bounds,
/// spacing, time, potential), then one row per grid point with
/// coordinates and re/im amplitude.
void export_snapshot_csv(const GridState& state, const std::string& path);

/// Recorded evolution for interpolated access in time.
struct GridEvolution {
    GridSpec spec;
    std::vector<double> times;
    std::vector<std::vector<std::complex<double>>> snapshots;
    std::vector<double> peaks;  // max |psi| per snapshot
    double hbar = 1.0;
    double mass = 1.0;
};

/// Advances `steps` steps of size dt, recording every `stride`-th state
/// (plus the initial and final ones).
GridEvolution record_evolution(GridState state, double dt, long steps, long stride);

/// Grid-backed wave function for the guidance dynamics: bicubic
/// (Catmull-Rom) interpolation in space, analytic derivative of the
/// interpolant, linear blend in time. A 2D grid is read as two 1D
/// particles; a 1D grid as a single particle.
class GridWaveFunction final : public WaveFunction {
public:
    explicit GridWaveFunction(GridEvolution evolution);

    int particles() const override { return spec_dim() == 2 ? 2 : 1; }
    int dim() const override { return 1; }

    std::complex<double> value(std::span<const double> q, double t) const override;
    void gradient(std::span<const double> q, double t,
                  std::span<std::complex<double>> out) const override;
    double amplitude_scale(double t) const override;
    void support_box(double t, std::vector<double>& lo, std::vector<double>& hi) const override;

private:
    int spec_dim() const { return evo_.spec.dim; }
    std::pair<std::size_t, double> time_bracket(double t) const;

    GridEvolution evo_;
};

}  // namespace bohmlab
