#include "bohmlab/wavefunction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bohmlab/errors.hpp"
#include "bohmlab/quadrature.hpp"

namespace bohmlab {

namespace {

using cplx = std::complex<double>;

/// Determinant by LU with partial pivoting. Row-permuted inputs give a
/// bitwise-equal magnitude and an exactly tracked sign, which keeps the
/// fermionic periodicity residual at pure roundoff.
cplx determinant(std::vector<cplx> m, int n) {
    cplx det(1.0);
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::abs(m[static_cast<std::size_t>(k) * n + k]);
        for (int i = k + 1; i < n; ++i) {
            const double cand = std::abs(m[static_cast<std::size_t>(i) * n + k]);
            if (cand > best) {
                best = cand;
                pivot = i;
            }
        }
        if (best == 0.0) return cplx(0.0);
        if (pivot != k) {
            for (int j = 0; j < n; ++j)
                std::swap(m[static_cast<std::size_t>(k) * n + j], m[static_cast<std::size_t>(pivot) * n + j]);
            det = -det;
        }
        const cplx pk = m[static_cast<std::size_t>(k) * n + k];
        det *= pk;
        for (int i = k + 1; i < n; ++i) {
            const cplx factor = m[static_cast<std::size_t>(i) * n + k] / pk;
            for (int j = k + 1; j < n; ++j)
                m[static_cast<std::size_t>(i) * n + j] -= factor * m[static_cast<std::size_t>(k) * n + j];
        }
    }
    return det;
}

/// Row order that sorts particle blocks lexicographically. The
/// permanent is row-order invariant, so evaluating it on canonically
/// sorted rows makes exchange invariance exact in floating point
/// (Ryser's products would otherwise pick up reordering roundoff,
/// amplified near nodes).
std::vector<int> canonical_row_order(std::span<const double> q, int n, int d) {
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto pa = q.subspan(static_cast<std::size_t>(a) * d, static_cast<std::size_t>(d));
        const auto pb = q.subspan(static_cast<std::size_t>(b) * d, static_cast<std::size_t>(d));
        return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
    });
    return order;
}

/// Permanent by Ryser's inclusion-exclusion formula, O(2^n n).
cplx permanent(const std::vector<cplx>& m, int n) {
    cplx total(0.0);
    const unsigned full = (1u << n);
    for (unsigned subset = 1; subset < full; ++subset) {
        cplx prod(1.0);
        for (int i = 0; i < n; ++i) {
            cplx row_sum(0.0);
            for (int j = 0; j < n; ++j)
                if (subset & (1u << j)) row_sum += m[static_cast<std::size_t>(i) * n + j];
            prod *= row_sum;
        }
        const int bits = std::popcount(subset);
        total += ((n - bits) % 2 ? -1.0 : 1.0) * prod;
    }
    return total;
}

}  // namespace

ModelParams ModelParams::natural(int particles, int dim, double mass, double hbar) {
    ModelParams p;
    p.hbar = hbar;
    p.dim = dim;
    p.particles = particles;
    p.masses.assign(static_cast<std::size_t>(particles), mass);
    return p;
}

void ModelParams::validate() const {
    if (particles < 1 || dim < 1) throw std::invalid_argument("ModelParams: need N >= 1, d >= 1");
    if (!(hbar > 0.0)) throw std::invalid_argument("ModelParams: hbar must be positive");
    if (masses.size() != static_cast<std::size_t>(particles))
        throw std::invalid_argument("ModelParams: need one mass per particle");
    for (double m : masses) {
        if (!(m > 0.0)) throw std::invalid_argument("ModelParams: masses must be positive");
        if (m != masses.front())
            throw std::invalid_argument("ModelParams: identical particles share one mass");
    }
}

std::vector<std::complex<double>> gradient_at(const WaveFunction& psi, const OrderedConfiguration& q,
                                              double t) {
    std::vector<cplx> out(q.coords.size());
    psi.gradient(std::span<const double>(q.coords), t, out);
    return out;
}

PacketWaveFunction::PacketWaveFunction(std::vector<GaussianPacket> packets, Statistics stats,
                                       ModelParams params)
    : packets_(std::move(packets)), stats_(stats), params_(std::move(params)) {
    params_.validate();
    if (packets_.empty()) throw std::invalid_argument("PacketWaveFunction: no packets");
    if (static_cast<int>(packets_.size()) != params_.particles)
        throw std::invalid_argument("PacketWaveFunction: packet count != particle count");
    for (const auto& p : packets_) {
        p.validate();
        if (p.dim() != params_.dim) throw std::invalid_argument("PacketWaveFunction: packet dimension mismatch");
        if (p.evolution != packets_.front().evolution ||
            (p.evolution == Evolution::harmonic && p.omega != packets_.front().omega))
            throw std::invalid_argument(
                "PacketWaveFunction: all packets must share one evolution law "
                "(construction-time normalization must stay exact in t)");
    }
    const int n = particles();
    if (stats_ != Statistics::none && n < 2)
        throw std::invalid_argument("PacketWaveFunction: symmetrization needs N >= 2");

    if (stats_ == Statistics::fermion) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (packets_[static_cast<std::size_t>(i)].same_parameters(packets_[static_cast<std::size_t>(j)]))
                    throw DegenerateStateError(
                        "antisymmetrize: identical packets, determinant vanishes identically");
    }

    if (stats_ != Statistics::none) {
        // |combination|^2 integrates to N! * det/perm of the overlap Gram
        // matrix; unitary evolution keeps the overlaps fixed, so this is
        // exact for all t.
        std::vector<cplx> gram(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                gram[static_cast<std::size_t>(j) * n + k] =
                    packet_overlap(packets_[static_cast<std::size_t>(j)],
                                   packets_[static_cast<std::size_t>(k)], params_.hbar);
        const cplx g = stats_ == Statistics::fermion ? determinant(gram, n) : permanent(gram, n);
        const double norm2 = static_cast<double>(factorial(n)) * g.real();
        if (!(norm2 > 1e-14))
            throw DegenerateStateError("PacketWaveFunction: (anti)symmetrized state has zero norm");
        norm_ = std::sqrt(norm2);
    }
}

std::complex<double> PacketWaveFunction::value(std::span<const double> q, double t) const {
    const int n = particles();
    const int d = dim();
    const double mass = params_.mass_of(0);
    std::vector<PacketState> states;
    states.reserve(static_cast<std::size_t>(n));
    for (const auto& p : packets_) states.push_back(packet_at(p, t, params_.hbar, mass));

    if (stats_ == Statistics::none) {
        cplx v(1.0);
        for (int i = 0; i < n; ++i)
            v *= states[static_cast<std::size_t>(i)].value(q.subspan(static_cast<std::size_t>(i) * d, d));
        return v;
    }
    const auto order = stats_ == Statistics::boson ? canonical_row_order(q, n, d)
                                                   : std::vector<int>();
    std::vector<cplx> m(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int particle = order.empty() ? i : order[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j)
            m[static_cast<std::size_t>(i) * n + j] = states[static_cast<std::size_t>(j)].value(
                q.subspan(static_cast<std::size_t>(particle) * d, d));
    }
    const cplx comb = stats_ == Statistics::fermion ? determinant(m, n) : permanent(m, n);
    return comb / norm_;
}

void PacketWaveFunction::gradient(std::span<const double> q, double t,
                                  std::span<std::complex<double>> out) const {
    const int n = particles();
    const int d = dim();
    const double mass = params_.mass_of(0);
    std::vector<PacketState> states;
    states.reserve(static_cast<std::size_t>(n));
    for (const auto& p : packets_) states.push_back(packet_at(p, t, params_.hbar, mass));

    if (stats_ == Statistics::none) {
        cplx v(1.0);
        std::vector<cplx> lg(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
        for (int i = 0; i < n; ++i) {
            const auto xi = q.subspan(static_cast<std::size_t>(i) * d, d);
            v *= states[static_cast<std::size_t>(i)].value(xi);
            states[static_cast<std::size_t>(i)].log_gradient(
                xi, std::span<cplx>(lg).subspan(static_cast<std::size_t>(i) * d, d));
        }
        for (std::size_t k = 0; k < lg.size(); ++k) out[k] = v * lg[k];
        return;
    }

    // base matrix (bosons: canonically sorted rows, see `value`) and the
    // per-axis derivative rows
    const auto order = stats_ == Statistics::boson ? canonical_row_order(q, n, d)
                                                   : std::vector<int>();
    std::vector<int> row_of(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) row_of[static_cast<std::size_t>(order.empty() ? r : order[static_cast<std::size_t>(r)])] = r;

    std::vector<cplx> m(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    std::vector<cplx> dm(static_cast<std::size_t>(d) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    std::vector<cplx> grad_buf(static_cast<std::size_t>(d));
    for (int i = 0; i < n; ++i) {
        const auto xi = q.subspan(static_cast<std::size_t>(i) * d, d);
        const std::size_t row = static_cast<std::size_t>(row_of[static_cast<std::size_t>(i)]);
        for (int j = 0; j < n; ++j) {
            m[row * n + j] = states[static_cast<std::size_t>(j)].value(xi);
            states[static_cast<std::size_t>(j)].gradient(xi, grad_buf);
            for (int a = 0; a < d; ++a)
                dm[(static_cast<std::size_t>(a) * n + row) * n + static_cast<std::size_t>(j)] =
                    grad_buf[static_cast<std::size_t>(a)];
        }
    }
    // d(det)/dx_{i,a} = det with particle i's row replaced by its
    // x_a-derivative; likewise for the permanent (both are multilinear
    // in the rows).
    std::vector<cplx> work(m.size());
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < d; ++a) {
            const std::size_t row = static_cast<std::size_t>(row_of[static_cast<std::size_t>(i)]);
            work = m;
            for (int j = 0; j < n; ++j)
                work[row * n + j] =
                    dm[(static_cast<std::size_t>(a) * n + row) * n + static_cast<std::size_t>(j)];
            const cplx der = stats_ == Statistics::fermion ? determinant(work, n) : permanent(work, n);
            out[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(a)] = der / norm_;
        }
}

double PacketWaveFunction::amplitude_scale(double t) const {
    const double mass = params_.mass_of(0);
    double scale = 1.0;
    for (const auto& p : packets_) {
        const auto st = packet_at(p, t, params_.hbar, mass);
        scale *= std::pow(2.0 * std::numbers::pi * st.width_t * st.width_t, -0.25 * dim());
    }
    if (stats_ != Statistics::none) scale /= norm_;
    return scale;
}

void PacketWaveFunction::support_box(double t, std::vector<double>& lo, std::vector<double>& hi) const {
    const int n = particles();
    const int d = dim();
    const double mass = params_.mass_of(0);
    std::vector<double> axis_lo(static_cast<std::size_t>(d), 0.0), axis_hi(static_cast<std::size_t>(d), 0.0);
    bool first = true;
    for (const auto& p : packets_) {
        const auto st = packet_at(p, t, params_.hbar, mass);
        for (int a = 0; a < d; ++a) {
            const double l = st.center_t[static_cast<std::size_t>(a)] - 8.0 * st.width_t;
            const double h = st.center_t[static_cast<std::size_t>(a)] + 8.0 * st.width_t;
            if (first) {
                axis_lo[static_cast<std::size_t>(a)] = l;
                axis_hi[static_cast<std::size_t>(a)] = h;
            } else {
                axis_lo[static_cast<std::size_t>(a)] = std::min(axis_lo[static_cast<std::size_t>(a)], l);
                axis_hi[static_cast<std::size_t>(a)] = std::max(axis_hi[static_cast<std::size_t>(a)], h);
            }
        }
        first = false;
    }
    // every particle slot can sit in any packet once (anti)symmetrized
    lo.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
    hi.resize(lo.size());
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < d; ++a) {
            lo[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(a)] = axis_lo[static_cast<std::size_t>(a)];
            hi[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(a)] = axis_hi[static_cast<std::size_t>(a)];
        }
}

std::shared_ptr<PacketWaveFunction> antisymmetrize(std::vector<GaussianPacket> packets, ModelParams params) {
    return std::make_shared<PacketWaveFunction>(std::move(packets), Statistics::fermion, std::move(params));
}

std::shared_ptr<PacketWaveFunction> symmetrize(std::vector<GaussianPacket> packets, ModelParams params) {
    return std::make_shared<PacketWaveFunction>(std::move(packets), Statistics::boson, std::move(params));
}

std::shared_ptr<PacketWaveFunction> product_state(std::vector<GaussianPacket> packets, ModelParams params) {
    return std::make_shared<PacketWaveFunction>(std::move(packets), Statistics::none, std::move(params));
}

void TimeReversedWaveFunction::gradient(std::span<const double> q, double t,
                                        std::span<std::complex<double>> out) const {
    base_->gradient(q, pivot_ - t, out);
    for (auto& g : out) g = std::conj(g);
}

PeriodicityCheck check_periodicity(const WaveFunction& psi, const TopologicalFactor& gamma,
                                   int samples, std::uint64_t seed, double t_lo, double t_hi,
                                   double floor, ExecMode exec) {
    if (samples < 1) throw std::invalid_argument("check_periodicity: need samples >= 1");
    if (gamma.size() != psi.particles())
        throw std::invalid_argument("check_periodicity: gamma/psi particle count mismatch");
    const int n = psi.particles();
    const int d = psi.dim();
    const std::size_t dn = static_cast<std::size_t>(n) * static_cast<std::size_t>(d);
    const auto sigmas = enumerate_elements(n);

    // draw the sample tuples serially so the result does not depend on
    // the execution mode
    Rng rng(seed);
    std::vector<double> times(static_cast<std::size_t>(samples));
    std::vector<std::size_t> sigma_idx(static_cast<std::size_t>(samples));
    std::vector<double> points(static_cast<std::size_t>(samples) * dn);
    std::vector<double> lo, hi;
    for (int s = 0; s < samples; ++s) {
        const double t = rng.uniform(t_lo, t_hi);
        times[static_cast<std::size_t>(s)] = t;
        psi.support_box(t, lo, hi);
        for (std::size_t k = 0; k < dn; ++k) {
            const double mid = 0.5 * (lo[k] + hi[k]);
            const double sd = (hi[k] - lo[k]) / 8.0;
            points[static_cast<std::size_t>(s) * dn + k] = rng.normal(mid, sd);
        }
        sigma_idx[static_cast<std::size_t>(s)] = rng.below(sigmas.size());
    }

    std::vector<double> residual(static_cast<std::size_t>(samples));
    parallel_for(static_cast<std::size_t>(samples), exec, [&](std::size_t s) {
        const std::span<const double> q(points.data() + s * dn, dn);
        const double t = times[s];
        const auto& sigma = sigmas[sigma_idx[s]];
        const OrderedConfiguration qc(n, d, std::vector<double>(q.begin(), q.end()));
        const auto qs = apply_to_configuration(sigma, qc);
        const cplx base = psi.value(q, t);
        const cplx lhs = psi.value(std::span<const double>(qs.coords), t);
        const cplx rhs = static_cast<double>(gamma.value(sigma)) * base;
        residual[s] = std::abs(lhs - rhs) / std::max(std::abs(base), floor);
    });
    double worst = 0.0;
    for (double r : residual) worst = std::max(worst, r);
    return {worst, samples};
}

double mass_density(const WaveFunction& psi, std::span<const double> x, double t,
                    const ModelParams& params, double rel_tol) {
    params.validate();
    const int n = psi.particles();
    const int d = psi.dim();
    if (static_cast<int>(x.size()) != d) throw std::invalid_argument("mass_density: x must have d coordinates");
    if (params.particles != n) throw std::invalid_argument("mass_density: params/psi mismatch");

    if (n == 1) {
        std::vector<double> q(x.begin(), x.end());
        const double a = std::abs(psi.value(std::span<const double>(q), t));
        return params.mass_of(0) * a * a;
    }

    const int rest_dims = d * (n - 1);
    if (rest_dims > 2)
        throw std::invalid_argument("mass_density: quadrature supports d*(N-1) <= 2");

    std::vector<double> lo, hi;
    psi.support_box(t, lo, hi);

    double total = 0.0;
    std::vector<double> q(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
    for (int i = 0; i < n; ++i) {
        // particle i pinned at x; integrate |psi|^2 over the rest
        auto density = [&](std::span<const double> rest) {
            int cursor = 0;
            for (int j = 0; j < n; ++j)
                for (int a = 0; a < d; ++a) {
                    const std::size_t idx = static_cast<std::size_t>(j) * d + static_cast<std::size_t>(a);
                    q[idx] = (j == i) ? x[static_cast<std::size_t>(a)] : rest[static_cast<std::size_t>(cursor++)];
                }
            const double v = std::abs(psi.value(std::span<const double>(q), t));
            return v * v;
        };
        // bounds for the free coordinates (skip particle i's block)
        std::vector<double> rlo, rhi;
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < d; ++a)
                if (j != i) {
                    const std::size_t idx = static_cast<std::size_t>(j) * d + static_cast<std::size_t>(a);
                    rlo.push_back(lo[idx]);
                    rhi.push_back(hi[idx]);
                }
        double marginal;
        if (rest_dims == 1) {
            marginal = integrate_1d([&](double y) { return density(std::span<const double>(&y, 1)); },
                                    rlo[0], rhi[0], rel_tol);
        } else {
            marginal = integrate_2d(
                [&](double y0, double y1) {
                    const double ys[2] = {y0, y1};
                    return density(std::span<const double>(ys, 2));
                },
                rlo[0], rhi[0], rlo[1], rhi[1], rel_tol);
        }
        total += params.mass_of(i) * marginal;
    }
    return total;
}

}  // namespace bohmlab
