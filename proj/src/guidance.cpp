#include "bohmlab/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bohmlab/errors.hpp"

namespace bohmlab {

namespace {

using cplx = std::complex<double>;

// Dormand-Prince 4(5) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                 e6 = 187.0 / 2100, e7 = 1.0 / 40;

struct Rhs {
    Rhs(const WaveFunction& psi_, const ModelParams& params_) : psi(psi_), params(params_) {}

    const WaveFunction& psi;
    const ModelParams& params;
    double running_peak = 0.0;  // max |psi| seen so far
    double min_abs_psi = std::numeric_limits<double>::infinity();
    std::vector<cplx> grad_buf;
    std::vector<double> out_buf;

    const std::vector<double>& operator()(const std::vector<double>& q, double t) {
        const int n = psi.particles();
        const int d = psi.dim();
        const cplx v = psi.value(q, t);
        const double av = std::abs(v);
        running_peak = std::max(running_peak, av);
        if (av <= kNodeFloorRel * running_peak)
            throw NodeProximityError("velocity undefined: |psi| below node floor", av, t);
        min_abs_psi = std::min(min_abs_psi, av);
        grad_buf.resize(q.size());
        psi.gradient(q, t, grad_buf);
        out_buf.resize(q.size());
        for (int i = 0; i < n; ++i) {
            const double scale = params.hbar / params.mass_of(i);
            for (int a = 0; a < d; ++a) {
                const std::size_t k = static_cast<std::size_t>(i) * d + static_cast<std::size_t>(a);
                out_buf[k] = scale * (grad_buf[k] / v).imag();
            }
        }
        return out_buf;
    }
};

struct StepNode {
    double t;
    std::vector<double> y;
    std::vector<double> f;
};

// Integrates and records accepted nodes (t, y, f) for dense output.
struct StepperResult {
    std::vector<StepNode> nodes;
    long accepted = 0;
    long rejected = 0;
};

StepperResult run_stepper(Rhs& rhs, std::vector<double> y, double t0, double t1,
                          const IntegrateOptions& opt) {
    const double span = t1 - t0;
    if (!(span > 0.0)) throw std::invalid_argument("integrate: need t1 > t0");
    const std::size_t dim = y.size();
    const double tol = opt.tol;
    const double hmin = span * 1e-14;

    StepperResult res;
    double t = t0;
    std::vector<double> f = rhs(y, t);
    res.nodes.push_back({t, y, f});

    double h = span / 100.0;
    std::vector<double> y2(dim), y3(dim), y4(dim), y5(dim), y6(dim), ynew(dim), yerr(dim);
    std::vector<double> k2, k3, k4, k5, k6, k7;

    while (t < t1) {
        if (res.accepted + res.rejected > opt.max_steps)
            throw IntegrationStalled("integrate: step budget exhausted");
        h = std::min(h, t1 - t);
        bool node_hit = false;
        double err = 0.0;
        try {
            for (std::size_t i = 0; i < dim; ++i) y2[i] = y[i] + h * a21 * f[i];
            k2 = rhs(y2, t + c2 * h);
            for (std::size_t i = 0; i < dim; ++i) y3[i] = y[i] + h * (a31 * f[i] + a32 * k2[i]);
            k3 = rhs(y3, t + c3 * h);
            for (std::size_t i = 0; i < dim; ++i)
                y4[i] = y[i] + h * (a41 * f[i] + a42 * k2[i] + a43 * k3[i]);
            k4 = rhs(y4, t + c4 * h);
            for (std::size_t i = 0; i < dim; ++i)
                y5[i] = y[i] + h * (a51 * f[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            k5 = rhs(y5, t + c5 * h);
            for (std::size_t i = 0; i < dim; ++i)
                y6[i] = y[i] + h * (a61 * f[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            k6 = rhs(y6, t + h);
            for (std::size_t i = 0; i < dim; ++i)
                ynew[i] = y[i] + h * (b1 * f[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            k7 = rhs(ynew, t + h);
            for (std::size_t i = 0; i < dim; ++i) {
                const double y4th = y[i] + h * (e1 * f[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                                e6 * k6[i] + e7 * k7[i]);
                const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                const double d = (ynew[i] - y4th) / sc;
                err += d * d;
            }
            err = std::sqrt(err / static_cast<double>(dim));
        } catch (const NodeProximityError& e) {
            node_hit = true;
            if (h / 2.0 < hmin)
                throw NodeProximityError("integrate: persistent node proximity at t=" + std::to_string(e.time),
                                         e.abs_psi, e.time);
        }

        if (node_hit) {
            h /= 2.0;
            ++res.rejected;
            continue;
        }
        if (err <= 1.0) {
            t += h;
            y = ynew;
            f = k7;  // FSAL
            res.nodes.push_back({t, y, f});
            ++res.accepted;
        } else {
            ++res.rejected;
        }
        const double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
        if (h < hmin) throw IntegrationStalled("integrate: step size underflow at t=" + std::to_string(t));
    }
    return res;
}

// Cubic Hermite interpolation between the bracketing accepted steps.
std::vector<double> dense_sample(const std::vector<StepNode>& nodes, double t) {
    std::size_t k = 0;
    while (k + 2 < nodes.size() && nodes[k + 1].t < t) ++k;
    const auto& n0 = nodes[k];
    const auto& n1 = nodes[k + 1];
    const double h = n1.t - n0.t;
    const double u = h > 0.0 ? (t - n0.t) / h : 0.0;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    std::vector<double> y(n0.y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = h00 * n0.y[i] + h10 * h * n0.f[i] + h01 * n1.y[i] + h11 * h * n1.f[i];
    return y;
}

double min_pair_distance_flat(const std::vector<double>& q, int n, int d) {
    if (n < 2) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int a = 0; a < d; ++a) {
                const double diff = q[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(a)] -
                                    q[static_cast<std::size_t>(j) * d + static_cast<std::size_t>(a)];
                s += diff * diff;
            }
            best = std::min(best, std::sqrt(s));
        }
    return best;
}

}  // namespace

std::vector<double> velocity_field(const WaveFunction& psi, const OrderedConfiguration& q, double t,
                                   const ModelParams& params, double node_floor) {
    params.validate();
    if (params.particles != psi.particles() || params.dim != psi.dim())
        throw std::invalid_argument("velocity_field: params/psi shape mismatch");
    if (q.particles != psi.particles() || q.dim != psi.dim())
        throw std::invalid_argument("velocity_field: configuration/psi shape mismatch");
    const cplx v = value_at(psi, q, t);
    const double av = std::abs(v);
    if (av <= node_floor)
        throw NodeProximityError("velocity_field: |psi| below node floor", av, t);
    const auto g = gradient_at(psi, q, t);
    std::vector<double> out(q.coords.size());
    for (int i = 0; i < q.particles; ++i) {
        const double scale = params.hbar / params.mass_of(i);
        for (int a = 0; a < q.dim; ++a) {
            const std::size_t k = static_cast<std::size_t>(i) * q.dim + static_cast<std::size_t>(a);
            out[k] = scale * (g[k] / v).imag();
        }
    }
    return out;
}

Trajectory integrate_trajectory(const WaveFunction& psi, const UnorderedConfiguration& q0, double t0,
                                double t1, const ModelParams& params, const IntegrateOptions& opt) {
    params.validate();
    if (opt.samples < 2) throw std::invalid_argument("integrate_trajectory: need samples >= 2");
    const int n = psi.particles();
    const int d = psi.dim();
    if (q0.particles() != n || q0.dim() != d)
        throw std::invalid_argument("integrate_trajectory: q0/psi shape mismatch");

    Rhs rhs(psi, params);
    auto res = run_stepper(rhs, q0.canonical_lift().coords, t0, t1, opt);

    Trajectory traj;
    traj.steps_accepted = res.accepted;
    traj.steps_rejected = res.rejected;
    traj.min_abs_psi = rhs.min_abs_psi;
    traj.min_pair_dist = std::numeric_limits<double>::infinity();
    traj.times.reserve(static_cast<std::size_t>(opt.samples));
    for (int s = 0; s < opt.samples; ++s) {
        const double t = t0 + (t1 - t0) * static_cast<double>(s) / (opt.samples - 1);
        auto y = dense_sample(res.nodes, t);
        traj.min_pair_dist = std::min(traj.min_pair_dist, min_pair_distance_flat(y, n, d));
        OrderedConfiguration lift(n, d, std::move(y));
        traj.states.push_back(project(lift));
        traj.lift_states.push_back(std::move(lift));
        traj.times.push_back(t);
    }
    // step endpoints contribute to the distance diagnostic as well
    for (const auto& node : res.nodes)
        traj.min_pair_dist = std::min(traj.min_pair_dist, min_pair_distance_flat(node.y, n, d));
    return traj;
}

UnorderedConfiguration propagate(const WaveFunction& psi, const UnorderedConfiguration& q0, double t0,
                                 double t1, const ModelParams& params, double tol) {
    if (t1 == t0) return q0;
    params.validate();
    Rhs rhs(psi, params);
    IntegrateOptions opt;
    opt.tol = tol;
    auto res = run_stepper(rhs, q0.canonical_lift().coords, t0, t1, opt);
    return project(OrderedConfiguration(psi.particles(), psi.dim(), res.nodes.back().y));
}

LiftIndependenceReport lift_independence_check(const WaveFunction& psi, const UnorderedConfiguration& q0,
                                               double t0, double t1, const ModelParams& params,
                                               double tol, int samples, double periodicity_tol,
                                               std::uint64_t seed) {
    const int n = psi.particles();
    if (n > 4)
        throw std::invalid_argument("lift_independence_check: N <= 4 (integrates all N! lifts)");

    // The projectability claim is only made for wave functions obeying
    // the periodicity condition; find the character, or refuse.
    TopologicalFactor gamma = TopologicalFactor::trivial(n);
    if (n >= 2) {
        bool found = false;
        for (const auto& cand : {TopologicalFactor::trivial(n), TopologicalFactor::sign(n)}) {
            const auto chk = check_periodicity(psi, cand, 200, seed, t0, std::max(t0 + 1e-9, t1));
            if (chk.max_residual < periodicity_tol) {
                gamma = cand;
                found = true;
                break;
            }
        }
        if (!found)
            throw PeriodicityViolation(
                "lift_independence_check: psi satisfies no character's periodicity condition");
    }

    IntegrateOptions opt;
    opt.tol = tol;
    opt.samples = samples;

    std::vector<Trajectory> trajs;
    for (const auto& lift : lifts(q0)) {
        // integrate from this specific lift: reuse the stepper on its coords
        Rhs rhs(psi, params);
        auto res = run_stepper(rhs, lift.coords, t0, t1, opt);
        Trajectory traj;
        for (int s = 0; s < opt.samples; ++s) {
            const double t = t0 + (t1 - t0) * static_cast<double>(s) / (opt.samples - 1);
            OrderedConfiguration lc(psi.particles(), psi.dim(), dense_sample(res.nodes, t));
            traj.times.push_back(t);
            traj.states.push_back(project(lc));
            traj.lift_states.push_back(std::move(lc));
        }
        trajs.push_back(std::move(traj));
    }

    LiftIndependenceReport rep{0.0, static_cast<int>(trajs.size()), gamma};
    for (std::size_t a = 0; a < trajs.size(); ++a)
        for (std::size_t b = a + 1; b < trajs.size(); ++b)
            for (std::size_t s = 0; s < trajs[a].states.size(); ++s)
                rep.max_quotient_deviation = std::max(
                    rep.max_quotient_deviation, quotient_distance(trajs[a].states[s], trajs[b].states[s]));
    return rep;
}

double min_pair_distance(const Trajectory& traj) {
    if (traj.lift_states.empty()) throw std::invalid_argument("min_pair_distance: empty trajectory");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& lift : traj.lift_states)
        best = std::min(best, min_pair_distance_flat(lift.coords, lift.particles, lift.dim));
    return best;
}

bool crossing_check_1d(const Trajectory& traj) {
    if (traj.lift_states.empty()) throw std::invalid_argument("crossing_check_1d: empty trajectory");
    if (traj.lift_states.front().dim != 1)
        throw std::invalid_argument("crossing_check_1d: d = 1 only");
    const int n = traj.lift_states.front().particles;
    auto ranking = [n](const OrderedConfiguration& q) {
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return q.coords[static_cast<std::size_t>(a)] < q.coords[static_cast<std::size_t>(b)]; });
        return idx;
    };
    const auto first = ranking(traj.lift_states.front());
    for (const auto& lift : traj.lift_states)
        if (ranking(lift) != first) return false;
    return true;
}

}  // namespace bohmlab
