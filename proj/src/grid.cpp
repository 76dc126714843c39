#include "bohmlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bohmlab/csvio.hpp"
#include "bohmlab/errors.hpp"

namespace bohmlab {

namespace {

using cplx = std::complex<double>;

/// Solve the constant-coefficient complex tridiagonal system
/// (diag, off) x = rhs in place (Thomas algorithm; the Cayley matrices
/// here are strictly diagonally dominant).
void thomas_const(cplx diag, cplx off, std::vector<cplx>& x, std::vector<cplx>& scratch) {
    const std::size_t n = x.size();
    scratch.resize(n);
    cplx beta = diag;
    if (std::abs(beta) < 1e-300) throw SolverError("tridiagonal solve: zero pivot");
    x[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = off / beta;
        beta = diag - off * scratch[i];
        if (std::abs(beta) < 1e-300) throw SolverError("tridiagonal solve: zero pivot");
        x[i] = (x[i] - off * x[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= scratch[i + 1] * x[i + 1];
}

/// Same with a varying diagonal (1D Crank-Nicolson with potential).
void thomas_var(const std::vector<cplx>& diag, cplx off, std::vector<cplx>& x,
                std::vector<cplx>& scratch) {
    const std::size_t n = x.size();
    scratch.resize(n);
    cplx beta = diag[0];
    if (std::abs(beta) < 1e-300) throw SolverError("tridiagonal solve: zero pivot");
    x[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = off / beta;
        beta = diag[i] - off * scratch[i];
        if (std::abs(beta) < 1e-300) throw SolverError("tridiagonal solve: zero pivot");
        x[i] = (x[i] - off * x[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= scratch[i + 1] * x[i + 1];
}

/// Cayley kinetic half of the step along one stored line:
/// (1 + i eta T) psi' = (1 - i eta T) psi with T the Dirichlet second
/// difference scaled by -hbar^2/2m.
void cayley_kinetic_line(std::vector<cplx>& line, double eta_kin, std::vector<cplx>& rhs,
                         std::vector<cplx>& scratch) {
    const std::size_t n = line.size();
    rhs.resize(n);
    // T: diag hbar^2/(m h^2) = 2*kin_off magnitude; parametrized via
    // eta_kin = dt * hbar / (4 m h^2): A = 1 + i(2 eta_kin) on diag,
    // -i eta_kin off-diagonal.
    const cplx a_diag(1.0, 2.0 * eta_kin);
    const cplx a_off(0.0, -eta_kin);
    const cplx b_diag(1.0, -2.0 * eta_kin);
    const cplx b_off(0.0, eta_kin);
    for (std::size_t i = 0; i < n; ++i) {
        cplx v = b_diag * line[i];
        if (i > 0) v += b_off * line[i - 1];
        if (i + 1 < n) v += b_off * line[i + 1];
        rhs[i] = v;
    }
    line.swap(rhs);
    thomas_const(a_diag, a_off, line, scratch);
}

void check_pair_domain(const GaussianPacket& p, const GridSpec& spec) {
    const double c = p.center[0];
    if (c - 3.0 * p.width < spec.lo[0] || c + 3.0 * p.width > spec.hi[0])
        throw DomainTooSmall("grid domain cannot hold 6 widths of packet support");
}

}  // namespace

GridSpec GridSpec::line(int n, double lo_, double hi_) {
    GridSpec s;
    s.dim = 1;
    s.points = {n};
    s.lo = {lo_};
    s.hi = {hi_};
    s.validate();
    return s;
}

GridSpec GridSpec::square(int n, double lo_, double hi_) {
    GridSpec s;
    s.dim = 2;
    s.points = {n, n};
    s.lo = {lo_, lo_};
    s.hi = {hi_, hi_};
    s.validate();
    return s;
}

void GridSpec::validate() const {
    if (dim != 1 && dim != 2) throw std::invalid_argument("GridSpec: dim must be 1 or 2");
    if (points.size() != static_cast<std::size_t>(dim) || lo.size() != points.size() ||
        hi.size() != points.size())
        throw std::invalid_argument("GridSpec: per-axis arrays must have `dim` entries");
    for (int a = 0; a < dim; ++a) {
        if (points[static_cast<std::size_t>(a)] < 8)
            throw std::invalid_argument("GridSpec: need >= 8 points per axis");
        if (!(hi[static_cast<std::size_t>(a)] > lo[static_cast<std::size_t>(a)]))
            throw std::invalid_argument("GridSpec: need hi > lo");
    }
}

std::size_t GridSpec::total_points() const {
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(points[static_cast<std::size_t>(a)]);
    return n;
}

bool GridSpec::is_square() const {
    return dim == 2 && points[0] == points[1] && lo[0] == lo[1] && hi[0] == hi[1];
}

double discrete_norm(const GridState& state) {
    double cell = 1.0;
    for (int a = 0; a < state.spec.dim; ++a) cell *= state.spec.spacing(a);
    double s = 0.0;
    for (const auto& v : state.amplitudes) s += std::norm(v);
    return std::sqrt(s * cell);
}

GridState init_packet_1d(const GaussianPacket& packet, const GridSpec& spec, double hbar, double mass) {
    spec.validate();
    packet.validate();
    if (spec.dim != 1 || packet.dim() != 1)
        throw std::invalid_argument("init_packet_1d: 1D grid and packet");
    check_pair_domain(packet, spec);
    GridState st;
    st.spec = spec;
    st.hbar = hbar;
    st.mass = mass;
    st.amplitudes.resize(spec.total_points());
    st.potential.assign(spec.total_points(), 0.0);
    const auto ps = packet_at(packet, 0.0, hbar, mass);
    for (int i = 0; i < spec.points[0]; ++i) {
        const double x = spec.coord(0, i);
        st.amplitudes[static_cast<std::size_t>(i)] = ps.value(std::span<const double>(&x, 1));
    }
    const double nrm = discrete_norm(st);
    for (auto& v : st.amplitudes) v /= nrm;
    return st;
}

GridState init_pair_state(const GaussianPacket& p1, const GaussianPacket& p2, const GridSpec& spec,
                          Statistics stats, double hbar, double mass) {
    spec.validate();
    p1.validate();
    p2.validate();
    if (spec.dim != 2) throw std::invalid_argument("init_pair_state: needs a 2D grid");
    if (!spec.is_square())
        throw GridAsymmetryError("init_pair_state: swap-symmetric (square) grid required");
    if (p1.dim() != 1 || p2.dim() != 1)
        throw std::invalid_argument("init_pair_state: 1D packets");
    if (stats == Statistics::fermion && p1.same_parameters(p2))
        throw DegenerateStateError("init_pair_state: identical packets, antisymmetric combination vanishes");
    check_pair_domain(p1, spec);
    check_pair_domain(p2, spec);

    GridState st;
    st.spec = spec;
    st.hbar = hbar;
    st.mass = mass;
    st.amplitudes.resize(spec.total_points());
    st.potential.assign(spec.total_points(), 0.0);
    const auto s1 = packet_at(p1, 0.0, hbar, mass);
    const auto s2 = packet_at(p2, 0.0, hbar, mass);
    const int n = spec.points[0];
    std::vector<cplx> v1(static_cast<std::size_t>(n)), v2(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = spec.coord(0, i);
        v1[static_cast<std::size_t>(i)] = s1.value(std::span<const double>(&x, 1));
        v2[static_cast<std::size_t>(i)] = s2.value(std::span<const double>(&x, 1));
    }
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) {
            const cplx direct = v1[static_cast<std::size_t>(ix)] * v2[static_cast<std::size_t>(iy)];
            const cplx exchanged = v2[static_cast<std::size_t>(ix)] * v1[static_cast<std::size_t>(iy)];
            cplx v;
            switch (stats) {
                case Statistics::fermion: v = direct - exchanged; break;
                case Statistics::boson: v = direct + exchanged; break;
                case Statistics::none: v = direct; break;
            }
            st.at(ix, iy) = v;
        }
    const double nrm = discrete_norm(st);
    if (!(nrm > 1e-154)) throw DegenerateStateError("init_pair_state: zero-norm combination");
    for (auto& v : st.amplitudes) v /= nrm;
    return st;
}

void set_potential(GridState& state, const std::function<double(double)>& v, const std::string& name) {
    const auto& spec = state.spec;
    if (spec.dim == 1) {
        for (int i = 0; i < spec.points[0]; ++i)
            state.potential[static_cast<std::size_t>(i)] = v(spec.coord(0, i));
    } else {
        for (int ix = 0; ix < spec.points[0]; ++ix)
            for (int iy = 0; iy < spec.points[1]; ++iy)
                state.potential[static_cast<std::size_t>(ix) * spec.points[1] +
                                static_cast<std::size_t>(iy)] = v(spec.coord(0, ix)) + v(spec.coord(1, iy));
    }
    state.potential_name = name;
}

void set_potential_2d(GridState& state, const std::function<double(double, double)>& v,
                      const std::string& name) {
    const auto& spec = state.spec;
    if (spec.dim != 2) throw std::invalid_argument("set_potential_2d: needs a 2D grid");
    for (int ix = 0; ix < spec.points[0]; ++ix)
        for (int iy = 0; iy < spec.points[1]; ++iy)
            state.potential[static_cast<std::size_t>(ix) * spec.points[1] + static_cast<std::size_t>(iy)] =
                v(spec.coord(0, ix), spec.coord(1, iy));
    state.potential_name = name;
}

namespace {

void step_1d_inplace(GridState& st, double dt) {
    const int n = st.spec.points[0];
    const double h = st.spec.spacing(0);
    const double eta = dt / (2.0 * st.hbar);          // Cayley parameter
    const double kin = st.hbar * st.hbar / (st.mass * h * h);
    // H = T + V: diag kin + V_i, off-diag -kin/2
    std::vector<cplx> a_diag(static_cast<std::size_t>(n)), b_diag(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double hii = kin + st.potential[static_cast<std::size_t>(i)];
        a_diag[static_cast<std::size_t>(i)] = cplx(1.0, eta * hii);
        b_diag[static_cast<std::size_t>(i)] = cplx(1.0, -eta * hii);
    }
    const cplx a_off(0.0, -eta * kin / 2.0);
    const cplx b_off(0.0, eta * kin / 2.0);
    std::vector<cplx> rhs(static_cast<std::size_t>(n)), scratch;
    for (int i = 0; i < n; ++i) {
        cplx v = b_diag[static_cast<std::size_t>(i)] * st.amplitudes[static_cast<std::size_t>(i)];
        if (i > 0) v += b_off * st.amplitudes[static_cast<std::size_t>(i) - 1];
        if (i + 1 < n) v += b_off * st.amplitudes[static_cast<std::size_t>(i) + 1];
        rhs[static_cast<std::size_t>(i)] = v;
    }
    st.amplitudes.swap(rhs);
    thomas_var(a_diag, a_off, st.amplitudes, scratch);
    st.time += dt;
}

void phase_half(GridState& st, double dt) {
    const double f = -dt / (2.0 * st.hbar);
    const std::size_t total = st.amplitudes.size();
    parallel_for(total, st.exec, [&](std::size_t k) {
        st.amplitudes[k] *= std::polar(1.0, f * st.potential[k]);
    });
}

void sweep_axis(GridState& st, double dt, int axis) {
    const int nx = st.spec.points[0];
    const int ny = st.spec.points[1];
    const double h = st.spec.spacing(axis);
    const double eta_kin = dt * st.hbar / (4.0 * st.mass * h * h);
    if (axis == 0) {
        // lines vary ix at fixed iy
        parallel_for(static_cast<std::size_t>(ny), st.exec, [&](std::size_t iy) {
            thread_local std::vector<cplx> line, rhs, scratch;
            line.resize(static_cast<std::size_t>(nx));
            for (int ix = 0; ix < nx; ++ix) line[static_cast<std::size_t>(ix)] = st.at(ix, static_cast<int>(iy));
            cayley_kinetic_line(line, eta_kin, rhs, scratch);
            for (int ix = 0; ix < nx; ++ix) st.at(ix, static_cast<int>(iy)) = line[static_cast<std::size_t>(ix)];
        });
    } else {
        parallel_for(static_cast<std::size_t>(nx), st.exec, [&](std::size_t ix) {
            thread_local std::vector<cplx> line, rhs, scratch;
            line.resize(static_cast<std::size_t>(ny));
            for (int iy = 0; iy < ny; ++iy) line[static_cast<std::size_t>(iy)] = st.at(static_cast<int>(ix), iy);
            cayley_kinetic_line(line, eta_kin, rhs, scratch);
            for (int iy = 0; iy < ny; ++iy) st.at(static_cast<int>(ix), iy) = line[static_cast<std::size_t>(iy)];
        });
    }
}

void step_2d_inplace(GridState& st, double dt) {
    phase_half(st, dt);
    sweep_axis(st, dt, 0);
    sweep_axis(st, dt, 1);
    phase_half(st, dt);
    st.time += dt;
}

}  // namespace

GridState step(const GridState& state, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: need dt > 0");
    GridState out = state;
    if (out.spec.dim == 1)
        step_1d_inplace(out, dt);
    else
        step_2d_inplace(out, dt);
    return out;
}

void advance(GridState& state, double dt, long steps) {
    if (!(dt > 0.0)) throw std::invalid_argument("advance: need dt > 0");
    for (long s = 0; s < steps; ++s) {
        if (state.spec.dim == 1)
            step_1d_inplace(state, dt);
        else
            step_2d_inplace(state, dt);
    }
}

double symmetry_sector_error(const GridState& state, const TopologicalFactor& gamma) {
    if (state.spec.dim != 2)
        throw std::invalid_argument("symmetry_sector_error: 2D grids only");
    if (!state.spec.is_square())
        throw GridAsymmetryError("symmetry_sector_error: swap is not a grid symmetry (non-square grid)");
    if (gamma.size() != 2) throw std::invalid_argument("symmetry_sector_error: gamma on S_2 expected");
    const double g = static_cast<double>(gamma.transposition_value());
    const int n = state.spec.points[0];
    double peak = 0.0;
    for (const auto& v : state.amplitudes) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return 0.0;
    double worst = 0.0;
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy <= ix; ++iy)
            worst = std::max(worst, std::abs(state.at(iy, ix) - g * state.at(ix, iy)));
    return worst / peak;
}

void export_snapshot_csv(const GridState& state, const std::string& path) {
    std::string body;
    body += "# dim = " + std::to_string(state.spec.dim) + "\n";
    for (int a = 0; a < state.spec.dim; ++a) {
        body += "# axis" + std::to_string(a) + ".points = " + std::to_string(state.spec.points[static_cast<std::size_t>(a)]) + "\n";
        body += "# axis" + std::to_string(a) + ".lo = " + format_double(state.spec.lo[static_cast<std::size_t>(a)]) + "\n";
        body += "# axis" + std::to_string(a) + ".hi = " + format_double(state.spec.hi[static_cast<std::size_t>(a)]) + "\n";
        body += "# axis" + std::to_string(a) + ".spacing = " + format_double(state.spec.spacing(a)) + "\n";
    }
    body += "# time = " + format_double(state.time) + "\n";
    body += "# potential = " + state.potential_name + "\n";
    if (state.spec.dim == 1) {
        body += "x,re_psi,im_psi\n";
        for (int i = 0; i < state.spec.points[0]; ++i) {
            const auto v = state.amplitudes[static_cast<std::size_t>(i)];
            body += format_double(state.spec.coord(0, i)) + "," + format_double(v.real()) + "," +
                    format_double(v.imag()) + "\n";
        }
    } else {
        body += "x1,x2,re_psi,im_psi\n";
        for (int ix = 0; ix < state.spec.points[0]; ++ix)
            for (int iy = 0; iy < state.spec.points[1]; ++iy) {
                const auto v = state.at(ix, iy);
                body += format_double(state.spec.coord(0, ix)) + "," + format_double(state.spec.coord(1, iy)) +
                        "," + format_double(v.real()) + "," + format_double(v.imag()) + "\n";
            }
    }
    write_file_atomic(path, body);
}

GridEvolution record_evolution(GridState state, double dt, long steps, long stride) {
    if (stride < 1) throw std::invalid_argument("record_evolution: stride >= 1");
    GridEvolution evo;
    evo.spec = state.spec;
    evo.hbar = state.hbar;
    evo.mass = state.mass;
    auto snapshot = [&]() {
        evo.times.push_back(state.time);
        evo.snapshots.push_back(state.amplitudes);
        double peak = 0.0;
        for (const auto& v : state.amplitudes) peak = std::max(peak, std::abs(v));
        evo.peaks.push_back(peak);
    };
    snapshot();
    for (long s = 1; s <= steps; ++s) {
        advance(state, dt, 1);
        if (s % stride == 0 || s == steps) snapshot();
    }
    return evo;
}

namespace {

/// Catmull-Rom cubic kernel weights and derivatives for fractional u.
void catmull_rom(double u, double w[4], double dw[4]) {
    const double u2 = u * u, u3 = u2 * u;
    w[0] = -0.5 * u + u2 - 0.5 * u3;
    w[1] = 1.0 - 2.5 * u2 + 1.5 * u3;
    w[2] = 0.5 * u + 2.0 * u2 - 1.5 * u3;
    w[3] = -0.5 * u2 + 0.5 * u3;
    dw[0] = -0.5 + 2.0 * u - 1.5 * u2;
    dw[1] = -5.0 * u + 4.5 * u2;
    dw[2] = 0.5 + 4.0 * u - 4.5 * u2;
    dw[3] = -u + 1.5 * u2;
}

}  // namespace

GridWaveFunction::GridWaveFunction(GridEvolution evolution) : evo_(std::move(evolution)) {
    if (evo_.snapshots.empty()) throw std::invalid_argument("GridWaveFunction: empty evolution");
    if (evo_.spec.dim == 2 && !evo_.spec.is_square())
        throw GridAsymmetryError("GridWaveFunction: two-particle reading needs a square grid");
}

std::pair<std::size_t, double> GridWaveFunction::time_bracket(double t) const {
    const auto& times = evo_.times;
    if (times.size() == 1) return {0, 0.0};
    const double slack = 1e-9 * (times.back() - times.front() + 1.0);
    if (t < times.front() - slack || t > times.back() + slack)
        throw std::invalid_argument("GridWaveFunction: t outside recorded window");
    std::size_t k = 0;
    while (k + 2 < times.size() && times[k + 1] < t) ++k;
    const double span = times[k + 1] - times[k];
    const double u = span > 0.0 ? std::clamp((t - times[k]) / span, 0.0, 1.0) : 0.0;
    return {k, u};
}

std::complex<double> GridWaveFunction::value(std::span<const double> q, double t) const {
    const auto [k, blend] = time_bracket(t);
    auto sample = [&](std::size_t snap) -> cplx {
        const auto& amp = evo_.snapshots[snap];
        const auto& spec = evo_.spec;
        if (spec.dim == 1) {
            const double h = spec.spacing(0);
            const double s = (q[0] - spec.lo[0]) / h;
            const int i0 = static_cast<int>(std::floor(s));
            double w[4], dw[4];
            catmull_rom(s - i0, w, dw);
            cplx v(0.0);
            for (int m = 0; m < 4; ++m) {
                const int i = i0 - 1 + m;
                if (i < 0 || i >= spec.points[0]) continue;
                v += w[m] * amp[static_cast<std::size_t>(i)];
            }
            return v;
        }
        const double hx = spec.spacing(0);
        const double sx = (q[0] - spec.lo[0]) / hx;
        const double sy = (q[1] - spec.lo[1]) / hx;
        const int ix0 = static_cast<int>(std::floor(sx));
        const int iy0 = static_cast<int>(std::floor(sy));
        double wx[4], dwx[4], wy[4], dwy[4];
        catmull_rom(sx - ix0, wx, dwx);
        catmull_rom(sy - iy0, wy, dwy);
        cplx v(0.0);
        for (int mx = 0; mx < 4; ++mx) {
            const int ix = ix0 - 1 + mx;
            if (ix < 0 || ix >= spec.points[0]) continue;
            for (int my = 0; my < 4; ++my) {
                const int iy = iy0 - 1 + my;
                if (iy < 0 || iy >= spec.points[1]) continue;
                v += wx[mx] * wy[my] * amp[static_cast<std::size_t>(ix) * spec.points[1] + static_cast<std::size_t>(iy)];
            }
        }
        return v;
    };
    const cplx v0 = sample(k);
    if (blend == 0.0 || k + 1 >= evo_.snapshots.size()) return v0;
    return (1.0 - blend) * v0 + blend * sample(k + 1);
}

void GridWaveFunction::gradient(std::span<const double> q, double t,
                                std::span<std::complex<double>> out) const {
    const auto [k, blend] = time_bracket(t);
    auto sample_grad = [&](std::size_t snap, std::span<cplx> g) {
        const auto& amp = evo_.snapshots[snap];
        const auto& spec = evo_.spec;
        if (spec.dim == 1) {
            const double h = spec.spacing(0);
            const double s = (q[0] - spec.lo[0]) / h;
            const int i0 = static_cast<int>(std::floor(s));
            double w[4], dw[4];
            catmull_rom(s - i0, w, dw);
            cplx d(0.0);
            for (int m = 0; m < 4; ++m) {
                const int i = i0 - 1 + m;
                if (i < 0 || i >= spec.points[0]) continue;
                d += dw[m] * amp[static_cast<std::size_t>(i)];
            }
            g[0] = d / h;
            return;
        }
        const double h = spec.spacing(0);
        const double sx = (q[0] - spec.lo[0]) / h;
        const double sy = (q[1] - spec.lo[1]) / h;
        const int ix0 = static_cast<int>(std::floor(sx));
        const int iy0 = static_cast<int>(std::floor(sy));
        double wx[4], dwx[4], wy[4], dwy[4];
        catmull_rom(sx - ix0, wx, dwx);
        catmull_rom(sy - iy0, wy, dwy);
        cplx gx(0.0), gy(0.0);
        for (int mx = 0; mx < 4; ++mx) {
            const int ix = ix0 - 1 + mx;
            if (ix < 0 || ix >= spec.points[0]) continue;
            for (int my = 0; my < 4; ++my) {
                const int iy = iy0 - 1 + my;
                if (iy < 0 || iy >= spec.points[1]) continue;
                const cplx a = amp[static_cast<std::size_t>(ix) * spec.points[1] + static_cast<std::size_t>(iy)];
                gx += dwx[mx] * wy[my] * a;
                gy += wx[mx] * dwy[my] * a;
            }
        }
        g[0] = gx / h;
        g[1] = gy / h;
    };
    std::vector<cplx> g0(out.size()), g1(out.size());
    sample_grad(k, g0);
    if (blend == 0.0 || k + 1 >= evo_.snapshots.size()) {
        std::copy(g0.begin(), g0.end(), out.begin());
        return;
    }
    sample_grad(k + 1, g1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - blend) * g0[i] + blend * g1[i];
}

double GridWaveFunction::amplitude_scale(double t) const {
    const auto [k, blend] = time_bracket(t);
    double peak = evo_.peaks[k];
    if (blend > 0.0 && k + 1 < evo_.peaks.size()) peak = std::max(peak, evo_.peaks[k + 1]);
    return peak;
}

void GridWaveFunction::support_box(double /*t*/, std::vector<double>& lo, std::vector<double>& hi) const {
    const auto& spec = evo_.spec;
    lo.clear();
    hi.clear();
    for (int a = 0; a < spec.dim; ++a) {
        lo.push_back(spec.lo[static_cast<std::size_t>(a)]);
        hi.push_back(spec.hi[static_cast<std::size_t>(a)]);
    }
}

}  // namespace bohmlab
