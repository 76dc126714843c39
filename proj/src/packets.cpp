#include "bohmlab/packets.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

namespace bohmlab {

namespace {

using cplx = std::complex<double>;

// Continuous logarithm of u(t) = cos(wt) + i b sin(wt), b > 0. The curve
// is an origin-winding ellipse, so the principal log would jump by 2 pi i
// and flip the sign of u^(-1/2); the continuous argument is wt plus the
// (bounded, continuous) difference between the elliptic and circular
// angles.
cplx continuous_log_u(double omega, double t, double b) {
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    const double mag = 0.5 * std::log(c * c + b * b * s * s);
    const double delta = std::atan2(b * s, c) - std::atan2(s, c);
    return {mag, omega * t + delta};
}

}  // namespace

void GaussianPacket::validate() const {
    if (center.empty() || center.size() != momentum.size())
        throw std::invalid_argument("GaussianPacket: center/momentum must be same nonzero dimension");
    if (!(width > 0.0) || !std::isfinite(width))
        throw std::invalid_argument("GaussianPacket: width must be positive and finite");
    for (double v : center)
        if (!std::isfinite(v)) throw std::invalid_argument("GaussianPacket: non-finite center");
    for (double v : momentum)
        if (!std::isfinite(v)) throw std::invalid_argument("GaussianPacket: non-finite momentum");
    if (evolution == Evolution::harmonic && !(omega > 0.0))
        throw std::invalid_argument("GaussianPacket: harmonic evolution needs omega > 0");
}

bool GaussianPacket::same_parameters(const GaussianPacket& other) const {
    return center == other.center && momentum == other.momentum && width == other.width &&
           evolution == other.evolution && (evolution == Evolution::free || omega == other.omega);
}

PacketState packet_at(const GaussianPacket& p, double t, double hbar, double mass) {
    p.validate();
    const int d = p.dim();
    const double w2 = p.width * p.width;

    PacketState st;
    st.hbar = hbar;
    st.center_t.resize(static_cast<std::size_t>(d));
    st.momentum_t.resize(static_cast<std::size_t>(d));

    cplx log_u;   // u(t) in the quadratic-coefficient evolution a = -(i m / 2 hbar) u'/u
    cplx u, du;
    double action = 0.0;  // classical action: integral of the Lagrangian along the center

    if (p.evolution == Evolution::free) {
        const double tau = hbar * t / (2.0 * mass * w2);
        u = cplx(1.0, tau);
        du = cplx(0.0, hbar / (2.0 * mass * w2));
        log_u = std::log(u);  // Re u = 1 > 0, no branch issue
        for (int axis = 0; axis < d; ++axis) {
            const double k = p.momentum[static_cast<std::size_t>(axis)];
            st.center_t[static_cast<std::size_t>(axis)] =
                p.center[static_cast<std::size_t>(axis)] + k / mass * t;
            st.momentum_t[static_cast<std::size_t>(axis)] = k;
            action += k * k / (2.0 * mass) * t;
        }
    } else {
        const double omega = p.omega;
        const double b = hbar / (2.0 * mass * omega * w2);
        const double c = std::cos(omega * t);
        const double s = std::sin(omega * t);
        u = cplx(c, b * s);
        du = cplx(-omega * s, b * omega * c);
        log_u = continuous_log_u(omega, t, b);
        const double s2 = std::sin(2.0 * omega * t);
        const double c2 = std::cos(2.0 * omega * t);
        for (int axis = 0; axis < d; ++axis) {
            const double x0 = p.center[static_cast<std::size_t>(axis)];
            const double p0 = p.momentum[static_cast<std::size_t>(axis)];
            st.center_t[static_cast<std::size_t>(axis)] = x0 * c + p0 / (mass * omega) * s;
            st.momentum_t[static_cast<std::size_t>(axis)] = p0 * c - mass * omega * x0 * s;
            // closed form of the Lagrangian integral along the center
            action += ((p0 * p0 - mass * mass * omega * omega * x0 * x0) * s2 / (2.0 * omega) -
                       mass * x0 * p0 * (1.0 - c2)) /
                      (2.0 * mass);
        }
    }

    st.a = cplx(0.0, -mass / (2.0 * hbar)) * (du / u);
    st.width_t = p.width * std::exp(log_u.real());
    st.log_prefactor = -0.25 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi * w2) -
                       0.5 * static_cast<double>(d) * log_u + cplx(0.0, action / hbar);
    return st;
}

std::complex<double> PacketState::value(std::span<const double> x) const {
    const std::size_t d = center_t.size();
    cplx expo = log_prefactor;
    for (std::size_t axis = 0; axis < d; ++axis) {
        const double dx = x[axis] - center_t[axis];
        expo += -a * (dx * dx) + cplx(0.0, momentum_t[axis] * dx / hbar);
    }
    return std::exp(expo);
}

void PacketState::gradient(std::span<const double> x, std::span<std::complex<double>> out) const {
    const cplx v = value(x);
    for (std::size_t axis = 0; axis < center_t.size(); ++axis) {
        const double dx = x[axis] - center_t[axis];
        out[axis] = v * (-2.0 * a * dx + cplx(0.0, momentum_t[axis] / hbar));
    }
}

void PacketState::log_gradient(std::span<const double> x, std::span<std::complex<double>> out) const {
    for (std::size_t axis = 0; axis < center_t.size(); ++axis) {
        const double dx = x[axis] - center_t[axis];
        out[axis] = -2.0 * a * dx + cplx(0.0, momentum_t[axis] / hbar);
    }
}

std::complex<double> packet_overlap(const GaussianPacket& pj, const GaussianPacket& pk, double hbar) {
    pj.validate();
    pk.validate();
    if (pj.dim() != pk.dim()) throw std::invalid_argument("packet_overlap: dimension mismatch");
    const double wj2 = pj.width * pj.width, wk2 = pk.width * pk.width;
    // per axis: integral of exp(-p x^2 + q x + r), p > 0
    const double p = 1.0 / (4.0 * wj2) + 1.0 / (4.0 * wk2);
    cplx total(1.0);
    for (int axis = 0; axis < pj.dim(); ++axis) {
        const std::size_t i = static_cast<std::size_t>(axis);
        const double aj = pj.center[i], ak = pk.center[i];
        const double kj = pj.momentum[i] / hbar, kk = pk.momentum[i] / hbar;
        const cplx q(aj / (2.0 * wj2) + ak / (2.0 * wk2), kk - kj);
        const cplx r(-aj * aj / (4.0 * wj2) - ak * ak / (4.0 * wk2), kj * aj - kk * ak);
        total *= std::sqrt(std::numbers::pi / p) * std::exp(q * q / (4.0 * p) + r);
    }
    // (2 pi wj^2)^(-d/4) (2 pi wk^2)^(-d/4) = (2 pi wj wk)^(-d/2)
    const double norm = std::pow(2.0 * std::numbers::pi * pj.width * pk.width, -0.5 * pj.dim());
    return norm * total;
}

}  // namespace bohmlab
