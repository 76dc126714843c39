#include "doctest.h"

#include <cmath>
#include <complex>

#include "bohmlab/errors.hpp"
#include "bohmlab/guidance.hpp"
#include "bohmlab/rng.hpp"
#include "oracles.hpp"

using namespace bohmlab;
using cplx = std::complex<double>;

namespace {

GaussianPacket packet(std::vector<double> c, std::vector<double> k, double w) {
    GaussianPacket p;
    p.center = std::move(c);
    p.momentum = std::move(k);
    p.width = w;
    return p;
}

std::shared_ptr<PacketWaveFunction> headon_fermions(double k = 1.0, double w = 0.7) {
    return antisymmetrize({packet({-1.0}, {k}, w), packet({1.0}, {-k}, w)}, ModelParams::natural(2, 1));
}

std::shared_ptr<PacketWaveFunction> headon_bosons(double k = 1.0, double w = 0.7) {
    return symmetrize({packet({-1.0}, {k}, w), packet({1.0}, {-k}, w)}, ModelParams::natural(2, 1));
}

}  // namespace

TEST_CASE("velocity vanishes for a real (zero-momentum) state at t = 0") {
    const auto psi = antisymmetrize({packet({-1.0}, {0.0}, 0.6), packet({1.0}, {0.0}, 0.6)},
                                    ModelParams::natural(2, 1));
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const OrderedConfiguration q(2, 1, {rng.normal(-1, 0.5), rng.normal(1, 0.5)});
        for (double v : velocity_field(*psi, q, 0.0, psi->params())) CHECK(std::abs(v) < 1e-12);
    }
}

TEST_CASE("single free packet: velocity at the center is momentum / mass") {
    const double k = 1.7, mass = 2.0;
    auto params = ModelParams::natural(1, 1, mass);
    const auto psi = product_state({packet({0.3}, {k}, 0.5)}, params);
    const OrderedConfiguration q(1, 1, {0.3});
    const auto v = velocity_field(*psi, q, 0.0, params);
    CHECK(v[0] == doctest::Approx(k / mass).epsilon(1e-12));
}

TEST_CASE("velocity field equivariance under relabeling: v(sigma q) = sigma* v(q)") {
    Rng rng(17);
    const auto run = [&](const std::shared_ptr<PacketWaveFunction>& psi) {
        const int n = psi->particles(), d = psi->dim();
        const auto sigmas = enumerate_elements(n);
        int checked = 0;
        while (checked < 1000) {
            std::vector<double> c(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
            for (auto& x : c) x = rng.normal(0.0, 1.3);
            const OrderedConfiguration q(n, d, c);
            const double t = rng.uniform(0.0, 1.0);
            if (std::abs(value_at(*psi, q, t)) < 1e-5 * psi->amplitude_scale(t)) continue;
            ++checked;
            const auto& sigma = sigmas[rng.below(sigmas.size())];
            const auto lhs = velocity_field(*psi, apply_to_configuration(sigma, q), t, psi->params());
            const auto rhs = apply_to_blocks(sigma, std::span<const double>(velocity_field(*psi, q, t, psi->params())), d);
            double vscale = 1.0;
            for (double v : rhs) vscale = std::max(vscale, std::abs(v));
            for (std::size_t i = 0; i < lhs.size(); ++i)
                CHECK(std::abs(lhs[i] - rhs[i]) < 1e-10 * vscale);
        }
    };
    run(headon_fermions());
    run(headon_bosons());
    const std::vector<GaussianPacket> triple = {packet({-1.5}, {0.5}, 0.6), packet({0.0}, {0.0}, 0.5),
                                                packet({1.5}, {-0.5}, 0.7)};
    run(antisymmetrize(triple, ModelParams::natural(3, 1)));
    run(symmetrize(triple, ModelParams::natural(3, 1)));
}

TEST_CASE("velocity_field raises NodeProximityError below the node floor") {
    const auto psi = headon_fermions(0.0);
    const OrderedConfiguration diag(2, 1, {0.2, 0.2000001});  // essentially on the node line
    CHECK_THROWS_AS(velocity_field(*psi, diag, 0.0, psi->params(), 1e-6), NodeProximityError);
}

TEST_CASE("zero-velocity state gives a constant trajectory") {
    const auto psi = antisymmetrize({packet({-1.0}, {0.0}, 0.6), packet({1.0}, {0.0}, 0.6)},
                                    ModelParams::natural(2, 1));
    // a zero-momentum free packet spreads but its phase stays flat only at t = 0;
    // integrate a short window where the velocity stays tiny
    const auto q0 = project(OrderedConfiguration(2, 1, {-1.0, 1.0}));
    IntegrateOptions opt;
    opt.tol = 1e-10;
    const auto traj = integrate_trajectory(*psi, q0, 0.0, 1.0, psi->params(), opt);
    // by symmetry the two particles drift apart symmetrically or stay; at
    // the symmetric point the velocity is exactly zero at all times
    CHECK(traj.states.front() == q0);
    for (const auto& lift : traj.lift_states)
        CHECK(lift.coords[0] == doctest::Approx(-lift.coords[1]).epsilon(1e-9));
}

TEST_CASE("trajectory projection consistency: project(lift) equals the recorded state") {
    const auto psi = headon_fermions();
    const auto q0 = project(OrderedConfiguration(2, 1, {-1.2, 0.9}));
    const auto traj = integrate_trajectory(*psi, q0, 0.0, 1.0, psi->params());
    REQUIRE(traj.times.size() == traj.states.size());
    REQUIRE(traj.times.size() == traj.lift_states.size());
    for (std::size_t k = 0; k < traj.size(); ++k) CHECK(project(traj.lift_states[k]) == traj.states[k]);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == 1.0);
    for (std::size_t k = 1; k < traj.size(); ++k) CHECK(traj.times[k] > traj.times[k - 1]);
}

TEST_CASE("center-started single-packet trajectory moves at momentum / mass") {
    const double k = 1.3;
    const auto psi = product_state({packet({0.0}, {k}, 0.8)}, ModelParams::natural(1, 1));
    const auto q0 = project(OrderedConfiguration(1, 1, {0.0}));
    const auto traj = integrate_trajectory(*psi, q0, 0.0, 1.0, psi->params());
    // the packet center is a streamline: x(t) = k t exactly
    for (std::size_t s = 0; s < traj.size(); ++s)
        CHECK(traj.lift_states[s].coords[0] == doctest::Approx(k * traj.times[s]).epsilon(1e-6));
}

TEST_CASE("self-convergence: tightening tol tightens the endpoint deviation") {
    const auto psi = headon_fermions();
    const auto q0 = project(OrderedConfiguration(2, 1, {-1.3, 0.8}));
    const auto reference = propagate(*psi, q0, 0.0, 1.0, psi->params(), 1e-12);
    double dev_loose = quotient_distance(propagate(*psi, q0, 0.0, 1.0, psi->params(), 1e-4), reference);
    double dev_mid = quotient_distance(propagate(*psi, q0, 0.0, 1.0, psi->params(), 1e-6), reference);
    double dev_tight = quotient_distance(propagate(*psi, q0, 0.0, 1.0, psi->params(), 1e-8), reference);
    CHECK(dev_mid <= dev_loose);
    CHECK(dev_tight <= dev_mid);
    CHECK(dev_tight <= dev_loose / 4.0 + 1e-12);
    CHECK(dev_loose < 1e-3);
}

TEST_CASE("lift independence: fermionic and bosonic pairs") {
    const double tol = 1e-8;
    const auto q0 = project(OrderedConfiguration(2, 1, {-1.1, 0.7}));
    for (const auto& psi : {headon_fermions(), headon_bosons()}) {
        const auto rep = lift_independence_check(*psi, q0, 0.0, 1.0, psi->params(), tol);
        CHECK(rep.lifts_integrated == 2);
        CHECK(rep.max_quotient_deviation < 100.0 * tol);
    }
}

TEST_CASE("lift independence: N = 1 has a single lift and zero deviation") {
    const auto psi = product_state({packet({0.0}, {0.7}, 0.7)}, ModelParams::natural(1, 1));
    const auto rep = lift_independence_check(*psi, project(OrderedConfiguration(1, 1, {0.2})), 0.0, 0.5,
                                             psi->params());
    CHECK(rep.lifts_integrated == 1);
    CHECK(rep.max_quotient_deviation == 0.0);
}

TEST_CASE("lift independence refuses a wave function violating the periodicity condition") {
    const auto prod = product_state({packet({-1.0}, {1.0}, 0.7), packet({1.0}, {-1.0}, 0.7)},
                                    ModelParams::natural(2, 1));
    CHECK_THROWS_AS(lift_independence_check(*prod, project(OrderedConfiguration(2, 1, {-1.0, 1.0})),
                                            0.0, 1.0, prod->params()),
                    PeriodicityViolation);
}

TEST_CASE("min_pair_distance: static symmetric state keeps its initial separation") {
    const auto psi = antisymmetrize({packet({-1.0}, {0.0}, 0.6), packet({1.0}, {0.0}, 0.6)},
                                    ModelParams::natural(2, 1));
    const auto q0 = project(OrderedConfiguration(2, 1, {-1.0, 1.0}));
    const auto traj = integrate_trajectory(*psi, q0, 0.0, 0.5, psi->params());
    // fermionic repulsion only pushes the symmetric pair apart
    CHECK(min_pair_distance(traj) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("head-on fermions never meet; bosons approach closer") {
    const auto q0 = project(OrderedConfiguration(2, 1, {-1.0, 1.0}));
    const auto fermi = headon_fermions(2.0, 0.5);
    const auto bose = headon_bosons(2.0, 0.5);
    const auto tf = integrate_trajectory(*fermi, q0, 0.0, 1.0, fermi->params());
    const auto tb = integrate_trajectory(*bose, q0, 0.0, 1.0, bose->params());
    const double df = min_pair_distance(tf);
    const double db = min_pair_distance(tb);
    CHECK(df > 0.0);
    CHECK(db > 0.0);
    CHECK(db < df);  // exchange repulsion is a fermionic effect
    CHECK(crossing_check_1d(tf));
    CHECK(crossing_check_1d(tb));
}

TEST_CASE("crossing detector flags a synthetic crossing path") {
    Trajectory fake;
    for (int s = 0; s <= 10; ++s) {
        const double t = s / 10.0;
        // particle 0 walks through particle 1
        fake.times.push_back(t);
        fake.lift_states.emplace_back(2, 1, std::vector<double>{-1.0 + 3.0 * t, 0.5});
    }
    CHECK(!crossing_check_1d(fake));

    Trajectory still;
    still.times = {0.0};
    still.lift_states.emplace_back(2, 1, std::vector<double>{-1.0, 0.5});
    CHECK(crossing_check_1d(still));
}

TEST_CASE("crossing_check_1d requires d = 1") {
    Trajectory t2;
    t2.times = {0.0};
    t2.lift_states.emplace_back(1, 2, std::vector<double>{0.0, 0.0});
    CHECK_THROWS_AS(crossing_check_1d(t2), std::invalid_argument);
}

TEST_CASE("time reversal: conjugated psi retraces the flow") {
    const double tol = 1e-8;
    const auto psi = headon_fermions();
    const auto q0 = project(OrderedConfiguration(2, 1, {-1.4, 0.6}));
    const auto q1 = propagate(*psi, q0, 0.0, 1.0, psi->params(), tol);
    const TimeReversedWaveFunction rev(psi, 1.0);
    const auto back = propagate(rev, q1, 0.0, 1.0, psi->params(), tol);
    CHECK(quotient_distance(back, q0) < 100.0 * tol);
}

TEST_CASE("1D ordering is preserved on random fermionic trajectories") {
    Rng rng(2024);
    const auto psi = headon_fermions(1.5, 0.6);
    int runs = 0;
    while (runs < 20) {
        const double a = rng.normal(-1.0, 0.5);
        const double b = rng.normal(1.0, 0.5);
        if (std::abs(a - b) < 0.2) continue;
        ++runs;
        const auto q0 = project(OrderedConfiguration(2, 1, {a, b}));
        const auto traj = integrate_trajectory(*psi, q0, 0.0, 1.0, psi->params());
        CHECK(crossing_check_1d(traj));
        CHECK(min_pair_distance(traj) > 0.0);
        CHECK(traj.min_abs_psi > 0.0);
    }
}

TEST_CASE("integrate_trajectory validates inputs") {
    const auto psi = headon_fermions();
    const auto q0 = project(OrderedConfiguration(2, 1, {-1.0, 1.0}));
    CHECK_THROWS_AS(integrate_trajectory(*psi, q0, 1.0, 0.5, psi->params()), std::invalid_argument);
    IntegrateOptions opt;
    opt.samples = 1;
    CHECK_THROWS_AS(integrate_trajectory(*psi, q0, 0.0, 1.0, psi->params(), opt), std::invalid_argument);
}
