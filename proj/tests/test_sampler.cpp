#include "doctest.h"

#include <cmath>

#include "bohmlab/equivariance.hpp"
#include "bohmlab/rng.hpp"
#include "bohmlab/sampler.hpp"
#include "oracles.hpp"

using namespace bohmlab;

namespace {

GaussianPacket packet(std::vector<double> c, std::vector<double> k, double w) {
    GaussianPacket p;
    p.center = std::move(c);
    p.momentum = std::move(k);
    p.width = w;
    return p;
}

std::shared_ptr<PacketWaveFunction> single_packet() {
    return product_state({packet({0.5}, {0.0}, 0.8)}, ModelParams::natural(1, 1));
}

double mean_coordinate(const Ensemble& e, int c) {
    double s = 0.0;
    for (const auto& m : e.members) s += m.canonical_lift().coords[static_cast<std::size_t>(c)];
    return s / static_cast<double>(e.members.size());
}

}  // namespace

TEST_CASE("sample_density: n = 1 yields a single valid configuration") {
    const auto psi = single_packet();
    const auto e = sample_density(*psi, 0.0, 1, 99);
    REQUIRE(e.members.size() == 1);
    CHECK(e.members.front().particles() == 1);
    CHECK(e.time == 0.0);
    CHECK(e.provenance == Provenance::sampled_from_density);
}

TEST_CASE("sample mean matches the packet center within 3 sigma / sqrt(n)") {
    const auto psi = single_packet();
    const int n = 20000;
    SamplerConfig cfg;
    cfg.thinning = 30;  // decorrelates draws enough for the iid bound
    const auto e = sample_density(*psi, 0.0, n, 1234, cfg);
    const double tol = 3.0 * 0.8 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(mean_coordinate(e, 0) - 0.5) < tol);
}

TEST_CASE("sampler is deterministic bit-for-bit given the seed") {
    const auto psi = antisymmetrize({packet({-1.0}, {1.0}, 0.7), packet({1.0}, {-1.0}, 0.7)},
                                    ModelParams::natural(2, 1));
    const auto a = sample_density(*psi, 0.0, 500, 777);
    const auto b = sample_density(*psi, 0.0, 500, 777);
    REQUIRE(a.members.size() == b.members.size());
    for (std::size_t i = 0; i < a.members.size(); ++i) CHECK(a.members[i] == b.members[i]);
    const auto c = sample_density(*psi, 0.0, 500, 778);
    bool any_different = false;
    for (std::size_t i = 0; i < a.members.size(); ++i)
        if (!(a.members[i] == c.members[i])) any_different = true;
    CHECK(any_different);
}

TEST_CASE("fermionic near-diagonal suppression matches the quadrature oracle") {
    const auto params = ModelParams::natural(2, 1);
    const double w = 0.7;
    const auto make = [&](Statistics s) {
        return std::make_shared<PacketWaveFunction>(
            std::vector<GaussianPacket>{packet({-0.6}, {0.0}, w), packet({0.6}, {0.0}, w)}, s, params);
    };
    const auto fermi = make(Statistics::fermion);
    const auto bose = make(Statistics::boson);

    const double band = 0.1 * w;
    const auto band_probability = [&](const WaveFunction& psi) {
        return oracles::riemann_2d(
            [&](double x, double y) {
                if (std::abs(x - y) >= band) return 0.0;
                const double q[2] = {x, y};
                const double a = std::abs(psi.value(std::span<const double>(q, 2), 0.0));
                return a * a;
            },
            -6, 6, -6, 6, 1200, 1200);
    };
    const double pf = band_probability(*fermi);
    const double pb = band_probability(*bose);
    CHECK(pf < 0.2 * pb);  // exclusion suppresses the near-diagonal band

    const int n = 20000;
    const auto count_band = [&](const Ensemble& e) {
        int c = 0;
        for (const auto& m : e.members) {
            const auto& q = m.canonical_lift().coords;
            if (std::abs(q[0] - q[1]) < band) ++c;
        }
        return static_cast<double>(c) / static_cast<double>(e.members.size());
    };
    const double ff = count_band(sample_density(*fermi, 0.0, n, 31));
    const double fb = count_band(sample_density(*bose, 0.0, n, 32));
    const double se_b = 3.0 * std::sqrt(pb / n) + 3.0 / n;
    CHECK(std::abs(ff - pf) < 5e-3);  // pf is ~1e-4; generous absolute margin
    CHECK(std::abs(fb - pb) < 5.0 * se_b);
    CHECK(ff < fb);
}

TEST_CASE("multi-chain sampler agrees with the single-chain reference") {
    const auto psi = single_packet();
    const auto multi = sample_density(*psi, 0.0, 8000, 555);
    const auto single = sample_density_single_chain(*psi, 0.0, 8000, 556);
    const auto marginals = marginal_cdfs(*psi, 0.0);
    std::vector<double> vm, vs;
    for (const auto& m : multi.members) vm.push_back(m.canonical_lift().coords[0]);
    for (const auto& m : single.members) vs.push_back(m.canonical_lift().coords[0]);
    // both pass a KS test against the analytic marginal at a loose level
    CHECK(ks_statistic(vm, marginals[0]) < 2.0 * ks_critical_99(8000));
    CHECK(ks_statistic(vs, marginals[0]) < 2.0 * ks_critical_99(8000));
}

TEST_CASE("metropolis sample agrees with a rejection-sampler cross-check") {
    const auto psi = single_packet();
    // rejection sampling from |psi|^2 on a box (test-local reference)
    Rng rng(2718);
    std::vector<double> rejection;
    const double peak = psi->amplitude_scale(0.0);
    while (rejection.size() < 8000) {
        const double x = rng.uniform(-4.0, 5.0);
        const double a = std::abs(psi->value(std::span<const double>(&x, 1), 0.0));
        if (rng.uniform() * peak * peak < a * a) rejection.push_back(x);
    }
    const auto metro = sample_density(*psi, 0.0, 8000, 999);
    std::vector<double> vm;
    for (const auto& m : metro.members) vm.push_back(m.canonical_lift().coords[0]);

    const auto marginals = marginal_cdfs(*psi, 0.0);
    CHECK(ks_statistic(rejection, marginals[0]) < 2.0 * ks_critical_99(8000));
    CHECK(ks_statistic(vm, marginals[0]) < 2.0 * ks_critical_99(8000));
}

TEST_CASE("acceptance-rate diagnostics attach a warning for a bad proposal scale") {
    const auto psi = single_packet();
    SamplerConfig cfg;
    cfg.proposal_scale = 100.0;  // nearly every proposal lands in the tails
    const auto e = sample_density(*psi, 0.0, 200, 4, cfg);
    REQUIRE(!e.warnings.empty());
    CHECK(e.warnings.front().find("acceptance rate") != std::string::npos);
}

TEST_CASE("samples respect the coincidence exclusion") {
    const auto psi = antisymmetrize({packet({-0.3}, {0.0}, 0.5), packet({0.3}, {0.0}, 0.5)},
                                    ModelParams::natural(2, 1));
    const auto e = sample_density(*psi, 0.0, 3000, 11);
    for (const auto& m : e.members)
        CHECK(min_pairwise_distance(m.canonical_lift()) > kCoincidenceEps);
}
