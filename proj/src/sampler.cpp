#include "bohmlab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bohmlab/errors.hpp"
#include "bohmlab/rng.hpp"

namespace bohmlab {

namespace {

struct ChainResult {
    std::vector<UnorderedConfiguration> draws;
    long proposals = 0;
    long accepted = 0;
};

double target_density(const WaveFunction& psi, const std::vector<double>& q, double t, int n, int d) {
    // zero on the coincidence band: those points are off the quotient
    if (n >= 2) {
        const OrderedConfiguration oc(n, d, q);
        if (min_pairwise_distance(oc) <= kCoincidenceEps) return 0.0;
    }
    const double a = std::abs(psi.value(std::span<const double>(q), t));
    return a * a;
}

double proposal_sd(const WaveFunction& psi, double t, const SamplerConfig& cfg) {
    if (cfg.proposal_scale > 0.0) return cfg.proposal_scale;
    // width scale from the support box (box spans ~16 widths per axis)
    std::vector<double> lo, hi;
    psi.support_box(t, lo, hi);
    double w = hi[0] - lo[0];
    for (std::size_t k = 1; k < lo.size(); ++k) w = std::min(w, hi[k] - lo[k]);
    return cfg.proposal_scale_factor * (w / 16.0);
}

ChainResult run_chain(const WaveFunction& psi, double t, int draws_wanted, std::uint64_t chain_seed,
                      const SamplerConfig& cfg, double sd) {
    const int n = psi.particles();
    const int d = psi.dim();
    const std::size_t dn = static_cast<std::size_t>(n) * static_cast<std::size_t>(d);
    Rng rng(chain_seed);

    // deterministic start: support-box center, blocks spread out along
    // the first axis, small seeded jitter
    std::vector<double> lo, hi;
    psi.support_box(t, lo, hi);
    std::vector<double> q(dn);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < d; ++a) {
            const std::size_t k = static_cast<std::size_t>(i) * d + static_cast<std::size_t>(a);
            const double mid = 0.5 * (lo[k] + hi[k]);
            const double span = hi[k] - lo[k];
            const double offset = (a == 0 && n > 1)
                                      ? span * 0.25 * (2.0 * i / (n - 1) - 1.0)
                                      : 0.0;
            q[k] = mid + offset + 0.01 * sd * rng.normal();
        }
    double density = target_density(psi, q, t, n, d);
    // nudge until the start has positive density
    int guard = 0;
    while (density <= 0.0) {
        for (auto& x : q) x += sd * rng.normal();
        density = target_density(psi, q, t, n, d);
        if (++guard > 10000)
            throw std::invalid_argument("sample_density: cannot find a positive-density start");
    }

    ChainResult res;
    res.draws.reserve(static_cast<std::size_t>(draws_wanted));
    std::vector<double> prop(dn);
    const long total_steps = cfg.burn_in + static_cast<long>(draws_wanted) * cfg.thinning;
    for (long s = 1; s <= total_steps; ++s) {
        for (std::size_t k = 0; k < dn; ++k) prop[k] = q[k] + sd * rng.normal();
        const double pd = target_density(psi, prop, t, n, d);
        ++res.proposals;
        if (pd > 0.0 && (pd >= density || rng.uniform() < pd / density)) {
            q = prop;
            density = pd;
            ++res.accepted;
        }
        if (s > cfg.burn_in && (s - cfg.burn_in) % cfg.thinning == 0)
            res.draws.push_back(project(OrderedConfiguration(n, d, q)));
    }
    return res;
}

Ensemble assemble(const WaveFunction& psi, double t, int n_samples, std::uint64_t seed,
                  const SamplerConfig& cfg, int chains) {
    if (n_samples < 1) throw std::invalid_argument("sample_density: need n >= 1");
    const double sd = proposal_sd(psi, t, cfg);
    const int per_chain = (n_samples + chains - 1) / chains;

    std::vector<ChainResult> results(static_cast<std::size_t>(chains));
    parallel_for(static_cast<std::size_t>(chains), cfg.exec, [&](std::size_t c) {
        results[c] = run_chain(psi, t, per_chain, mix_seed(seed, c), cfg, sd);
    });

    Ensemble e;
    e.time = t;
    e.seed = seed;
    e.provenance = Provenance::sampled_from_density;
    e.members.reserve(static_cast<std::size_t>(n_samples));
    long proposals = 0, accepted = 0;
    for (const auto& r : results) {  // merged deterministically in seed order
        for (const auto& m : r.draws) {
            if (e.members.size() < static_cast<std::size_t>(n_samples)) e.members.push_back(m);
        }
        proposals += r.proposals;
        accepted += r.accepted;
    }
    const double rate = proposals > 0 ? static_cast<double>(accepted) / static_cast<double>(proposals) : 0.0;
    if (rate < 0.1 || rate > 0.9)
        e.warnings.push_back("metropolis acceptance rate " + std::to_string(rate) +
                             " outside [0.1, 0.9]; check proposal scale");
    return e;
}

}  // namespace

Ensemble sample_density(const WaveFunction& psi, double t, int n, std::uint64_t seed,
                        const SamplerConfig& cfg) {
    return assemble(psi, t, n, seed, cfg, std::max(1, cfg.chains));
}

Ensemble sample_density_single_chain(const WaveFunction& psi, double t, int n, std::uint64_t seed,
                                     const SamplerConfig& cfg) {
    return assemble(psi, t, n, seed, cfg, 1);
}

}  // namespace bohmlab
