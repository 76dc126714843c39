#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bohmlab/configuration.hpp"
#include "bohmlab/parallel.hpp"
#include "bohmlab/wavefunction.hpp"

namespace bohmlab {

enum class Provenance { sampled_from_density, transported };

/// A set of quotient configurations at one time, with its generation
/// record. All members share N and d; none are coincident.
struct Ensemble {
    std::vector<UnorderedConfiguration> members;
    double time = 0.0;
    std::uint64_t seed = 0;
    Provenance provenance = Provenance::sampled_from_density;
    std::vector<std::string> warnings;
    int transport_failures = 0;

    std::size_t size() const { return members.size(); }
};

/// Random-walk Metropolis on the covering space targeting |psi_t|^2.
/// Proposals into the coincidence band have zero target density, so the
/// chain stays on the quotient. Chain count is fixed (not hardware
/// dependent) and per-chain seeds derive from the base seed, so output
/// is bit-identical for any ExecMode / thread count; chains are merged
/// in seed order.
struct SamplerConfig {
    int burn_in = 1000;
    int thinning = 10;
    double proposal_scale_factor = 0.5;  // times the smallest packet width scale
    double proposal_scale = 0.0;         // absolute; overrides the factor when > 0
    int chains = 8;
    ExecMode exec = ExecMode::openmp;
};

/// n draws from |psi_t|^2, projected to the quotient. Deterministic
/// given the seed. An aggregate acceptance rate outside [0.1, 0.9]
/// attaches a warning to the ensemble.
Ensemble sample_density(const WaveFunction& psi, double t, int n, std::uint64_t seed,
                        const SamplerConfig& cfg = {});

/// Single-chain reference sampler (same algorithm, one chain); kept for
/// validating the multi-chain path.
Ensemble sample_density_single_chain(const WaveFunction& psi, double t, int n, std::uint64_t seed,
                                     const SamplerConfig& cfg = {});

}  // namespace bohmlab
