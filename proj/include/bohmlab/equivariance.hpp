#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bohmlab/sampler.hpp"
#include "bohmlab/statistics.hpp"
#include "bohmlab/wavefunction.hpp"

namespace bohmlab {

struct TransportOptions {
    double tol = 1e-8;
    double max_failure_fraction = 0.001;
    ExecMode exec = ExecMode::openmp;
};

/// Integrates every member along the guidance flow from e.time to t1.
/// Member count is preserved; members whose integration fails stay at
/// their initial configuration and are counted in transport_failures.
/// More than max_failure_fraction failures raises TransportDegraded.
Ensemble transport_ensemble(const WaveFunction& psi, const Ensemble& e, double t1,
                            const ModelParams& params, const TransportOptions& opt = {});

/// Expected probabilities of a coarse rectangular binning of the
/// quotient (canonically sorted coordinates), for the d*N = 2 case.
/// Cells with too little mass are merged into an `other` bucket together
/// with the out-of-box mass.
struct QuotientBins {
    double lo = 0.0, hi = 0.0;
    int bins_per_axis = 8;
    std::vector<int> cell_of_pair;        // (bx * bins + by) -> kept-cell index or -1
    std::vector<double> cell_probability; // kept cells
    double other_probability = 0.0;

    int kept_cells() const { return static_cast<int>(cell_probability.size()); }
    /// Index into observed-count vector (kept cells + 1 for `other`).
    int bucket_of(const UnorderedConfiguration& q) const;
};

QuotientBins build_quotient_bins(const WaveFunction& psi, double t, int bins_per_axis = 8,
                                 double min_cell_probability = 1e-3, int subgrid = 8);

/// Marginal CDFs of the canonical coordinates of |psi_t|^2 on the
/// quotient, by dense-grid quadrature (d*N <= 2).
std::vector<TabulatedCdf> marginal_cdfs(const WaveFunction& psi, double t, int grid_points = 513);

struct GofThresholds {
    double ks = 0.0;
    double chi2 = 0.0;
    bool from_bootstrap = false;
    int bootstrap_replicates = 0;
};

struct GofReport {
    std::vector<double> ks_per_coordinate;
    double ks_max = 0.0;
    double chi2 = 0.0;
    GofThresholds thresholds;
    bool ks_pass = false;
    bool chi2_pass = false;
    bool pass = false;
};

/// Empirical-CDF max distances per canonical coordinate plus the binned
/// chi-squared statistic of the ensemble against |psi_t|^2.
GofReport distribution_distance(const Ensemble& e, const WaveFunction& psi, double t,
                                const GofThresholds& thresholds, const QuotientBins& bins,
                                const std::vector<TabulatedCdf>& marginals);

/// Null-distribution thresholds estimated by resampling: B fresh
/// ensembles of size n from the sampler, 99th percentiles of their
/// statistics. (Quotient coordinates are exchangeable but not
/// independent, so asymptotic critical values are not used directly;
/// 1.5x the asymptotic KS value caps runaway thresholds.)
GofThresholds calibrate_thresholds(const WaveFunction& psi, double t, int n, std::uint64_t seed,
                                   int replicates, const SamplerConfig& sampler_cfg,
                                   const QuotientBins& bins, const std::vector<TabulatedCdf>& marginals);

/// CSV with one member per row (canonical coordinates).
void export_ensemble_csv(const Ensemble& e, const std::string& path);

/// Key-value report with pass/fail per test.
void export_report(const GofReport& rep, const std::string& path);

}  // namespace bohmlab
