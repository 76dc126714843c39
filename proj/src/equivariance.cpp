#include "bohmlab/equivariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bohmlab/csvio.hpp"
#include "bohmlab/errors.hpp"
#include "bohmlab/guidance.hpp"
#include "bohmlab/rng.hpp"

namespace bohmlab {

namespace {

/// |psi|^2 at an ordered pair (u, v) read as the flat configuration.
double rho(const WaveFunction& psi, double t, double u, double v) {
    const double q[2] = {u, v};
    const double a = std::abs(psi.value(std::span<const double>(q, 2), t));
    return a * a;
}

void require_quotient_2d(const WaveFunction& psi, const char* who) {
    if (psi.particles() * psi.dim() != 2 && psi.particles() * psi.dim() != 1)
        throw std::invalid_argument(std::string(who) + ": supported for total dimension <= 2");
}

}  // namespace

Ensemble transport_ensemble(const WaveFunction& psi, const Ensemble& e, double t1,
                            const ModelParams& params, const TransportOptions& opt) {
    if (e.members.empty()) throw std::invalid_argument("transport_ensemble: empty ensemble");
    if (t1 < e.time) throw std::invalid_argument("transport_ensemble: t1 must be >= ensemble time");

    Ensemble out;
    out.time = t1;
    out.seed = e.seed;
    out.provenance = Provenance::transported;
    out.warnings = e.warnings;
    out.members.resize(e.members.size());
    if (t1 == e.time) {
        out.members = e.members;
        return out;
    }

    std::vector<char> failed(e.members.size(), 0);
    parallel_for(e.members.size(), opt.exec, [&](std::size_t m) {
        try {
            out.members[m] = propagate(psi, e.members[m], e.time, t1, params, opt.tol);
        } catch (const NodeProximityError&) {
            out.members[m] = e.members[m];
            failed[m] = 1;
        } catch (const IntegrationStalled&) {
            out.members[m] = e.members[m];
            failed[m] = 1;
        }
    });
    for (char f : failed) out.transport_failures += f;
    const double frac = static_cast<double>(out.transport_failures) / static_cast<double>(e.members.size());
    if (frac > opt.max_failure_fraction)
        throw TransportDegraded("transport_ensemble: " + std::to_string(out.transport_failures) +
                                " members failed to transport");
    if (out.transport_failures > 0)
        out.warnings.push_back(std::to_string(out.transport_failures) +
                               " members failed to transport and kept their initial state");
    return out;
}

int QuotientBins::bucket_of(const UnorderedConfiguration& q) const {
    const auto& c = q.canonical_lift().coords;
    const double w = (hi - lo) / bins_per_axis;
    const int bx = static_cast<int>(std::floor((c[0] - lo) / w));
    const int by = static_cast<int>(std::floor((c[1] - lo) / w));
    if (bx < 0 || by < 0 || bx >= bins_per_axis || by >= bins_per_axis) return kept_cells();
    const int cell = cell_of_pair[static_cast<std::size_t>(bx) * bins_per_axis + static_cast<std::size_t>(by)];
    return cell < 0 ? kept_cells() : cell;
}

QuotientBins build_quotient_bins(const WaveFunction& psi, double t, int bins_per_axis,
                                 double min_cell_probability, int subgrid) {
    if (psi.particles() != 2 || psi.dim() != 1)
        throw std::invalid_argument("build_quotient_bins: N = 2, d = 1 only");
    std::vector<double> lo, hi;
    psi.support_box(t, lo, hi);
    QuotientBins bins;
    bins.lo = std::min(lo[0], lo[1]);
    bins.hi = std::max(hi[0], hi[1]);
    bins.bins_per_axis = bins_per_axis;

    const double w = (bins.hi - bins.lo) / bins_per_axis;
    const double sub = w / subgrid;
    std::vector<double> raw(static_cast<std::size_t>(bins_per_axis) * static_cast<std::size_t>(bins_per_axis), 0.0);
    // quotient density at sorted (u <= v): rho(u,v) + rho(v,u); midpoint
    // rule on a subgrid per cell, cells below the diagonal get no mass
    for (int bx = 0; bx < bins_per_axis; ++bx)
        for (int by = bx; by < bins_per_axis; ++by) {
            double mass = 0.0;
            for (int sx = 0; sx < subgrid; ++sx)
                for (int sy = 0; sy < subgrid; ++sy) {
                    const double u = bins.lo + bx * w + (sx + 0.5) * sub;
                    const double v = bins.lo + by * w + (sy + 0.5) * sub;
                    if (u < v) mass += rho(psi, t, u, v) + rho(psi, t, v, u);
                }
            raw[static_cast<std::size_t>(bx) * bins_per_axis + static_cast<std::size_t>(by)] = mass * sub * sub;
        }

    bins.cell_of_pair.assign(raw.size(), -1);
    double kept_total = 0.0;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        if (raw[k] >= min_cell_probability) {
            bins.cell_of_pair[k] = static_cast<int>(bins.cell_probability.size());
            bins.cell_probability.push_back(raw[k]);
            kept_total += raw[k];
        }
    }
    bins.other_probability = std::max(1.0 - kept_total, 0.0);
    if (bins.cell_probability.empty())
        throw std::invalid_argument("build_quotient_bins: no cell carries enough probability");
    return bins;
}

std::vector<TabulatedCdf> marginal_cdfs(const WaveFunction& psi, double t, int grid_points) {
    require_quotient_2d(psi, "marginal_cdfs");
    std::vector<double> lo, hi;
    psi.support_box(t, lo, hi);

    if (psi.particles() * psi.dim() == 1) {
        const auto cdf = cdf_from_density(
            [&](double x) {
                const double a = std::abs(psi.value(std::span<const double>(&x, 1), t));
                return a * a;
            },
            lo[0], hi[0], grid_points);
        return {cdf};
    }

    // N = 2, d = 1: canonical coordinates are (min, max)
    const double a = std::min(lo[0], lo[1]);
    const double b = std::max(hi[0], hi[1]);
    const int g = grid_points;
    std::vector<double> xs(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) xs[static_cast<std::size_t>(i)] = a + (b - a) * i / (g - 1);
    std::vector<double> grid(static_cast<std::size_t>(g) * static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            grid[static_cast<std::size_t>(i) * g + static_cast<std::size_t>(j)] =
                rho(psi, t, xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)]);

    // quotient density at a sorted pair: rho(u,v) + rho(v,u)
    const double h = xs[1] - xs[0];
    auto rho_q = [&](int i, int j) {
        return grid[static_cast<std::size_t>(i) * g + static_cast<std::size_t>(j)] +
               grid[static_cast<std::size_t>(j) * g + static_cast<std::size_t>(i)];
    };
    // f_min(u_i) integrates the partner from u_i up; f_max(v_j) from
    // below, trapezoid rule on the grid
    std::vector<double> f_min(static_cast<std::size_t>(g), 0.0), f_max(static_cast<std::size_t>(g), 0.0);
    for (int i = 0; i < g; ++i) {
        double s = 0.0;
        for (int j = i; j + 1 < g; ++j) s += 0.5 * (rho_q(i, j) + rho_q(i, j + 1)) * h;
        f_min[static_cast<std::size_t>(i)] = s;
    }
    for (int j = 0; j < g; ++j) {
        double s = 0.0;
        for (int i = 0; i + 1 <= j; ++i) s += 0.5 * (rho_q(i, j) + rho_q(i + 1, j)) * h;
        f_max[static_cast<std::size_t>(j)] = s;
    }

    return {cdf_from_samples_grid(xs, std::move(f_min)), cdf_from_samples_grid(xs, std::move(f_max))};
}

GofReport distribution_distance(const Ensemble& e, const WaveFunction& psi, double t,
                                const GofThresholds& thresholds, const QuotientBins& bins,
                                const std::vector<TabulatedCdf>& marginals) {
    if (e.members.empty()) throw std::invalid_argument("distribution_distance: empty ensemble");
    if (e.members.front().particles() != psi.particles() || e.members.front().dim() != psi.dim())
        throw std::invalid_argument("distribution_distance: ensemble/psi shape mismatch");
    if (e.time != t)
        throw std::invalid_argument("distribution_distance: ensemble time stamp must equal t");
    const int coords = e.members.front().particles() * e.members.front().dim();
    if (static_cast<std::size_t>(coords) != marginals.size())
        throw std::invalid_argument("distribution_distance: marginal count mismatch");

    GofReport rep;
    rep.thresholds = thresholds;
    for (int c = 0; c < coords; ++c) {
        std::vector<double> vals;
        vals.reserve(e.members.size());
        for (const auto& m : e.members)
            vals.push_back(m.canonical_lift().coords[static_cast<std::size_t>(c)]);
        rep.ks_per_coordinate.push_back(ks_statistic(std::move(vals), marginals[static_cast<std::size_t>(c)]));
    }
    rep.ks_max = *std::max_element(rep.ks_per_coordinate.begin(), rep.ks_per_coordinate.end());

    if (coords == 2) {
        std::vector<long> observed(static_cast<std::size_t>(bins.kept_cells()) + 1, 0);
        for (const auto& m : e.members) ++observed[static_cast<std::size_t>(bins.bucket_of(m))];
        auto expected = bins.cell_probability;
        expected.push_back(bins.other_probability);
        rep.chi2 = chi_squared(observed, expected, static_cast<long>(e.members.size()));
    }

    rep.ks_pass = rep.ks_max < thresholds.ks;
    rep.chi2_pass = coords != 2 || rep.chi2 < thresholds.chi2;
    rep.pass = rep.ks_pass && rep.chi2_pass;
    return rep;
}

GofThresholds calibrate_thresholds(const WaveFunction& psi, double t, int n, std::uint64_t seed,
                                   int replicates, const SamplerConfig& sampler_cfg,
                                   const QuotientBins& bins, const std::vector<TabulatedCdf>& marginals) {
    if (replicates < 10) throw std::invalid_argument("calibrate_thresholds: need >= 10 replicates");
    std::vector<double> ks_null, chi2_null;
    ks_null.reserve(static_cast<std::size_t>(replicates));
    chi2_null.reserve(static_cast<std::size_t>(replicates));
    GofThresholds open;  // permissive thresholds while collecting the null
    open.ks = 1e9;
    open.chi2 = 1e9;
    for (int b = 0; b < replicates; ++b) {
        const auto fresh = sample_density(psi, t, n, mix_seed(seed, 7000 + static_cast<std::uint64_t>(b)),
                                          sampler_cfg);
        const auto rep = distribution_distance(fresh, psi, t, open, bins, marginals);
        ks_null.push_back(rep.ks_max);
        chi2_null.push_back(rep.chi2);
    }
    GofThresholds th;
    th.from_bootstrap = true;
    th.bootstrap_replicates = replicates;
    th.ks = std::min(empirical_percentile(ks_null, 0.99), 1.5 * ks_critical_99(n));
    th.chi2 = empirical_percentile(chi2_null, 0.99);
    return th;
}

void export_ensemble_csv(const Ensemble& e, const std::string& path) {
    if (e.members.empty()) throw std::invalid_argument("export_ensemble_csv: empty ensemble");
    std::string body = configuration_header(e.members.front().particles(), e.members.front().dim()) + "\n";
    for (const auto& m : e.members) body += configuration_row(m) + "\n";
    write_file_atomic(path, body);
}

void export_report(const GofReport& rep, const std::string& path) {
    std::string body;
    for (std::size_t c = 0; c < rep.ks_per_coordinate.size(); ++c)
        body += "ks_coordinate" + std::to_string(c) + " = " + format_double(rep.ks_per_coordinate[c]) + "\n";
    body += "ks_max = " + format_double(rep.ks_max) + "\n";
    body += "ks_threshold = " + format_double(rep.thresholds.ks) + "\n";
    body += "ks_pass = " + std::string(rep.ks_pass ? "true" : "false") + "\n";
    body += "chi2 = " + format_double(rep.chi2) + "\n";
    body += "chi2_threshold = " + format_double(rep.thresholds.chi2) + "\n";
    body += "chi2_pass = " + std::string(rep.chi2_pass ? "true" : "false") + "\n";
    body += "thresholds_from_bootstrap = " + std::string(rep.thresholds.from_bootstrap ? "true" : "false") + "\n";
    body += "bootstrap_replicates = " + std::to_string(rep.thresholds.bootstrap_replicates) + "\n";
    body += "pass = " + std::string(rep.pass ? "true" : "false") + "\n";
    write_file_atomic(path, body);
}

}  // namespace bohmlab
