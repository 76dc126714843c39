#include "bohmlab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bohmlab {

double TabulatedCdf::operator()(double v) const {
    if (v <= x.front()) return 0.0;
    if (v >= x.back()) return 1.0;
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    const std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
    const double u = (v - x[k]) / (x[k + 1] - x[k]);
    return cdf[k] + u * (cdf[k + 1] - cdf[k]);
}

TabulatedCdf cdf_from_density(const std::function<double(double)>& density, double lo, double hi,
                              int points) {
    std::vector<double> xs(static_cast<std::size_t>(points)), ds(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
        ds[static_cast<std::size_t>(i)] = density(xs[static_cast<std::size_t>(i)]);
    }
    return cdf_from_samples_grid(xs, std::move(ds));
}

TabulatedCdf cdf_from_samples_grid(const std::vector<double>& grid_x, std::vector<double> density) {
    if (grid_x.size() < 2 || grid_x.size() != density.size())
        throw std::invalid_argument("cdf_from_samples_grid: bad grid");
    TabulatedCdf c;
    c.x = grid_x;
    c.cdf.resize(grid_x.size(), 0.0);
    for (std::size_t i = 1; i < grid_x.size(); ++i)
        c.cdf[i] = c.cdf[i - 1] + 0.5 * (density[i] + density[i - 1]) * (grid_x[i] - grid_x[i - 1]);
    const double total = c.cdf.back();
    if (!(total > 0.0)) throw std::invalid_argument("cdf_from_samples_grid: zero total mass");
    for (auto& v : c.cdf) v /= total;
    return c;
}

double ks_statistic(std::vector<double> values, const TabulatedCdf& target) {
    if (values.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = target(values[i]);
        worst = std::max(worst, std::abs(f - static_cast<double>(i) / n));
        worst = std::max(worst, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return worst;
}

double ks_critical_99(int n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

double chi_squared(const std::vector<long>& observed, const std::vector<double>& expected_p, long n) {
    if (observed.size() != expected_p.size())
        throw std::invalid_argument("chi_squared: size mismatch");
    double stat = 0.0;
    for (std::size_t c = 0; c < observed.size(); ++c) {
        const double expected = static_cast<double>(n) * std::max(expected_p[c], 1e-12);
        const double diff = static_cast<double>(observed[c]) - expected;
        stat += diff * diff / expected;
    }
    return stat;
}

double empirical_percentile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("empirical_percentile: empty sample");
    std::sort(values.begin(), values.end());
    const double rank = p * static_cast<double>(values.size() - 1);
    const std::size_t k = static_cast<std::size_t>(rank);
    if (k + 1 >= values.size()) return values.back();
    const double u = rank - static_cast<double>(k);
    return values[k] + u * (values[k + 1] - values[k]);
}

}  // namespace bohmlab
