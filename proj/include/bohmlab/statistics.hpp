#pragma once

#include <functional>
#include <vector>

namespace bohmlab {

/// CDF tabulated on a uniform grid (cumulative trapezoid of a density,
/// normalized to 1); evaluation is linear interpolation, clamped.
struct TabulatedCdf {
    std::vector<double> x;
    std::vector<double> cdf;

    double operator()(double v) const;
};

TabulatedCdf cdf_from_density(const std::function<double(double)>& density, double lo, double hi,
                              int points);
TabulatedCdf cdf_from_samples_grid(const std::vector<double>& grid_x, std::vector<double> density);

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_statistic(std::vector<double> values, const TabulatedCdf& target);

/// Asymptotic one-sample critical value at the 1% level, 1.63 / sqrt(n).
double ks_critical_99(int n);

/// Pearson statistic sum (O_c - n p_c)^2 / (n p_c).
double chi_squared(const std::vector<long>& observed, const std::vector<double>& expected_p, long n);

/// p-th empirical percentile (0 <= p <= 1) by order statistic.
double empirical_percentile(std::vector<double> values, double p);

}  // namespace bohmlab
