#include "bohmlab/quadrature.hpp"

#include <cmath>

#include "bohmlab/errors.hpp"

namespace bohmlab {

double simpson_1d(const std::function<double(double)>& f, double a, double b, int intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

double simpson_2d(const std::function<double(double, double)>& f, double ax, double bx, double ay,
                  double by, int intervals_x, int intervals_y) {
    return simpson_1d(
        [&](double x) {
            return simpson_1d([&](double y) { return f(x, y); }, ay, by, intervals_y);
        },
        ax, bx, intervals_x);
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, double rel_tol,
                    double abs_tol, int intervals, int max_refinements) {
    double prev = simpson_1d(f, a, b, intervals);
    for (int r = 0; r < max_refinements; ++r) {
        intervals *= 2;
        const double cur = simpson_1d(f, a, b, intervals);
        const double err = std::abs(cur - prev);
        if (err <= rel_tol * std::abs(cur) + abs_tol) return cur;
        prev = cur;
    }
    throw QuadratureError("integrate_1d: refinement stalled", prev, std::abs(prev) * rel_tol);
}

double integrate_2d(const std::function<double(double, double)>& f, double ax, double bx, double ay,
                    double by, double rel_tol, double abs_tol, int intervals, int max_refinements) {
    double prev = simpson_2d(f, ax, bx, ay, by, intervals, intervals);
    for (int r = 0; r < max_refinements; ++r) {
        intervals *= 2;
        const double cur = simpson_2d(f, ax, bx, ay, by, intervals, intervals);
        const double err = std::abs(cur - prev);
        if (err <= rel_tol * std::abs(cur) + abs_tol) return cur;
        prev = cur;
    }
    throw QuadratureError("integrate_2d: refinement stalled", prev, std::abs(prev) * rel_tol);
}

}  // namespace bohmlab
