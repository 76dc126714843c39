#pragma once

#include <functional>

namespace bohmlab {

/// Composite Simpson rule with `intervals` subintervals (rounded up to
/// even).
double simpson_1d(const std::function<double(double)>& f, double a, double b, int intervals);
double simpson_2d(const std::function<double(double, double)>& f, double ax, double bx, double ay,
                  double by, int intervals_x, int intervals_y);

/// Refines Simpson until successive estimates agree to
/// rel_tol*|I| + abs_tol, starting from `intervals`. Throws
/// QuadratureError carrying the last estimate when max_refinements is
/// exhausted.
double integrate_1d(const std::function<double(double)>& f, double a, double b, double rel_tol,
                    double abs_tol = 0.0, int intervals = 64, int max_refinements = 12);
double integrate_2d(const std::function<double(double, double)>& f, double ax, double bx, double ay,
                    double by, double rel_tol, double abs_tol = 0.0, int intervals = 32,
                    int max_refinements = 8);

}  // namespace bohmlab
