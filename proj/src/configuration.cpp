#include "bohmlab/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bohmlab/errors.hpp"

namespace bohmlab {

OrderedConfiguration::OrderedConfiguration(int n, int d, std::vector<double> c)
    : particles(n), dim(d), coords(std::move(c)) {
    if (n < 1 || d < 1) throw std::invalid_argument("OrderedConfiguration: need N >= 1, d >= 1");
    if (coords.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(d))
        throw std::invalid_argument("OrderedConfiguration: coordinate count != N*d");
    for (double x : coords)
        if (!std::isfinite(x)) throw std::invalid_argument("OrderedConfiguration: non-finite coordinate");
}

double min_pairwise_distance(const OrderedConfiguration& q) {
    if (q.particles < 2) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < q.particles; ++i)
        for (int j = i + 1; j < q.particles; ++j) {
            double s = 0.0;
            for (int a = 0; a < q.dim; ++a) {
                const double diff = q.point(i)[static_cast<std::size_t>(a)] - q.point(j)[static_cast<std::size_t>(a)];
                s += diff * diff;
            }
            best = std::min(best, std::sqrt(s));
        }
    return best;
}

UnorderedConfiguration project(const OrderedConfiguration& q) {
    if (min_pairwise_distance(q) <= kCoincidenceEps)
        throw CoincidenceError("project: coincident points (configuration off the quotient manifold)");
    std::vector<int> order(static_cast<std::size_t>(q.particles));
    for (int i = 0; i < q.particles; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto pa = q.point(a), pb = q.point(b);
        return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
    });
    std::vector<double> sorted;
    sorted.reserve(q.coords.size());
    for (int i : order) {
        const auto p = q.point(i);
        sorted.insert(sorted.end(), p.begin(), p.end());
    }
    UnorderedConfiguration out;
    out.rep_ = OrderedConfiguration(q.particles, q.dim, std::move(sorted));
    return out;
}

OrderedConfiguration apply_to_configuration(const Permutation& sigma, const OrderedConfiguration& q) {
    if (sigma.size() != q.particles) throw std::invalid_argument("apply_to_configuration: size mismatch");
    std::vector<double> out(q.coords.size());
    for (int i = 0; i < q.particles; ++i) {
        const auto src = q.point(i);
        std::copy(src.begin(), src.end(),
                  out.begin() + static_cast<std::ptrdiff_t>(sigma(i)) * q.dim);
    }
    return OrderedConfiguration(q.particles, q.dim, std::move(out));
}

namespace {

template <typename T>
std::vector<T> apply_blocks_impl(const Permutation& sigma, std::span<const T> v, int dim) {
    const int n = sigma.size();
    if (v.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(dim))
        throw std::invalid_argument("apply_to_blocks: size mismatch");
    std::vector<T> out(v.size());
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < dim; ++a)
            out[static_cast<std::size_t>(sigma(i)) * dim + static_cast<std::size_t>(a)] =
                v[static_cast<std::size_t>(i) * dim + static_cast<std::size_t>(a)];
    return out;
}

}  // namespace

std::vector<double> apply_to_blocks(const Permutation& sigma, std::span<const double> v, int dim) {
    return apply_blocks_impl(sigma, v, dim);
}

std::vector<std::complex<double>> apply_to_blocks(const Permutation& sigma,
                                                  std::span<const std::complex<double>> v, int dim) {
    return apply_blocks_impl(sigma, v, dim);
}

std::vector<OrderedConfiguration> lifts(const UnorderedConfiguration& q) {
    const auto sigmas = enumerate_elements(q.particles());
    std::vector<OrderedConfiguration> out;
    out.reserve(sigmas.size());
    for (const auto& sigma : sigmas) out.push_back(apply_to_configuration(sigma, q.canonical_lift()));
    return out;
}

double quotient_distance(const UnorderedConfiguration& q1, const UnorderedConfiguration& q2) {
    if (q1.particles() != q2.particles() || q1.dim() != q2.dim())
        throw std::invalid_argument("quotient_distance: shape mismatch");
    const auto& a = q1.canonical_lift();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& sigma : enumerate_elements(q1.particles())) {
        const auto b = apply_to_configuration(sigma, q2.canonical_lift());
        double s = 0.0;
        for (std::size_t k = 0; k < a.coords.size(); ++k) {
            const double diff = a.coords[k] - b.coords[k];
            s += diff * diff;
        }
        best = std::min(best, s);
    }
    return std::sqrt(best);
}

}  // namespace bohmlab
