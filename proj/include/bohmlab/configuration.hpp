#pragma once

#include <complex>
#include <span>
#include <vector>

#include "bohmlab/permutation.hpp"

namespace bohmlab {

/// Separation below which two particle positions count as coincident
/// (and the configuration falls off the quotient manifold).
constexpr double kCoincidenceEps = 1e-12;

/// A point of the covering space R^(dN): N ordered particle positions,
/// stored flat, particle i occupying coords[i*d .. i*d+d).
struct OrderedConfiguration {
    int particles = 0;
    int dim = 0;
    std::vector<double> coords;

    OrderedConfiguration() = default;
    OrderedConfiguration(int n, int d, std::vector<double> c);

    std::span<const double> point(int i) const {
        return {coords.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(dim),
                static_cast<std::size_t>(dim)};
    }
    std::span<double> point(int i) {
        return {coords.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(dim),
                static_cast<std::size_t>(dim)};
    }

    bool operator==(const OrderedConfiguration&) const = default;
};

/// A point of the quotient space: a set of N pairwise-distinct positions.
/// The stored representative is the canonical lift - particle blocks in
/// strictly increasing lexicographic order - so equality of quotient
/// points is plain sequence equality.
class UnorderedConfiguration {
public:
    UnorderedConfiguration() = default;

    int particles() const { return rep_.particles; }
    int dim() const { return rep_.dim; }
    /// Canonical (lexicographically sorted) lift.
    const OrderedConfiguration& canonical_lift() const { return rep_; }
    std::span<const double> point(int i) const { return rep_.point(i); }

    bool operator==(const UnorderedConfiguration&) const = default;

    friend UnorderedConfiguration project(const OrderedConfiguration& q);

private:
    OrderedConfiguration rep_;
};

/// Smallest Euclidean separation over particle pairs.
double min_pairwise_distance(const OrderedConfiguration& q);

/// Forget the ordering. Throws CoincidenceError when two points are
/// closer than kCoincidenceEps.
UnorderedConfiguration project(const OrderedConfiguration& q);

/// Covering-group action: sigma moves the particle at slot i to slot
/// sigma(i), i.e. result block sigma(i) = input block i.
OrderedConfiguration apply_to_configuration(const Permutation& sigma, const OrderedConfiguration& q);

/// Same relabeling applied to a dN-vector (push-forward on tangent
/// vectors; permutes d-blocks).
std::vector<double> apply_to_blocks(const Permutation& sigma, std::span<const double> v, int dim);
std::vector<std::complex<double>> apply_to_blocks(const Permutation& sigma,
                                                  std::span<const std::complex<double>> v, int dim);

/// All N! ordered configurations projecting to q. Guarded at N <= 8.
std::vector<OrderedConfiguration> lifts(const UnorderedConfiguration& q);

/// min over sigma in S_N of the Euclidean distance between the canonical
/// lift of q1 and the sigma-relabeled canonical lift of q2. Brute force,
/// guarded at N <= 8.
double quotient_distance(const UnorderedConfiguration& q1, const UnorderedConfiguration& q2);

}  // namespace bohmlab
