#pragma once

#include <complex>
#include <string>
#include <vector>

#include "bohmlab/permutation.hpp"

namespace bohmlab {

/// A one-dimensional unitary representation of S_N, stored exactly.
/// Every such map is determined by its common value c on transpositions
/// (all transpositions are conjugate, and they generate the group), and
/// c^2 = 1 forces c in {+1,-1}: c = +1 is the trivial map, c = -1 the
/// sign map. Values are kept as exact integers so algebraic checks need
/// no tolerances.
class TopologicalFactor {
public:
    static TopologicalFactor trivial(int n) { return TopologicalFactor(n, +1); }
    static TopologicalFactor sign(int n) { return TopologicalFactor(n, -1); }

    int size() const { return n_; }
    /// Value on sigma, exactly +1 or -1.
    int value(const Permutation& sigma) const;
    int transposition_value() const { return c_; }
    bool is_trivial() const { return c_ == +1; }

    std::string name() const { return c_ == +1 ? "trivial" : "sign"; }

    bool operator==(const TopologicalFactor&) const = default;

private:
    TopologicalFactor(int n, int c) : n_(n), c_(c) {}
    int n_;
    int c_;  // value on every transposition
};

/// Arbitrary complex-valued map on S_N, indexed by permutation rank.
/// This is the input type for verify_unitarity: unlike TopologicalFactor
/// it can represent invalid candidates (non-multiplicative maps, values
/// off the unit circle) so they can be expressed and rejected.
class CandidateFactor {
public:
    CandidateFactor(int n, std::vector<std::complex<double>> values_by_rank);

    /// gamma(sigma) = c^(number of transpositions in sigma mod 2).
    static CandidateFactor from_transposition_value(int n, std::complex<double> c);
    static CandidateFactor from_character(const TopologicalFactor& g);

    int size() const { return n_; }
    std::complex<double> value(const Permutation& sigma) const;

private:
    int n_;
    std::vector<std::complex<double>> values_;  // indexed by rank(sigma)
};

/// All multiplicative unit-modulus maps on S_N, found by scanning the
/// admissible transposition values (roots of c^2 = 1) and verifying the
/// group law exhaustively over all pairs. Exactly {trivial, sign} for
/// N >= 2, {trivial} for N = 1. Guarded at N <= 6.
std::vector<TopologicalFactor> enumerate_characters(int n);

/// True iff |gamma(sigma)| = 1 for all sigma, established the way the
/// structure dictates: gamma(id) = 1 and gamma(sigma)^order(sigma) = 1.
/// Throws NotMultiplicativeError if the group law fails anywhere, and
/// std::invalid_argument for the identically-zero map.
bool verify_unitarity(const CandidateFactor& gamma, int n);

}  // namespace bohmlab
