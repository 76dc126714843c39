#include "bohmlab/characters.hpp"

#include <cmath>
#include <stdexcept>

#include "bohmlab/errors.hpp"

namespace bohmlab {

namespace {

constexpr int kMaxCharacterSize = 6;

int parity_exponent(const Permutation& sigma) {
    return parity(sigma) == +1 ? 0 : 1;
}

}  // namespace

int TopologicalFactor::value(const Permutation& sigma) const {
    if (sigma.size() != n_) throw std::invalid_argument("TopologicalFactor: size mismatch");
    return parity_exponent(sigma) == 0 ? +1 : c_;
}

CandidateFactor::CandidateFactor(int n, std::vector<std::complex<double>> values_by_rank)
    : n_(n), values_(std::move(values_by_rank)) {
    if (values_.size() != factorial(n)) throw std::invalid_argument("CandidateFactor: need one value per element");
}

CandidateFactor CandidateFactor::from_transposition_value(int n, std::complex<double> c) {
    const auto elements = enumerate_elements(n);
    std::vector<std::complex<double>> values(elements.size());
    for (const auto& sigma : elements)
        values[rank(sigma)] = parity_exponent(sigma) == 0 ? std::complex<double>(1.0) : c;
    return CandidateFactor(n, std::move(values));
}

CandidateFactor CandidateFactor::from_character(const TopologicalFactor& g) {
    return from_transposition_value(g.size(), static_cast<double>(g.transposition_value()));
}

std::complex<double> CandidateFactor::value(const Permutation& sigma) const {
    if (sigma.size() != n_) throw std::invalid_argument("CandidateFactor: size mismatch");
    return values_[rank(sigma)];
}

std::vector<TopologicalFactor> enumerate_characters(int n) {
    if (n < 1 || n > kMaxCharacterSize)
        throw std::invalid_argument("enumerate_characters: N must be in 1.." + std::to_string(kMaxCharacterSize));
    if (n == 1) return {TopologicalFactor::trivial(1)};

    std::vector<TopologicalFactor> found;
    // Transpositions are conjugate to each other and square to the
    // identity, so a multiplicative map takes one common value c on all
    // of them with c^2 = 1; scan both roots and verify closure.
    for (int c : {+1, -1}) {
        const auto candidate = CandidateFactor::from_transposition_value(n, static_cast<double>(c));
        bool ok = true;
        try {
            ok = verify_unitarity(candidate, n);
        } catch (const NotMultiplicativeError&) {
            ok = false;
        }
        if (ok) found.push_back(c == +1 ? TopologicalFactor::trivial(n) : TopologicalFactor::sign(n));
    }
    return found;
}

bool verify_unitarity(const CandidateFactor& gamma, int n) {
    const auto elements = enumerate_elements(n);

    bool any_nonzero = false;
    for (const auto& sigma : elements)
        if (gamma.value(sigma) != std::complex<double>(0.0)) {
            any_nonzero = true;
            break;
        }
    if (!any_nonzero) throw std::invalid_argument("verify_unitarity: identically-zero map");

    // group law, exhaustively over all pairs
    constexpr double tol = 1e-12;
    for (const auto& a : elements)
        for (const auto& b : elements) {
            const auto lhs = gamma.value(compose(a, b));
            const auto rhs = gamma.value(a) * gamma.value(b);
            if (std::abs(lhs - rhs) > tol)
                throw NotMultiplicativeError("verify_unitarity: gamma(a*b) != gamma(a)*gamma(b) at a=" +
                                             a.to_string() + " b=" + b.to_string());
        }

    // gamma(id) = 1, and gamma(sigma)^k = 1 with k = order(sigma); both
    // follow from the group law once gamma is nonzero, and they force
    // |gamma(sigma)| = 1.
    const auto id = Permutation::identity(n);
    if (std::abs(gamma.value(id) - std::complex<double>(1.0)) > tol) return false;
    for (const auto& sigma : elements) {
        const int k = sigma.order();
        std::complex<double> p(1.0);
        for (int i = 0; i < k; ++i) p *= gamma.value(sigma);
        if (std::abs(p - std::complex<double>(1.0)) > tol) return false;
        if (std::abs(std::abs(gamma.value(sigma)) - 1.0) > tol) return false;
    }
    return true;
}

}  // namespace bohmlab
