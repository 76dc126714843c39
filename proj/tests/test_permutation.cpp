#include "doctest.h"

#include <set>
#include <stdexcept>

#include "bohmlab/permutation.hpp"
#include "oracles.hpp"

using namespace bohmlab;

TEST_CASE("permutation construction validates bijectivity") {
    CHECK_NOTHROW(Permutation({2, 0, 1}));
    CHECK_THROWS_AS(Permutation({0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation({0, 3, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation({}), std::invalid_argument);
}

TEST_CASE("compose: identity and involution laws") {
    const auto id = Permutation::identity(3);
    const auto swap01 = Permutation::transposition(3, 0, 1);
    for (const auto& p : enumerate_elements(3)) {
        CHECK(compose(id, p) == p);
        CHECK(compose(p, id) == p);
    }
    CHECK(compose(swap01, swap01) == id);
}

TEST_CASE("compose: hand-evaluated table") {
    // p1 = (0->1, 1->2, 2->0), p2 = (0->1, 1->0, 2->2)
    const Permutation p1({1, 2, 0});
    const Permutation p2({1, 0, 2});
    // (p1 o p2)(i) = p1(p2(i)): 0 -> p1(1) = 2, 1 -> p1(0) = 1, 2 -> p1(2) = 0
    CHECK(compose(p1, p2) == Permutation({2, 1, 0}));
}

TEST_CASE("compose rejects size mismatch") {
    CHECK_THROWS_AS(compose(Permutation::identity(2), Permutation::identity(3)), std::invalid_argument);
}

TEST_CASE("inverse composes to identity") {
    for (const auto& p : enumerate_elements(4)) {
        CHECK(compose(p, p.inverse()).is_identity());
        CHECK(compose(p.inverse(), p).is_identity());
    }
}

TEST_CASE("parity basics and 3-cycle") {
    CHECK(parity(Permutation::identity(4)) == +1);
    CHECK(parity(Permutation::transposition(4, 1, 3)) == -1);
    CHECK(parity(Permutation({1, 2, 0})) == +1);  // 3-cycle
}

TEST_CASE("parity agrees with inversion-count oracle, N <= 5") {
    for (int n = 1; n <= 5; ++n)
        for (const auto& p : enumerate_elements(n)) CHECK(parity(p) == oracles::parity_by_inversions(p));
}

TEST_CASE("parity is a homomorphism, exhaustively for N <= 5") {
    for (int n = 2; n <= 5; ++n) {
        const auto all = enumerate_elements(n);
        for (const auto& a : all)
            for (const auto& b : all) CHECK(parity(compose(a, b)) == parity(a) * parity(b));
    }
}

TEST_CASE("enumerate_elements: counts, uniqueness, guard") {
    CHECK(enumerate_elements(1).size() == 1);
    CHECK(enumerate_elements(1).front().is_identity());
    CHECK(enumerate_elements(3).size() == 6);

    const auto all5 = enumerate_elements(5);
    CHECK(all5.size() == 120);
    std::set<std::vector<int>> distinct;
    for (const auto& p : all5) distinct.insert(p.images());
    CHECK(distinct.size() == 120);

    CHECK_THROWS_AS(enumerate_elements(9), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_elements(0), std::invalid_argument);
}

TEST_CASE("order: lcm of cycle lengths") {
    CHECK(Permutation::identity(4).order() == 1);
    CHECK(Permutation::transposition(4, 0, 2).order() == 2);
    CHECK(Permutation({1, 2, 0}).order() == 3);
    CHECK(Permutation({1, 0, 3, 4, 2}).order() == 6);  // 2-cycle x 3-cycle
    for (const auto& p : enumerate_elements(5)) {
        auto q = p;
        for (int k = 1; k < p.order(); ++k) {
            CHECK(!q.is_identity());
            q = compose(p, q);
        }
        CHECK(q.is_identity());
    }
}

TEST_CASE("rank / unrank round-trip") {
    for (int n = 1; n <= 5; ++n) {
        std::uint64_t expected = 0;
        for (const auto& p : enumerate_elements(n)) {
            CHECK(rank(p) == expected);  // lexicographic enumeration matches ranking
            CHECK(unrank(n, rank(p)) == p);
            ++expected;
        }
    }
}
