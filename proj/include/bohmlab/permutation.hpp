#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bohmlab {

/// Element of S_N acting on particle labels 0..N-1. `images[i]` is the
/// label that i is sent to; construction validates bijectivity.
class Permutation {
public:
    explicit Permutation(std::vector<int> images);

    static Permutation identity(int n);
    /// Transposition (a b) on n labels.
    static Permutation transposition(int n, int a, int b);

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& images() const { return images_; }

    Permutation inverse() const;
    bool is_identity() const;

    /// Smallest k >= 1 with sigma^k = id (lcm of cycle lengths).
    int order() const;

    bool operator==(const Permutation&) const = default;

    std::string to_string() const;

private:
    std::vector<int> images_;
};

/// (p1 o p2)(i) = p1(p2(i)). Sizes must match.
Permutation compose(const Permutation& p1, const Permutation& p2);

/// +1 for even permutations, -1 for odd (via cycle structure).
int parity(const Permutation& p);

/// All N! elements of S_N in lexicographic order of image sequences.
/// Guarded at N <= 8 so exhaustive checks stay fast.
std::vector<Permutation> enumerate_elements(int n);

constexpr int kMaxEnumerationSize = 8;

std::uint64_t factorial(int n);

/// Lexicographic rank in 0..N!-1 (Lehmer code); inverse of `unrank`.
std::uint64_t rank(const Permutation& p);
Permutation unrank(int n, std::uint64_t r);

}  // namespace bohmlab
