#include "bohmlab/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bohmlab {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    const int n = static_cast<int>(images_.size());
    if (n == 0) throw std::invalid_argument("Permutation: empty image list");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : images_) {
        if (v < 0 || v >= n) throw std::invalid_argument("Permutation: image out of range");
        if (seen[static_cast<std::size_t>(v)]) throw std::invalid_argument("Permutation: not a bijection");
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> im(static_cast<std::size_t>(n));
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
}

Permutation Permutation::transposition(int n, int a, int b) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b)
        throw std::invalid_argument("transposition: bad labels");
    std::vector<int> im(static_cast<std::size_t>(n));
    std::iota(im.begin(), im.end(), 0);
    std::swap(im[static_cast<std::size_t>(a)], im[static_cast<std::size_t>(b)]);
    return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
    std::vector<int> im(images_.size());
    for (int i = 0; i < size(); ++i) im[static_cast<std::size_t>(images_[static_cast<std::size_t>(i)])] = i;
    return Permutation(std::move(im));
}

bool Permutation::is_identity() const {
    for (int i = 0; i < size(); ++i)
        if ((*this)(i) != i) return false;
    return true;
}

int Permutation::order() const {
    const int n = size();
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    long long result = 1;
    for (int i = 0; i < n; ++i) {
        if (visited[static_cast<std::size_t>(i)]) continue;
        int len = 0;
        for (int j = i; !visited[static_cast<std::size_t>(j)]; j = (*this)(j)) {
            visited[static_cast<std::size_t>(j)] = 1;
            ++len;
        }
        result = std::lcm(result, static_cast<long long>(len));
    }
    return static_cast<int>(result);
}

std::string Permutation::to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < size(); ++i) os << (i ? " " : "") << (*this)(i);
    os << "]";
    return os.str();
}

Permutation compose(const Permutation& p1, const Permutation& p2) {
    if (p1.size() != p2.size()) throw std::invalid_argument("compose: size mismatch");
    std::vector<int> im(static_cast<std::size_t>(p1.size()));
    for (int i = 0; i < p1.size(); ++i) im[static_cast<std::size_t>(i)] = p1(p2(i));
    return Permutation(std::move(im));
}

int parity(const Permutation& p) {
    // (-1)^(n - #cycles); the tests cross-check against inversion counting
    const int n = p.size();
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    int cycles = 0;
    for (int i = 0; i < n; ++i) {
        if (visited[static_cast<std::size_t>(i)]) continue;
        ++cycles;
        for (int j = i; !visited[static_cast<std::size_t>(j)]; j = p(j)) visited[static_cast<std::size_t>(j)] = 1;
    }
    return ((n - cycles) % 2 == 0) ? +1 : -1;
}

std::vector<Permutation> enumerate_elements(int n) {
    if (n < 1) throw std::invalid_argument("enumerate_elements: N must be positive");
    if (n > kMaxEnumerationSize)
        throw std::invalid_argument("enumerate_elements: refusing N > " +
                                    std::to_string(kMaxEnumerationSize) +
                                    " (N! too large for exhaustive checks)");
    std::vector<int> im(static_cast<std::size_t>(n));
    std::iota(im.begin(), im.end(), 0);
    std::vector<Permutation> out;
    out.reserve(static_cast<std::size_t>(factorial(n)));
    do {
        out.emplace_back(im);
    } while (std::next_permutation(im.begin(), im.end()));
    return out;
}

std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

std::uint64_t rank(const Permutation& p) {
    const int n = p.size();
    std::uint64_t r = 0;
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < n; ++j)
            if (p(j) < p(i)) ++smaller;
        r += static_cast<std::uint64_t>(smaller) * factorial(n - 1 - i);
    }
    return r;
}

Permutation unrank(int n, std::uint64_t r) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> im;
    im.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::uint64_t f = factorial(n - 1 - i);
        const std::size_t idx = static_cast<std::size_t>(r / f);
        r %= f;
        im.push_back(pool[idx]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    return Permutation(std::move(im));
}

}  // namespace bohmlab
