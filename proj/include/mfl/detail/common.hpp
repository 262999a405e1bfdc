#ifndef MFL_DETAIL_COMMON_HPP
#define MFL_DETAIL_COMMON_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfl {

using u64 = std::uint64_t;
using i64 = std::int64_t;

namespace detail {

inline u64 splitmix64(u64 x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Mixes a master seed with stream coordinates into a child seed.
inline u64 mix_seed(u64 seed, u64 a, u64 b = 0, u64 c = 0) {
    u64 h = splitmix64(seed ^ 0x6d656c6c6f777321ULL);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

// Binomial coefficient saturating at cap instead of overflowing.
inline u64 binomial_capped(u64 n, u64 k, u64 cap = std::numeric_limits<u64>::max() / 4) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    u64 r = 1;
    for (u64 i = 1; i <= k; ++i) {
        if (r > cap / (n - k + i)) return cap;
        r = r * (n - k + i) / i;
    }
    return std::min(r, cap);
}

inline u64 binomial(u64 n, u64 k) {
    u64 b = binomial_capped(n, k);
    if (b == std::numeric_limits<u64>::max() / 4)
        throw std::overflow_error("binomial(" + std::to_string(n) + "," + std::to_string(k) + ") overflows");
    return b;
}

// Visits all k-subsets of {0,..,n-1} in lexicographic order.
template <typename F>
void for_each_combination(int n, int k, F&& visit) {
    if (k < 0 || k > n) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        visit(const_cast<const std::vector<int>&>(idx));
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Rank of a sorted k-subset of {0,..,n-1} in lexicographic order.
inline u64 combination_rank(const std::vector<u64>& binom_row_cache, const int* comb, int k, int n) {
    // binom_row_cache unused here; kept simple via direct computation
    (void)binom_row_cache;
    u64 r = 0;
    int prev = -1;
    for (int i = 0; i < k; ++i) {
        for (int v = prev + 1; v < comb[i]; ++v) r += binomial_capped(static_cast<u64>(n - 1 - v), static_cast<u64>(k - 1 - i));
        prev = comb[i];
    }
    return r;
}

inline bool sorted_unique(const std::vector<int>& v) {
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] >= v[i]) return false;
    return true;
}

inline std::vector<int> sorted_copy(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

inline bool disjoint_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        if (a[i] < b[j]) ++i; else ++j;
    }
    return true;
}

inline std::vector<int> union_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<int> difference_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool subset_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool contains_sorted(const std::vector<int>& a, int x) {
    return std::binary_search(a.begin(), a.end(), x);
}

}  // namespace detail

// Deterministic xorshift-based generator; all randomized routines in this
// library draw from it so that results are reproducible from a seed alone.
class Rng {
public:
    explicit Rng(u64 seed = 0) : state_(detail::splitmix64(seed ^ 0x853c49e6748fea9bULL)) {
        if (state_ == 0) state_ = 0x9e3779b97f4a7c15ULL;
    }

    u64 next() {
        u64 x = state_;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        state_ = x;
        return detail::splitmix64(x);
    }

    // Uniform value in [0, bound) via rejection sampling.
    u64 below(u64 bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
        u64 limit = std::numeric_limits<u64>::max() - std::numeric_limits<u64>::max() % bound;
        u64 x;
        do { x = next(); } while (x >= limit);
        return x % bound;
    }

    i64 range(i64 lo, i64 hi) {  // inclusive
        return lo + static_cast<i64>(below(static_cast<u64>(hi - lo + 1)));
    }

    Rng fork(u64 a, u64 b = 0, u64 c = 0) const {
        return Rng(detail::mix_seed(state_, a, b, c));
    }

private:
    u64 state_;
};

}  // namespace mfl

#endif
