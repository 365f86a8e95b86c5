#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <vector>

namespace gstruct::comb {

inline constexpr int kMaxDim = 8;

inline std::size_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return r;
}

inline std::size_t factorial(int k) {
    std::size_t r = 1;
    for (int i = 2; i <= k; ++i) r *= static_cast<std::size_t>(i);
    return r;
}

/// Sign of the permutation that sorts `idx`; 0 if an entry repeats.
inline int sort_sign(std::vector<int>& idx) {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i) {
        for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
            if (idx[j - 1] == idx[j]) return 0;
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
        }
    }
    return sign;
}

inline int permutation_sign(const std::vector<int>& perm) {
    std::vector<int> p = perm;
    return sort_sign(p);
}

/// All permutations of {0..k-1} with their signs, lexicographic order.
inline std::vector<std::pair<std::vector<int>, int>> permutations(int k) {
    std::vector<std::pair<std::vector<int>, int>> out;
    std::vector<int> p(static_cast<std::size_t>(k));
    std::iota(p.begin(), p.end(), 0);
    do {
        out.emplace_back(p, permutation_sign(p));
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// Strictly increasing k-subsets of {0..n-1}, encoded as bitmasks, in lexicographic order
/// of their index lists. Lookup by mask is O(1).
struct SubsetTable {
    int n = 0;
    int k = 0;
    std::vector<std::uint32_t> masks;
    std::vector<std::vector<int>> indices;
    std::vector<int> rank_of_mask;  // size 2^n, -1 if popcount != k

    int rank(std::uint32_t mask) const { return rank_of_mask[mask]; }
    std::size_t size() const { return masks.size(); }
};

namespace detail {
inline SubsetTable build_subsets(int n, int k) {
    SubsetTable t;
    t.n = n;
    t.k = k;
    t.rank_of_mask.assign(std::size_t{1} << n, -1);
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            std::uint32_t m = 0;
            for (int i : cur) m |= 1u << i;
            t.rank_of_mask[m] = static_cast<int>(t.masks.size());
            t.masks.push_back(m);
            t.indices.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return t;
}
}  // namespace detail

inline const SubsetTable& subsets(int n, int k) {
    static std::array<std::array<SubsetTable, kMaxDim + 2>, kMaxDim + 1> tables = [] {
        std::array<std::array<SubsetTable, kMaxDim + 2>, kMaxDim + 1> t{};
        for (int n = 0; n <= kMaxDim; ++n)
            for (int k = 0; k <= n; ++k) t[n][k] = detail::build_subsets(n, k);
        return t;
    }();
    return tables[n][k];
}

/// Sign of concatenating increasing index sets I then J into increasing order
/// (number of pairs i in I, j in J with i > j). Requires disjoint masks.
inline int shuffle_sign(std::uint32_t I, std::uint32_t J) {
    int inversions = 0;
    while (J != 0) {
        const int j = std::countr_zero(J);
        J &= J - 1;
        inversions += std::popcount(I >> (j + 1));
    }
    return (inversions & 1) ? -1 : 1;
}

struct ShuffleTerm {
    int left;   // rank among p-subsets
    int right;  // rank among q-subsets
    int out;    // rank among (p+q)-subsets
    int sign;
};

/// All (I, J) disjoint pairs with |I| = p, |J| = q, with the shuffle sign of I ++ J.
inline const std::vector<ShuffleTerm>& shuffle_terms(int n, int p, int q) {
    static std::mutex mutex;
    static std::map<std::array<int, 3>, std::vector<ShuffleTerm>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = cache.try_emplace({n, p, q});
    if (inserted && p + q <= n) {
        const auto& L = subsets(n, p);
        const auto& R = subsets(n, q);
        const auto& O = subsets(n, p + q);
        for (std::size_t a = 0; a < L.size(); ++a)
            for (std::size_t b = 0; b < R.size(); ++b) {
                if (L.masks[a] & R.masks[b]) continue;
                it->second.push_back({static_cast<int>(a), static_cast<int>(b),
                                      O.rank(L.masks[a] | R.masks[b]),
                                      shuffle_sign(L.masks[a], R.masks[b])});
            }
    }
    return it->second;
}

/// Non-decreasing k-tuples over {0..n-1} (multisets), lexicographic.
inline std::vector<std::vector<int>> multisets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

inline std::vector<std::vector<int>> increasing_tuples(int n, int k) {
    if (k > n) return {};
    return subsets(n, k).indices;
}

}  // namespace gstruct::comb
