#pragma once

#include "gstruct/multilinear.hpp"

#include <random>
#include <vector>

namespace gstruct::testing {

inline MultilinearTensor<Rational> random_rational_tensor(std::vector<VSpace> dom, std::mt19937_64& rng, int range = 3) {
    MultilinearTensor<Rational> t(std::move(dom));
    std::uniform_int_distribution<int> d(-range, range);
    for (auto& c : t.components()) c = d(rng);
    return t;
}

inline MultilinearTensor<double> random_tensor(std::vector<VSpace> dom, std::mt19937_64& rng) {
    MultilinearTensor<double> t(std::move(dom));
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (auto& c : t.components()) c = d(rng);
    return t;
}

inline std::vector<VSpace> v_slots(int n, int k) { return std::vector<VSpace>(static_cast<std::size_t>(k), VSpace{FactorKind::V, n}); }

inline std::vector<Rational> unit_vector(int n, int i) {
    std::vector<Rational> v(static_cast<std::size_t>(n), Rational(0));
    v[static_cast<std::size_t>(i)] = 1;
    return v;
}

/// Volume form with eps(e1, .., en) = 1.
inline MultilinearTensor<Rational> volume_form(int n) {
    MultilinearTensor<Rational> t(v_slots(n, n));
    for (const auto& [perm, sign] : comb::permutations(n)) t.at(std::span<const int>(perm)) = sign;
    return t;
}

inline MultilinearTensor<Rational> metric_delta(int n) {
    MultilinearTensor<Rational> t(v_slots(n, 2));
    for (int i = 0; i < n; ++i) t.at({i, i}) = 1;
    return t;
}

}  // namespace gstruct::testing
