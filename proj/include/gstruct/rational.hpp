#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <type_traits>
#include <vector>

namespace gstruct {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

enum class ScalarKind { exact_rational, float64 };

template <class S>
constexpr ScalarKind scalar_kind() {
    return is_exact_v<S> ? ScalarKind::exact_rational : ScalarKind::float64;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double d) { return d; }

template <class S>
S scalar_from_rational(const Rational& r) {
    if constexpr (is_exact_v<S>) {
        return r;
    } else {
        return static_cast<S>(to_double(r));
    }
}

template <class S>
bool is_zero(const S& s) {
    return s == S(0);
}

inline std::string to_string(const Rational& r) { return r.str(); }

/// Scales a rational vector to coprime integers with a positive first nonzero entry.
inline std::vector<Integer> primitive_integer_vector(const std::vector<Rational>& v) {
    Integer den = 1;
    for (const auto& x : v) {
        const Integer d = boost::multiprecision::denominator(x);
        den = den / boost::multiprecision::gcd(den, d) * d;
    }
    std::vector<Integer> out(v.size());
    Integer g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = boost::multiprecision::numerator(v[i]) * (den / boost::multiprecision::denominator(v[i]));
        g = boost::multiprecision::gcd(g, out[i]);
    }
    if (g == 0) return out;
    int sign = 1;
    for (const auto& x : out) {
        if (x != 0) {
            sign = x < 0 ? -1 : 1;
            break;
        }
    }
    for (auto& x : out) x = x / g * sign;
    return out;
}

}  // namespace gstruct
