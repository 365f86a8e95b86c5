#pragma once

#include "gstruct/error.hpp"
#include "gstruct/jet.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gstruct {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule with m nodes on [a, b]; nodes by Newton iteration on P_m.
inline QuadratureRule gauss_legendre(int m, double a = -1.0, double b = 1.0) {
    if (m < 1) throw InvalidArgument("quadrature needs at least one node");
    if (!(b > a)) throw InvalidArgument("quadrature interval must be nonempty");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(m));
    rule.weights.resize(static_cast<std::size_t>(m));
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    // P_m(x) and P_m'(x) by the three-term recurrence
    auto legendre = [m](double x) {
        double p0 = 1, p1 = x;
        for (int k = 2; k <= m; ++k) {
            const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        return std::pair{p1, m * (x * p1 - p0) / (x * x - 1)};
    };
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(x);
            const double step = p / dp;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        const double dp = legendre(x).second;
        const double w = 2.0 / ((1 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(m - 1 - i);
        rule.nodes[lo] = mid - half * x;
        rule.nodes[hi] = mid + half * x;
        rule.weights[lo] = rule.weights[hi] = half * w;
    }
    if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = mid;
    return rule;
}

/// Coordinate box with a tensor-product Gauss-Legendre rule.
struct Chart {
    std::string label;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<int> nodes_per_axis;
    int jet_order = kMaxJetOrder;

    int dim() const { return static_cast<int>(lower.size()); }

    void validate() const {
        if (lower.empty() || lower.size() != upper.size() || lower.size() != nodes_per_axis.size())
            throw InvalidArgument("chart " + label + ": box and quadrature sizes disagree");
        if (dim() > kMaxJetVars) throw InvalidArgument("chart " + label + ": dimension exceeds " + std::to_string(kMaxJetVars));
        for (std::size_t i = 0; i < lower.size(); ++i) {
            if (!(upper[i] > lower[i])) throw InvalidArgument("chart " + label + ": empty coordinate interval");
            if (nodes_per_axis[i] < 1) throw InvalidArgument("chart " + label + ": quadrature needs nodes on every axis");
        }
        if (jet_order < 1 || jet_order > kMaxJetOrder) throw InvalidArgument("chart " + label + ": jet order must be 1..3");
    }

    std::vector<QuadratureRule> rules() const {
        std::vector<QuadratureRule> r;
        for (std::size_t i = 0; i < lower.size(); ++i) r.push_back(gauss_legendre(nodes_per_axis[i], lower[i], upper[i]));
        return r;
    }

    std::size_t node_count() const {
        std::size_t c = 1;
        for (int m : nodes_per_axis) c *= static_cast<std::size_t>(m);
        return c;
    }

    /// Calls f(point, weight) for every tensor-product node, last axis fastest.
    template <class F>
    void for_each_node(F&& f) const {
        const auto rs = rules();
        const std::size_t n = rs.size();
        std::vector<std::size_t> idx(n, 0);
        std::vector<double> point(n);
        for (std::size_t count = node_count(), c = 0; c < count; ++c) {
            double w = 1;
            for (std::size_t i = 0; i < n; ++i) {
                point[i] = rs[i].nodes[idx[i]];
                w *= rs[i].weights[idx[i]];
            }
            f(std::as_const(point), w);
            for (std::size_t i = n; i-- > 0;) {
                if (++idx[i] < rs[i].nodes.size()) break;
                idx[i] = 0;
            }
        }
    }

    bool contains(std::span<const double> p) const {
        if (p.size() != lower.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (!(p[i] > lower[i] && p[i] < upper[i])) return false;
        return true;
    }
};

inline nlohmann::json to_json(const Chart& c) {
    return {{"label", c.label}, {"lower", c.lower}, {"upper", c.upper}, {"nodes_per_axis", c.nodes_per_axis},
            {"jet_order", c.jet_order}};
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Counter-based generator: value i of stream s depends only on (seed, s, i).
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t bits(std::uint64_t stream, std::uint64_t i) const {
        return splitmix64(splitmix64(seed_ ^ splitmix64(stream)) + i);
    }

    /// Uniform in [0, 1).
    double uniform(std::uint64_t stream, std::uint64_t i) const {
        return static_cast<double>(bits(stream, i) >> 11) * 0x1.0p-53;
    }

    double uniform(std::uint64_t stream, std::uint64_t i, double lo, double hi) const {
        return lo + (hi - lo) * uniform(stream, i);
    }

    /// Sample point k of a chart, kept 5% away from the box faces.
    std::vector<double> point(const Chart& c, std::uint64_t k, std::uint64_t stream = 0) const {
        std::vector<double> p(static_cast<std::size_t>(c.dim()));
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double w = c.upper[i] - c.lower[i];
            p[i] = c.lower[i] + w * (0.05 + 0.9 * uniform(stream, k * p.size() + i));
        }
        return p;
    }

    std::vector<std::vector<double>> points(const Chart& c, std::size_t count, std::uint64_t stream = 0) const {
        std::vector<std::vector<double>> out;
        out.reserve(count);
        for (std::size_t k = 0; k < count; ++k) out.push_back(point(c, k, stream));
        return out;
    }

private:
    std::uint64_t seed_;
};

}  // namespace gstruct
