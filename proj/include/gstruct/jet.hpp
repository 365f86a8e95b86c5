#pragma once

#include "gstruct/combinatorics.hpp"
#include "gstruct/error.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace gstruct {

inline constexpr int kMaxJetVars = 6;
inline constexpr int kMaxJetOrder = 3;
inline constexpr int kJetCapacity = 35;  // C(4+3, 3); also covers n <= 6 at order 2
inline constexpr int kConstantOrder = 255;

/// Monomial layout and multiplication/differentiation tables for jets in
/// `n` variables truncated at total degree `order`. Monomials are graded
/// (all of degree d before degree d+1), so truncating to a lower order is a
/// prefix of the coefficient array.
struct JetLayout {
    int n = 0;
    int order = 0;
    int size = 0;
    std::vector<std::array<std::uint8_t, kMaxJetVars>> exponents;
    std::vector<int> degree;
    struct Product {
        std::uint8_t a, b, out;
    };
    std::vector<Product> products;
    // derivative[v][k] = (source index, factor): d/dx_v of the monomial basis.
    std::vector<std::vector<std::pair<int, double>>> derivative;

    int index_of(const std::array<std::uint8_t, kMaxJetVars>& e) const {
        for (int i = 0; i < size; ++i)
            if (exponents[static_cast<std::size_t>(i)] == e) return i;
        return -1;
    }
};

namespace detail {

inline std::unique_ptr<JetLayout> build_jet_layout(int n, int order) {
    auto L = std::make_unique<JetLayout>();
    L->n = n;
    L->order = order;
    for (int d = 0; d <= order; ++d) {
        // exponents of total degree d, lexicographically descending in variable 0
        std::array<std::uint8_t, kMaxJetVars> e{};
        auto rec = [&](auto&& self, int var, int remaining) -> void {
            if (var == n - 1 || n == 0) {
                if (n > 0) e[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(remaining);
                if (n == 0 && remaining != 0) return;
                L->exponents.push_back(e);
                L->degree.push_back(d);
                return;
            }
            for (int k = remaining; k >= 0; --k) {
                e[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(k);
                self(self, var + 1, remaining - k);
            }
            e[static_cast<std::size_t>(var)] = 0;
        };
        rec(rec, 0, d);
    }
    L->size = static_cast<int>(L->exponents.size());
    for (int a = 0; a < L->size; ++a)
        for (int b = 0; b < L->size; ++b) {
            if (L->degree[static_cast<std::size_t>(a)] + L->degree[static_cast<std::size_t>(b)] > order) continue;
            std::array<std::uint8_t, kMaxJetVars> s{};
            for (int v = 0; v < n; ++v)
                s[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(
                    L->exponents[static_cast<std::size_t>(a)][static_cast<std::size_t>(v)] +
                    L->exponents[static_cast<std::size_t>(b)][static_cast<std::size_t>(v)]);
            L->products.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                                   static_cast<std::uint8_t>(L->index_of(s))});
        }
    L->derivative.resize(static_cast<std::size_t>(n));
    if (order >= 1) {
        const int out_size = static_cast<int>(comb::binomial(n + order - 1, order - 1));
        for (int v = 0; v < n; ++v) {
            auto& dv = L->derivative[static_cast<std::size_t>(v)];
            for (int k = 0; k < out_size; ++k) {
                auto e = L->exponents[static_cast<std::size_t>(k)];
                const double factor = e[static_cast<std::size_t>(v)] + 1.0;
                e[static_cast<std::size_t>(v)]++;
                dv.emplace_back(L->index_of(e), factor);
            }
        }
    }
    return L;
}

}  // namespace detail

inline const JetLayout& jet_layout(int n, int order) {
    using Table = std::array<std::array<std::unique_ptr<JetLayout>, kMaxJetOrder + 1>, kMaxJetVars + 1>;
    static const Table table = [] {
        Table t;
        for (int n = 0; n <= kMaxJetVars; ++n)
            for (int o = 0; o <= kMaxJetOrder; ++o)
                if (comb::binomial(n + o, o) <= static_cast<std::size_t>(kJetCapacity))
                    t[static_cast<std::size_t>(n)][static_cast<std::size_t>(o)] = detail::build_jet_layout(n, o);
        return t;
    }();
    if (n < 0 || n > kMaxJetVars || order < 0 || order > kMaxJetOrder ||
        !table[static_cast<std::size_t>(n)][static_cast<std::size_t>(order)])
        throw InvalidArgument("jet layout unsupported: n=" + std::to_string(n) + " order=" + std::to_string(order));
    return *table[static_cast<std::size_t>(n)][static_cast<std::size_t>(order)];
}

/// Truncated multivariate Taylor polynomial of a smooth function at a point.
/// Coefficients are Taylor coefficients (partial derivative / multi-index factorial).
/// A jet with zero variables is a constant and combines with any other jet.
class Jet {
public:
    Jet() = default;
    Jet(double value) { c_[0] = value; }  // NOLINT: implicit constant promotion

    static Jet constant(int n, int order, double value) {
        Jet j;
        j.n_ = static_cast<std::uint8_t>(n);
        j.order_ = static_cast<std::uint8_t>(order);
        (void)jet_layout(n, order);
        j.c_[0] = value;
        return j;
    }

    /// The coordinate function x_var expanded at `value`.
    static Jet variable(int n, int order, int var, double value) {
        Jet j = constant(n, order, value);
        if (order >= 1) j.c_[static_cast<std::size_t>(1 + var)] = 1.0;
        return j;
    }

    int nvars() const { return n_; }
    int order() const { return order_; }
    bool is_constant() const { return n_ == 0 && order_ == kConstantOrder; }
    int size() const { return is_constant() ? 1 : jet_layout(n_, order_).size; }
    double value() const { return c_[0]; }
    double coefficient(int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& coefficient(int i) { return c_[static_cast<std::size_t>(i)]; }

    /// First partial derivative d/dx_var at the expansion point.
    double gradient(int var) const {
        if (is_constant()) return 0.0;
        if (order_ < 1) throw JetOrderError(1);
        return c_[static_cast<std::size_t>(1 + var)];
    }

    /// Partial derivative for a multi-index of exponents.
    double partial(const std::array<std::uint8_t, kMaxJetVars>& e) const {
        if (is_constant()) {
            for (auto x : e)
                if (x) return 0.0;
            return c_[0];
        }
        int total = 0;
        double fact = 1;
        for (int v = 0; v < n_; ++v) {
            total += e[static_cast<std::size_t>(v)];
            for (int k = 2; k <= e[static_cast<std::size_t>(v)]; ++k) fact *= k;
        }
        if (total > order_) throw JetOrderError(total);
        const int idx = jet_layout(n_, order_).index_of(e);
        return c_[static_cast<std::size_t>(idx)] * fact;
    }

    /// Jet of the partial derivative; loses one order.
    Jet derivative(int var) const {
        if (is_constant()) return Jet(0.0);
        if (order_ < 1) throw JetOrderError(1);
        if (var < 0 || var >= n_) throw InvalidArgument("derivative variable out of range");
        const auto& L = jet_layout(n_, order_);
        Jet out;
        out.n_ = n_;
        out.order_ = static_cast<std::uint8_t>(order_ - 1);
        const auto& dv = L.derivative[static_cast<std::size_t>(var)];
        for (std::size_t k = 0; k < dv.size(); ++k)
            out.c_[k] = dv[k].second * c_[static_cast<std::size_t>(dv[k].first)];
        return out;
    }

    /// Drops coefficients above `order`.
    Jet truncated(int order) const {
        if (is_constant() || order >= order_) return *this;
        Jet out = *this;
        out.order_ = static_cast<std::uint8_t>(order);
        const int keep = jet_layout(n_, order).size;
        for (int i = keep; i < kJetCapacity; ++i) out.c_[static_cast<std::size_t>(i)] = 0.0;
        return out;
    }

    Jet operator-() const {
        Jet r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    Jet& operator+=(const Jet& o) {
        adopt_shape(o);
        const int s = size();
        for (int i = 0; i < s; ++i) c_[static_cast<std::size_t>(i)] += o.c_[static_cast<std::size_t>(i)];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        adopt_shape(o);
        const int s = size();
        for (int i = 0; i < s; ++i) c_[static_cast<std::size_t>(i)] -= o.c_[static_cast<std::size_t>(i)];
        return *this;
    }
    Jet& operator*=(double s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    Jet& operator*=(const Jet& o) {
        *this = *this * o;
        return *this;
    }
    Jet& operator/=(const Jet& o) {
        *this = *this * reciprocal(o);
        return *this;
    }
    Jet& operator/=(double s) { return *this *= 1.0 / s; }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }
    friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

    friend Jet operator*(const Jet& a, const Jet& b) {
        if (a.is_constant()) return b * a.c_[0];
        if (b.is_constant()) return a * b.c_[0];
        if (a.n_ != b.n_) throw InvalidArgument("jet variable count mismatch");
        Jet r;
        r.n_ = a.n_;
        r.order_ = std::min(a.order_, b.order_);
        const auto& L = jet_layout(r.n_, r.order_);
        for (const auto& p : L.products) r.c_[p.out] += a.c_[p.a] * b.c_[p.b];
        return r;
    }

    /// Composition with a univariate function given its Taylor coefficients
    /// taylor[k] = f^(k)(value)/k!, k = 0..order.
    Jet compose(const std::array<double, kMaxJetOrder + 1>& taylor) const {
        if (is_constant()) return Jet(taylor[0]);
        Jet h = *this;
        h.c_[0] = 0.0;
        Jet r = Jet::constant(n_, order_, taylor[static_cast<std::size_t>(order_)]);
        for (int k = order_ - 1; k >= 0; --k) {
            r = r * h;
            r.c_[0] += taylor[static_cast<std::size_t>(k)];
        }
        return r;
    }

    friend Jet reciprocal(const Jet& x) {
        const double v = x.value();
        if (v == 0.0) throw InvalidArgument("jet reciprocal of zero");
        const double r = 1.0 / v;
        return x.compose({r, -r * r, r * r * r, -r * r * r * r});
    }
    friend Jet sin(const Jet& x) {
        const double s = std::sin(x.value()), c = std::cos(x.value());
        return x.compose({s, c, -s / 2.0, -c / 6.0});
    }
    friend Jet cos(const Jet& x) {
        const double s = std::sin(x.value()), c = std::cos(x.value());
        return x.compose({c, -s, -c / 2.0, s / 6.0});
    }
    friend Jet exp(const Jet& x) {
        const double e = std::exp(x.value());
        return x.compose({e, e, e / 2.0, e / 6.0});
    }
    friend Jet log(const Jet& x) {
        const double v = x.value();
        if (v <= 0.0) throw InvalidArgument("jet log of non-positive value");
        return x.compose({std::log(v), 1.0 / v, -0.5 / (v * v), 1.0 / (3.0 * v * v * v)});
    }
    friend Jet sqrt(const Jet& x) {
        const double v = x.value();
        if (v <= 0.0) throw InvalidArgument("jet sqrt of non-positive value");
        const double s = std::sqrt(v);
        return x.compose({s, 0.5 / s, -0.125 / (s * v), 0.0625 / (s * v * v)});
    }
    friend Jet pow(const Jet& x, int k) {
        Jet r(1.0);
        for (int i = 0; i < k; ++i) r = r * x;
        return r;
    }

    friend bool operator==(const Jet& a, const Jet& b) { return a.n_ == b.n_ && a.order_ == b.order_ && a.c_ == b.c_; }

private:
    void adopt_shape(const Jet& o) {
        if (o.is_constant()) return;
        if (is_constant()) {
            n_ = o.n_;
            order_ = o.order_;
            return;
        }
        if (n_ != o.n_) throw InvalidArgument("jet variable count mismatch");
        if (o.order_ < order_) *this = truncated(o.order_);
    }

    std::uint8_t n_ = 0;
    std::uint8_t order_ = kConstantOrder;
    std::array<double, kJetCapacity> c_{};
};

inline double magnitude(const Jet& j) { return std::abs(j.value()); }

inline double norm_bound(const Jet& j) {
    double m = 0;
    for (int i = 0; i < j.size(); ++i) m = std::max(m, std::abs(j.coefficient(i)));
    return m;
}

/// Coordinate jets of a chart point: x_i expanded at point[i].
inline std::vector<Jet> coordinate_jets(std::span<const double> point, int order) {
    const int n = static_cast<int>(point.size());
    std::vector<Jet> x;
    x.reserve(point.size());
    for (int i = 0; i < n; ++i) x.push_back(Jet::variable(n, order, i, point[static_cast<std::size_t>(i)]));
    return x;
}

}  // namespace gstruct
