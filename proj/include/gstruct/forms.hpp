#pragma once

#include "gstruct/combinatorics.hpp"
#include "gstruct/error.hpp"
#include "gstruct/jet.hpp"
#include "gstruct/liealg.hpp"
#include "gstruct/multilinear.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gstruct {

/// Coefficient space of a form: a tensor product of V and g factors; the empty
/// product is the scalars. Basis indices are row-major over the factors.
struct CoeffSpace {
    std::vector<VSpace> factors;

    static CoeffSpace scalar() { return {}; }
    static CoeffSpace V(int n) { return {{{FactorKind::V, n}}}; }
    static CoeffSpace g(int d) { return {{{FactorKind::g, d}}}; }

    std::size_t dim() const {
        std::size_t d = 1;
        for (const auto& f : factors) d *= static_cast<std::size_t>(f.dim);
        return d;
    }
    bool is_scalar() const { return factors.empty(); }

    std::string label() const {
        if (factors.empty()) return "scalar";
        std::string s;
        for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? "(x)" : "") + gstruct::label(factors[i].kind);
        return s;
    }

    friend CoeffSpace operator*(const CoeffSpace& a, const CoeffSpace& b) {
        CoeffSpace c = a;
        c.factors.insert(c.factors.end(), b.factors.begin(), b.factors.end());
        return c;
    }
    friend bool operator==(const CoeffSpace&, const CoeffSpace&) = default;
};

/// Components of a W-valued k-form at one point: entry (I, w) is the value on
/// the increasing coordinate tuple I, i.e. the coefficient of dx^I.
template <class T>
class FormValue {
public:
    FormValue() = default;
    FormValue(int n, int degree, CoeffSpace space)
        : n_(n), degree_(degree), space_(std::move(space)), width_(space_.dim()),
          data_(comb::binomial(n, degree) * width_, T(0)) {
        if (n < 1 || n > comb::kMaxDim) throw InvalidArgument("form dimension out of range");
        if (degree < 0) throw InvalidArgument("negative form degree");
    }

    int n() const { return n_; }
    int degree() const { return degree_; }
    const CoeffSpace& space() const { return space_; }
    std::size_t width() const { return width_; }
    std::size_t count() const { return comb::binomial(n_, degree_); }
    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    T& operator()(std::size_t rank, std::size_t w) { return data_[rank * width_ + w]; }
    const T& operator()(std::size_t rank, std::size_t w) const { return data_[rank * width_ + w]; }

    /// Component on an arbitrary index tuple, with the sign of the sorting permutation.
    T component(std::vector<int> idx, std::size_t w) const {
        if (static_cast<int>(idx.size()) != degree_) throw InvalidArgument("form index arity mismatch");
        const int sign = comb::sort_sign(idx);
        if (sign == 0) return T(0);
        std::uint32_t mask = 0;
        for (int i : idx) {
            if (i < 0 || i >= n_) throw InvalidArgument("form index out of range");
            mask |= 1u << i;
        }
        const auto r = static_cast<std::size_t>(comb::subsets(n_, degree_).rank(mask));
        return sign > 0 ? (*this)(r, w) : T(0) - (*this)(r, w);
    }

    FormValue& operator+=(const FormValue& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    FormValue& operator-=(const FormValue& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    FormValue& operator*=(double s) {
        for (auto& x : data_) x *= s;
        return *this;
    }
    friend FormValue operator+(FormValue a, const FormValue& b) { return a += b; }
    friend FormValue operator-(FormValue a, const FormValue& b) { return a -= b; }
    friend FormValue operator*(FormValue a, double s) { return a *= s; }
    friend FormValue operator*(double s, FormValue a) { return a *= s; }

    double max_abs() const {
        double m = 0;
        for (const auto& x : data_) m = std::max(m, magnitude(x));
        return m;
    }

    /// Value part of jet components.
    FormValue<double> values() const {
        FormValue<double> out(n_, degree_, space_);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            if constexpr (std::is_same_v<T, double>)
                out.data()[i] = data_[i];
            else
                out.data()[i] = data_[i].value();
        }
        return out;
    }

    void check_same(const FormValue& o) const {
        if (n_ != o.n_ || degree_ != o.degree_ || !(space_ == o.space_))
            throw InvalidArgument("form shape mismatch (degree or coefficient space)");
    }

private:
    int n_ = 1;
    int degree_ = 0;
    CoeffSpace space_;
    std::size_t width_ = 1;
    std::vector<T> data_;
};

namespace detail {
inline bool is_zero_value(double x) { return x == 0.0; }
inline bool is_zero_value(const Jet& x) {
    for (int i = 0; i < x.size(); ++i)
        if (x.coefficient(i) != 0.0) return false;
    return true;
}
}  // namespace detail
using detail::is_zero_value;

/// Evaluates a form on k tangent vectors: sum_I Psi_I det(v restricted to I).
inline std::vector<double> evaluate_on(const FormValue<double>& f, const std::vector<std::vector<double>>& vectors) {
    const int k = f.degree();
    if (static_cast<int>(vectors.size()) != k) throw InvalidArgument("form evaluation needs one vector per degree");
    for (const auto& v : vectors)
        if (static_cast<int>(v.size()) != f.n()) throw InvalidArgument("tangent vector dimension mismatch");
    std::vector<double> out(f.width(), 0.0);
    const auto& table = comb::subsets(f.n(), k);
    const auto perms = comb::permutations(k);
    for (std::size_t r = 0; r < table.size(); ++r) {
        const auto& I = table.indices[r];
        double det = 0;
        for (const auto& [perm, sign] : perms) {
            double prod = sign;
            for (int j = 0; j < k; ++j)
                prod *= vectors[static_cast<std::size_t>(j)][static_cast<std::size_t>(I[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])])];
            det += prod;
        }
        for (std::size_t w = 0; w < f.width(); ++w) out[w] += det * f(r, w);
    }
    return out;
}

/// Shuffle product with a pointwise bilinear map on coefficients:
/// out_K += sign(I, J) combine(a_I, b_J) over disjoint I, J with I u J = K.
/// This is the 1/(p! q!) permutation sum restricted to increasing indices.
template <class T, class Combine>
FormValue<T> shuffle_product(const FormValue<T>& a, const FormValue<T>& b, CoeffSpace out_space, Combine&& combine) {
    if (a.n() != b.n()) throw InvalidArgument("forms live on charts of different dimension");
    FormValue<T> out(a.n(), a.degree() + b.degree(), std::move(out_space));
    if (a.degree() + b.degree() > a.n()) return out;
    const std::size_t wa = a.width(), wb = b.width(), wo = out.width();
    for (const auto& t : comb::shuffle_terms(a.n(), a.degree(), b.degree()))
        combine(&a.data()[static_cast<std::size_t>(t.left) * wa], &b.data()[static_cast<std::size_t>(t.right) * wb],
                &out.data()[static_cast<std::size_t>(t.out) * wo], static_cast<double>(t.sign));
    return out;
}

/// Phi (x)_wedge Psi, valued in W1 (x) W2.
template <class T>
FormValue<T> wedge_tensor(const FormValue<T>& a, const FormValue<T>& b) {
    const std::size_t wa = a.width(), wb = b.width();
    return shuffle_product(a, b, a.space() * b.space(), [wa, wb](const T* x, const T* y, T* o, double sign) {
        for (std::size_t i = 0; i < wa; ++i) {
            if (is_zero_value(x[i])) continue;
            const T xs = x[i] * sign;
            for (std::size_t j = 0; j < wb; ++j) o[i * wb + j] += xs * y[j];
        }
    });
}

/// Sparse matrices of the action of each basis element on each factor space.
struct ActionTables {
    struct Entry {
        int row, col;
        double value;
    };
    std::vector<std::vector<Entry>> on_V;  // rho'(X_a)
    std::vector<std::vector<Entry>> on_g;  // ad(X_a)
};

inline ActionTables action_tables(const LieAlgebraSpec& alg) {
    ActionTables t;
    const int d = alg.dim(), n = alg.rep_dim();
    t.on_V.resize(static_cast<std::size_t>(d));
    t.on_g.resize(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
        const auto& m = alg.basis_f()[static_cast<std::size_t>(a)];
        for (int r = 0; r < n; ++r)
            for (int s = 0; s < n; ++s)
                if (m(static_cast<std::size_t>(r), static_cast<std::size_t>(s)) != 0.0)
                    t.on_V[static_cast<std::size_t>(a)].push_back({r, s, m(static_cast<std::size_t>(r), static_cast<std::size_t>(s))});
        for (int r = 0; r < d; ++r)
            for (int s = 0; s < d; ++s) {
                const double c = alg.structure_constant_f(r, a, s);
                if (c != 0.0) t.on_g[static_cast<std::size_t>(a)].push_back({r, s, c});
            }
    }
    return t;
}

/// The g-valued form phi acting on Psi through the shuffle product: rho' on
/// V factors and ad on g factors of Psi's coefficient space, as a derivation.
/// For Psi valued in V this is rho'_wedge(phi) Psi; for g it is [phi, Psi]_wedge.
template <class T>
FormValue<T> act_wedge(const LieAlgebraSpec& alg, const FormValue<T>& phi, const FormValue<T>& psi) {
    if (!(phi.space() == CoeffSpace::g(alg.dim()))) throw InvalidArgument("act_wedge: first argument must be g-valued");
    for (const auto& f : psi.space().factors) {
        if (f.kind == FactorKind::V && f.dim != alg.rep_dim()) throw InvalidArgument("act_wedge: V factor dimension mismatch");
        if (f.kind == FactorKind::g && f.dim != alg.dim()) throw InvalidArgument("act_wedge: g factor dimension mismatch");
    }
    const auto tables = action_tables(alg);
    const auto& factors = psi.space().factors;
    std::vector<std::size_t> strides(factors.size(), 1);
    for (std::size_t i = factors.size(); i-- > 1;) strides[i - 1] = strides[i] * static_cast<std::size_t>(factors[i].dim);
    const std::size_t width = psi.width();
    const int d = alg.dim();
    return shuffle_product(phi, psi, psi.space(), [&](const T* x, const T* y, T* o, double sign) {
        for (int a = 0; a < d; ++a) {
            if (is_zero_value(x[a])) continue;
            const T xs = x[a] * sign;
            for (std::size_t slot = 0; slot < factors.size(); ++slot) {
                const auto& entries = factors[slot].kind == FactorKind::V ? tables.on_V[static_cast<std::size_t>(a)]
                                                                          : tables.on_g[static_cast<std::size_t>(a)];
                const std::size_t stride = strides[slot];
                const auto dim = static_cast<std::size_t>(factors[slot].dim);
                for (std::size_t w = 0; w < width; ++w) {
                    const auto idx = static_cast<int>((w / stride) % dim);
                    const std::size_t base = w - static_cast<std::size_t>(idx) * stride;
                    for (const auto& e : entries) {
                        if (e.col != idx) continue;
                        o[base + static_cast<std::size_t>(e.row) * stride] += xs * y[w] * e.value;
                    }
                }
            }
        }
    });
}

template <class T>
FormValue<T> rho_wedge(const LieAlgebraSpec& alg, const FormValue<T>& phi, const FormValue<T>& psi) {
    if (!(psi.space() == CoeffSpace::V(alg.rep_dim()))) throw InvalidArgument("rho_wedge: second argument must be V-valued");
    return act_wedge(alg, phi, psi);
}

template <class T>
FormValue<T> lie_wedge(const LieAlgebraSpec& alg, const FormValue<T>& phi, const FormValue<T>& psi) {
    if (!(psi.space() == CoeffSpace::g(alg.dim()))) throw InvalidArgument("lie_wedge: second argument must be g-valued");
    return act_wedge(alg, phi, psi);
}

/// (d Psi)_K = sum_j (-1)^j d/dx_{K_j} Psi_{K without K_j}; jets lose one order.
inline FormValue<Jet> exterior_derivative(const FormValue<Jet>& psi) {
    const int n = psi.n(), k = psi.degree();
    FormValue<Jet> out(n, k + 1, psi.space());
    if (k + 1 > n) return out;
    const auto& lower = comb::subsets(n, k);
    const auto& upper = comb::subsets(n, k + 1);
    const std::size_t width = psi.width();
    for (std::size_t r = 0; r < upper.size(); ++r) {
        const auto& K = upper.indices[r];
        for (int j = 0; j <= k; ++j) {
            const int var = K[static_cast<std::size_t>(j)];
            const auto src = static_cast<std::size_t>(lower.rank(upper.masks[r] & ~(1u << var)));
            for (std::size_t w = 0; w < width; ++w) {
                const Jet& c = psi(src, w);
                if (!c.is_constant() && c.order() < 1) throw JetOrderError(1);
                const Jet dj = c.derivative(var);
                if (j % 2 == 0)
                    out(r, w) += dj;
                else
                    out(r, w) -= dj;
            }
        }
    }
    return out;
}

/// f o Psi for a scalar form: contracts the coefficient index against f.
template <class T, class S>
FormValue<T> contract(const MultilinearTensor<S>& f, const FormValue<T>& psi) {
    if (f.domain() != psi.space().factors) throw InvalidArgument("contract: tensor domain does not match coefficient space");
    FormValue<T> out(psi.n(), psi.degree(), CoeffSpace::scalar());
    std::vector<double> fd(f.size());
    std::vector<std::size_t> nz;
    for (std::size_t w = 0; w < f.size(); ++w) {
        if constexpr (is_exact_v<S>)
            fd[w] = to_double(f.components()[w]);
        else
            fd[w] = f.components()[w];
        if (fd[w] != 0.0) nz.push_back(w);
    }
    for (std::size_t r = 0; r < psi.count(); ++r)
        for (std::size_t w : nz) out(r, 0) += psi(r, w) * fd[w];
    return out;
}

/// A W-valued k-form on a chart, evaluated at coordinate jets. Evaluation of the
/// last input is memoized so that a field shared by several expressions is
/// computed once per point.
class FormField {
public:
    using Evaluator = std::function<FormValue<Jet>(const std::vector<Jet>&)>;

    FormField() = default;
    FormField(std::string chart, int n, int degree, CoeffSpace space, Evaluator eval, std::string label = {})
        : impl_(std::make_shared<Impl>()) {
        if (n < 1 || n > kMaxJetVars) throw InvalidArgument("form field dimension out of range");
        impl_->chart = std::move(chart);
        impl_->n = n;
        impl_->degree = degree;
        impl_->space = std::move(space);
        impl_->eval = std::move(eval);
        impl_->label = std::move(label);
    }

    const std::string& chart() const { return impl().chart; }
    int n() const { return impl().n; }
    int degree() const { return impl().degree; }
    const CoeffSpace& space() const { return impl().space; }
    const std::string& label() const { return impl().label; }
    bool valid() const { return impl_ != nullptr; }
    const void* identity() const { return impl_.get(); }

    FormValue<Jet> evaluate(const std::vector<Jet>& x) const {
        const Impl& m = impl();
        if (static_cast<int>(x.size()) != m.n) throw InvalidArgument("form field evaluated with wrong number of coordinates");
        {
            std::lock_guard<std::mutex> lock(m.mutex);
            if (m.cached && m.key == x) return *m.cached;
        }
        FormValue<Jet> v = m.eval(x);
        if (v.n() != m.n || v.degree() != m.degree || !(v.space() == m.space))
            throw ConsistencyError("form field " + m.label + " produced a value of the wrong shape");
        std::lock_guard<std::mutex> lock(m.mutex);
        m.key = x;
        m.cached = v;
        return v;
    }

    FormValue<Jet> at(std::span<const double> point, int order) const { return evaluate(coordinate_jets(point, order)); }
    FormValue<double> values(std::span<const double> point, int order) const { return at(point, order).values(); }

    FormField relabeled(std::string label) const {
        FormField f = *this;
        f.impl_ = std::make_shared<Impl>();
        f.impl_->chart = chart();
        f.impl_->n = n();
        f.impl_->degree = degree();
        f.impl_->space = space();
        f.impl_->eval = impl().eval;
        f.impl_->label = std::move(label);
        return f;
    }

    /// Constant coefficients (every jet has zero derivatives).
    static FormField constant(std::string chart, const FormValue<double>& value, std::string label = {}) {
        return FormField(std::move(chart), value.n(), value.degree(), value.space(),
                         [value](const std::vector<Jet>& x) {
                             FormValue<Jet> out(value.n(), value.degree(), value.space());
                             const Jet zero = Jet::constant(x.front().nvars(), x.front().order(), 0.0);
                             for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = zero + Jet(value.data()[i]);
                             return out;
                         },
                         std::move(label));
    }

    static FormField zero(std::string chart, int n, int degree, CoeffSpace space, std::string label = {}) {
        return constant(std::move(chart), FormValue<double>(n, degree, std::move(space)), std::move(label));
    }

private:
    struct Impl {
        std::string chart;
        int n = 0;
        int degree = 0;
        CoeffSpace space;
        Evaluator eval;
        std::string label;
        mutable std::mutex mutex;
        mutable std::vector<Jet> key;
        mutable std::optional<FormValue<Jet>> cached;
    };
    const Impl& impl() const {
        if (!impl_) throw InvalidArgument("empty form field");
        return *impl_;
    }
    std::shared_ptr<Impl> impl_;
};

inline void check_same_chart(const FormField& a, const FormField& b) {
    if (a.chart() != b.chart() || a.n() != b.n())
        throw InvalidArgument("forms live on different charts: " + a.chart() + " vs " + b.chart());
}

/// theta(d/dx_i) = e_i.
inline FormField coordinate_coframe(const std::string& chart, int n) {
    FormValue<double> v(n, 1, CoeffSpace::V(n));
    for (int i = 0; i < n; ++i) v(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 1.0;
    return FormField::constant(chart, v, "theta");
}

inline FormField operator+(const FormField& a, const FormField& b) {
    check_same_chart(a, b);
    if (a.degree() != b.degree() || !(a.space() == b.space())) throw InvalidArgument("sum of forms of different shape");
    return FormField(a.chart(), a.n(), a.degree(), a.space(), [a, b](const std::vector<Jet>& x) { return a.evaluate(x) + b.evaluate(x); });
}

inline FormField operator-(const FormField& a, const FormField& b) {
    check_same_chart(a, b);
    if (a.degree() != b.degree() || !(a.space() == b.space())) throw InvalidArgument("difference of forms of different shape");
    return FormField(a.chart(), a.n(), a.degree(), a.space(), [a, b](const std::vector<Jet>& x) { return a.evaluate(x) - b.evaluate(x); });
}

inline FormField operator*(double s, const FormField& a) {
    return FormField(a.chart(), a.n(), a.degree(), a.space(), [a, s](const std::vector<Jet>& x) { return a.evaluate(x) * s; });
}

inline FormField wedge_tensor(const FormField& a, const FormField& b) {
    check_same_chart(a, b);
    return FormField(a.chart(), a.n(), a.degree() + b.degree(), a.space() * b.space(),
                     [a, b](const std::vector<Jet>& x) { return wedge_tensor(a.evaluate(x), b.evaluate(x)); });
}

inline FormField act_wedge(const LieAlgebraPtr& alg, const FormField& phi, const FormField& psi) {
    check_same_chart(phi, psi);
    if (!(phi.space() == CoeffSpace::g(alg->dim()))) throw InvalidArgument("act_wedge: first argument must be g-valued");
    return FormField(phi.chart(), phi.n(), phi.degree() + psi.degree(), psi.space(),
                     [alg, phi, psi](const std::vector<Jet>& x) { return act_wedge(*alg, phi.evaluate(x), psi.evaluate(x)); });
}

inline FormField rho_wedge(const LieAlgebraPtr& alg, const FormField& phi, const FormField& psi) {
    if (!(psi.space() == CoeffSpace::V(alg->rep_dim()))) throw InvalidArgument("rho_wedge: second argument must be V-valued");
    return act_wedge(alg, phi, psi);
}

inline FormField lie_wedge(const LieAlgebraPtr& alg, const FormField& phi, const FormField& psi) {
    if (!(psi.space() == CoeffSpace::g(alg->dim()))) throw InvalidArgument("lie_wedge: second argument must be g-valued");
    return act_wedge(alg, phi, psi);
}

inline FormField exterior_derivative(const FormField& psi) {
    return FormField(psi.chart(), psi.n(), psi.degree() + 1, psi.space(),
                     [psi](const std::vector<Jet>& x) { return exterior_derivative(psi.evaluate(x)); });
}

/// d_omega Psi = d Psi + rho'_wedge(omega) Psi.
inline FormField covariant_derivative(const LieAlgebraPtr& alg, const FormField& omega, const FormField& psi) {
    check_same_chart(omega, psi);
    if (omega.degree() != 1) throw InvalidArgument("covariant_derivative: connection must be a 1-form");
    return FormField(psi.chart(), psi.n(), psi.degree() + 1, psi.space(), [alg, omega, psi](const std::vector<Jet>& x) {
        const auto p = psi.evaluate(x);
        return exterior_derivative(p) + act_wedge(*alg, omega.evaluate(x), p);
    });
}

template <class S>
FormField contract(const MultilinearTensor<S>& f, const FormField& psi) {
    if (f.domain() != psi.space().factors) throw InvalidArgument("contract: tensor domain does not match coefficient space");
    auto fd = f.template cast<double>();
    return FormField(psi.chart(), psi.n(), psi.degree(), CoeffSpace::scalar(),
                     [fd, psi](const std::vector<Jet>& x) { return contract(fd, psi.evaluate(x)); });
}

}  // namespace gstruct
