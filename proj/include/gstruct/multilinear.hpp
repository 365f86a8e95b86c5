#pragma once

#include "gstruct/combinatorics.hpp"
#include "gstruct/error.hpp"
#include "gstruct/liealg.hpp"
#include "gstruct/matrix.hpp"
#include "gstruct/rational.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gstruct {

enum class FactorKind { V, g };

/// One tensor factor: the representation space V or the Lie algebra g.
struct VSpace {
    FactorKind kind = FactorKind::V;
    int dim = 1;

    friend bool operator==(const VSpace&, const VSpace&) = default;
};

inline std::string label(FactorKind k) { return k == FactorKind::V ? "V" : "g"; }

struct Symmetry {
    bool symmetric_g = false;
    bool alternating_V = false;

    friend bool operator==(const Symmetry&, const Symmetry&) = default;
};

/// Dense k-linear form on a product of factor spaces, components row-major
/// with one index per factor. Elements of S^p(g*) (x) Lambda^q(V*) use the
/// domain g^p followed by V^q.
template <class S>
class MultilinearTensor {
public:
    MultilinearTensor() : comps_(1, S(0)) {}

    explicit MultilinearTensor(std::vector<VSpace> domain, const S& fill = S(0)) : domain_(std::move(domain)) {
        std::size_t size = 1;
        for (const auto& f : domain_) {
            if (f.dim < 1) throw InvalidArgument("factor dimension must be >= 1");
            size *= static_cast<std::size_t>(f.dim);
        }
        comps_.assign(size, fill);
        strides_.assign(domain_.size(), 1);
        for (std::size_t i = domain_.size(); i-- > 1;)
            strides_[i - 1] = strides_[i] * static_cast<std::size_t>(domain_[i].dim);
    }

    /// Domain g^p x V^q.
    static MultilinearTensor bigraded(int dim_g, int p, int dim_v, int q) {
        std::vector<VSpace> d;
        for (int i = 0; i < p; ++i) d.push_back({FactorKind::g, dim_g});
        for (int i = 0; i < q; ++i) d.push_back({FactorKind::V, dim_v});
        return MultilinearTensor(std::move(d));
    }

    static MultilinearTensor scalar(const S& value) {
        MultilinearTensor t;
        t.comps_[0] = value;
        return t;
    }

    const std::vector<VSpace>& domain() const { return domain_; }
    int rank() const { return static_cast<int>(domain_.size()); }
    int p() const { return count(FactorKind::g); }
    int q() const { return count(FactorKind::V); }
    std::size_t size() const { return comps_.size(); }
    const std::vector<S>& components() const { return comps_; }
    std::vector<S>& components() { return comps_; }
    const Symmetry& symmetry() const { return symmetry_; }

    /// Declares index symmetries; they are validated against the components.
    void set_symmetry(Symmetry s) {
        symmetry_ = s;
        if (!satisfies_symmetry()) throw InvalidArgument("components do not satisfy the declared symmetry");
    }
    void clear_symmetry() { symmetry_ = {}; }

    bool is_bigraded() const {
        bool seen_v = false;
        for (const auto& f : domain_) {
            if (f.kind == FactorKind::V) seen_v = true;
            else if (seen_v) return false;
        }
        return true;
    }

    std::size_t flat_index(std::span<const int> idx) const {
        if (idx.size() != domain_.size()) throw InvalidArgument("index arity mismatch");
        std::size_t f = 0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] < 0 || idx[i] >= domain_[i].dim) throw InvalidArgument("index out of range");
            f += strides_[i] * static_cast<std::size_t>(idx[i]);
        }
        return f;
    }

    std::vector<int> multi_index(std::size_t flat) const {
        std::vector<int> idx(domain_.size());
        for (std::size_t i = 0; i < domain_.size(); ++i) {
            idx[i] = static_cast<int>(flat / strides_[i]);
            flat %= strides_[i];
        }
        return idx;
    }

    S& at(std::span<const int> idx) { return comps_[flat_index(idx)]; }
    const S& at(std::span<const int> idx) const { return comps_[flat_index(idx)]; }
    S& at(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }
    const S& at(std::initializer_list<int> idx) const { return at(std::span<const int>(idx.begin(), idx.size())); }

    MultilinearTensor& operator+=(const MultilinearTensor& o) {
        check_domain(o);
        for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
        if (!(symmetry_ == o.symmetry_)) symmetry_ = {};
        return *this;
    }
    MultilinearTensor& operator-=(const MultilinearTensor& o) {
        check_domain(o);
        for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= o.comps_[i];
        if (!(symmetry_ == o.symmetry_)) symmetry_ = {};
        return *this;
    }
    MultilinearTensor& operator*=(const S& s) {
        for (auto& c : comps_) c *= s;
        return *this;
    }
    friend MultilinearTensor operator+(MultilinearTensor a, const MultilinearTensor& b) { return a += b; }
    friend MultilinearTensor operator-(MultilinearTensor a, const MultilinearTensor& b) { return a -= b; }
    friend MultilinearTensor operator*(MultilinearTensor a, const S& s) { return a *= s; }
    friend MultilinearTensor operator*(const S& s, MultilinearTensor a) { return a *= s; }

    friend bool operator==(const MultilinearTensor& a, const MultilinearTensor& b) {
        return a.domain_ == b.domain_ && a.comps_ == b.comps_;
    }

    bool is_zero() const {
        for (const auto& c : comps_)
            if (!gstruct::is_zero(c)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0;
        for (const auto& c : comps_) m = std::max(m, magnitude(c));
        return m;
    }

    template <class T>
    MultilinearTensor<T> cast() const {
        MultilinearTensor<T> out(domain_);
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            if constexpr (is_exact_v<S> && !is_exact_v<T>)
                out.components()[i] = T(to_double(comps_[i]));
            else
                out.components()[i] = T(comps_[i]);
        }
        out.symmetry_unchecked(symmetry_);
        return out;
    }

    void symmetry_unchecked(Symmetry s) { symmetry_ = s; }

    /// Checks the declared symmetries exactly (rational) or to 1e-12 (float).
    bool satisfies_symmetry() const;

private:
    int count(FactorKind k) const {
        int c = 0;
        for (const auto& f : domain_) c += f.kind == k;
        return c;
    }
    void check_domain(const MultilinearTensor& o) const {
        if (domain_ != o.domain_) throw InvalidArgument("tensor domain mismatch");
    }

    std::vector<VSpace> domain_;
    std::vector<std::size_t> strides_;
    std::vector<S> comps_;
    Symmetry symmetry_;
};

/// out(i_0, ..., i_{k-1}) = f(i_{perm[0]}, ..., i_{perm[k-1]}) for positions inside
/// the block [begin, begin + perm.size()); other slots untouched.
template <class S>
MultilinearTensor<S> permute_block(const MultilinearTensor<S>& f, int begin, const std::vector<int>& perm) {
    MultilinearTensor<S> out(f.domain());
    std::vector<int> src(static_cast<std::size_t>(f.rank()));
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        const auto idx = out.multi_index(flat);
        src = idx;
        for (std::size_t j = 0; j < perm.size(); ++j)
            src[static_cast<std::size_t>(begin) + j] = idx[static_cast<std::size_t>(begin + perm[j])];
        out.components()[flat] = f.at(std::span<const int>(src));
    }
    return out;
}

/// Moves slot j of f to slot target[j] of the result (domain permuted accordingly).
template <class S>
MultilinearTensor<S> move_slots(const MultilinearTensor<S>& f, const std::vector<int>& target) {
    if (static_cast<int>(target.size()) != f.rank()) throw InvalidArgument("move_slots: permutation arity mismatch");
    std::vector<VSpace> dom(f.domain().size());
    for (std::size_t j = 0; j < target.size(); ++j) dom[static_cast<std::size_t>(target[j])] = f.domain()[j];
    MultilinearTensor<S> out(std::move(dom));
    std::vector<int> src(target.size());
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        const auto idx = out.multi_index(flat);
        for (std::size_t j = 0; j < target.size(); ++j) src[j] = idx[static_cast<std::size_t>(target[j])];
        out.components()[flat] = f.at(std::span<const int>(src));
    }
    return out;
}

/// Average of f over permutations of the slots [begin, begin + count), with
/// permutation signs when `alternating`.
template <class S>
MultilinearTensor<S> project_block(const MultilinearTensor<S>& f, int begin, int count, bool alternating) {
    if (begin < 0 || count < 0 || begin + count > f.rank()) throw InvalidArgument("slot block out of range");
    for (int i = begin + 1; i < begin + count; ++i)
        if (!(f.domain()[static_cast<std::size_t>(i)] == f.domain()[static_cast<std::size_t>(begin)]))
            throw InvalidArgument("projection block mixes factor spaces");
    if (count <= 1) return f;
    MultilinearTensor<S> out(f.domain());
    const auto perms = comb::permutations(count);
    std::vector<int> src(static_cast<std::size_t>(f.rank()));
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        const auto idx = out.multi_index(flat);
        S acc(0);
        for (const auto& [perm, sign] : perms) {
            src = idx;
            for (int j = 0; j < count; ++j)
                src[static_cast<std::size_t>(begin + j)] = idx[static_cast<std::size_t>(begin + perm[static_cast<std::size_t>(j)])];
            if (alternating && sign < 0)
                acc -= f.at(std::span<const int>(src));
            else
                acc += f.at(std::span<const int>(src));
        }
        out.components()[flat] = acc / S(static_cast<long>(perms.size()));
    }
    return out;
}

/// alt f = (1/k!) sum sign(sigma) f o sigma. All factors must coincide.
template <class S>
MultilinearTensor<S> alternate(const MultilinearTensor<S>& f) {
    auto out = project_block(f, 0, f.rank(), true);
    Symmetry s;
    s.alternating_V = f.p() == 0;
    out.symmetry_unchecked(s);
    return out;
}

template <class S>
MultilinearTensor<S> symmetrize(const MultilinearTensor<S>& f) {
    auto out = project_block(f, 0, f.rank(), false);
    Symmetry s;
    s.symmetric_g = f.q() == 0;
    out.symmetry_unchecked(s);
    return out;
}

/// Symmetrize the g-block and alternate the V-block of a bigraded tensor:
/// the projection onto S^p(g*) (x) Lambda^q(V*).
template <class S>
MultilinearTensor<S> project_bigraded(const MultilinearTensor<S>& f) {
    if (!f.is_bigraded()) throw InvalidArgument("tensor is not ordered g^p x V^q");
    auto out = project_block(project_block(f, 0, f.p(), false), f.p(), f.q(), true);
    out.symmetry_unchecked({true, true});
    return out;
}

template <class S>
bool MultilinearTensor<S>::satisfies_symmetry() const {
    if (!symmetry_.symmetric_g && !symmetry_.alternating_V) return true;
    if (!is_bigraded()) return false;
    MultilinearTensor<S> plain = *this;
    plain.symmetry_ = {};
    MultilinearTensor<S> proj = plain;
    if (symmetry_.symmetric_g) proj = project_block(proj, 0, p(), false);
    if (symmetry_.alternating_V) proj = project_block(proj, p(), q(), true);
    if constexpr (is_exact_v<S>) {
        return proj.comps_ == comps_;
    } else {
        return (proj - plain).max_abs() <= 1e-12;
    }
}

/// Concatenated domain, out(i, j) = a(i) b(j).
template <class S>
MultilinearTensor<S> tensor_product(const MultilinearTensor<S>& a, const MultilinearTensor<S>& b) {
    auto dom = a.domain();
    dom.insert(dom.end(), b.domain().begin(), b.domain().end());
    MultilinearTensor<S> out(std::move(dom));
    std::size_t k = 0;
    for (const auto& x : a.components())
        for (const auto& y : b.components()) out.components()[k++] = x * y;
    return out;
}

/// Multilinear contraction sum f_{i1..ik} v1^{i1} ... vk^{ik}.
template <class S>
S tensor_eval(const MultilinearTensor<S>& f, const std::vector<std::vector<S>>& args) {
    if (args.size() != f.domain().size()) throw InvalidArgument("tensor_eval: wrong number of arguments");
    for (std::size_t i = 0; i < args.size(); ++i)
        if (static_cast<int>(args[i].size()) != f.domain()[i].dim)
            throw InvalidArgument("tensor_eval: argument " + std::to_string(i) + " has wrong dimension");
    // contract the last slot first
    std::vector<S> cur = f.components();
    for (std::size_t slot = args.size(); slot-- > 0;) {
        const auto d = args[slot].size();
        std::vector<S> next(cur.size() / d, S(0));
        for (std::size_t i = 0; i < next.size(); ++i)
            for (std::size_t j = 0; j < d; ++j) next[i] += cur[i * d + j] * args[slot][j];
        cur = std::move(next);
    }
    return cur[0];
}

/// An algebra element acting on the factor spaces: rho'(X) on V and ad(X) on g.
template <class S>
struct AlgebraAction {
    Matrix<S> on_V;
    std::optional<Matrix<S>> on_g;
};

template <class S>
AlgebraAction<S> action_of(const LieAlgebraSpec& alg, const std::vector<S>& x) {
    AlgebraAction<S> act;
    act.on_V = alg.element(x);
    const auto d = static_cast<std::size_t>(alg.dim());
    Matrix<S> ad(d, d, S(0));
    for (std::size_t a = 0; a < d; ++a) {
        if (is_zero(x[a])) continue;
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t b = 0; b < d; ++b) {
                const auto& c = alg.structure_constant(static_cast<int>(r), static_cast<int>(a), static_cast<int>(b));
                if (c != 0) ad(r, b) += scalar_from_rational<S>(c) * x[a];
            }
    }
    act.on_g = std::move(ad);
    return act;
}

template <class S>
AlgebraAction<S> basis_action(const LieAlgebraSpec& alg, int a) {
    std::vector<S> x(static_cast<std::size_t>(alg.dim()), S(0));
    x[static_cast<std::size_t>(a)] = S(1);
    return action_of(alg, x);
}

/// (X.f)(v_1..v_k) = -sum_i f(v_1, .., M_i v_i, .., v_k) with M_i = rho'(X) on V
/// slots and ad(X) on g slots (the coadjoint extension). With X = identity in
/// gl(n) a pure V-tensor of valence k maps to -k f.
template <class S>
MultilinearTensor<S> infinitesimal_action(const AlgebraAction<S>& x, const MultilinearTensor<S>& f) {
    for (const auto& fac : f.domain()) {
        if (fac.kind == FactorKind::V && static_cast<std::size_t>(fac.dim) != x.on_V.rows())
            throw InvalidArgument("infinitesimal_action: V factor dimension mismatch");
        if (fac.kind == FactorKind::g) {
            if (!x.on_g) throw InvalidArgument("infinitesimal_action: g factor needs an adjoint action");
            if (static_cast<std::size_t>(fac.dim) != x.on_g->rows())
                throw InvalidArgument("infinitesimal_action: g factor dimension mismatch");
        }
    }
    MultilinearTensor<S> out(f.domain());
    std::vector<int> src;
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        const auto idx = out.multi_index(flat);
        S acc(0);
        for (std::size_t slot = 0; slot < idx.size(); ++slot) {
            const Matrix<S>& m = f.domain()[slot].kind == FactorKind::V ? x.on_V : *x.on_g;
            src = idx;
            for (int r = 0; r < f.domain()[slot].dim; ++r) {
                const S& coef = m(static_cast<std::size_t>(r), static_cast<std::size_t>(idx[slot]));
                if (is_zero(coef)) continue;
                src[slot] = r;
                acc -= coef * f.at(std::span<const int>(src));
            }
        }
        out.components()[flat] = acc;
    }
    return out;
}

struct InvarianceResult {
    bool invariant = false;
    double residual = 0.0;  // max-norm of X_a . f over the basis
};

/// Invariant iff X_a . f = 0 for every basis element; exact for rationals,
/// max-norm < 1e-10 for floats.
template <class S>
InvarianceResult is_invariant(const MultilinearTensor<S>& f, const LieAlgebraSpec& alg) {
    InvarianceResult r;
    bool exact_zero = true;
    for (int a = 0; a < alg.dim(); ++a) {
        const auto xf = infinitesimal_action(basis_action<S>(alg, a), f);
        r.residual = std::max(r.residual, xf.max_abs());
        if (!xf.is_zero()) exact_zero = false;
    }
    if constexpr (is_exact_v<S>)
        r.invariant = exact_zero;
    else
        r.invariant = r.residual < 1e-10;
    return r;
}

/// Pullback by a group element: (g.f)(v_1..) = f(g^{-1} v_1, ..) on V slots and
/// Ad(g^{-1}) on g slots; `ad_inverse` is Ad(g^{-1}) in basis coordinates.
inline MultilinearTensor<double> group_transform(const MultilinearTensor<double>& f, const Matrix<double>& g_inverse,
                                                 const Matrix<double>& ad_inverse) {
    MultilinearTensor<double> cur = f;
    for (std::size_t slot = 0; slot < f.domain().size(); ++slot) {
        const Matrix<double>& m = f.domain()[slot].kind == FactorKind::V ? g_inverse : ad_inverse;
        MultilinearTensor<double> next(f.domain());
        std::vector<int> src;
        for (std::size_t flat = 0; flat < next.size(); ++flat) {
            const auto idx = next.multi_index(flat);
            src = idx;
            double acc = 0;
            for (int r = 0; r < f.domain()[slot].dim; ++r) {
                src[slot] = r;
                acc += m(static_cast<std::size_t>(r), static_cast<std::size_t>(idx[slot])) * cur.at(std::span<const int>(src));
            }
            next.components()[flat] = acc;
        }
        cur = std::move(next);
    }
    return cur;
}

template <class S>
nlohmann::json to_json(const MultilinearTensor<S>& f) {
    nlohmann::json j;
    auto dom = nlohmann::json::array();
    for (const auto& d : f.domain()) dom.push_back({{"space", label(d.kind)}, {"dim", d.dim}});
    j["domain"] = dom;
    j["bidegree"] = {f.p(), f.q()};
    j["symmetry"] = {{"symmetric_g", f.symmetry().symmetric_g}, {"alternating_V", f.symmetry().alternating_V}};
    auto comps = nlohmann::json::array();
    for (const auto& c : f.components()) {
        if constexpr (is_exact_v<S>)
            comps.push_back(c.str());
        else
            comps.push_back(c);
    }
    j["components"] = comps;
    j["scalar_kind"] = is_exact_v<S> ? "exact_rational" : "float64";
    return j;
}

template <class S>
MultilinearTensor<S> tensor_from_json(const nlohmann::json& j) {
    std::vector<VSpace> dom;
    for (const auto& d : j.at("domain")) {
        const auto space = d.at("space").get<std::string>();
        if (space != "V" && space != "g") throw InvalidArgument("tensor JSON: unknown factor space " + space);
        dom.push_back({space == "V" ? FactorKind::V : FactorKind::g, d.at("dim").get<int>()});
    }
    MultilinearTensor<S> f(std::move(dom));
    const auto& comps = j.at("components");
    if (comps.size() != f.size()) throw InvalidArgument("tensor JSON: component count mismatch");
    for (std::size_t i = 0; i < f.size(); ++i) {
        if constexpr (is_exact_v<S>) {
            f.components()[i] = comps[i].is_string() ? Rational(comps[i].get<std::string>()) : Rational(comps[i].get<long long>());
        } else {
            f.components()[i] = comps[i].is_string() ? to_double(Rational(comps[i].get<std::string>())) : comps[i].get<double>();
        }
    }
    if (j.contains("symmetry"))
        f.set_symmetry({j["symmetry"].value("symmetric_g", false), j["symmetry"].value("alternating_V", false)});
    return f;
}

}  // namespace gstruct
