#pragma once

#include "gstruct/combinatorics.hpp"
#include "gstruct/error.hpp"
#include "gstruct/exact_linalg.hpp"
#include "gstruct/liealg.hpp"
#include "gstruct/multilinear.hpp"

#include <map>
#include <vector>

namespace gstruct {

inline constexpr int kMaxSymmetricDegree = 3;
inline constexpr std::size_t kMaxInvariantUnknowns = 4000;

/// Element of A(g,V) = S(g*) (x) Lambda(V*), stored as a bigraded tensor that is
/// symmetric in the g-block and alternating in the V-block.
struct AlgebraElement {
    MultilinearTensor<Rational> tensor;

    int p() const { return tensor.p(); }
    int q() const { return tensor.q(); }
    /// Generators of S(g*) have degree 2.
    int degree() const { return 2 * p() + q(); }

    static AlgebraElement unit() { return {MultilinearTensor<Rational>::scalar(Rational(1))}; }
};

struct InvariantBasis {
    int p = 0;
    int q = 0;
    std::string algebra;
    std::vector<MultilinearTensor<Rational>> elements;
    /// Coordinates of each element on the monomial basis of S^p (x) Lambda^q,
    /// coprime integers, reduced echelon with positive leading entries.
    std::vector<std::vector<Integer>> coordinates;

    std::size_t dimension() const { return elements.size(); }
};

/// Monomial basis of S^p(g*) (x) Lambda^q(V*): a multiset m of g-indices and an
/// increasing tuple s of V-indices. The basis tensor b_{m,s} equals sign(sigma)
/// on every rearrangement (pi(m), sigma(s)), so a symmetric/alternating tensor
/// has coordinate T(m, s) on b_{m,s}.
class BigradedMonomials {
public:
    BigradedMonomials(int dim_g, int p, int dim_v, int q)
        : dim_g_(dim_g), p_(p), dim_v_(dim_v), q_(q), g_part_(comb::multisets(dim_g, p)), v_table_(&comb::subsets(dim_v, q)) {
        for (std::size_t i = 0; i < g_part_.size(); ++i) g_rank_.emplace(g_part_[i], static_cast<int>(i));
    }

    std::size_t size() const { return g_part_.size() * v_table_->size(); }
    std::size_t v_count() const { return v_table_->size(); }
    const std::vector<int>& g_multiset(std::size_t col) const { return g_part_[col / v_count()]; }
    const std::vector<int>& v_tuple(std::size_t col) const { return v_table_->indices[col % v_count()]; }

    /// Canonical index (m, s) of column `col`, laid out g-slots then V-slots.
    std::vector<int> canonical_index(std::size_t col) const {
        std::vector<int> idx = g_multiset(col);
        const auto& v = v_tuple(col);
        idx.insert(idx.end(), v.begin(), v.end());
        return idx;
    }

    /// Column and sign of an arbitrary index; sign 0 if the V-part repeats.
    std::pair<std::size_t, int> locate(const std::vector<int>& idx) const {
        std::vector<int> g(idx.begin(), idx.begin() + p_);
        std::sort(g.begin(), g.end());
        std::vector<int> v(idx.begin() + p_, idx.end());
        const int sign = comb::sort_sign(v);
        if (sign == 0) return {0, 0};
        std::uint32_t mask = 0;
        for (int i : v) mask |= 1u << i;
        const auto col = static_cast<std::size_t>(g_rank_.at(g)) * v_count() + static_cast<std::size_t>(v_table_->rank(mask));
        return {col, sign};
    }

    MultilinearTensor<Rational> to_tensor(const std::vector<Integer>& coords) const {
        auto t = MultilinearTensor<Rational>::bigraded(dim_g_, p_, dim_v_, q_);
        for (std::size_t flat = 0; flat < t.size(); ++flat) {
            const auto [col, sign] = locate(t.multi_index(flat));
            if (sign == 0) continue;
            t.components()[flat] = Rational(coords[col]) * sign;
        }
        t.symmetry_unchecked({true, true});
        return t;
    }

    int p() const { return p_; }
    int q() const { return q_; }

private:
    int dim_g_, p_, dim_v_, q_;
    std::vector<std::vector<int>> g_part_;
    std::map<std::vector<int>, int> g_rank_;
    const comb::SubsetTable* v_table_;
};

/// Basis of (S^p(g*) (x) Lambda^q(V*))^g: the common kernel of the
/// infinitesimal actions of the basis of g, solved in exact arithmetic on the
/// monomial coordinates. Connected G is assumed (kernel of the algebra action).
inline InvariantBasis invariant_basis(const LieAlgebraSpec& alg, int p, int q) {
    const int n = alg.rep_dim();
    const int dg = alg.dim();
    if (p < 0 || q < 0) throw InvalidArgument("negative bidegree");
    if (n > kMaxRepresentationDim) throw SizeLimitError("invariant_basis: dim V exceeds desk scale", static_cast<std::size_t>(n));
    if (p > kMaxSymmetricDegree) throw SizeLimitError("invariant_basis: symmetric degree p exceeds 3", static_cast<std::size_t>(p));
    if (q > n) throw InvalidArgument("invariant_basis: q exceeds dim V");
    const std::size_t unknowns = comb::binomial(dg + p - 1, p) * comb::binomial(n, q);
    if (unknowns > kMaxInvariantUnknowns) throw SizeLimitError("invariant_basis: too many unknowns", unknowns);

    BigradedMonomials mono(dg, p, n, q);
    const std::size_t N = mono.size();
    exact::IntegerEchelon echelon(N);

    std::vector<Matrix<Rational>> ads;
    for (int a = 0; a < dg; ++a) ads.push_back(alg.ad<Rational>(a));

    std::vector<Rational> row(N);
    for (int a = 0; a < dg && echelon.rank() < N; ++a) {
        const Matrix<Rational>& on_v = alg.basis(a);
        const Matrix<Rational>& on_g = ads[static_cast<std::size_t>(a)];
        for (std::size_t I = 0; I < N; ++I) {
            std::fill(row.begin(), row.end(), Rational(0));
            const auto idx = mono.canonical_index(I);
            auto J = idx;
            bool nonzero = false;
            for (std::size_t slot = 0; slot < idx.size(); ++slot) {
                const bool is_g = static_cast<int>(slot) < p;
                const Matrix<Rational>& m = is_g ? on_g : on_v;
                const int dim = is_g ? dg : n;
                for (int r = 0; r < dim; ++r) {
                    const Rational& coef = m(static_cast<std::size_t>(r), static_cast<std::size_t>(idx[slot]));
                    if (coef == 0) continue;
                    J[slot] = r;
                    const auto [col, sign] = mono.locate(J);
                    if (sign != 0) {
                        row[col] -= coef * sign;
                        nonzero = true;
                    }
                }
                J[slot] = idx[slot];
            }
            if (nonzero) {
                bool any = false;
                for (const auto& x : row) any = any || x != 0;
                if (any) echelon.insert(primitive_integer_vector(row));
            }
        }
    }

    InvariantBasis basis;
    basis.p = p;
    basis.q = q;
    basis.algebra = alg.name();
    basis.coordinates = exact::canonical_basis(exact::nullspace(echelon), N);
    for (const auto& c : basis.coordinates) basis.elements.push_back(mono.to_tensor(c));
    return basis;
}

/// Associative graded-commutative product: tensor, regroup as g-block then
/// V-block, symmetrize the g-block and alternate the V-block.
inline AlgebraElement product(const AlgebraElement& a, const AlgebraElement& b) {
    const auto& ta = a.tensor;
    const auto& tb = b.tensor;
    if (!ta.is_bigraded() || !tb.is_bigraded()) throw InvalidArgument("product: operands must be bigraded");
    const int pa = ta.p(), qa = ta.q(), pb = tb.p(), qb = tb.q();
    auto check = [](const MultilinearTensor<Rational>& x, const MultilinearTensor<Rational>& y, FactorKind k) {
        for (const auto& f : x.domain())
            for (const auto& h : y.domain())
                if (f.kind == k && h.kind == k && f.dim != h.dim) throw InvalidArgument("product: factor dimension mismatch");
    };
    check(ta, tb, FactorKind::g);
    check(ta, tb, FactorKind::V);
    std::vector<int> target;
    for (int i = 0; i < pa; ++i) target.push_back(i);
    for (int i = 0; i < qa; ++i) target.push_back(pa + pb + i);
    for (int i = 0; i < pb; ++i) target.push_back(pa + i);
    for (int i = 0; i < qb; ++i) target.push_back(pa + pb + qa + i);
    return {project_bigraded(move_slots(tensor_product(ta, tb), target))};
}

/// [a (x) phi, b (x) psi] = {a, b} (x) phi ^ psi, where {.,.} is the Lie-Poisson
/// bracket transported to S(g*) by the invariant pairing B (g* ~ g via B).
/// For linear a, b: {a, b}(Z) = B([B^-1 a, B^-1 b], Z).
inline AlgebraElement graded_bracket(const AlgebraElement& x, const AlgebraElement& y, const LieAlgebraSpec& alg,
                                     const Matrix<Rational>& pairing) {
    const int dg = alg.dim();
    if (pairing.rows() != static_cast<std::size_t>(dg) || pairing.cols() != static_cast<std::size_t>(dg))
        throw InvalidArgument("graded_bracket: pairing has wrong size");
    if (exact::rank(pairing) != static_cast<std::size_t>(dg)) throw InvalidArgument("graded_bracket: degenerate pairing");
    const auto& tx = x.tensor;
    const auto& ty = y.tensor;
    const int p = tx.p(), q = tx.q(), r = ty.p(), s = ty.q();
    int n = alg.rep_dim();
    for (const auto& f : tx.domain())
        if (f.kind == FactorKind::V) n = f.dim;
    const int out_p = std::max(p + r - 1, 0);
    auto out = MultilinearTensor<Rational>::bigraded(dg, out_p, n, q + s);
    out.symmetry_unchecked({true, true});
    if (p == 0 || r == 0 || alg.is_abelian()) return {out};

    const Matrix<Rational> binv = inverse(pairing);
    // K[m][k'][l'] = sum B_{mn} c^n_{kl} Binv^{kk'} Binv^{ll'}
    const auto D = static_cast<std::size_t>(dg);
    std::vector<Rational> K(D * D * D, Rational(0));
    for (std::size_t m = 0; m < D; ++m)
        for (std::size_t nn = 0; nn < D; ++nn) {
            if (pairing(m, nn) == 0) continue;
            for (std::size_t k = 0; k < D; ++k)
                for (std::size_t l = 0; l < D; ++l) {
                    const auto& c = alg.structure_constant(static_cast<int>(nn), static_cast<int>(k), static_cast<int>(l));
                    if (c == 0) continue;
                    const Rational bc = pairing(m, nn) * c;
                    for (std::size_t k2 = 0; k2 < D; ++k2) {
                        if (binv(k, k2) == 0) continue;
                        for (std::size_t l2 = 0; l2 < D; ++l2)
                            if (binv(l, l2) != 0) K[(m * D + k2) * D + l2] += bc * binv(k, k2) * binv(l, l2);
                    }
                }
        }

    const Rational scale = Rational(p * r);
    std::vector<int> ix(static_cast<std::size_t>(p + q)), iy(static_cast<std::size_t>(r + s));
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        const auto idx = out.multi_index(flat);
        // idx = (m, I[p-1], J[r-1], Vx[q], Vy[s])
        const int m = idx[0];
        for (int i = 1; i < p; ++i) ix[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i)];
        for (int j = 1; j < r; ++j) iy[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(p - 1 + j)];
        for (int v = 0; v < q; ++v) ix[static_cast<std::size_t>(p + v)] = idx[static_cast<std::size_t>(p + r - 1 + v)];
        for (int w = 0; w < s; ++w) iy[static_cast<std::size_t>(r + w)] = idx[static_cast<std::size_t>(p + r - 1 + q + w)];
        Rational acc = 0;
        for (int k2 = 0; k2 < dg; ++k2) {
            ix[0] = k2;
            const Rational& xv = tx.at(std::span<const int>(ix));
            if (xv == 0) continue;
            for (int l2 = 0; l2 < dg; ++l2) {
                const Rational& kk = K[(static_cast<std::size_t>(m) * D + static_cast<std::size_t>(k2)) * D + static_cast<std::size_t>(l2)];
                if (kk == 0) continue;
                iy[0] = l2;
                const Rational& yv = ty.at(std::span<const int>(iy));
                if (yv != 0) acc += kk * xv * yv;
            }
        }
        out.components()[flat] = acc * scale;
    }
    return {project_bigraded(out)};
}

inline nlohmann::json to_json(const InvariantBasis& b) {
    nlohmann::json j;
    j["algebra"] = b.algebra;
    j["p"] = b.p;
    j["q"] = b.q;
    j["degree"] = 2 * b.p + b.q;
    j["dimension"] = b.dimension();
    auto els = nlohmann::json::array();
    for (const auto& e : b.elements) els.push_back(to_json(e));
    j["basis"] = els;
    return j;
}

}  // namespace gstruct
