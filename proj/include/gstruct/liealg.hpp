#pragma once

#include "gstruct/error.hpp"
#include "gstruct/exact_linalg.hpp"
#include "gstruct/matrix.hpp"
#include "gstruct/rational.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <memory>
#include <string>
#include <vector>

namespace gstruct {

inline constexpr int kMaxRepresentationDim = 6;

/// A matrix Lie algebra g in gl(V). The basis matrices are rho' of the basis,
/// since G acts on V by inclusion. Everything exact is stored as rationals;
/// float copies are kept for the numerical side.
class LieAlgebraSpec {
public:
    /// Validates linear independence and closure, computes structure
    /// constants and checks the Jacobi identity exactly.
    static LieAlgebraSpec from_basis(std::string name, std::vector<Matrix<Rational>> basis) {
        if (basis.empty()) throw InvalidArgument("Lie algebra needs at least one basis element");
        const std::size_t n = basis.front().rows();
        for (const auto& b : basis)
            if (b.rows() != n || b.cols() != n) throw InvalidArgument("basis matrices must be square of equal size");

        LieAlgebraSpec a;
        a.name_ = std::move(name);
        a.n_ = static_cast<int>(n);
        a.basis_ = std::move(basis);
        const std::size_t d = a.basis_.size();

        Matrix<Rational> flat(n * n, d, Rational(0));  // column k = vec(B_k)
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t i = 0; i < n * n; ++i) flat(i, k) = a.basis_[k].data()[i];
        if (exact::rank(flat) != d) throw InvalidArgument("basis matrices of " + a.name_ + " are linearly dependent");
        const Matrix<Rational> ft = flat.transpose();
        a.projector_ = inverse(ft * flat) * ft;

        a.structure_.assign(d * d * d, Rational(0));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const auto c = a.exact_coordinates(commutator(a.basis_[i], a.basis_[j]));
                for (std::size_t k = 0; k < d; ++k) a.structure_[(k * d + i) * d + j] = c[k];
            }
        if (!a.jacobi_holds()) throw ConsistencyError("Jacobi identity fails for " + a.name_);

        a.basis_f_.reserve(d);
        for (const auto& b : a.basis_) a.basis_f_.push_back(matrix_cast<double>(b));
        a.projector_f_ = matrix_cast<double>(a.projector_);
        a.structure_f_.reserve(a.structure_.size());
        for (const auto& c : a.structure_) a.structure_f_.push_back(to_double(c));
        return a;
    }

    const std::string& name() const { return name_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    int rep_dim() const { return n_; }
    const std::vector<Matrix<Rational>>& basis() const { return basis_; }
    const Matrix<Rational>& basis(int i) const { return basis_[static_cast<std::size_t>(i)]; }
    const std::vector<Matrix<double>>& basis_f() const { return basis_f_; }

    /// c^k_{ij} with [X_i, X_j] = sum_k c^k_{ij} X_k.
    const Rational& structure_constant(int k, int i, int j) const {
        const auto d = static_cast<std::size_t>(dim());
        return structure_[(static_cast<std::size_t>(k) * d + static_cast<std::size_t>(i)) * d + static_cast<std::size_t>(j)];
    }
    double structure_constant_f(int k, int i, int j) const {
        const auto d = static_cast<std::size_t>(dim());
        return structure_f_[(static_cast<std::size_t>(k) * d + static_cast<std::size_t>(i)) * d + static_cast<std::size_t>(j)];
    }

    bool is_abelian() const {
        for (const auto& c : structure_)
            if (c != 0) return false;
        return true;
    }

    /// Matrix of ad(X_i) in the basis: column b holds the coordinates of [X_i, X_b].
    template <class S = Rational>
    Matrix<S> ad(int i) const {
        Matrix<S> m(static_cast<std::size_t>(dim()), static_cast<std::size_t>(dim()), S(0));
        for (int r = 0; r < dim(); ++r)
            for (int b = 0; b < dim(); ++b)
                m(static_cast<std::size_t>(r), static_cast<std::size_t>(b)) = scalar_from_rational<S>(structure_constant(r, i, b));
        return m;
    }

    /// rho'(X) for X = sum_a x^a X_a.
    template <class S>
    Matrix<S> element(const std::vector<S>& x) const {
        check_coords(x.size());
        Matrix<S> m(static_cast<std::size_t>(n_), static_cast<std::size_t>(n_), S(0));
        for (std::size_t a = 0; a < x.size(); ++a) {
            if constexpr (is_exact_v<S>) {
                m += basis_[a] * x[a];
            } else {
                for (std::size_t e = 0; e < m.data().size(); ++e) m.data()[e] += x[a] * basis_f_[a].data()[e];
            }
        }
        return m;
    }

    /// Coordinates of a matrix known to lie in the span; throws if it does not.
    std::vector<Rational> exact_coordinates(const Matrix<Rational>& m) const {
        const auto d = static_cast<std::size_t>(dim());
        std::vector<Rational> c(d, Rational(0));
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t i = 0; i < m.data().size(); ++i) c[k] += projector_(k, i) * m.data()[i];
        const auto diff = element(c) - m;
        for (const auto& x : diff.data())
            if (x != 0) throw ConsistencyError("matrix lies outside the span of " + name_);
        return c;
    }

    /// Least-squares coordinates of a numeric matrix (double or jet entries);
    /// `residual` receives the max distance from the span (value part).
    template <class T>
    std::vector<T> coordinates(const Matrix<T>& m, double* residual = nullptr) const {
        const auto d = static_cast<std::size_t>(dim());
        std::vector<T> c(d, T(0));
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t i = 0; i < m.data().size(); ++i) {
                const double p = projector_f_(k, i);
                if (p != 0.0) c[k] += m.data()[i] * p;
            }
        if (residual) {
            double r = 0;
            for (std::size_t i = 0; i < m.data().size(); ++i) {
                T v = m.data()[i];
                for (std::size_t k = 0; k < d; ++k) {
                    const double b = basis_f_[k].data()[i];
                    if (b != 0.0) v -= c[k] * b;
                }
                r = std::max(r, magnitude(v));
            }
            *residual = r;
        }
        return c;
    }

    /// [X, Y] re-expressed in the basis.
    template <class S>
    std::vector<S> bracket(const std::vector<S>& x, const std::vector<S>& y) const {
        check_coords(x.size());
        check_coords(y.size());
        const auto d = static_cast<std::size_t>(dim());
        std::vector<S> out(d, S(0));
        for (std::size_t i = 0; i < d; ++i) {
            if (is_zero(x[i])) continue;
            for (std::size_t j = 0; j < d; ++j) {
                if (is_zero(y[j])) continue;
                for (std::size_t k = 0; k < d; ++k) {
                    const auto& c = structure_constant(static_cast<int>(k), static_cast<int>(i), static_cast<int>(j));
                    if (c == 0) continue;
                    out[k] += scalar_from_rational<S>(c) * x[i] * y[j];
                }
            }
        }
        return out;
    }

    /// Trace form B_ij = tr(X_i X_j), the default invariant pairing.
    Matrix<Rational> trace_form() const {
        const auto d = static_cast<std::size_t>(dim());
        Matrix<Rational> b(d, d, Rational(0));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) b(i, j) = (basis_[i] * basis_[j]).trace();
        return b;
    }

    /// exp(t X) for X given in basis coordinates.
    Matrix<double> exp(const std::vector<double>& x, double t = 1.0) const {
        auto m = element(x);
        m *= t;
        return expm(m);
    }

    bool jacobi_holds() const {
        const int d = dim();
        std::vector<Rational> acc(static_cast<std::size_t>(d));
        auto add_term = [&](int a, int b, int c) {
            // sum_l c^l_{bc} [X_a, X_l]
            for (int l = 0; l < d; ++l) {
                const auto& inner = structure_constant(l, b, c);
                if (inner == 0) continue;
                for (int m = 0; m < d; ++m) {
                    const auto& outer = structure_constant(m, a, l);
                    if (outer != 0) acc[static_cast<std::size_t>(m)] += inner * outer;
                }
            }
        };
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                for (int k = j + 1; k < d; ++k) {
                    std::fill(acc.begin(), acc.end(), Rational(0));
                    add_term(i, j, k);
                    add_term(j, k, i);
                    add_term(k, i, j);
                    for (const auto& x : acc)
                        if (x != 0) return false;
                }
        return true;
    }

private:
    void check_coords(std::size_t n) const {
        if (n != basis_.size()) throw InvalidArgument("algebra element has wrong number of coordinates");
    }

    std::string name_;
    int n_ = 0;
    std::vector<Matrix<Rational>> basis_;
    std::vector<Matrix<double>> basis_f_;
    std::vector<Rational> structure_;
    std::vector<double> structure_f_;
    Matrix<Rational> projector_;
    Matrix<double> projector_f_;
};

using LieAlgebraPtr = std::shared_ptr<const LieAlgebraSpec>;

namespace detail {

inline Matrix<Rational> unit(std::size_t n, std::size_t i, std::size_t j) {
    Matrix<Rational> m(n, n, Rational(0));
    m(i, j) = 1;
    return m;
}

/// Permutation taking block coordinates (x_1..x_n, y_1..y_n) to interleaved
/// (x_1, y_1, x_2, y_2, ...): P e_k = e_{perm(k)}.
inline Matrix<Rational> interleave(std::size_t n) {
    Matrix<Rational> p(2 * n, 2 * n, Rational(0));
    for (std::size_t k = 0; k < n; ++k) {
        p(2 * k, k) = 1;
        p(2 * k + 1, n + k) = 1;
    }
    return p;
}

inline std::vector<Matrix<Rational>> conjugate_all(const std::vector<Matrix<Rational>>& b, const Matrix<Rational>& p) {
    std::vector<Matrix<Rational>> out;
    const auto pt = p.transpose();
    for (const auto& m : b) out.push_back(p * m * pt);
    return out;
}

}  // namespace detail

/// Standard complex structure on R^{2n} in interleaved coordinates
/// (x_1, y_1, x_2, y_2, ...): J e_{x_k} = e_{y_k}.
inline Matrix<Rational> complex_structure(std::size_t n) {
    Matrix<Rational> j(2 * n, 2 * n, Rational(0));
    for (std::size_t k = 0; k < n; ++k) {
        j(2 * k + 1, 2 * k) = 1;
        j(2 * k, 2 * k + 1) = -1;
    }
    return j;
}

/// Catalog of matrix Lie algebras. Names: so, u (u(n) as real 2n x 2n
/// matrices commuting with J), sp (sp(2n,R), `n` is the half dimension),
/// gl, sl. Complex and symplectic structures use interleaved coordinates,
/// so that u(n) = sp(2n,R) intersected with so(2n) and the symplectic form is
/// e1*^e2* + e3*^e4* + ...
inline LieAlgebraSpec algebra(const std::string& family, int n) {
    using detail::unit;
    if (n < 1) throw InvalidArgument("algebra size must be positive");
    const auto N = static_cast<std::size_t>(n);
    std::vector<Matrix<Rational>> basis;
    std::string name;
    if (family == "so") {
        if (n > kMaxRepresentationDim) throw InvalidArgument("so(n) too large for desk scale: n=" + std::to_string(n));
        if (n < 2) throw InvalidArgument("so(1) is trivial");
        name = "so(" + std::to_string(n) + ")";
        if (n == 3) {
            // Hodge-dual basis: [L1, L2] = L3 and cyclic.
            basis = {unit(3, 2, 1) - unit(3, 1, 2), unit(3, 0, 2) - unit(3, 2, 0), unit(3, 1, 0) - unit(3, 0, 1)};
        } else {
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t j = i + 1; j < N; ++j) basis.push_back(unit(N, j, i) - unit(N, i, j));
        }
    } else if (family == "u") {
        if (2 * n > kMaxRepresentationDim) throw InvalidArgument("u(n) too large for desk scale: n=" + std::to_string(n));
        name = "u(" + std::to_string(n) + ")";
        const std::size_t M = 2 * N;
        // block form [[A, -B], [B, A]] with A antisymmetric, B symmetric
        std::vector<Matrix<Rational>> block;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i + 1; j < N; ++j) {
                Matrix<Rational> m(M, M, Rational(0));
                m(i, j) = -1;
                m(j, i) = 1;
                m(N + i, N + j) = -1;
                m(N + j, N + i) = 1;
                block.push_back(m);
            }
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i; j < N; ++j) {
                Matrix<Rational> m(M, M, Rational(0));
                m(N + i, j) += 1;
                m(N + j, i) += (i == j ? 0 : 1);
                m(i, N + j) -= 1;
                m(j, N + i) -= (i == j ? 0 : 1);
                block.push_back(m);
            }
        basis = detail::conjugate_all(block, detail::interleave(N));
    } else if (family == "sp") {
        if (2 * n > kMaxRepresentationDim) throw InvalidArgument("sp(2n) too large for desk scale: n=" + std::to_string(n));
        name = "sp(" + std::to_string(2 * n) + ",R)";
        const std::size_t M = 2 * N;
        // block form [[A, B], [C, -A^T]] with B, C symmetric
        std::vector<Matrix<Rational>> block;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) {
                Matrix<Rational> m(M, M, Rational(0));
                m(i, j) = 1;
                m(N + j, N + i) = -1;
                block.push_back(m);
            }
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i; j < N; ++j) {
                Matrix<Rational> b(M, M, Rational(0));
                b(i, N + j) = 1;
                b(j, N + i) = 1;
                block.push_back(b);
                Matrix<Rational> c(M, M, Rational(0));
                c(N + i, j) = 1;
                c(N + j, i) = 1;
                block.push_back(c);
            }
        basis = detail::conjugate_all(block, detail::interleave(N));
    } else if (family == "gl" || family == "sl") {
        if (n > kMaxRepresentationDim) throw InvalidArgument(family + "(n) too large for desk scale: n=" + std::to_string(n));
        if (family == "sl" && n == 1) throw InvalidArgument("sl(1) is trivial");
        name = family + "(" + std::to_string(n) + ")";
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) {
                if (i == j) continue;
                basis.push_back(unit(N, i, j));
            }
        if (family == "gl") {
            for (std::size_t i = 0; i < N; ++i) basis.push_back(unit(N, i, i));
        } else {
            for (std::size_t i = 0; i + 1 < N; ++i) basis.push_back(unit(N, i, i) - unit(N, i + 1, i + 1));
        }
    } else {
        throw InvalidArgument("unknown Lie algebra family: " + family);
    }
    return LieAlgebraSpec::from_basis(std::move(name), std::move(basis));
}

/// Parses compact group ids used on the command line: so3, u2, sp4, gl2, sl3.
/// For sp the number is the matrix size 2n.
inline LieAlgebraSpec algebra_from_id(const std::string& id) {
    std::size_t split = 0;
    while (split < id.size() && std::isalpha(static_cast<unsigned char>(id[split]))) ++split;
    const std::string family = id.substr(0, split);
    std::string digits = id.substr(split);
    if (!digits.empty() && digits.front() == '(') digits = digits.substr(1, digits.find(')') - 1);
    if (family.empty() || digits.empty()) throw InvalidArgument("malformed group id: " + id);
    int n = 0;
    try {
        n = std::stoi(digits);
    } catch (const std::exception&) {
        throw InvalidArgument("malformed group id: " + id);
    }
    if (family == "sp") {
        if (n % 2 != 0) throw InvalidArgument("sp needs an even matrix size: " + id);
        return algebra("sp", n / 2);
    }
    return algebra(family, n);
}

inline nlohmann::json to_json(const LieAlgebraSpec& a) {
    nlohmann::json j;
    j["name"] = a.name();
    j["rep_dim"] = a.rep_dim();
    j["dim"] = a.dim();
    auto basis = nlohmann::json::array();
    for (const auto& b : a.basis()) {
        auto rows = nlohmann::json::array();
        for (std::size_t i = 0; i < b.rows(); ++i) {
            auto row = nlohmann::json::array();
            for (std::size_t k = 0; k < b.cols(); ++k) row.push_back(b(i, k).str());
            rows.push_back(row);
        }
        basis.push_back(rows);
    }
    j["basis"] = basis;
    auto sc = nlohmann::json::array();
    for (int k = 0; k < a.dim(); ++k)
        for (int i = 0; i < a.dim(); ++i)
            for (int l = 0; l < a.dim(); ++l)
                if (a.structure_constant(k, i, l) != 0)
                    sc.push_back({i, l, k, a.structure_constant(k, i, l).str()});
    j["structure_constants"] = sc;  // triplets (i, j, k, c^k_ij)
    return j;
}

}  // namespace gstruct
