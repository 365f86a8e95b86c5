#pragma once

#include "gstruct/matrix.hpp"
#include "gstruct/rational.hpp"

#include <map>
#include <vector>

namespace gstruct::exact {

/// Row echelon form of an integer matrix built one row at a time. Each
/// insertion is reduced fraction-free against the stored pivots and divided by
/// its content, so entries stay small for the structured systems we feed it.
class IntegerEchelon {
public:
    explicit IntegerEchelon(std::size_t cols) : cols_(cols) {}

    /// Returns true if the row increased the rank.
    bool insert(std::vector<Integer> row) {
        if (row.size() != cols_) throw InvalidArgument("echelon row width mismatch");
        for (const auto& [pc, prow] : rows_) {
            if (row[pc] == 0) continue;
            const Integer a = prow[pc];
            const Integer b = row[pc];
            const Integer g = boost::multiprecision::gcd(a, b);
            const Integer fa = a / g, fb = b / g;
            for (std::size_t j = pc; j < cols_; ++j) row[j] = fa * row[j] - fb * prow[j];
        }
        std::size_t lead = cols_;
        Integer content = 0;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (row[j] != 0) {
                if (lead == cols_) lead = j;
                content = boost::multiprecision::gcd(content, row[j]);
            }
        }
        if (lead == cols_) return false;
        if (row[lead] < 0) content = -content;
        for (auto& x : row) x /= content;
        rows_.emplace(lead, std::move(row));
        return true;
    }

    std::size_t rank() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    const std::map<std::size_t, std::vector<Integer>>& rows() const { return rows_; }

private:
    std::size_t cols_;
    std::map<std::size_t, std::vector<Integer>> rows_;  // pivot column -> row
};

struct RrefResult {
    Matrix<Rational> matrix;
    std::vector<std::size_t> pivots;
};

inline RrefResult rref(Matrix<Rational> m) {
    RrefResult res;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && m(piv, c) == 0) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
        const Rational p = m(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) /= p;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            const Rational f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        res.pivots.push_back(c);
        ++r;
    }
    res.matrix = std::move(m);
    return res;
}

inline std::size_t rank(const Matrix<Rational>& m) { return rref(m).pivots.size(); }

/// Basis of {x : A x = 0}, from the reduced row echelon form of A.
inline std::vector<std::vector<Rational>> nullspace(const RrefResult& r, std::size_t cols) {
    std::vector<bool> is_pivot(cols, false);
    for (auto p : r.pivots) is_pivot[p] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.matrix(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::vector<std::vector<Rational>> nullspace(const Matrix<Rational>& a) { return nullspace(rref(a), a.cols()); }

/// Nullspace of the echelon system.
inline std::vector<std::vector<Rational>> nullspace(const IntegerEchelon& e) {
    Matrix<Rational> m(e.rank(), e.cols(), Rational(0));
    std::size_t i = 0;
    for (const auto& [pc, row] : e.rows()) {
        for (std::size_t j = 0; j < e.cols(); ++j) m(i, j) = Rational(row[j]);
        ++i;
    }
    return nullspace(m);
}

/// Canonical basis of span(vectors): reduced row echelon rows scaled to
/// coprime integers with positive leading entry. Two spanning sets of the same
/// subspace give identical output.
inline std::vector<std::vector<Integer>> canonical_basis(const std::vector<std::vector<Rational>>& vectors,
                                                          std::size_t cols) {
    if (vectors.empty()) return {};
    Matrix<Rational> m(vectors.size(), cols, Rational(0));
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = vectors[i][j];
    auto r = rref(std::move(m));
    std::vector<std::vector<Integer>> out;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) {
        std::vector<Rational> row(cols);
        for (std::size_t j = 0; j < cols; ++j) row[j] = r.matrix(i, j);
        out.push_back(primitive_integer_vector(row));
    }
    return out;
}

}  // namespace gstruct::exact
