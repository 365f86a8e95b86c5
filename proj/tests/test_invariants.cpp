#include "gstruct/invariants.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace gstruct;
using namespace gstruct::testing;

namespace {

std::size_t dim_of(const char* id, int p, int q) { return invariant_basis(algebra_from_id(id), p, q).dimension(); }

AlgebraElement random_element(const LieAlgebraSpec& alg, int p, int q, std::mt19937_64& rng) {
    auto t = random_rational_tensor(MultilinearTensor<Rational>::bigraded(alg.dim(), p, alg.rep_dim(), q).domain(), rng, 2);
    return {project_bigraded(t)};
}

// Sum that treats zero tensors as neutral; brackets with a constant argument
// return zero of a shifted bidegree.
MultilinearTensor<Rational> accumulate(const std::vector<MultilinearTensor<Rational>>& terms) {
    MultilinearTensor<Rational> sum;
    bool started = false;
    for (const auto& t : terms) {
        if (t.is_zero()) continue;
        if (!started) {
            sum = t;
            started = true;
        } else {
            sum += t;
        }
    }
    return sum;
}

int sign_of(int a, int b) { return (a * b) % 2 == 0 ? 1 : -1; }

// Rank of a list of tensors (as flattened vectors), exact.
std::size_t span_rank(const std::vector<MultilinearTensor<Rational>>& ts) {
    if (ts.empty()) return 0;
    Matrix<Rational> m(ts.size(), ts.front().size(), Rational(0));
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t k = 0; k < ts[i].size(); ++k) m(i, k) = ts[i].components()[k];
    return exact::rank(m);
}

// Floating rank by Gaussian elimination with partial pivoting.
std::size_t float_rank(std::vector<std::vector<double>> rows, double tol = 1e-9) {
    std::size_t rank = 0;
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t piv = rank;
        for (std::size_t r = rank; r < rows.size(); ++r)
            if (std::abs(rows[r][c]) > std::abs(rows[piv][c])) piv = r;
        if (std::abs(rows[piv][c]) < tol) continue;
        std::swap(rows[piv], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            const double f = rows[r][c] / rows[rank][c];
            for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
        }
        ++rank;
    }
    return rank;
}

// Dimension of the invariants of a finite rotation group on Lambda^q(V*) via the
// Reynolds operator applied to every elementary alternating tensor.
std::size_t averaged_dimension(const std::vector<Matrix<double>>& group, int n, int q) {
    std::vector<std::vector<double>> rows;
    for (const auto& s : comb::subsets(n, q).indices) {
        MultilinearTensor<double> e(v_slots(n, q));
        e.at(std::span<const int>(s)) = 1;
        e = alternate(e);
        MultilinearTensor<double> avg(v_slots(n, q));
        for (const auto& g : group) avg += group_transform(e, inverse(g), Matrix<double>(1, 1, 1.0));
        avg *= 1.0 / static_cast<double>(group.size());
        rows.push_back(avg.components());
    }
    return float_rank(rows);
}

std::vector<Matrix<double>> cyclic_rotations(int k) {
    std::vector<Matrix<double>> out;
    for (int j = 0; j < k; ++j) {
        const double a = 2 * std::numbers::pi * j / k;
        out.push_back(Matrix<double>{{std::cos(a), -std::sin(a)}, {std::sin(a), std::cos(a)}});
    }
    return out;
}

// Rotation group of the cube: signed permutation matrices of determinant 1.
std::vector<Matrix<double>> octahedral_rotations() {
    std::vector<Matrix<double>> out;
    for (const auto& [perm, sign] : comb::permutations(3))
        for (int s = 0; s < 8; ++s) {
            Matrix<double> m(3, 3, 0.0);
            int det = sign;
            for (int i = 0; i < 3; ++i) {
                const int e = (s >> i) & 1 ? -1 : 1;
                det *= e;
                m(static_cast<std::size_t>(perm[static_cast<std::size_t>(i)]), static_cast<std::size_t>(i)) = e;
            }
            if (det == 1) out.push_back(m);
        }
    return out;
}

}  // namespace

TEST(InvariantBasis, DimensionTable) {
    EXPECT_EQ(dim_of("so2", 0, 2), 1u);
    EXPECT_EQ(dim_of("so3", 0, 1), 0u);
    EXPECT_EQ(dim_of("so3", 0, 3), 1u);
    EXPECT_EQ(dim_of("so3", 1, 0), 0u);
    EXPECT_EQ(dim_of("so3", 0, 2), 0u);
    EXPECT_GE(dim_of("so3", 1, 2), 1u);
}

TEST(InvariantBasis, AgreesWithFiniteGroupAveraging) {
    ASSERT_EQ(octahedral_rotations().size(), 24u);
    EXPECT_EQ(averaged_dimension(cyclic_rotations(8), 2, 2), dim_of("so2", 0, 2));
    for (int q = 0; q <= 3; ++q) EXPECT_EQ(averaged_dimension(octahedral_rotations(), 3, q), dim_of("so3", 0, q)) << q;
}

TEST(InvariantBasis, So2AreaFormIsCanonical) {
    const auto b = invariant_basis(algebra("so", 2), 0, 2);
    ASSERT_EQ(b.dimension(), 1u);
    EXPECT_EQ(b.coordinates[0], std::vector<Integer>{1});
    EXPECT_EQ(b.elements[0].at({0, 1}), 1);
    EXPECT_EQ(b.elements[0].at({1, 0}), -1);
}

TEST(InvariantBasis, ElementsAreInvariantAndIndependent) {
    for (const char* id : {"so3", "so4", "u2", "sp4", "sl3"}) {
        const auto alg = algebra_from_id(id);
        for (int p = 0; p <= 2; ++p)
            for (int q = 0; q <= std::min(alg.rep_dim(), 4); ++q) {
                if (p == 2 && alg.dim() > 8 && q > 2) continue;
                const auto b = invariant_basis(alg, p, q);
                for (const auto& e : b.elements) {
                    EXPECT_TRUE(is_invariant(e, alg).invariant) << id << " " << p << "," << q;
                    EXPECT_TRUE(e.satisfies_symmetry());
                }
                EXPECT_EQ(span_rank(b.elements), b.dimension());
            }
    }
}

TEST(InvariantBasis, KnownDimensions) {
    EXPECT_EQ(dim_of("u2", 0, 2), 1u);   // Kaehler form
    EXPECT_EQ(dim_of("u2", 1, 0), 1u);   // trace on the centre
    EXPECT_EQ(dim_of("sp4", 0, 2), 1u);
    EXPECT_EQ(dim_of("sp4", 0, 4), 1u);
    EXPECT_EQ(dim_of("so4", 2, 0), 2u);  // |X|^2 and Pfaffian
    EXPECT_EQ(dim_of("sl3", 2, 0), 1u);
    EXPECT_EQ(dim_of("sl3", 3, 0), 1u);
    EXPECT_EQ(dim_of("gl2", 1, 0), 1u);
}

TEST(InvariantBasis, SizeLimits) {
    EXPECT_THROW(invariant_basis(algebra("so", 3), 4, 0), SizeLimitError);
    EXPECT_THROW(invariant_basis(algebra("so", 3), 0, 4), InvalidArgument);
    EXPECT_THROW(invariant_basis(algebra("sp", 3), 3, 3), SizeLimitError);
    try {
        invariant_basis(algebra("sp", 3), 3, 3);
    } catch (const SizeLimitError& e) {
        EXPECT_GT(e.problem_size(), kMaxInvariantUnknowns);
    }
}

TEST(InvariantBasis, StableUnderBasisPermutation) {
    for (const char* id : {"so3", "u2"}) {
        const auto alg = algebra_from_id(id);
        std::vector<int> perm(static_cast<std::size_t>(alg.dim()));
        std::iota(perm.begin(), perm.end(), 0);
        std::reverse(perm.begin(), perm.end());
        std::swap(perm.front(), perm.back());
        std::vector<Matrix<Rational>> pb;
        for (int i : perm) pb.push_back(alg.basis(i));
        const auto palg = LieAlgebraSpec::from_basis("permuted", pb);
        for (int p = 0; p <= 1; ++p)
            for (int q = 0; q <= 3; ++q) {
                const auto b = invariant_basis(alg, p, q);
                const auto pbasis = invariant_basis(palg, p, q);
                ASSERT_EQ(b.dimension(), pbasis.dimension());
                // Re-express permuted g-coordinates in the original ordering.
                std::vector<MultilinearTensor<Rational>> mapped;
                for (const auto& e : pbasis.elements) {
                    MultilinearTensor<Rational> m(e.domain());
                    for (std::size_t flat = 0; flat < e.size(); ++flat) {
                        auto idx = e.multi_index(flat);
                        for (int s = 0; s < p; ++s) idx[static_cast<std::size_t>(s)] = perm[static_cast<std::size_t>(idx[static_cast<std::size_t>(s)])];
                        m.at(std::span<const int>(idx)) = e.components()[flat];
                    }
                    mapped.push_back(m);
                }
                auto all = b.elements;
                all.insert(all.end(), mapped.begin(), mapped.end());
                EXPECT_EQ(span_rank(all), b.dimension()) << id << " " << p << "," << q;
            }
    }
}

TEST(InvariantBasis, ProperSubalgebraInclusion) {
    const auto so3 = algebra("so", 3);
    for (int p = 0; p <= 2; ++p)
        for (int q = 0; q <= 3; ++q) {
            const auto mixed = invariant_basis(so3, p, q).dimension();
            const auto sym = invariant_basis(so3, p, 0).dimension();
            const auto alt = invariant_basis(so3, 0, q).dimension();
            EXPECT_GE(mixed, sym * alt);
            if (p == 1 && q == 2) EXPECT_GT(mixed, sym * alt);
        }
}

TEST(Product, Examples) {
    const auto area = AlgebraElement{invariant_basis(algebra("so", 2), 0, 2).elements[0]};
    EXPECT_TRUE(product(area, area).tensor.is_zero());
    EXPECT_EQ(product(area, area).tensor.q(), 4);
    EXPECT_EQ(product(AlgebraElement::unit(), area).tensor, area.tensor);
    EXPECT_EQ(product(area, AlgebraElement::unit()).tensor, area.tensor);

    auto a = MultilinearTensor<Rational>::bigraded(3, 1, 3, 0);
    auto b = a;
    a.at({0}) = 1;
    b.at({1}) = 1;
    const auto ab = product({a}, {b}).tensor;
    const auto expected = (tensor_product(a, b) + tensor_product(b, a)) * Rational(1, 2);
    EXPECT_EQ(ab, expected);
    EXPECT_EQ(ab.p(), 2);
}

TEST(Product, AssociativeAndGradedCommutative) {
    std::mt19937_64 rng(2024);
    const auto so3 = algebra("so", 3);
    std::uniform_int_distribution<int> dp(0, 1), dq(0, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_element(so3, dp(rng), dq(rng), rng);
        const auto b = random_element(so3, dp(rng), dq(rng), rng);
        const auto c = random_element(so3, dp(rng), dq(rng), rng);
        EXPECT_EQ(product(product(a, b), c).tensor, product(a, product(b, c)).tensor);
        EXPECT_EQ(product(a, b).tensor, product(b, a).tensor * Rational(sign_of(a.degree(), b.degree())));
    }
}

TEST(Product, DegreeIsTwoPPlusQ) {
    auto t = MultilinearTensor<Rational>::bigraded(3, 2, 3, 1);
    EXPECT_EQ(AlgebraElement{t}.degree(), 5);
}

TEST(GradedBracket, Examples) {
    const auto so3 = algebra("so", 3);
    const auto B = so3.trace_form();
    std::mt19937_64 rng(1);
    const auto c = random_element(so3, 0, 1, rng);
    const auto x = random_element(so3, 1, 1, rng);
    EXPECT_TRUE(graded_bracket(c, x, so3, B).tensor.is_zero());

    const auto so2 = algebra("so", 2);
    const auto y = random_element(so2, 1, 0, rng);
    const auto z = random_element(so2, 2, 1, rng);
    EXPECT_TRUE(graded_bracket(y, z, so2, so2.trace_form()).tensor.is_zero());

    auto x1 = MultilinearTensor<Rational>::bigraded(3, 1, 3, 0);
    auto x2 = x1;
    x1.at({0}) = 1;
    x2.at({1}) = 1;
    const auto br = graded_bracket({x1}, {x2}, so3, B).tensor;
    // trace form on the Hodge basis is -2 delta, so {X1*, X2*} = -1/2 X3*
    EXPECT_EQ(br.at({2}), Rational(-1, 2));
    EXPECT_EQ(br.at({0}), 0);
    EXPECT_EQ(br.at({1}), 0);
}

TEST(GradedBracket, RejectsDegeneratePairing) {
    const auto so3 = algebra("so", 3);
    std::mt19937_64 rng(1);
    const auto x = random_element(so3, 1, 0, rng);
    EXPECT_THROW(graded_bracket(x, x, so3, Matrix<Rational>(3, 3, Rational(0))), InvalidArgument);
    EXPECT_THROW(graded_bracket(x, x, so3, Matrix<Rational>(2, 2, Rational(1))), InvalidArgument);
}

TEST(GradedBracket, AntisymmetryAndJacobi) {
    std::mt19937_64 rng(77);
    for (const char* id : {"so3", "sl2"}) {
        const auto alg = algebra_from_id(id);
        const auto B = alg.trace_form();
        std::uniform_int_distribution<int> dp(0, 2), dq(0, 1);
        for (int trial = 0; trial < 10; ++trial) {
            const auto x = random_element(alg, dp(rng), dq(rng), rng);
            const auto y = random_element(alg, dp(rng), dq(rng), rng);
            const auto z = random_element(alg, dp(rng) % 2, 0, rng);
            const int dx = x.degree(), dy = y.degree(), dz = z.degree();
            EXPECT_EQ(graded_bracket(x, y, alg, B).tensor,
                      graded_bracket(y, x, alg, B).tensor * Rational(-sign_of(dx, dy)));
            const auto jac = accumulate({graded_bracket(x, graded_bracket(y, z, alg, B), alg, B).tensor * Rational(sign_of(dx, dz)),
                                         graded_bracket(y, graded_bracket(z, x, alg, B), alg, B).tensor * Rational(sign_of(dy, dx)),
                                         graded_bracket(z, graded_bracket(x, y, alg, B), alg, B).tensor * Rational(sign_of(dz, dy))});
            EXPECT_TRUE(jac.is_zero()) << id << " trial " << trial;
        }
    }
}

TEST(InvariantBasis, JsonReportsDimension) {
    const auto j = to_json(invariant_basis(algebra("so", 3), 0, 3));
    EXPECT_EQ(j["dimension"], 1);
    EXPECT_EQ(j["degree"], 3);
}
