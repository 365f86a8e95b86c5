#include "gstruct/gstruct.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace gstruct;

namespace {

constexpr double kPi = std::numbers::pi;

LieAlgebraPtr shared(const std::string& family, int n) { return std::make_shared<const LieAlgebraSpec>(algebra(family, n)); }

FormField field(int n, int degree, CoeffSpace space, FormField::Evaluator f) {
    return FormField("test", n, degree, std::move(space), std::move(f));
}

/// Generic jet fields for identities that hold pointwise.
Jet bump(const std::vector<Jet>& x, double a, double b) {
    Jet s(0.0);
    for (std::size_t i = 0; i < x.size(); ++i) s = s + (a + 0.3 * static_cast<double>(i)) * x[i];
    return sin(s) + b * x[0] * x[x.size() - 1];
}

FormField generic_form(int n, int degree, CoeffSpace space, double seed) {
    return field(n, degree, space, [n, degree, space, seed](const std::vector<Jet>& x) {
        FormValue<Jet> v(n, degree, space);
        for (std::size_t i = 0; i < v.data().size(); ++i) v.data()[i] = bump(x, seed + 0.17 * static_cast<double>(i), 0.1 * seed);
        return v;
    });
}

const std::vector<double> kPoint3{0.3, -0.4, 0.7};
const std::vector<double> kPoint4{0.21, -0.13, 0.34, 0.08};

}  // namespace

TEST(Forms, WedgeTensorOfBasisForms) {
    FormValue<double> a(2, 1, CoeffSpace::V(2)), b(2, 1, CoeffSpace::V(2));
    a(0, 0) = 1;  // e1 (x) dx
    b(1, 1) = 1;  // e2 (x) dy
    const auto w = wedge_tensor(a, b);
    ASSERT_EQ(w.degree(), 2);
    ASSERT_EQ(w.width(), 4u);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(w(0, k), k == 1 ? 1.0 : 0.0);  // (e1 (x) e2) dx^dy
    const auto r = wedge_tensor(b, a);
    EXPECT_EQ(r(0, 2), -1.0);  // (e2 (x) e1) dy^dx
}

TEST(Forms, RhoWedgeOfRotationGenerator) {
    const auto so2 = algebra("so", 2);
    FormValue<double> phi(2, 1, CoeffSpace::g(1)), psi(2, 1, CoeffSpace::V(2));
    phi(0, 0) = 1;  // J dx
    psi(1, 0) = 1;  // e1 dy
    const auto out = rho_wedge(so2, phi, psi);
    EXPECT_EQ(out(0, 0), 0.0);
    EXPECT_EQ(out(0, 1), 1.0);  // J e1 = e2
}

TEST(Forms, LieWedgeOnSo3) {
    const auto so3 = algebra("so", 3);
    FormValue<double> a(3, 1, CoeffSpace::g(3)), b(3, 1, CoeffSpace::g(3));
    a(0, 0) = 1;  // L1 dx1
    b(1, 1) = 1;  // L2 dx2
    const auto out = lie_wedge(so3, a, b);
    EXPECT_EQ(out(0, 2), 1.0);  // L3 dx1^dx2
    EXPECT_EQ(out(0, 0), 0.0);
    EXPECT_EQ(out(0, 1), 0.0);
    const auto aa = lie_wedge(so3, a, a);
    EXPECT_EQ(aa.max_abs(), 0.0);
}

TEST(Forms, LieWedgeGradedSymmetry) {
    const auto alg = shared("so", 3);
    for (auto [k, l] : {std::pair{1, 1}, {1, 2}, {2, 1}}) {
        const auto a = generic_form(3, k, CoeffSpace::g(3), 0.4);
        const auto b = generic_form(3, l, CoeffSpace::g(3), 1.1);
        const auto ab = lie_wedge(alg, a, b).values(kPoint3, 2);
        const auto ba = lie_wedge(alg, b, a).values(kPoint3, 2);
        const double sign = (k * l) % 2 == 0 ? -1.0 : 1.0;
        EXPECT_LT((ab - sign * ba).max_abs(), 1e-13) << k << "," << l;
    }
}

TEST(Forms, ExteriorDerivativeOfCoordinateForm) {
    auto xdy = field(2, 1, CoeffSpace::scalar(), [](const std::vector<Jet>& x) {
        FormValue<Jet> v(2, 1, CoeffSpace::scalar());
        v(1, 0) = x[0];
        return v;
    });
    const auto d = exterior_derivative(xdy).values(std::vector<double>{0.2, 0.9}, 2);
    EXPECT_DOUBLE_EQ(d(0, 0), 1.0);
    auto ydx = field(2, 1, CoeffSpace::scalar(), [](const std::vector<Jet>& x) {
        FormValue<Jet> v(2, 1, CoeffSpace::scalar());
        v(0, 0) = x[1];
        return v;
    });
    EXPECT_DOUBLE_EQ(exterior_derivative(ydx).values(std::vector<double>{0.2, 0.9}, 2)(0, 0), -1.0);
}

TEST(Forms, ExteriorDerivativeSquaresToZero) {
    for (int k = 0; k <= 2; ++k) {
        const auto f = generic_form(4, k, CoeffSpace::V(2), 0.3 + k);
        const auto dd = exterior_derivative(exterior_derivative(f));
        EXPECT_LT(dd.values(kPoint4, 3).max_abs(), 1e-12) << k;
    }
}

TEST(Forms, ExteriorDerivativeNeedsJetOrder) {
    const auto f = generic_form(3, 1, CoeffSpace::scalar(), 0.5);
    EXPECT_THROW(exterior_derivative(f).at(kPoint3, 0), JetOrderError);
}

TEST(Forms, LeibnizRule) {
    for (auto [k, l] : {std::pair{0, 1}, {1, 1}, {1, 2}, {2, 1}}) {
        const auto a = generic_form(4, k, CoeffSpace::V(2), 0.7);
        const auto b = generic_form(4, l, CoeffSpace::V(3), 1.3);
        const auto lhs = exterior_derivative(wedge_tensor(a, b));
        const auto rhs_a = wedge_tensor(exterior_derivative(a), b);
        const auto rhs_b = wedge_tensor(a, exterior_derivative(b));
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        const auto diff = lhs.values(kPoint4, 2) - rhs_a.values(kPoint4, 2) - sign * rhs_b.values(kPoint4, 2);
        EXPECT_LT(diff.max_abs(), 1e-12) << k << "," << l;
    }
}

TEST(Forms, LieWedgeActsAsRepresentation) {
    // rho'([phi, psi] ^ xi) = rho'(phi ^ rho'(psi ^ xi)) - (-1)^{kl} rho'(psi ^ rho'(phi ^ xi))
    for (const auto& [family, n] : {std::pair{std::string("so"), 3}, {std::string("u"), 2}, {std::string("sl"), 2}}) {
        const auto alg = shared(family, n);
        const int d = alg->dim(), rep = alg->rep_dim();
        const int dim = std::min(4, std::max(3, rep));
        for (auto [k, l] : {std::pair{1, 1}, {1, 2}}) {
            const auto phi = generic_form(dim, k, CoeffSpace::g(d), 0.2);
            const auto psi = generic_form(dim, l, CoeffSpace::g(d), 0.9);
            const auto xi = generic_form(dim, 1, CoeffSpace::V(rep), 1.7);
            const std::vector<double> pt(kPoint4.begin(), kPoint4.begin() + dim);
            const auto lhs = rho_wedge(alg, lie_wedge(alg, phi, psi), xi).values(pt, 1);
            const auto r1 = rho_wedge(alg, phi, rho_wedge(alg, psi, xi)).values(pt, 1);
            const auto r2 = rho_wedge(alg, psi, rho_wedge(alg, phi, xi)).values(pt, 1);
            const double sign = (k * l) % 2 == 0 ? 1.0 : -1.0;
            EXPECT_LT((lhs - r1 + sign * r2).max_abs(), 1e-12) << family << n << " " << k << "," << l;
        }
    }
}

TEST(Forms, GradedJacobiForLieWedge) {
    const auto alg = shared("so", 3);
    const auto a = generic_form(3, 1, CoeffSpace::g(3), 0.1);
    const auto b = generic_form(3, 1, CoeffSpace::g(3), 0.6);
    const auto c = generic_form(3, 1, CoeffSpace::g(3), 1.4);
    // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]
    const auto lhs = lie_wedge(alg, a, lie_wedge(alg, b, c)).values(kPoint3, 1);
    const auto r1 = lie_wedge(alg, lie_wedge(alg, a, b), c).values(kPoint3, 1);
    const auto r2 = lie_wedge(alg, b, lie_wedge(alg, a, c)).values(kPoint3, 1);
    EXPECT_LT((lhs - r1 + r2).max_abs(), 1e-12);
}

TEST(Forms, ContractIsLinearInTensor) {
    const auto f = gstruct::testing::volume_form(3);
    FormValue<double> th(3, 1, CoeffSpace::V(3));
    for (int i = 0; i < 3; ++i) th(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 1;
    const auto t3 = wedge_tensor(wedge_tensor(th, th), th);
    EXPECT_DOUBLE_EQ(contract(f, t3)(0, 0), 6.0);  // eps(dx, dx, dx) = 3! dx^dy^dz
}

TEST(Forms, FieldShapeMismatchRejected) {
    const auto a = generic_form(3, 1, CoeffSpace::V(3), 0.1);
    const auto b = generic_form(3, 2, CoeffSpace::V(3), 0.1);
    EXPECT_THROW((a + b).at(kPoint3, 1), InvalidArgument);
    const auto other = FormField::zero("elsewhere", 3, 1, CoeffSpace::V(3));
    EXPECT_THROW(a + other, InvalidArgument);
}

TEST(Geometry, SphereLeviCivitaAndCurvature) {
    const auto e = build("round_sphere_2");
    const std::vector<double> pt{1.1, 2.3};
    const auto w = e.omega().values(pt, 2);
    EXPECT_NEAR(w(0, 0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(w(1, 0)), std::cos(1.1), 1e-14);
    const auto om = e.curvature_form().values(pt, 2);
    EXPECT_NEAR(om(0, 0), -std::sin(1.1), 1e-13);
    EXPECT_LT(torsion(e.algebra(), e.omega(), e.theta()).values(pt, 2).max_abs(), 1e-14);
}

TEST(Geometry, TorsionExamples) {
    const auto demo = build("torsionful_demo");
    const std::vector<double> pt{0.3, 0.4, 0.5, 0.6};
    const auto t = torsion(demo.algebra(), demo.omega(), demo.theta()).values(pt, 2);
    EXPECT_NEAR(t.component({1, 2}, 2), std::exp(0.4), 1e-13);  // d theta^3 = e^{x2} dx2^dx3
    EXPECT_NEAR(t.max_abs(), std::exp(0.4), 1e-13);
    const auto flat = build("flat_torus_4");
    EXPECT_EQ(torsion(flat.algebra(), flat.omega(), flat.theta()).values(pt, 2).max_abs(), 0.0);
}

TEST(Geometry, LeviCivitaTorsionFreeAndMetricInAllEntries) {
    for (const auto& id : {"round_sphere_2", "round_sphere_4", "kaehler_u2_chart"}) {
        const auto e = build(id);
        const Sampler s(7);
        for (const auto& p : s.points(e.structure.chart, 5)) {
            EXPECT_LT(torsion(e.algebra(), e.omega(), e.theta()).values(p, 2).max_abs(), 1e-10) << id;
            EXPECT_LT(bianchi_residual(e.algebra(), e.omega(), e.curvature_form()).values(p, 3).max_abs(), 1e-9) << id;
        }
    }
}

TEST(Geometry, LeviCivitaRejectsNonOrthonormalCoframe) {
    const auto alg = shared("so", 2);
    const auto theta = coordinate_coframe("test", 2);
    MetricField g = [](const std::vector<Jet>&) {
        Matrix<Jet> m = Matrix<Jet>::identity(2, Jet(1.0), Jet(0.0));
        m(0, 0) = Jet(2.0);
        return m;
    };
    EXPECT_THROW(levi_civita(alg, g, theta).at(std::vector<double>{0.1, 0.2}, 1), InvalidArgument);
}

TEST(Geometry, LeviCivitaIsUniqueTorsionFreeConnection) {
    const auto e = build("round_sphere_2");
    const std::vector<double> pt{0.9, 1.7};
    // omega + A is torsionfree only for A = 0; any nonzero so(2)-valued A fails.
    for (int i = 0; i < 2; ++i) {
        FormValue<double> a(2, 1, CoeffSpace::g(1));
        a(static_cast<std::size_t>(i), 0) = 1e-3;
        const auto shifted = e.omega() + FormField::constant(e.structure.chart.label, a);
        EXPECT_GT(torsion(e.algebra(), shifted, e.theta()).values(pt, 1).max_abs(), 1e-4);
    }
}

TEST(Geometry, GaugeCovariance) {
    const auto e = build("kaehler_u2_chart");
    const auto& alg = e.algebra();
    GaugeField s = [](const std::vector<Jet>& x) {
        return std::vector<Jet>{0.3 * x[0] + x[1] * x[2], 0.5 * sin(x[3]), Jet(0.2) + 0.0 * x[0], x[0] * x[0] - 0.4 * x[2]};
    };
    const auto pair = gauge_transform(alg, s, e.theta(), e.omega());
    const Sampler smp(3);
    for (const auto& p : smp.points(e.structure.chart, 4)) {
        const auto x = coordinate_jets(p, 2);
        const auto g = gauge_group_element(*alg, s, x);
        const auto om2 = curvature(alg, pair.omega).at(p, 2);
        const auto om1 = gauge_covariant(*alg, g, curvature(alg, e.omega()).at(p, 2));
        EXPECT_LT((om2 - om1).values().max_abs(), 1e-10);
        const auto t2 = torsion(alg, pair.omega, pair.theta).values(p, 2);
        EXPECT_LT(t2.max_abs(), 1e-10);
    }
}

TEST(Geometry, ProjectionTensorRanks) {
    const auto u2 = orthogonal_projection_tensor(algebra("u", 2), Matrix<Rational>::identity(4));
    EXPECT_EQ(u2.rank, 4u);
    EXPECT_TRUE(is_invariant(u2.q, algebra("u", 2)).invariant);
    for (int n : {3, 4}) {
        const auto so = orthogonal_projection_tensor(algebra("so", n), Matrix<Rational>::identity(static_cast<std::size_t>(n)));
        const auto m = static_cast<std::size_t>(n * (n - 1) / 2);
        EXPECT_EQ(so.rank, m);
        EXPECT_EQ(so.projector, Matrix<Rational>::identity(m));
    }
    Matrix<Rational> bad = Matrix<Rational>::identity(4);
    bad(0, 0) = 2;
    EXPECT_THROW(orthogonal_projection_tensor(algebra("u", 2), bad), InvalidArgument);
}

TEST(ChernWeil, ContractExamples) {
    const auto e = build("flat_torus_2");
    const auto area = nu(e.invariant("area").tensor, e.theta()).values(std::vector<double>{1.0, 2.0}, 2);
    EXPECT_DOUBLE_EQ(area(0, 0), 1.0);  // dx^dy
    const auto s = build("round_sphere_2");
    const std::vector<double> pt{0.8, 0.3};
    const auto euler = gamma(s.invariant("euler").tensor, s.curvature_form()).values(pt, 2);
    EXPECT_NEAR(euler(0, 0), std::sin(0.8), 1e-13);
    const auto sa = nu(s.invariant("area").tensor, s.theta()).values(pt, 2);
    EXPECT_NEAR(sa(0, 0), std::sin(0.8), 1e-14);
}

TEST(ChernWeil, MuIsMultiplicative) {
    const auto e = build("kaehler_u2_chart");
    const auto& kf = e.invariant("kaehler_form").tensor;
    const auto& ric = e.invariant("ricci").tensor;
    const auto om = e.curvature_form();
    const auto prod = product({ric}, {kf}).tensor;
    const auto lhs = mu(prod, om, e.theta());
    const auto rhs = wedge_tensor(mu(ric, om, e.theta()), mu(kf, om, e.theta()));
    const std::vector<double> pt{0.1, -0.2, 0.15, 0.3};
    EXPECT_LT((lhs.values(pt, 2) - rhs.values(pt, 2)).max_abs(), 1e-12);
    const auto sq = mu(e.invariant("ricci_squared").tensor, om, e.theta());
    const auto r = mu(ric, om, e.theta());
    EXPECT_LT((sq.values(pt, 2) - wedge_tensor(r, r).values(pt, 2)).max_abs(), 1e-12);
}

TEST(ChernWeil, DerivativeOfContractionSplitsIntoCovariantParts) {
    // d f^{psi} = sum (-1)^{..} f(.., d_omega psi_i, ..) - correction; the correction vanishes for invariant f.
    const auto e = build("kaehler_u2_chart");
    const auto& alg = e.algebra();
    const auto om = e.curvature_form();
    const std::vector<FormField> psis{om, e.theta(), e.theta()};
    const std::vector<double> pt{0.12, 0.05, -0.22, 0.31};
    EXPECT_LT(covariant_correction(alg, e.invariant("q").tensor, e.omega(), psis).values(pt, 3).max_abs(), 1e-10);

    // A 2-form on a 4-manifold exercises the identity in a nontrivial degree.
    const std::vector<FormField> lin{om};
    const auto& ric = e.invariant("ricci").tensor;
    const auto d = exterior_derivative(contract_forms(ric, lin)).values(pt, 3);
    const auto dw = contract_forms(ric, {covariant_derivative(alg, e.omega(), om)}).values(pt, 3);
    EXPECT_LT((d - dw).max_abs(), 1e-10);
    EXPECT_LT(covariant_correction(alg, ric, e.omega(), lin).values(pt, 3).max_abs(), 1e-10);

    // Non-invariant f: the correction is what separates d from d_omega.
    auto gen = MultilinearTensor<Rational>::bigraded(alg->dim(), 1, 4, 0);
    gen.at({1}) = 1;
    const auto dg = exterior_derivative(contract_forms(gen, lin)).values(pt, 3);
    const auto dwg = contract_forms(gen, {covariant_derivative(alg, e.omega(), om)}).values(pt, 3);
    const auto corr = covariant_correction(alg, gen, e.omega(), lin).values(pt, 3);
    EXPECT_GT(corr.max_abs(), 1e-6);
    EXPECT_LT((dg - (dwg - corr)).max_abs(), 1e-10);
}

TEST(ChernWeil, CharacteristicFormsClosedWhenTorsionFree) {
    const auto e = build("kaehler_u2_chart");
    const Sampler s(11);
    const auto pts = s.points(e.structure.chart, 6);
    for (const auto& name : {"kaehler_form", "ricci"}) {
        const auto& inv = e.invariant(name);
        const auto form = mu(inv.tensor, e.curvature_form(), e.theta());
        EXPECT_GT(max_over(form, pts, 3), 1e-3) << name;
        const auto r = verify_closed(form, pts, 3);
        EXPECT_TRUE(r.pass) << name << " residual " << r.residual;
    }
}

TEST(ChernWeil, TorsionObstructsClosedness) {
    const auto e = build("torsionful_demo");
    const Sampler s(5);
    const auto r = verify_closed(nu(e.invariant("area").tensor, e.theta()), s.points(e.structure.chart, 10), 3);
    EXPECT_FALSE(r.pass);
    EXPECT_GT(r.residual, 1.0);
}

TEST(ChernWeil, GaussBonnetOnSphere) {
    for (double delta : {1e-3, 0.1, 0.05}) {
        const auto e = build("round_sphere_2", {.sphere_margin = delta});
        const auto& inv = e.invariant("euler");
        const double v = integrate(gamma(inv.tensor, e.curvature_form()), e.structure.chart) / inv.period_normalization;
        EXPECT_NEAR(v, 2.0 * std::cos(delta), 1e-10) << delta;
    }
    const auto coarse = build("round_sphere_2", {.sphere_margin = 0.1});
    const auto fine = build("round_sphere_2", {.sphere_margin = 0.05});
    const auto period = [](const CatalogEntry& e) {
        return integrate(gamma(e.invariant("euler").tensor, e.curvature_form()), e.structure.chart) / (2 * kPi);
    };
    const double pc = period(coarse), pf = period(fine);
    const double extrapolated = (4 * pf - pc) / 3;
    EXPECT_LT(std::abs(extrapolated - 2.0), std::abs(pf - 2.0) / 50);
}

TEST(ChernWeil, GaussBonnetOnFourSphere) {
    const auto e = build("round_sphere_4");
    const auto& inv = e.invariant("euler");
    const auto form = gamma(inv.tensor, e.curvature_form());
    EXPECT_NEAR(integrate(form, e.structure.chart) / inv.period_normalization, 2.0, 5e-3);
    const double vol = integrate(nu(e.invariant("volume").tensor, e.theta()), e.structure.chart);
    EXPECT_NEAR(vol, 8 * kPi * kPi / 3, 1e-3);
}

TEST(ChernWeil, TorusPeriods) {
    const auto t = build("symplectic_torus_4");
    const auto& inv = t.invariant("omega_std_squared");
    EXPECT_NEAR(integrate(nu(inv.tensor, t.theta()), t.structure.chart), 2 * std::pow(2 * kPi, 4), 1e-6);
    const auto f = build("flat_torus_2");
    EXPECT_EQ(integrate(gamma(f.invariant("euler").tensor, f.curvature_form()), f.structure.chart), 0.0);
}

TEST(ChernWeil, TransgressionIdentity) {
    for (const auto& pair : connection_pairs()) {
        const Sampler s(19);
        const auto pts = s.points(pair.chart, 4);
        EXPECT_LT(max_over(torsion(pair.algebra, pair.omega1, pair.theta), pts, 2), 1e-10) << pair.id;
        double size = 0;
        for (const auto& inv : pair.invariants) {
            ASSERT_TRUE(is_invariant(inv.tensor, *pair.algebra).invariant) << pair.id << " " << inv.name;
            if (2 * inv.p() + inv.q() > pair.chart.dim()) continue;
            const auto defect = transgression_defect(pair.algebra, inv.tensor, pair.omega0, pair.omega1, pair.theta);
            const auto m1 = mu(inv.tensor, curvature(pair.algebra, pair.omega1), pair.theta);
            const auto tf = transgression(pair.algebra, inv.tensor, pair.omega0, pair.omega1, pair.theta);
            size = std::max({size, max_over(m1, pts, 3), max_over(tf, pts, 3)});
            EXPECT_LT(max_over(defect, pts, 3), 1e-8) << pair.id << " " << inv.name;
        }
        EXPECT_GT(size, 1e-3) << pair.id;
    }
}

TEST(ChernWeil, TransgressionRejectsConstants) {
    const auto pair = connection_pairs().front();
    auto vol = MultilinearTensor<Rational>::bigraded(4, 0, 2, 2);
    vol.at({0, 1}) = 1;
    vol.at({1, 0}) = -1;
    EXPECT_THROW(transgression(pair.algebra, vol, pair.omega0, pair.omega1, pair.theta), InvalidArgument);
}

TEST(ChernWeil, PfaffianIsInvariant) {
    for (int n : {2, 4, 6}) {
        const auto so = algebra("so", n);
        const auto pf = pfaffian_tensor(so);
        EXPECT_TRUE(is_invariant(pf, so).invariant) << n;
        EXPECT_FALSE(pf.is_zero());
    }
}

TEST(Catalog, EntriesBuildAndCarryExpectations) {
    for (const auto& id : catalog_ids()) {
        const auto e = build(id);
        EXPECT_EQ(e.id, id);
        EXPECT_FALSE(e.invariants.empty());
        EXPECT_FALSE(e.expected.empty());
        for (const auto& r : e.expected) EXPECT_FALSE(r.origin.empty()) << id << " " << r.quantity;
        const Sampler s(1);
        const double cond = coframe_condition(e.theta(), s.point(e.structure.chart, 0));
        EXPECT_GE(cond, static_cast<double>(e.structure.chart.dim()) - 1e-12) << id;
        EXPECT_LT(cond, 1e3) << id;
        const auto j = to_json(e);
        EXPECT_EQ(j["id"], id);
    }
    EXPECT_THROW(build("klein_bottle"), InvalidArgument);
    EXPECT_THROW(build("round_sphere_2").invariant("nope"), InvalidArgument);
}

TEST(Catalog, NamedInvariantsAreInvariant) {
    for (const auto& id : catalog_ids()) {
        const auto e = build(id);
        for (const auto& inv : e.invariants) {
            if (inv.name == "area12") {
                EXPECT_FALSE(is_invariant(inv.tensor, *e.algebra()).invariant);
                continue;
            }
            EXPECT_TRUE(is_invariant(inv.tensor, *e.algebra()).invariant) << id << " " << inv.name;
        }
    }
}

TEST(Sampling, DeterministicAndInsideChart) {
    const auto e = build("round_sphere_4");
    const Sampler a(42), b(42), c(43);
    const auto pa = a.points(e.structure.chart, 20), pb = b.points(e.structure.chart, 20), pc = c.points(e.structure.chart, 20);
    EXPECT_EQ(pa, pb);
    EXPECT_NE(pa, pc);
    for (const auto& p : pa) EXPECT_TRUE(e.structure.chart.contains(p));
}

TEST(Quadrature, GaussLegendreExactForPolynomials) {
    for (int m = 1; m <= 12; ++m) {
        const auto r = gauss_legendre(m, -0.5, 2.0);
        for (int k = 0; k < 2 * m; ++k) {
            double s = 0;
            for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
            const double exact = (std::pow(2.0, k + 1) - std::pow(-0.5, k + 1)) / (k + 1);
            EXPECT_NEAR(s, exact, 1e-12 * std::max(1.0, std::abs(exact))) << m << " " << k;
        }
    }
}

TEST(ChernWeil, ProjectionFormVanishesForTorsionFreeConnections) {
    // q(Omega, theta, theta) pairs Omega with theta ^ theta, which the first Bianchi identity kills.
    const auto e = build("kaehler_u2_chart");
    const auto form = mu(e.invariant("q").tensor, e.curvature_form(), e.theta());
    const Sampler s(2);
    const auto pts = s.points(e.structure.chart, 10);
    EXPECT_LT(max_over(form, pts, 2), 1e-12);
    EXPECT_GT(max_over(e.curvature_form(), pts, 2), 1e-2);
}

TEST(ChernWeil, CoframeContractionSeesOnlyTheAlternation) {
    const auto e = build("kaehler_u2_chart");
    const std::vector<FormField> two{e.theta(), e.theta()};
    const std::vector<double> pt{0.1, 0.2, -0.3, 0.25};
    // alt f = 0 gives f^theta = 0 exactly
    const auto delta = gstruct::testing::metric_delta(4);
    EXPECT_EQ(contract_forms(delta, two).values(pt, 1).max_abs(), 0.0);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        const auto f = gstruct::testing::random_rational_tensor(gstruct::testing::v_slots(4, 2), rng);
        const auto af = alternate(f);
        const auto lhs = contract_forms(f, two).values(pt, 1);
        const auto rhs = contract_forms(af, two).values(pt, 1);
        EXPECT_LT((lhs - rhs).max_abs(), 1e-13);
        if (!af.is_zero()) EXPECT_GT(lhs.max_abs(), 1e-6);
    }
}
