#pragma once

#include "gstruct/chart.hpp"
#include "gstruct/combinatorics.hpp"
#include "gstruct/chernweil.hpp"
#include "gstruct/error.hpp"
#include "gstruct/forms.hpp"
#include "gstruct/gstructure.hpp"
#include "gstruct/invariants.hpp"
#include "gstruct/liealg.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace gstruct {

struct NamedInvariant {
    std::string name;
    MultilinearTensor<Rational> tensor;
    std::string description;
    /// Periods are reported divided by this constant.
    double period_normalization = 1.0;

    int p() const { return tensor.p(); }
    int q() const { return tensor.q(); }
};

/// A known answer: either value +- tolerance, or (exceeds = true) a lower bound.
struct ExpectedResult {
    std::string quantity;
    double value = 0.0;
    double tolerance = 0.0;
    bool exceeds = false;
    std::string origin;  // trivial | closed-form | oracle
    std::string oracle;

    bool check(double observed) const { return exceeds ? observed > value : std::abs(observed - value) <= tolerance; }
};

struct CatalogEntry {
    std::string id;
    std::string description;
    GStructureChart structure;
    std::vector<NamedInvariant> invariants;
    std::vector<ExpectedResult> expected;
    bool torsion_free = true;
    int integration_order = 2;

    const NamedInvariant& invariant(const std::string& name) const {
        for (const auto& inv : invariants)
            if (inv.name == name) return inv;
        std::string known;
        for (const auto& inv : invariants) known += (known.empty() ? "" : ", ") + inv.name;
        throw InvalidArgument("geometry " + id + " has no invariant '" + name + "' (known: " + known + ")");
    }
    const LieAlgebraPtr& algebra() const { return structure.algebra; }
    const FormField& theta() const { return structure.theta; }
    const FormField& omega() const { return *structure.omega; }
    FormField curvature_form() const { return curvature(structure.algebra, *structure.omega); }
};

struct BuildOptions {
    double sphere_margin = 1e-3;
    double kaehler_a = 0.3;
    double kaehler_b = 0.2;
};

inline std::vector<std::string> catalog_ids() {
    return {"flat_torus_2", "flat_torus_4", "round_sphere_2", "round_sphere_4", "symplectic_torus_4", "kaehler_u2_chart", "torsionful_demo"};
}

namespace catalog_detail {

inline LieAlgebraPtr share(LieAlgebraSpec a) { return std::make_shared<const LieAlgebraSpec>(std::move(a)); }

inline Chart box(std::string label, std::vector<double> lo, std::vector<double> hi, std::vector<int> nodes) {
    Chart c{std::move(label), std::move(lo), std::move(hi), std::move(nodes), kMaxJetOrder};
    c.validate();
    return c;
}

/// Diagonal coframe theta^a = h_a(x) dx^a from jet functions h_a.
inline FormField diagonal_coframe(const std::string& chart, int n, std::function<std::vector<Jet>(const std::vector<Jet>&)> h) {
    return FormField(chart, n, 1, CoeffSpace::V(n),
                     [n, h](const std::vector<Jet>& x) {
                         FormValue<Jet> v(n, 1, CoeffSpace::V(n));
                         const auto d = h(x);
                         for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) v(i, i) = d[i];
                         return v;
                     },
                     "theta");
}

inline MetricField diagonal_metric(std::function<std::vector<Jet>(const std::vector<Jet>&)> h) {
    return [h](const std::vector<Jet>& x) {
        const auto d = h(x);
        Matrix<Jet> g(d.size(), d.size(), Jet(0.0));
        for (std::size_t i = 0; i < d.size(); ++i) g(i, i) = d[i] * d[i];
        return g;
    };
}

inline MetricField euclidean_metric(int n) {
    return [n](const std::vector<Jet>&) { return Matrix<Jet>::identity(static_cast<std::size_t>(n), Jet(1.0), Jet(0.0)); };
}

/// alt(e_i* (x) e_j*) = 1/2 (e_i* (x) e_j* - e_j* (x) e_i*).
inline MultilinearTensor<Rational> area_element(int n, int i, int j) {
    auto t = MultilinearTensor<Rational>::bigraded(1, 0, n, 2);
    t.at({i, j}) = Rational(1, 2);
    t.at({j, i}) = Rational(-1, 2);
    t.set_symmetry({true, true});
    return t;
}

/// alt(e_1* (x) .. (x) e_n*), so that nu gives theta^1 ^ .. ^ theta^n.
inline MultilinearTensor<Rational> volume_element(int n) {
    auto t = MultilinearTensor<Rational>::bigraded(1, 0, n, n);
    const Rational w(1, static_cast<long long>(comb::factorial(n)));
    for (const auto& [perm, sign] : comb::permutations(n)) t.at(std::span<const int>(perm)) = sign * w;
    t.set_symmetry({true, true});
    return t;
}

inline MultilinearTensor<Rational> standard_symplectic(int n) {
    auto t = area_element(n, 0, 1);
    for (int k = 2; k + 1 < n; k += 2) t += area_element(n, k, k + 1);
    t.set_symmetry({true, true});
    return t;
}

inline MultilinearTensor<Rational> scaled(MultilinearTensor<Rational> t, const Rational& s) { return t *= s; }

inline void attach_levi_civita(GStructureChart& s) {
    s.omega = levi_civita(s.algebra, *s.metric, s.theta);
    s.connection_kind = "levi_civita";
}

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Unitary coframe of the Kaehler metric with potential r^2 + a r^4 + b |z1|^4 on C^2
/// in real coordinates (x1, y1, x2, y2): the Cholesky factor of conj(h) with
/// h_{jk} = d_j dbar_k K gives zeta = L^* dz, and theta = (Re zeta1, Im zeta1, Re zeta2, Im zeta2).
inline FormField kaehler_coframe(const std::string& chart, double a, double b) {
    return FormField(chart, 4, 1, CoeffSpace::V(4),
                     [a, b](const std::vector<Jet>& x) {
                         const Jet &x1 = x[0], &y1 = x[1], &x2 = x[2], &y2 = x[3];
                         const Jet s1 = x1 * x1 + y1 * y1, s2 = x2 * x2 + y2 * y2, r2 = s1 + s2;
                         const Jet h11 = 1.0 + 2.0 * a * r2 + 2.0 * a * s1 + 4.0 * b * s1;
                         const Jet h22 = 1.0 + 2.0 * a * r2 + 2.0 * a * s2;
                         const Jet l11 = sqrt(h11);
                         // L21 = conj(h)_{21} / L11 = 2a conj(z1) z2 / L11 = u + i v
                         const Jet u = 2.0 * a * (x1 * x2 + y1 * y2) / l11;
                         const Jet v = 2.0 * a * (x1 * y2 - y1 * x2) / l11;
                         const Jet l22 = sqrt(h22 - u * u - v * v);
                         Matrix<Jet> e(4, 4, Jet(0.0));
                         e(0, 0) = l11;
                         e(1, 1) = l11;
                         // M12 = conj(L21) = u - i v as the real block [[u, v], [-v, u]]
                         e(0, 2) = u;
                         e(0, 3) = v;
                         e(1, 2) = -v;
                         e(1, 3) = u;
                         e(2, 2) = l22;
                         e(3, 3) = l22;
                         FormValue<Jet> out(4, 1, CoeffSpace::V(4));
                         for (std::size_t i = 0; i < 4; ++i)
                             for (std::size_t k = 0; k < 4; ++k) out(i, k) = e(k, i);
                         return out;
                     },
                     "theta");
}

}  // namespace catalog_detail

inline CatalogEntry build(const std::string& id, const BuildOptions& opt = {}) {
    using namespace catalog_detail;
    CatalogEntry e;
    e.id = id;
    auto& s = e.structure;
    const double pi = std::numbers::pi;

    if (id == "flat_torus_2" || id == "flat_torus_4") {
        const int n = id == "flat_torus_2" ? 2 : 4;
        e.description = "flat torus T^" + std::to_string(n) + " = [0, 2pi]^" + std::to_string(n) + ", coordinate coframe, SO(" +
                        std::to_string(n) + ") structure";
        s.chart = box(id, std::vector<double>(n, 0.0), std::vector<double>(n, kTwoPi), std::vector<int>(n, 2));
        s.algebra = share(algebra("so", n));
        s.theta = coordinate_coframe(id, n);
        s.metric = euclidean_metric(n);
        attach_levi_civita(s);
        const double vol = std::pow(kTwoPi, n);
        if (n == 2) {
            e.invariants.push_back({"area", area_element(2, 0, 1), "area form alt(e1* (x) e2*)"});
            e.invariants.push_back({"euler", pfaffian_tensor(*s.algebra), "Pfaffian on so(2)", kTwoPi});
            e.expected.push_back({"period:area", vol, 1e-9, false, "trivial", "constant integrand dx^dy"});
            e.expected.push_back({"period:euler", 0.0, 1e-12, false, "trivial", "flat connection, Omega = 0"});
        } else {
            e.invariants.push_back({"volume", volume_element(4), "volume form"});
            e.invariants.push_back({"euler", pfaffian_tensor(*s.algebra), "Pfaffian on so(4)", kTwoPi * kTwoPi});
            e.invariants.push_back({"area12", area_element(4, 0, 1), "non-invariant 2-form e1* ^ e2*"});
            e.expected.push_back({"period:volume", vol, 1e-9, false, "trivial", "constant integrand"});
            e.expected.push_back({"period:euler", 0.0, 1e-12, false, "trivial", "flat connection, Omega = 0"});
        }
        e.expected.push_back({"torsion", 0.0, 1e-10, false, "trivial", "constant coframe, zero connection"});
    } else if (id == "round_sphere_2") {
        const double d = opt.sphere_margin;
        e.description = "unit sphere S^2 in spherical coordinates (theta, phi) in (delta, pi - delta) x (0, 2pi)";
        s.chart = box(id, {d, 0.0}, {pi - d, kTwoPi}, {12, 2});
        s.algebra = share(algebra("so", 2));
        auto h = [](const std::vector<Jet>& x) { return std::vector<Jet>{Jet(1.0), sin(x[0])}; };
        s.theta = diagonal_coframe(id, 2, h);
        s.metric = diagonal_metric(h);
        attach_levi_civita(s);
        e.invariants.push_back({"euler", pfaffian_tensor(*s.algebra), "Pfaffian on so(2); gamma gives the Euler form", kTwoPi});
        e.invariants.push_back({"area", area_element(2, 0, 1), "area form; nu gives the Riemannian area form"});
        e.expected.push_back({"period:euler", 2.0, 1e-3, false, "oracle", "Gauss-Bonnet: K = 1, area 4 pi, chi(S^2) = 2"});
        e.expected.push_back({"period:area", 4.0 * pi * std::cos(d), 1e-9, false, "closed-form", "int sin(theta) over the chart"});
        e.expected.push_back({"torsion", 0.0, 1e-10, false, "oracle", "Levi-Civita connection"});
    } else if (id == "round_sphere_4") {
        const double d = opt.sphere_margin;
        e.description = "unit sphere S^4 in hyperspherical coordinates (chi1, chi2, chi3, phi)";
        s.chart = box(id, {d, d, d, 0.0}, {pi - d, pi - d, pi - d, kTwoPi}, {10, 10, 10, 2});
        s.algebra = share(algebra("so", 4));
        auto h = [](const std::vector<Jet>& x) {
            const Jet s1 = sin(x[0]), s2 = sin(x[1]), s3 = sin(x[2]);
            return std::vector<Jet>{Jet(1.0), s1, s1 * s2, s1 * s2 * s3};
        };
        s.theta = diagonal_coframe(id, 4, h);
        s.metric = diagonal_metric(h);
        attach_levi_civita(s);
        e.invariants.push_back({"euler", pfaffian_tensor(*s.algebra), "Pfaffian on so(4)", kTwoPi * kTwoPi});
        e.invariants.push_back({"volume", volume_element(4), "volume form"});
        e.expected.push_back({"period:euler", 2.0, 5e-3, false, "oracle", "generalized Gauss-Bonnet: chi(S^4) = 2"});
        e.expected.push_back({"period:volume", 8.0 * pi * pi / 3.0, 1e-3, false, "closed-form", "vol(S^4) = 8 pi^2 / 3"});
        e.expected.push_back({"torsion", 0.0, 1e-10, false, "oracle", "Levi-Civita connection"});
    } else if (id == "symplectic_torus_4") {
        e.description = "torus T^4 with the standard symplectic Sp(4,R) structure, coordinate coframe, zero connection";
        s.chart = box(id, std::vector<double>(4, 0.0), std::vector<double>(4, kTwoPi), std::vector<int>(4, 2));
        s.algebra = share(algebra("sp", 2));
        s.theta = coordinate_coframe(id, 4);
        s.omega = FormField::zero(id, 4, 1, CoeffSpace::g(s.algebra->dim()), "omega");
        s.connection_kind = "zero";
        const auto w = standard_symplectic(4);
        e.invariants.push_back({"omega_std", w, "standard symplectic form e1*^e2* + e3*^e4*"});
        e.invariants.push_back({"omega_std_squared", product({w}, {w}).tensor, "square of the symplectic form"});
        e.expected.push_back({"period:omega_std_squared", 2.0 * std::pow(kTwoPi, 4), 1e-6, false, "closed-form",
                              "omega_std^2 = 2 dx1 dx2 dx3 dx4, constant integrand"});
        e.expected.push_back({"torsion", 0.0, 1e-10, false, "trivial", "constant coframe, zero connection"});
    } else if (id == "kaehler_u2_chart") {
        e.description = "C^2 chart with Kaehler potential r^2 + a r^4 + b |z1|^4, unitary coframe, U(2) structure";
        s.chart = box(id, std::vector<double>(4, -0.5), std::vector<double>(4, 0.5), std::vector<int>(4, 4));
        s.algebra = share(algebra("u", 2));
        s.theta = kaehler_coframe(id, opt.kaehler_a, opt.kaehler_b);
        s.metric = coframe_metric(s.theta);
        attach_levi_civita(s);
        const auto kf = invariant_basis(*s.algebra, 0, 2);
        const auto lin = invariant_basis(*s.algebra, 1, 0);
        const auto proj = orthogonal_projection_tensor(*s.algebra, Matrix<Rational>::identity(4));
        e.invariants.push_back({"kaehler_form", scaled(kf.elements.at(0), Rational(1, 2)), "Kaehler form e1*^e2* + e3*^e4*"});
        e.invariants.push_back({"ricci", lin.elements.at(0), "invariant linear form on u(2) (Ricci form class)"});
        e.invariants.push_back({"ricci_squared", product({lin.elements.at(0)}, {lin.elements.at(0)}).tensor, "square of ricci"});
        e.invariants.push_back({"q", proj.q, "projection Lambda^2 V -> u(2) along the orthogonal complement"});
        e.expected.push_back({"torsion", 0.0, 1e-10, false, "oracle", "Levi-Civita connection"});
        e.expected.push_back({"closedness:kaehler_form", 0.0, 1e-8, false, "oracle", "Kaehler form is closed"});
    } else if (id == "torsionful_demo") {
        e.description = "Sp(4,R) structure on [0,1]^4 with theta^3 = exp(x2) dx3 and zero connection (torsion dtheta != 0)";
        s.chart = box(id, std::vector<double>(4, 0.0), std::vector<double>(4, 1.0), std::vector<int>(4, 3));
        s.algebra = share(algebra("sp", 2));
        s.theta = diagonal_coframe(id, 4, [](const std::vector<Jet>& x) { return std::vector<Jet>{Jet(1.0), Jet(1.0), exp(x[1]), Jet(1.0)}; });
        s.omega = FormField::zero(id, 4, 1, CoeffSpace::g(s.algebra->dim()), "omega");
        s.connection_kind = "zero";
        e.torsion_free = false;
        e.invariants.push_back({"area", standard_symplectic(4), "standard symplectic form"});
        e.expected.push_back({"closedness:area", 1e-3, 0.0, true, "closed-form", "d nu(area) = exp(x2) dx2^dx3^dx4"});
        e.expected.push_back({"torsion", 1e-3, 0.0, true, "closed-form", "d theta^3 = exp(x2) dx2^dx3"});
    } else {
        std::string known;
        for (const auto& k : catalog_ids()) known += (known.empty() ? "" : ", ") + k;
        throw InvalidArgument("unknown geometry id '" + id + "' (known: " + known + ")");
    }
    s.validate();
    return e;
}

/// Two torsionfree connections sharing one coframe, with invariants for the
/// transgression identity.
struct ConnectionPair {
    std::string id;
    std::string geometry;
    std::string description;
    LieAlgebraPtr algebra;
    Chart chart;
    FormField theta;
    FormField omega0;
    FormField omega1;
    std::vector<NamedInvariant> invariants;
};

namespace catalog_detail {

/// Christoffel symbols of a metric, as a field.
inline ChristoffelField christoffel_of(MetricField g) {
    return [g](const std::vector<Jet>& x) { return christoffel_symbols(g(x)); };
}

inline std::vector<NamedInvariant> gl_trace_invariants(const LieAlgebraSpec& gl) {
    const int d = gl.dim();
    auto tr = MultilinearTensor<Rational>::bigraded(d, 1, gl.rep_dim(), 0);
    auto trxy = MultilinearTensor<Rational>::bigraded(d, 2, gl.rep_dim(), 0);
    for (int a = 0; a < d; ++a) {
        tr.at({a}) = gl.basis(a).trace();
        for (int b = 0; b < d; ++b) trxy.at({a, b}) = (gl.basis(a) * gl.basis(b)).trace();
    }
    tr.set_symmetry({true, true});
    trxy.set_symmetry({true, true});
    return {{"trace", tr, "tr X"},
            {"trace_squared", product({tr}, {tr}).tensor, "tr X tr Y"},
            {"trace_product", trxy, "tr XY"}};
}

}  // namespace catalog_detail

inline std::vector<ConnectionPair> connection_pairs(const BuildOptions& opt = {}) {
    using namespace catalog_detail;
    std::vector<ConnectionPair> out;
    {
        // Flat torus as a GL(2) structure: omega0 = 0 and the Levi-Civita connection
        // of the flat metric F*delta, F(x, y) = (x + 0.3 sin y, y + 0.2 sin x).
        ConnectionPair p;
        p.id = "flat_torus_2/flat_metrics";
        p.geometry = "flat_torus_2";
        p.description = "Levi-Civita connections of delta and of the pulled-back flat metric F*delta, as GL(2) connections";
        p.chart = box("flat_torus_2", {0.0, 0.0}, {kTwoPi, kTwoPi}, {2, 2});
        p.algebra = share(algebra("gl", 2));
        p.theta = coordinate_coframe(p.chart.label, 2);
        p.omega0 = FormField::zero(p.chart.label, 2, 1, CoeffSpace::g(4), "omega0");
        MetricField pulled = [](const std::vector<Jet>& x) {
            Matrix<Jet> df(2, 2, Jet(0.0));
            df(0, 0) = Jet(1.0);
            df(0, 1) = 0.3 * cos(x[1]);
            df(1, 0) = 0.2 * cos(x[0]);
            df(1, 1) = Jet(1.0);
            return df.transpose() * df;
        };
        p.omega1 = affine_connection_form(christoffel_of(pulled), p.theta).relabeled("omega1");
        p.invariants = gl_trace_invariants(*p.algebra);
        out.push_back(std::move(p));
    }
    {
        // Kaehler chart as a GL(4) structure on theta0: Levi-Civita connections of
        // the metric and of a perturbed Kaehler metric, both written in theta0.
        ConnectionPair p;
        p.id = "kaehler_u2_chart/perturbed_metric";
        p.geometry = "kaehler_u2_chart";
        p.description = "Levi-Civita connections of two Kaehler metrics, written in the first unitary coframe as GL(4) connections";
        p.chart = box("kaehler_u2_chart", std::vector<double>(4, -0.5), std::vector<double>(4, 0.5), std::vector<int>(4, 4));
        p.algebra = share(algebra("gl", 4));
        p.theta = kaehler_coframe(p.chart.label, opt.kaehler_a, opt.kaehler_b);
        const auto theta1 = kaehler_coframe(p.chart.label, opt.kaehler_a + 0.4, opt.kaehler_b - 0.15);
        p.omega0 = affine_connection_form(christoffel_of(coframe_metric(p.theta)), p.theta).relabeled("omega0");
        p.omega1 = affine_connection_form(christoffel_of(coframe_metric(theta1)), p.theta).relabeled("omega1");
        p.invariants = gl_trace_invariants(*p.algebra);
        out.push_back(std::move(p));
    }
    {
        // Flat 4-torus with the abelian structure algebra spanned by N = E12, which
        // has nonzero first prolongation: omega1 = N h(x) dx2 is torsionfree for any h.
        ConnectionPair p;
        p.id = "flat_torus_4/shear";
        p.geometry = "flat_torus_4";
        p.description = "zero connection and N h(x) dx2 with N = E12, h = sin x1 + 0.5 cos x3";
        p.chart = box("flat_torus_4", std::vector<double>(4, 0.0), std::vector<double>(4, kTwoPi), std::vector<int>(4, 2));
        Matrix<Rational> n(4, 4, Rational(0));
        n(0, 1) = 1;
        p.algebra = share(LieAlgebraSpec::from_basis("shear", {n}));
        p.theta = coordinate_coframe(p.chart.label, 4);
        p.omega0 = FormField::zero(p.chart.label, 4, 1, CoeffSpace::g(1), "omega0");
        p.omega1 = FormField(p.chart.label, 4, 1, CoeffSpace::g(1),
                             [](const std::vector<Jet>& x) {
                                 FormValue<Jet> v(4, 1, CoeffSpace::g(1));
                                 v(1, 0) = sin(x[0]) + 0.5 * cos(x[2]);
                                 return v;
                             },
                             "omega1");
        auto dual = MultilinearTensor<Rational>::bigraded(1, 1, 4, 0);
        dual.at({0}) = 1;
        dual.set_symmetry({true, true});
        auto mixed = product({dual}, {area_element(4, 2, 3)}).tensor;
        p.invariants = {{"n_dual", dual, "N*"},
                        {"n_dual_squared", product({dual}, {dual}).tensor, "N* N*"},
                        {"n_dual_area34", mixed, "N* (x) e3*^e4*"}};
        out.push_back(std::move(p));
    }
    return out;
}

inline nlohmann::json to_json(const ExpectedResult& r) {
    return {{"quantity", r.quantity}, {"value", r.value}, {"tolerance", r.tolerance}, {"comparison", r.exceeds ? "exceeds" : "equals"},
            {"origin", r.origin}, {"oracle", r.oracle}};
}

inline nlohmann::json to_json(const CatalogEntry& e) {
    nlohmann::json j;
    j["id"] = e.id;
    j["description"] = e.description;
    j["group"] = e.structure.algebra->name();
    j["chart"] = to_json(e.structure.chart);
    j["connection"] = e.structure.connection_kind;
    j["torsion_free"] = e.torsion_free;
    auto invs = nlohmann::json::array();
    for (const auto& inv : e.invariants) invs.push_back({{"name", inv.name}, {"bidegree", {inv.p(), inv.q()}}, {"description", inv.description}});
    j["invariants"] = invs;
    auto exp = nlohmann::json::array();
    for (const auto& r : e.expected) exp.push_back(to_json(r));
    j["expected"] = exp;
    return j;
}

}  // namespace gstruct
