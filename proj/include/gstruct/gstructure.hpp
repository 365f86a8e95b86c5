#pragma once

#include "gstruct/chart.hpp"
#include "gstruct/error.hpp"
#include "gstruct/exact_linalg.hpp"
#include "gstruct/forms.hpp"
#include "gstruct/liealg.hpp"
#include "gstruct/matrix.hpp"
#include "gstruct/multilinear.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gstruct {

/// Symmetric 2-tensor field in coordinates, g_ij(x).
using MetricField = std::function<Matrix<Jet>(const std::vector<Jet>&)>;
/// Christoffel symbols as matrices (Gamma_i)^k_j = Gamma^k_{ij}, one per coordinate.
using ChristoffelField = std::function<std::vector<Matrix<Jet>>(const std::vector<Jet>&)>;
/// Algebra coordinates s(x) of a gauge map g(x) = exp(sum_a s_a(x) X_a).
using GaugeField = std::function<std::vector<Jet>(const std::vector<Jet>&)>;

/// Local model of a G-structure with optional connection.
struct GStructureChart {
    Chart chart;
    LieAlgebraPtr algebra;
    FormField theta;
    std::optional<FormField> omega;
    std::optional<MetricField> metric;
    std::string connection_kind = "none";  // levi_civita | zero | explicit | none

    void validate() const {
        chart.validate();
        if (!algebra) throw InvalidArgument("G-structure needs a Lie algebra");
        if (!theta.valid() || theta.degree() != 1 || !(theta.space() == CoeffSpace::V(algebra->rep_dim())))
            throw InvalidArgument("coframe must be a V-valued 1-form with dim V = " + std::to_string(algebra->rep_dim()));
        if (theta.n() != chart.dim() || theta.chart() != chart.label) throw InvalidArgument("coframe lives on another chart");
        if (algebra->rep_dim() != chart.dim()) throw InvalidArgument("dim V must equal the chart dimension");
        if (omega) {
            check_same_chart(theta, *omega);
            if (omega->degree() != 1 || !(omega->space() == CoeffSpace::g(algebra->dim())))
                throw InvalidArgument("connection must be a g-valued 1-form");
        }
    }
};

/// Matrix E with column i equal to theta(d/dx_i), i.e. E(a, i) = theta^a_i.
template <class T>
Matrix<T> coframe_matrix(const FormValue<T>& theta) {
    if (theta.degree() != 1 || theta.space().factors.size() != 1 || theta.space().factors[0].kind != FactorKind::V)
        throw InvalidArgument("coframe_matrix: expected a V-valued 1-form");
    const auto n = static_cast<std::size_t>(theta.n());
    const std::size_t dv = theta.width();
    Matrix<T> e(dv, n, T(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < dv; ++a) e(a, i) = theta(i, a);
    return e;
}

/// Frobenius condition number ||E|| ||E^-1|| of the coframe at a point.
inline double coframe_condition(const FormField& theta, std::span<const double> point) {
    const auto e = coframe_matrix(theta.values(point, 1));
    double n1 = 0, n2 = 0;
    for (double x : e.data()) n1 += x * x;
    const auto inv = inverse(e);
    for (double x : inv.data()) n2 += x * x;
    return std::sqrt(n1 * n2);
}

/// Omega = d omega + 1/2 [omega, omega]_wedge.
inline FormField curvature(const LieAlgebraPtr& alg, const FormField& omega) {
    if (omega.degree() != 1 || !(omega.space() == CoeffSpace::g(alg->dim()))) throw InvalidArgument("curvature: expected a g-valued 1-form");
    return FormField(omega.chart(), omega.n(), 2, omega.space(),
                     [alg, omega](const std::vector<Jet>& x) {
                         const auto w = omega.evaluate(x);
                         return exterior_derivative(w) + 0.5 * act_wedge(*alg, w, w);
                     },
                     "Omega");
}

/// tau = d theta + rho'_wedge(omega) theta.
inline FormField torsion(const LieAlgebraPtr& alg, const FormField& omega, const FormField& theta) {
    return covariant_derivative(alg, omega, theta).relabeled("tau");
}

/// d Omega + [omega, Omega]_wedge, which vanishes by the Bianchi identity.
inline FormField bianchi_residual(const LieAlgebraPtr& alg, const FormField& omega, const FormField& Omega) {
    check_same_chart(omega, Omega);
    return FormField(omega.chart(), omega.n(), 3, Omega.space(), [alg, omega, Omega](const std::vector<Jet>& x) {
        const auto big = Omega.evaluate(x);
        return exterior_derivative(big) + act_wedge(*alg, omega.evaluate(x), big);
    });
}

/// Gamma^k_{ij} = 1/2 g^{kl} (d_i g_{lj} + d_j g_{li} - d_l g_{ij}); loses one jet order.
inline std::vector<Matrix<Jet>> christoffel_symbols(const Matrix<Jet>& g) {
    const std::size_t n = g.rows();
    const auto ginv = inverse(g);
    // dg[l](i, j) = d_l g_ij
    std::vector<Matrix<Jet>> dg(n, Matrix<Jet>(n, n, Jet(0.0)));
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) dg[l](i, j) = g(i, j).derivative(static_cast<int>(l));
    std::vector<Matrix<Jet>> gamma(n, Matrix<Jet>(n, n, Jet(0.0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l) {
                const Jet lower = 0.5 * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
                if (is_zero_value(lower)) continue;
                for (std::size_t k = 0; k < n; ++k) gamma[i](k, j) += ginv(k, l) * lower;
            }
    return gamma;
}

namespace detail {

/// Writes the matrices m_i (one per coordinate) as a g-valued 1-form.
inline FormValue<Jet> matrices_to_form(const LieAlgebraSpec& alg, const std::vector<Matrix<Jet>>& m, double tolerance,
                                       const std::string& what) {
    const int n = static_cast<int>(m.size());
    FormValue<Jet> out(n, 1, CoeffSpace::g(alg.dim()));
    for (std::size_t i = 0; i < m.size(); ++i) {
        double residual = 0;
        const auto c = alg.coordinates(m[i], &residual);
        if (residual > tolerance * (1.0 + m[i].max_abs()))
            throw ConsistencyError(what + " leaves the Lie algebra " + alg.name() + " (residual " + std::to_string(residual) + ")");
        for (std::size_t a = 0; a < c.size(); ++a) out(i, a) = c[a];
    }
    return out;
}

}  // namespace detail

/// Connection form of the affine connection with Christoffel symbols Gamma in
/// the frame dual to theta: omega_i = E (d_i E^-1 + Gamma_i E^-1).
inline FormField connection_from_christoffel(const LieAlgebraPtr& alg, const ChristoffelField& christoffel, const FormField& theta,
                                             double tolerance = 1e-8) {
    if (theta.degree() != 1 || !(theta.space() == CoeffSpace::V(alg->rep_dim()))) throw InvalidArgument("expected a V-valued coframe");
    return FormField(theta.chart(), theta.n(), 1, CoeffSpace::g(alg->dim()),
                     [alg, christoffel, theta, tolerance](const std::vector<Jet>& x) {
                         const auto e = coframe_matrix(theta.evaluate(x));
                         const auto einv = inverse(e);
                         const auto gamma = christoffel(x);
                         const std::size_t n = e.rows();
                         std::vector<Matrix<Jet>> m;
                         m.reserve(n);
                         for (std::size_t i = 0; i < n; ++i) {
                             Matrix<Jet> d(n, n, Jet(0.0));
                             for (std::size_t r = 0; r < n * n; ++r) d.data()[r] = einv.data()[r].derivative(static_cast<int>(i));
                             m.push_back(e * (d + gamma[i] * einv));
                         }
                         return detail::matrices_to_form(*alg, m, tolerance, "connection");
                     },
                     "omega");
}

/// Affine connection in gl(n) through connection_from_christoffel.
inline FormField affine_connection_form(const ChristoffelField& christoffel, const FormField& theta) {
    return connection_from_christoffel(std::make_shared<const LieAlgebraSpec>(algebra("gl", theta.n())), christoffel, theta);
}

/// Levi-Civita connection of `metric` in the orthonormal coframe theta; the
/// result takes values in `alg`, which must contain the holonomy.
inline FormField levi_civita(const LieAlgebraPtr& alg, const MetricField& metric, const FormField& theta) {
    auto christoffel = [metric, theta](const std::vector<Jet>& x) {
        const auto g = metric(x);
        const auto e = coframe_matrix(theta.evaluate(x));
        const auto ete = e.transpose() * e;
        double err = 0;
        for (std::size_t i = 0; i < g.data().size(); ++i) err = std::max(err, std::abs(ete.data()[i].value() - g.data()[i].value()));
        if (err > 1e-9 * (1.0 + g.max_abs())) throw InvalidArgument("levi_civita: coframe is not orthonormal for the metric");
        return christoffel_symbols(g);
    };
    return connection_from_christoffel(alg, christoffel, theta);
}

/// Metric theta^T theta of a coframe; the catalog pairs coframes with their metrics.
inline MetricField coframe_metric(const FormField& theta) {
    return [theta](const std::vector<Jet>& x) {
        const auto e = coframe_matrix(theta.evaluate(x));
        return e.transpose() * e;
    };
}

/// g(x) = exp(sum_a s_a(x) X_a) as a matrix of jets.
inline Matrix<Jet> gauge_group_element(const LieAlgebraSpec& alg, const GaugeField& s, const std::vector<Jet>& x) {
    return expm(alg.element(s(x)));
}

/// Applies rho(g^-1) to V factors and Ad(g^-1) to g factors of a form's values.
inline FormValue<Jet> gauge_covariant(const LieAlgebraSpec& alg, const Matrix<Jet>& g, const FormValue<Jet>& v) {
    const auto ginv = inverse(g);
    if (v.space() == CoeffSpace::V(alg.rep_dim())) {
        FormValue<Jet> out(v.n(), v.degree(), v.space());
        const std::size_t n = static_cast<std::size_t>(alg.rep_dim());
        for (std::size_t r = 0; r < v.count(); ++r)
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) out(r, a) += ginv(a, b) * v(r, b);
        return out;
    }
    if (v.space() == CoeffSpace::g(alg.dim())) {
        FormValue<Jet> out(v.n(), v.degree(), v.space());
        for (std::size_t r = 0; r < v.count(); ++r) {
            std::vector<Jet> c(static_cast<std::size_t>(alg.dim()));
            for (std::size_t a = 0; a < c.size(); ++a) c[a] = v(r, a);
            const auto m = ginv * alg.element(c) * g;
            double residual = 0;
            const auto back = alg.coordinates(m, &residual);
            for (std::size_t a = 0; a < c.size(); ++a) out(r, a) = back[a];
        }
        return out;
    }
    if (v.space().is_scalar()) return v;
    throw InvalidArgument("gauge_covariant: unsupported coefficient space " + v.space().label());
}

struct GaugePair {
    FormField theta;
    FormField omega;
};

/// Change of local section by g: theta' = rho(g^-1) theta, omega' = Ad(g^-1) omega + g^-1 dg.
inline GaugePair gauge_transform(const LieAlgebraPtr& alg, const GaugeField& s, const FormField& theta, const FormField& omega) {
    check_same_chart(theta, omega);
    FormField th(theta.chart(), theta.n(), 1, theta.space(),
                 [alg, s, theta](const std::vector<Jet>& x) { return gauge_covariant(*alg, gauge_group_element(*alg, s, x), theta.evaluate(x)); },
                 "theta'");
    FormField om(omega.chart(), omega.n(), 1, omega.space(),
                 [alg, s, omega](const std::vector<Jet>& x) {
                     const auto g = gauge_group_element(*alg, s, x);
                     const auto ginv = inverse(g);
                     const auto w = omega.evaluate(x);
                     const std::size_t n = x.size();
                     std::vector<Matrix<Jet>> m;
                     for (std::size_t i = 0; i < n; ++i) {
                         std::vector<Jet> c(static_cast<std::size_t>(alg->dim()));
                         for (std::size_t a = 0; a < c.size(); ++a) c[a] = w(i, a);
                         Matrix<Jet> dg(g.rows(), g.cols(), Jet(0.0));
                         for (std::size_t r = 0; r < g.data().size(); ++r) dg.data()[r] = g.data()[r].derivative(static_cast<int>(i));
                         m.push_back(ginv * alg->element(c) * g + ginv * dg);
                     }
                     return detail::matrices_to_form(*alg, m, 1e-8, "gauge-transformed connection");
                 },
                 "omega'");
    return {th, om};
}

struct ProjectionTensor {
    /// q(X, v, w) = <P(v ^ w), X> with <A, B> = -1/2 tr(AB) on so(G).
    MultilinearTensor<Rational> q;
    /// P on Lambda^2 V in the basis e_c ^ e_d, c < d (lexicographic).
    Matrix<Rational> projector;
    std::size_t rank = 0;
};

/// Invariant element of g* (x) Lambda^2 V* from the projection Lambda^2 V -> g
/// along the metric-orthogonal complement. Lambda^2 V is identified with so(G)
/// by v ^ w -> (v w^T - w v^T) G.
inline ProjectionTensor orthogonal_projection_tensor(const LieAlgebraSpec& alg, const Matrix<Rational>& metric) {
    const auto n = static_cast<std::size_t>(alg.rep_dim());
    if (metric.rows() != n || metric.cols() != n) throw InvalidArgument("metric has the wrong size");
    if (!(metric == metric.transpose())) throw InvalidArgument("metric must be symmetric");
    {
        // positive definite: all pivots of unpivoted elimination are positive
        Matrix<Rational> m = metric;
        for (std::size_t k = 0; k < n; ++k) {
            if (m(k, k) <= 0) throw InvalidArgument("metric must be positive definite");
            for (std::size_t r = k + 1; r < n; ++r) {
                const Rational f = m(r, k) / m(k, k);
                for (std::size_t c = k; c < n; ++c) m(r, c) -= f * m(k, c);
            }
        }
    }
    for (const auto& x : alg.basis())
        if (!(x.transpose() * metric + metric * x == Matrix<Rational>(n, n, Rational(0))))
            throw InvalidArgument("algebra " + alg.name() + " does not preserve the metric");

    const auto d = static_cast<std::size_t>(alg.dim());
    auto pairing = [](const Matrix<Rational>& a, const Matrix<Rational>& b) { return Rational(-1, 2) * (a * b).trace(); };
    Matrix<Rational> gram(d, d, Rational(0));
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) gram(a, b) = pairing(alg.basis()[a], alg.basis()[b]);
    const auto gram_inv = inverse(gram);
    const auto metric_inv = inverse(metric);

    auto wedge = [&](std::size_t c, std::size_t e) {
        Matrix<Rational> m(n, n, Rational(0));
        m(c, e) = 1;
        m(e, c) = -1;
        return m * metric;
    };
    auto project = [&](const Matrix<Rational>& a) {
        std::vector<Rational> rhs(d), x(d, Rational(0));
        for (std::size_t k = 0; k < d; ++k) rhs[k] = pairing(alg.basis()[k], a);
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t l = 0; l < d; ++l) x[k] += gram_inv(k, l) * rhs[l];
        return alg.element(x);
    };

    const auto& pairs = comb::subsets(static_cast<int>(n), 2);
    ProjectionTensor out;
    out.projector = Matrix<Rational>(pairs.size(), pairs.size(), Rational(0));
    std::vector<Matrix<Rational>> images;
    for (std::size_t col = 0; col < pairs.size(); ++col) {
        const auto c = static_cast<std::size_t>(pairs.indices[col][0]), e = static_cast<std::size_t>(pairs.indices[col][1]);
        const auto p = project(wedge(c, e));
        images.push_back(p);
        const auto back = p * metric_inv;  // antisymmetric coefficient matrix of the image bivector
        for (std::size_t row = 0; row < pairs.size(); ++row)
            out.projector(row, col) = back(static_cast<std::size_t>(pairs.indices[row][0]), static_cast<std::size_t>(pairs.indices[row][1]));
    }
    out.rank = exact::rank(out.projector);

    out.q = MultilinearTensor<Rational>::bigraded(static_cast<int>(d), 1, static_cast<int>(n), 2);
    for (std::size_t col = 0; col < pairs.size(); ++col) {
        const int c = pairs.indices[col][0], e = pairs.indices[col][1];
        for (std::size_t a = 0; a < d; ++a) {
            const Rational v = pairing(images[col], alg.basis()[a]);
            out.q.at({static_cast<int>(a), c, e}) = v;
            out.q.at({static_cast<int>(a), e, c}) = -v;
        }
    }
    out.q.set_symmetry({true, true});
    return out;
}

}  // namespace gstruct
