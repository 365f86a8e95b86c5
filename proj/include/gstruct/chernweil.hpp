#pragma once

#include "gstruct/chart.hpp"
#include "gstruct/error.hpp"
#include "gstruct/forms.hpp"
#include "gstruct/gstructure.hpp"
#include "gstruct/multilinear.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace gstruct {

namespace detail {

inline void check_slot(const VSpace& slot, const CoeffSpace& space, std::size_t i) {
    if (space.factors.size() != 1 || !(space.factors[0] == slot))
        throw InvalidArgument("contract_forms: argument " + std::to_string(i + 1) + " is " + space.label() + "-valued but slot " +
                              std::to_string(i + 1) + " of f is " + label(slot.kind) + "(" + std::to_string(slot.dim) + ")");
}

}  // namespace detail

/// f o (psi_1 (x)_wedge ... (x)_wedge psi_k) at one point.
template <class S>
FormValue<Jet> contract_values(const MultilinearTensor<S>& f, const std::vector<const FormValue<Jet>*>& psis) {
    if (psis.size() != f.domain().size()) throw InvalidArgument("contract_forms: valence mismatch");
    if (psis.empty()) throw InvalidArgument("contract_forms: need at least one form");
    for (std::size_t i = 0; i < psis.size(); ++i) detail::check_slot(f.domain()[i], psis[i]->space(), i);
    FormValue<Jet> acc = *psis[0];
    for (std::size_t i = 1; i < psis.size(); ++i) acc = wedge_tensor(acc, *psis[i]);
    return contract(f, acc);
}

/// f^{psi_1..psi_k} = f o (psi_1 (x)_wedge ... (x)_wedge psi_k). Repeated
/// arguments are evaluated once per point.
template <class S>
FormField contract_forms(const MultilinearTensor<S>& f, const std::vector<FormField>& psis) {
    if (psis.size() != f.domain().size()) throw InvalidArgument("contract_forms: valence mismatch");
    if (psis.empty()) throw InvalidArgument("contract_forms: need at least one form");
    int degree = 0;
    for (std::size_t i = 0; i < psis.size(); ++i) {
        check_same_chart(psis[0], psis[i]);
        detail::check_slot(f.domain()[i], psis[i].space(), i);
        degree += psis[i].degree();
    }
    const auto fd = f.template cast<double>();
    return FormField(psis[0].chart(), psis[0].n(), degree, CoeffSpace::scalar(), [fd, psis](const std::vector<Jet>& x) {
        std::vector<FormValue<Jet>> distinct;
        std::vector<const void*> ids;
        std::vector<std::size_t> slot;
        for (const auto& p : psis) {
            std::size_t k = 0;
            while (k < ids.size() && ids[k] != p.identity()) ++k;
            if (k == ids.size()) {
                ids.push_back(p.identity());
                distinct.push_back(p.evaluate(x));
            }
            slot.push_back(k);
        }
        std::vector<const FormValue<Jet>*> args;
        for (std::size_t k : slot) args.push_back(&distinct[k]);
        return contract_values(fd, args);
    });
}

namespace detail {

template <class S>
void check_bigraded(const MultilinearTensor<S>& f, int p, int q, const std::string& what) {
    if (!f.is_bigraded()) throw InvalidArgument(what + ": f must have its g slots before its V slots");
    if (f.p() != p || f.q() != q)
        throw InvalidArgument(what + ": bidegree (" + std::to_string(f.p()) + "," + std::to_string(f.q()) + ") does not fit");
}

}  // namespace detail

/// nu(f) = f^theta for f in Lambda^q(V*).
template <class S>
FormField nu(const MultilinearTensor<S>& f, const FormField& theta) {
    detail::check_bigraded(f, 0, f.q(), "nu");
    if (f.q() == 0) throw InvalidArgument("nu: f has no V slots");
    return contract_forms(f, std::vector<FormField>(static_cast<std::size_t>(f.q()), theta));
}

/// gamma(f) = f^Omega for f in S^p(g*).
template <class S>
FormField gamma(const MultilinearTensor<S>& f, const FormField& Omega) {
    detail::check_bigraded(f, f.p(), 0, "gamma");
    if (f.p() == 0) throw InvalidArgument("gamma: f has no g slots");
    return contract_forms(f, std::vector<FormField>(static_cast<std::size_t>(f.p()), Omega));
}

/// mu(f) = f(Omega, .., Omega, theta, .., theta) of degree 2p + q.
template <class S>
FormField mu(const MultilinearTensor<S>& f, const FormField& Omega, const FormField& theta) {
    detail::check_bigraded(f, f.p(), f.q(), "mu");
    if (f.rank() == 0) throw InvalidArgument("mu: f has no slots");
    std::vector<FormField> args(static_cast<std::size_t>(f.p()), Omega);
    for (int i = 0; i < f.q(); ++i) args.push_back(theta);
    return contract_forms(f, args);
}

/// Tf = p int_0^1 f(phi, Omega_t, .., Omega_t, theta, .., theta) dt with
/// omega_t = omega_0 + t phi, by Gauss-Legendre with p + 1 nodes.
template <class S>
FormField transgression(const LieAlgebraPtr& alg, const MultilinearTensor<S>& f, const FormField& omega0, const FormField& omega1,
                        const FormField& theta) {
    detail::check_bigraded(f, f.p(), f.q(), "transgression");
    if (f.p() < 1) throw InvalidArgument("transgression: f needs at least one g slot (p >= 1)");
    check_same_chart(omega0, omega1);
    check_same_chart(omega0, theta);
    const auto fd = f.template cast<double>();
    const int p = f.p(), q = f.q();
    const auto rule = gauss_legendre(p + 1, 0.0, 1.0);
    return FormField(theta.chart(), theta.n(), 2 * p + q - 1, CoeffSpace::scalar(),
                     [alg, fd, p, q, rule, omega0, omega1, theta](const std::vector<Jet>& x) {
                         const auto w0 = omega0.evaluate(x);
                         const auto phi = omega1.evaluate(x) - w0;
                         const auto th = theta.evaluate(x);
                         FormValue<Jet> total(th.n(), 2 * p + q - 1, CoeffSpace::scalar());
                         for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
                             const auto wt = w0 + rule.nodes[k] * phi;
                             const auto big = exterior_derivative(wt) + 0.5 * act_wedge(*alg, wt, wt);
                             std::vector<const FormValue<Jet>*> args{&phi};
                             for (int i = 1; i < p; ++i) args.push_back(&big);
                             for (int i = 0; i < q; ++i) args.push_back(&th);
                             total += contract_values(fd, args) * (p * rule.weights[k]);
                         }
                         return total;
                     },
                     "Tf");
}

/// f^{Omega_1,theta} - f^{Omega_0,theta} - d(Tf), which vanishes for torsionfree pairs.
template <class S>
FormField transgression_defect(const LieAlgebraPtr& alg, const MultilinearTensor<S>& f, const FormField& omega0, const FormField& omega1,
                               const FormField& theta) {
    const auto m1 = mu(f, curvature(alg, omega1), theta);
    const auto m0 = mu(f, curvature(alg, omega0), theta);
    return m1 - m0 - exterior_derivative(transgression(alg, f, omega0, omega1, theta));
}

/// Sum over i of (-1)^{p_1 + .. + p_{i-1}} f(psi_1, .., rho'_wedge(omega) psi_i, .., psi_k):
/// the terms separating d_omega from d in the derivative of f^{psi}; zero for invariant f.
template <class S>
FormField covariant_correction(const LieAlgebraPtr& alg, const MultilinearTensor<S>& f, const FormField& omega,
                               const std::vector<FormField>& psis) {
    if (psis.size() != f.domain().size()) throw InvalidArgument("covariant_correction: valence mismatch");
    int degree = 1;
    for (const auto& p : psis) degree += p.degree();
    const auto fd = f.template cast<double>();
    return FormField(omega.chart(), omega.n(), degree, CoeffSpace::scalar(), [alg, fd, omega, psis](const std::vector<Jet>& x) {
        const auto w = omega.evaluate(x);
        std::vector<FormValue<Jet>> vals;
        for (const auto& p : psis) vals.push_back(p.evaluate(x));
        int degree = 1;
        for (const auto& v : vals) degree += v.degree();
        FormValue<Jet> total(w.n(), degree, CoeffSpace::scalar());
        int before = 0;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const auto acted = act_wedge(*alg, w, vals[i]);
            std::vector<const FormValue<Jet>*> args;
            for (std::size_t j = 0; j < vals.size(); ++j) args.push_back(j == i ? &acted : &vals[j]);
            const auto term = contract_values(fd, args);
            if (before % 2 == 0)
                total += term;
            else
                total -= term;
            before += vals[i].degree();
        }
        return total;
    });
}

struct ClosednessReport {
    double residual = 0.0;
    double tolerance = 0.0;
    std::size_t points = 0;
    int jet_order = 0;
    bool pass = false;
};

/// max |d(form)| over the sample points.
inline ClosednessReport verify_closed(const FormField& form, const std::vector<std::vector<double>>& points, int order,
                                      double tolerance = 1e-8) {
    ClosednessReport r;
    r.tolerance = tolerance;
    r.points = points.size();
    r.jet_order = order;
    const auto d = exterior_derivative(form);
    for (const auto& p : points) r.residual = std::max(r.residual, d.at(p, order).max_abs());
    r.pass = r.residual < tolerance;
    return r;
}

/// max |form| over the sample points, value part only.
inline double max_over(const FormField& form, const std::vector<std::vector<double>>& points, int order) {
    double m = 0;
    for (const auto& p : points) m = std::max(m, form.at(p, order).max_abs());
    return m;
}

/// Quadrature of the top component of a scalar n-form over the chart box.
inline double integrate(const FormField& form, const Chart& chart, int order = 2) {
    if (!form.space().is_scalar()) throw InvalidArgument("integrate: form must be scalar-valued");
    if (form.degree() != chart.dim() || form.n() != chart.dim())
        throw InvalidArgument("integrate: form degree " + std::to_string(form.degree()) + " differs from chart dimension " +
                              std::to_string(chart.dim()));
    double sum = 0;
    chart.for_each_node([&](const std::vector<double>& p, double w) { sum += w * form.at(p, order)(0, 0).value(); });
    return sum;
}

/// Polarized Pfaffian on a subalgebra of so(2m):
/// f(X_1..X_m) = 1/(2^m m!) sum_pi sgn(pi) prod_i (X_i)_{pi(2i-1), pi(2i)}.
inline MultilinearTensor<Rational> pfaffian_tensor(const LieAlgebraSpec& alg) {
    const int n = alg.rep_dim();
    if (n % 2 != 0) throw InvalidArgument("pfaffian needs an even-dimensional representation");
    const int m = n / 2, d = alg.dim();
    const auto perms = comb::permutations(n);
    auto f = MultilinearTensor<Rational>::bigraded(d, m, n, 0);
    const Rational norm = Rational(1) / Rational(static_cast<long long>((std::size_t{1} << m) * comb::factorial(m)));
    for (std::size_t flat = 0; flat < f.size(); ++flat) {
        const auto idx = f.multi_index(flat);
        Rational sum = 0;
        for (const auto& [perm, sign] : perms) {
            Rational prod = sign;
            for (int i = 0; i < m && prod != 0; ++i)
                prod *= alg.basis(idx[static_cast<std::size_t>(i)])(static_cast<std::size_t>(perm[static_cast<std::size_t>(2 * i)]),
                                                                    static_cast<std::size_t>(perm[static_cast<std::size_t>(2 * i + 1)]));
            sum += prod;
        }
        f.components()[flat] = sum * norm;
    }
    f.set_symmetry({true, true});
    return f;
}

struct Period {
    std::string cycle;
    double value = 0.0;
    double normalization = 1.0;
    double normalized() const { return value / normalization; }
};

struct CharacteristicReport {
    std::string geometry;
    std::string invariant;
    int p = 0;
    int q = 0;
    bool invariant_checked = false;  // f passed is_invariant
    std::vector<std::string> warnings;
    std::vector<std::vector<double>> points;
    std::vector<std::vector<double>> components;  // one row of increasing-index components per point
    std::optional<ClosednessReport> closedness;
    std::vector<Period> periods;
    nlohmann::json connection = nlohmann::json::object();
    std::uint64_t seed = 0;

    int degree() const { return 2 * p + q; }
};

inline nlohmann::json to_json(const ClosednessReport& r) {
    return {{"residual", r.residual}, {"tolerance", r.tolerance}, {"points", r.points}, {"jet_order", r.jet_order},
            {"status", r.pass ? "PASS" : "FAIL"}};
}

inline nlohmann::json to_json(const CharacteristicReport& r) {
    nlohmann::json j;
    j["geometry"] = r.geometry;
    j["invariant"] = r.invariant;
    j["bidegree"] = {r.p, r.q};
    j["degree"] = r.degree();
    j["invariant_checked"] = r.invariant_checked;
    j["warnings"] = r.warnings;
    j["seed"] = r.seed;
    auto table = nlohmann::json::array();
    for (std::size_t i = 0; i < r.points.size(); ++i) table.push_back({{"point", r.points[i]}, {"components", r.components[i]}});
    j["pointwise"] = table;
    j["closedness"] = r.closedness ? to_json(*r.closedness) : nlohmann::json(nullptr);
    auto periods = nlohmann::json::array();
    for (const auto& p : r.periods)
        periods.push_back({{"cycle", p.cycle}, {"value", p.value}, {"normalization", p.normalization}, {"normalized", p.normalized()}});
    j["periods"] = periods;
    j["connection"] = r.connection;
    return j;
}

}  // namespace gstruct
