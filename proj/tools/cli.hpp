#pragma once

#include "gstruct/gstruct.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace gstruct::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr std::uint64_t kDefaultSeed = 20240601;
inline constexpr double kClosednessTolerance = 1e-8;
inline constexpr double kTransgressionTolerance = 1e-7;

/// Malformed or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string geometry;
    BuildOptions options;
    nlohmann::json invariant;  // name, {group, p, q, index} or {tensor}
    std::vector<std::string> invariants;
    std::string pair;
    std::size_t points = 100;
    std::uint64_t seed = kDefaultSeed;
    std::optional<double> tolerance;
    int jet_order = 3;
    std::string output_dir;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline nlohmann::json parse_config_text(const std::string& text, const std::string& path) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ConfigError(path + ":" + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
    }
}

template <class T>
T field(const nlohmann::json& j, const std::string& key, const std::string& path) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(path + ": field '" + key + "' has the wrong type");
    }
}

inline void apply_config(RunConfig& cfg, const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": top level must be a JSON object");
    static const std::vector<std::string> known{"geometry", "options", "invariant", "invariants", "pair", "points",
                                                "seed", "tolerance", "jet_order", "output_dir"};
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(path + ": unknown field '" + key + "'");
    if (j.contains("geometry")) cfg.geometry = field<std::string>(j, "geometry", path);
    if (j.contains("options")) {
        const auto& o = j["options"];
        if (!o.is_object()) throw ConfigError(path + ": field 'options' must be an object");
        for (const auto& [key, value] : o.items()) {
            if (!value.is_number()) throw ConfigError(path + ": field 'options." + key + "' must be a number");
            if (key == "sphere_margin") cfg.options.sphere_margin = value.get<double>();
            else if (key == "kaehler_a") cfg.options.kaehler_a = value.get<double>();
            else if (key == "kaehler_b") cfg.options.kaehler_b = value.get<double>();
            else throw ConfigError(path + ": unknown field 'options." + key + "'");
        }
    }
    if (j.contains("invariant")) {
        cfg.invariant = j["invariant"];
        if (!cfg.invariant.is_string() && !cfg.invariant.is_object())
            throw ConfigError(path + ": field 'invariant' must be a name or an object");
    }
    if (j.contains("invariants")) cfg.invariants = field<std::vector<std::string>>(j, "invariants", path);
    if (j.contains("pair")) cfg.pair = field<std::string>(j, "pair", path);
    if (j.contains("points")) cfg.points = field<std::size_t>(j, "points", path);
    if (j.contains("seed")) cfg.seed = field<std::uint64_t>(j, "seed", path);
    if (j.contains("tolerance")) cfg.tolerance = field<double>(j, "tolerance", path);
    if (j.contains("jet_order")) cfg.jet_order = field<int>(j, "jet_order", path);
    if (j.contains("output_dir")) cfg.output_dir = field<std::string>(j, "output_dir", path);
}

inline void check_config(const RunConfig& cfg) {
    if (cfg.points == 0) throw ConfigError("field 'points' must be positive");
    if (cfg.jet_order < 1 || cfg.jet_order > kMaxJetOrder) throw ConfigError("field 'jet_order' must be in 1..3");
    if (cfg.tolerance && !(*cfg.tolerance > 0)) throw ConfigError("field 'tolerance' must be positive");
    if (!(cfg.options.sphere_margin > 0 && cfg.options.sphere_margin < 0.5)) throw ConfigError("field 'options.sphere_margin' must be in (0, 0.5)");
}

struct ResolvedInvariant {
    std::string name;
    MultilinearTensor<Rational> tensor;
    double normalization = 1.0;
};

inline ResolvedInvariant resolve_invariant(const CatalogEntry& e, const nlohmann::json& sel) {
    if (sel.is_null()) throw ConfigError("no invariant selected (use --invariant or the config field 'invariant')");
    if (sel.is_string()) {
        const auto& inv = e.invariant(sel.get<std::string>());
        return {inv.name, inv.tensor, inv.period_normalization};
    }
    if (sel.contains("tensor")) {
        try {
            return {sel.value("name", std::string("inline")), tensor_from_json<Rational>(sel["tensor"]), sel.value("normalization", 1.0)};
        } catch (const nlohmann::json::exception& ex) {
            throw ConfigError(std::string("field 'invariant.tensor' is malformed: ") + ex.what());
        }
    }
    for (const char* key : {"group", "p", "q"})
        if (!sel.contains(key)) throw ConfigError(std::string("field 'invariant.") + key + "' is required");
    const auto group = field<std::string>(sel, "group", "invariant");
    const int p = field<int>(sel, "p", "invariant"), q = field<int>(sel, "q", "invariant");
    const auto index = sel.contains("index") ? field<std::size_t>(sel, "index", "invariant") : std::size_t{0};
    const auto basis = invariant_basis(algebra_from_id(group), p, q);
    if (index >= basis.dimension())
        throw ConfigError("field 'invariant.index' = " + std::to_string(index) + " but the invariant space has dimension " +
                          std::to_string(basis.dimension()));
    return {group + "_p" + std::to_string(p) + "_q" + std::to_string(q) + "_" + std::to_string(index), basis.elements[index], 1.0};
}

inline std::string output_dir(const RunConfig& cfg, const std::string& flag) {
    std::string dir = cfg.output_dir.empty() ? "gstruct_out" : cfg.output_dir;
    if (const char* env = std::getenv("GSTRUCT_OUT"); env && *env) dir = env;
    if (!flag.empty()) dir = flag;
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slug(std::string s) {
    for (auto& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') c = '_';
    return s;
}

inline void write_text(const std::string& dir, const std::string& name, const std::string& text) {
    std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + name);
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline std::string fmt(double x) {
    std::ostringstream s;
    s << std::setprecision(17) << x;
    return s.str();
}

inline const ExpectedResult* expected(const CatalogEntry& e, const std::string& quantity) {
    for (const auto& r : e.expected)
        if (r.quantity == quantity) return &r;
    return nullptr;
}

inline nlohmann::json connection_json(const CatalogEntry& e) {
    return {{"kind", e.structure.connection_kind}, {"group", e.algebra()->name()}, {"torsion_free", e.torsion_free}};
}

struct Evaluated {
    CatalogEntry entry;
    ResolvedInvariant inv;
    FormField form;
    bool invariant = false;
    std::vector<std::string> warnings;
};

inline Evaluated evaluate(const RunConfig& cfg) {
    if (cfg.geometry.empty()) throw ConfigError("no geometry selected (use --geometry or the config field 'geometry')");
    Evaluated ev{build(cfg.geometry, cfg.options), {}, {}, false, {}};
    ev.inv = resolve_invariant(ev.entry, cfg.invariant);
    const auto& f = ev.inv.tensor;
    const auto& alg = *ev.entry.algebra();
    if (!f.is_bigraded()) throw ConfigError("invariant tensor must list its g slots before its V slots");
    for (const auto& d : f.domain())
        if (d.dim != (d.kind == FactorKind::g ? alg.dim() : alg.rep_dim()))
            throw ConfigError("invariant tensor does not match the structure algebra " + alg.name());
    ev.invariant = is_invariant(f, alg).invariant;
    if (!ev.invariant) ev.warnings.push_back("f is not invariant under " + alg.name() + "; class claims are suppressed");
    if (2 * f.p() + f.q() > ev.entry.structure.chart.dim())
        ev.warnings.push_back("form degree exceeds the chart dimension; the form vanishes identically");
    ev.form = mu(f, ev.entry.curvature_form(), ev.entry.theta());
    return ev;
}

inline CharacteristicReport base_report(const RunConfig& cfg, const Evaluated& ev) {
    CharacteristicReport r;
    r.geometry = ev.entry.id;
    r.invariant = ev.inv.name;
    r.p = ev.inv.tensor.p();
    r.q = ev.inv.tensor.q();
    r.invariant_checked = ev.invariant;
    r.warnings = ev.warnings;
    r.connection = connection_json(ev.entry);
    r.seed = cfg.seed;
    return r;
}

inline std::optional<Period> top_period(const Evaluated& ev) {
    const auto& chart = ev.entry.structure.chart;
    if (ev.form.degree() != chart.dim()) return std::nullopt;
    return Period{chart.label, integrate(ev.form, chart, ev.entry.integration_order), ev.inv.normalization};
}

inline nlohmann::json expectation_json(const ExpectedResult& r, double observed) {
    auto j = to_json(r);
    j["observed"] = observed;
    j["status"] = r.check(observed) ? "PASS" : "FAIL";
    return j;
}

}  // namespace detail

struct Streams {
    std::ostream& out;
    std::ostream& err;
};

inline int cmd_invariants(const std::string& group, int p, int q, bool table, int max_p, const std::string& dir, Streams io) {
    const auto alg = algebra_from_id(group);
    if (table) {
        std::ostringstream csv;
        csv << "algebra,p,q,dimension\n";
        for (int pp = 0; pp <= max_p; ++pp)
            for (int qq = 0; qq <= alg.rep_dim(); ++qq) {
                csv << group << "," << pp << "," << qq << ",";
                try {
                    csv << invariant_basis(alg, pp, qq).dimension() << "\n";
                } catch (const SizeLimitError&) {
                    csv << "skipped\n";
                }
            }
        detail::write_text(dir, "dimensions_" + detail::slug(group) + ".csv", csv.str());
        io.out << csv.str();
        return kExitOk;
    }
    const auto b = invariant_basis(alg, p, q);
    auto j = to_json(b);
    j["group"] = group;
    j["coordinates"] = nlohmann::json::array();
    for (const auto& c : b.coordinates) {
        auto row = nlohmann::json::array();
        for (const auto& x : c) row.push_back(x.str());
        j["coordinates"].push_back(row);
    }
    const auto text = detail::dump(j);
    detail::write_text(dir, "invariants_" + detail::slug(group) + "_p" + std::to_string(p) + "_q" + std::to_string(q) + ".json", text);
    io.out << text;
    return kExitOk;
}

inline int cmd_classes(const RunConfig& cfg, const std::string& dir, Streams io) {
    const auto ev = detail::evaluate(cfg);
    auto r = detail::base_report(cfg, ev);
    const Sampler sampler(cfg.seed);
    r.points = sampler.points(ev.entry.structure.chart, cfg.points);
    for (const auto& p : r.points) r.components.push_back(ev.form.values(p, cfg.jet_order).data());
    bool ok = true;
    auto checks = nlohmann::json::array();
    if (ev.invariant) {
        r.closedness = verify_closed(ev.form, r.points, cfg.jet_order, cfg.tolerance.value_or(kClosednessTolerance));
        if (ev.entry.torsion_free) ok = ok && r.closedness->pass;
        if (const auto period = detail::top_period(ev)) {
            r.periods.push_back(*period);
            if (const auto* exp = detail::expected(ev.entry, "period:" + ev.inv.name)) {
                checks.push_back(detail::expectation_json(*exp, period->normalized()));
                ok = ok && checks.back()["status"] == "PASS";
            }
        }
    }
    auto j = to_json(r);
    j["expected"] = checks;
    j["status"] = ok ? "PASS" : "FAIL";
    detail::write_text(dir, "classes_" + detail::slug(ev.entry.id) + "_" + detail::slug(ev.inv.name) + ".json", detail::dump(j));
    io.out << "classes " << ev.entry.id << " " << ev.inv.name << " degree " << r.degree();
    if (r.closedness) io.out << " closedness " << (r.closedness->pass ? "PASS" : "FAIL") << " residual " << detail::fmt(r.closedness->residual);
    for (const auto& p : r.periods) io.out << " period " << detail::fmt(p.value) << " normalized " << detail::fmt(p.normalized());
    io.out << " " << (ok ? "PASS" : "FAIL") << "\n";
    for (const auto& w : r.warnings) io.err << "warning: " << w << "\n";
    return ok ? kExitOk : kExitFail;
}

inline int cmd_verify(const RunConfig& cfg, const std::string& dir, Streams io) {
    const auto ev = detail::evaluate(cfg);
    const auto& e = ev.entry;
    const Sampler sampler(cfg.seed);
    const auto points = sampler.points(e.structure.chart, cfg.points);
    const auto d = exterior_derivative(ev.form);
    const auto tor = torsion(e.algebra(), e.omega(), e.theta());
    const auto om = e.curvature_form();
    const auto bianchi = bianchi_residual(e.algebra(), e.omega(), om);
    std::ostringstream csv;
    csv << "index";
    for (int i = 0; i < e.structure.chart.dim(); ++i) csv << ",x" << i;
    csv << ",closedness,torsion,bianchi\n";
    double closed = 0, t = 0, b = 0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& p = points[k];
        const double rc = d.at(p, cfg.jet_order).max_abs();
        const double rt = tor.at(p, cfg.jet_order).max_abs();
        const double rb = bianchi.at(p, cfg.jet_order).max_abs();
        closed = std::max(closed, rc);
        t = std::max(t, rt);
        b = std::max(b, rb);
        csv << k;
        for (double x : p) csv << "," << detail::fmt(x);
        csv << "," << detail::fmt(rc) << "," << detail::fmt(rt) << "," << detail::fmt(rb) << "\n";
    }
    const double tol = cfg.tolerance.value_or(kClosednessTolerance);
    const bool pass = closed < tol;
    const std::string stem = "verify_" + detail::slug(e.id) + "_" + detail::slug(ev.inv.name);
    detail::write_text(dir, stem + ".csv", csv.str());
    nlohmann::json j{{"geometry", e.id},
                     {"invariant", ev.inv.name},
                     {"seed", cfg.seed},
                     {"points", points.size()},
                     {"jet_order", cfg.jet_order},
                     {"tolerance", tol},
                     {"closedness_residual", closed},
                     {"torsion_residual", t},
                     {"bianchi_residual", b},
                     {"invariant_checked", ev.invariant},
                     {"warnings", ev.warnings},
                     {"status", pass ? "PASS" : "FAIL"}};
    detail::write_text(dir, stem + ".json", detail::dump(j));
    io.out << "verify " << e.id << " " << ev.inv.name << " closedness " << (pass ? "PASS" : "FAIL") << " residual " << detail::fmt(closed)
           << " torsion " << detail::fmt(t) << " bianchi " << detail::fmt(b) << "\n";
    for (const auto& w : ev.warnings) io.err << "warning: " << w << "\n";
    return pass ? kExitOk : kExitFail;
}

inline int cmd_transgress(const RunConfig& cfg, const std::string& dir, Streams io) {
    const auto pairs = connection_pairs(cfg.options);
    bool found = cfg.pair.empty();
    bool ok = true;
    std::ostringstream csv;
    csv << "pair,invariant,p,q,degree,max_defect,max_characteristic,max_transgression,tolerance,status\n";
    const Sampler sampler(cfg.seed);
    const double tol = cfg.tolerance.value_or(kTransgressionTolerance);
    for (const auto& pair : pairs) {
        if (!cfg.pair.empty() && pair.id != cfg.pair) continue;
        found = true;
        const auto pts = sampler.points(pair.chart, cfg.points);
        for (const auto& inv : pair.invariants) {
            if (!cfg.invariants.empty() && std::find(cfg.invariants.begin(), cfg.invariants.end(), inv.name) == cfg.invariants.end()) continue;
            const int degree = 2 * inv.p() + inv.q();
            if (degree > pair.chart.dim()) continue;
            const auto defect = transgression_defect(pair.algebra, inv.tensor, pair.omega0, pair.omega1, pair.theta);
            const auto m1 = mu(inv.tensor, curvature(pair.algebra, pair.omega1), pair.theta);
            const auto tf = transgression(pair.algebra, inv.tensor, pair.omega0, pair.omega1, pair.theta);
            const double dmax = max_over(defect, pts, cfg.jet_order);
            const bool pass = dmax < tol;
            ok = ok && pass;
            csv << pair.id << "," << inv.name << "," << inv.p() << "," << inv.q() << "," << degree << "," << detail::fmt(dmax) << ","
                << detail::fmt(max_over(m1, pts, cfg.jet_order)) << "," << detail::fmt(max_over(tf, pts, cfg.jet_order)) << ","
                << detail::fmt(tol) << "," << (pass ? "PASS" : "FAIL") << "\n";
        }
    }
    if (!found) {
        std::string known;
        for (const auto& p : pairs) known += (known.empty() ? "" : ", ") + p.id;
        throw ConfigError("unknown connection pair '" + cfg.pair + "' (known: " + known + ")");
    }
    detail::write_text(dir, "transgress.csv", "# seed " + std::to_string(cfg.seed) + "\n" + csv.str());
    io.out << csv.str() << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kExitOk : kExitFail;
}

inline int cmd_integrate(const RunConfig& cfg, const std::string& dir, Streams io) {
    const auto ev = detail::evaluate(cfg);
    const auto period = detail::top_period(ev);
    if (!period)
        throw ConfigError("integrate: form degree " + std::to_string(ev.form.degree()) + " differs from chart dimension " +
                          std::to_string(ev.entry.structure.chart.dim()));
    nlohmann::json j{{"geometry", ev.entry.id},
                     {"invariant", ev.inv.name},
                     {"cycle", period->cycle},
                     {"value", period->value},
                     {"normalization", period->normalization},
                     {"normalized", period->normalized()},
                     {"nodes_per_axis", ev.entry.structure.chart.nodes_per_axis},
                     {"warnings", ev.warnings}};
    bool ok = true;
    if (const auto* exp = detail::expected(ev.entry, "period:" + ev.inv.name)) {
        j["expected"] = detail::expectation_json(*exp, period->normalized());
        ok = exp->check(period->normalized());
    }
    j["status"] = ok ? "PASS" : "FAIL";
    detail::write_text(dir, "integrate_" + detail::slug(ev.entry.id) + "_" + detail::slug(ev.inv.name) + ".json", detail::dump(j));
    io.out << "integrate " << ev.entry.id << " " << ev.inv.name << " value " << detail::fmt(period->value) << " normalized "
           << detail::fmt(period->normalized()) << " " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kExitOk : kExitFail;
}

inline int cmd_catalog(const std::string& action, const std::string& id, const std::string& dir, Streams io) {
    if (action == "list") {
        auto all = nlohmann::json::array();
        for (const auto& k : catalog_ids()) {
            const auto e = build(k);
            all.push_back(to_json(e));
            io.out << e.id << ": " << e.description << "\n";
            for (const auto& inv : e.invariants)
                io.out << "  invariant " << inv.name << " (" << inv.p() << "," << inv.q() << ") " << inv.description << "\n";
            for (const auto& r : e.expected)
                io.out << "  expect " << r.quantity << (r.exceeds ? " > " : " = ") << detail::fmt(r.value)
                       << (r.exceeds ? "" : " +- " + detail::fmt(r.tolerance)) << " [" << r.origin << ": " << r.oracle << "]\n";
        }
        auto pairs = nlohmann::json::array();
        for (const auto& p : connection_pairs()) {
            auto names = nlohmann::json::array();
            for (const auto& inv : p.invariants) names.push_back(inv.name);
            pairs.push_back({{"id", p.id}, {"geometry", p.geometry}, {"group", p.algebra->name()}, {"description", p.description}, {"invariants", names}});
            io.out << "pair " << p.id << ": " << p.description << "\n";
        }
        detail::write_text(dir, "catalog.json", detail::dump({{"geometries", all}, {"connection_pairs", pairs}}));
        return kExitOk;
    }
    if (action == "show") {
        if (id.empty()) throw ConfigError("catalog show needs a geometry id");
        const auto text = detail::dump(to_json(build(id)));
        io.out << text;
        return kExitOk;
    }
    throw ConfigError("catalog action must be 'list' or 'show', got '" + action + "'");
}

/// Runs the command line; returns 0 on success, 1 on a failed verification,
/// 2 on configuration errors.
inline int run(const std::vector<std::string>& args, Streams io = {std::cout, std::cerr}) {
    CLI::App app{"gstruct: characteristic forms of G-structures"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string config_path, out_flag, geometry, pair;
    std::string invariant_name;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> points;
    std::optional<double> tolerance;
    std::optional<int> jet_order;
    std::optional<double> margin;

    auto common = [&](CLI::App* sub, bool sampled) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_flag, "output directory (default gstruct_out, or GSTRUCT_OUT)");
        if (!sampled) return;
        sub->add_option("--seed", seed, "seed for sample points");
        sub->add_option("--points", points, "number of sample points");
        sub->add_option("--tolerance", tolerance, "pass threshold for residuals");
        sub->add_option("--jet-order", jet_order, "jet order for derivatives (1..3)");
    };
    auto geometry_opts = [&](CLI::App* sub) {
        sub->add_option("--geometry", geometry, "catalog geometry id");
        sub->add_option("--invariant", invariant_name, "named invariant of the geometry");
        sub->add_option("--sphere-margin", margin, "pole margin for sphere charts");
    };

    std::string group;
    int p = 0, q = 0, max_p = 2;
    bool table = false;
    auto* inv = app.add_subcommand("invariants", "basis of the invariant space S^p(g*) (x) Lambda^q(V*)");
    inv->add_option("--group", group, "algebra id such as so3, u2, sp4, gl2")->required();
    inv->add_option("--p", p, "symmetric degree in g*");
    inv->add_option("--q", q, "exterior degree in V*");
    inv->add_flag("--table", table, "emit the dimension table as CSV");
    inv->add_option("--max-p", max_p, "largest p in the table");
    common(inv, false);

    auto* classes = app.add_subcommand("classes", "characteristic form report");
    common(classes, true);
    geometry_opts(classes);
    auto* verify = app.add_subcommand("verify", "closedness, torsion and Bianchi residuals at sample points");
    common(verify, true);
    geometry_opts(verify);
    auto* integ = app.add_subcommand("integrate", "period of a top-degree characteristic form");
    common(integ, false);
    geometry_opts(integ);
    auto* trans = app.add_subcommand("transgress", "defect table of the transgression identity");
    common(trans, true);
    trans->add_option("--pair", pair, "connection pair id (default: all)");
    std::vector<std::string> trans_invariants;
    trans->add_option("--invariant", trans_invariants, "restrict to these invariants");
    std::string action = "list", show_id;
    auto* cat = app.add_subcommand("catalog", "list catalog geometries and expected results");
    cat->add_option("action", action, "list | show");
    cat->add_option("id", show_id, "geometry id for show");
    common(cat, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        io.out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        io.err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (!config_path.empty()) detail::apply_config(cfg, detail::parse_config_text(detail::read_file(config_path), config_path), config_path);
        if (!geometry.empty()) cfg.geometry = geometry;
        if (!invariant_name.empty()) cfg.invariant = invariant_name;
        if (!pair.empty()) cfg.pair = pair;
        if (!trans_invariants.empty()) cfg.invariants = trans_invariants;
        if (seed) cfg.seed = *seed;
        if (points) cfg.points = *points;
        if (tolerance) cfg.tolerance = *tolerance;
        if (jet_order) cfg.jet_order = *jet_order;
        if (margin) cfg.options.sphere_margin = *margin;
        if (*trans && cfg.invariant.is_string()) cfg.invariants.push_back(cfg.invariant.get<std::string>());
        detail::check_config(cfg);
        const auto dir = detail::output_dir(cfg, out_flag);
        if (*inv) return cmd_invariants(group, p, q, table, max_p, dir, io);
        if (*classes) return cmd_classes(cfg, dir, io);
        if (*verify) return cmd_verify(cfg, dir, io);
        if (*integ) return cmd_integrate(cfg, dir, io);
        if (*trans) return cmd_transgress(cfg, dir, io);
        return cmd_catalog(action, show_id, dir, io);
    } catch (const ConfigError& e) {
        io.err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        io.err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace gstruct::cli
