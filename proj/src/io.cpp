#include "torsionkit/io.hpp"

#include "torsionkit/errors.hpp"

#include <set>

namespace tk {

namespace {

const Json& require(const Json& obj, const std::string& key, const std::string& locus) {
    if (!obj.is_object()) throw ValidationError(locus, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(locus + "/" + key, "required key is missing");
    return *it;
}

void check_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& locus) {
    if (!obj.is_object()) throw ValidationError(locus, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    ok.insert({"name", "description", "comment"});
    for (const auto& [k, v] : obj.items())
        if (!ok.count(k)) throw ValidationError(locus + "/" + k, "unknown key");
}

long get_int(const Json& j, const std::string& locus) {
    if (!j.is_number_integer()) throw ValidationError(locus, "expected an integer");
    return j.get<long>();
}

long opt_int(const Json& obj, const std::string& key, long dflt, const std::string& locus) {
    auto it = obj.find(key);
    return it == obj.end() ? dflt : get_int(*it, locus + "/" + key);
}

bool opt_bool(const Json& obj, const std::string& key, bool dflt, const std::string& locus) {
    auto it = obj.find(key);
    if (it == obj.end()) return dflt;
    if (!it->is_boolean()) throw ValidationError(locus + "/" + key, "expected a boolean");
    return it->get<bool>();
}

std::string get_string(const Json& j, const std::string& locus) {
    if (!j.is_string()) throw ValidationError(locus, "expected a string");
    return j.get<std::string>();
}

std::string opt_string(const Json& obj, const std::string& key, const std::string& locus) {
    auto it = obj.find(key);
    return it == obj.end() ? std::string() : get_string(*it, locus + "/" + key);
}

const Json& array_at(const Json& obj, const std::string& key, const std::string& locus, bool optional = false) {
    static const Json empty = Json::array();
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (optional) return empty;
        throw ValidationError(locus + "/" + key, "required key is missing");
    }
    if (!it->is_array()) throw ValidationError(locus + "/" + key, "expected an array");
    return *it;
}

std::vector<long> int_vector(const Json& j, const std::string& locus) {
    if (!j.is_array()) throw ValidationError(locus, "expected an array of integers");
    std::vector<long> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_int(j[i], locus + "/" + std::to_string(i)));
    return out;
}

std::vector<std::string> string_vector(const Json& j, const std::string& locus) {
    if (!j.is_array()) throw ValidationError(locus, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_string(j[i], locus + "/" + std::to_string(i)));
    return out;
}

std::string idx(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

SidedSurface parse_side(const Json& j, Side side, const std::string& locus) {
    check_keys(j, {"components", "critical_points", "flow_lines"}, locus);
    SidedSurface s;
    s.side = side;
    const auto& comps = array_at(j, "components", locus);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const auto at = idx(locus + "/components", i);
        check_keys(comps[i], {"genus", "boundary"}, at);
        SurfaceComponent c;
        c.genus = static_cast<int>(get_int(require(comps[i], "genus", at), at + "/genus"));
        c.boundary = string_vector(require(comps[i], "boundary", at), at + "/boundary");
        s.components.push_back(std::move(c));
    }
    const auto& crits = array_at(j, "critical_points", locus);
    for (std::size_t i = 0; i < crits.size(); ++i) {
        const auto at = idx(locus + "/critical_points", i);
        check_keys(crits[i], {"id", "component", "index"}, at);
        CriticalPoint p;
        p.id = get_string(require(crits[i], "id", at), at + "/id");
        p.component = static_cast<int>(opt_int(crits[i], "component", 0, at));
        p.index = static_cast<int>(get_int(require(crits[i], "index", at), at + "/index"));
        s.critical_points.push_back(std::move(p));
    }
    const auto& lines = array_at(j, "flow_lines", locus, true);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto at = idx(locus + "/flow_lines", i);
        check_keys(lines[i], {"id", "from", "to", "sign"}, at);
        InternalLine l;
        l.id = get_string(require(lines[i], "id", at), at + "/id");
        l.from = get_string(require(lines[i], "from", at), at + "/from");
        l.to = get_string(require(lines[i], "to", at), at + "/to");
        l.sign = static_cast<int>(opt_int(lines[i], "sign", 1, at));
        if (l.sign != 1 && l.sign != -1) throw ValidationError(at + "/sign", "sign must be +1 or -1");
        s.flow_lines.push_back(std::move(l));
    }
    return s;
}

SurfaceSpec parse_surface(const Json& j) {
    const std::string locus = "/surface";
    check_keys(j, {"plus", "minus", "gammas", "h1_rank", "crossing_lines", "base_actions"}, locus);
    SurfaceSpec spec;
    spec.plus = parse_side(require(j, "plus", locus), Side::plus, locus + "/plus");
    spec.minus = parse_side(require(j, "minus", locus), Side::minus, locus + "/minus");
    const auto& gammas = array_at(j, "gammas", locus);
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const auto at = idx(locus + "/gammas", i);
        check_keys(gammas[i], {"id", "plus_circle", "minus_circle", "h1_class"}, at);
        GammaComponent g;
        g.id = get_string(require(gammas[i], "id", at), at + "/id");
        g.plus_circle = get_string(require(gammas[i], "plus_circle", at), at + "/plus_circle");
        g.minus_circle = get_string(require(gammas[i], "minus_circle", at), at + "/minus_circle");
        if (gammas[i].contains("h1_class")) g.h1_class = int_vector(gammas[i]["h1_class"], at + "/h1_class");
        spec.gammas.push_back(std::move(g));
    }
    spec.h1_rank = static_cast<int>(get_int(require(j, "h1_rank", locus), locus + "/h1_rank"));
    const auto& cross = array_at(j, "crossing_lines", locus, true);
    for (std::size_t i = 0; i < cross.size(); ++i) {
        const auto at = idx(locus + "/crossing_lines", i);
        check_keys(cross[i], {"id", "from", "through", "to", "sign", "h2_class"}, at);
        CrossingLine c;
        c.id = get_string(require(cross[i], "id", at), at + "/id");
        c.from = get_string(require(cross[i], "from", at), at + "/from");
        c.through = get_string(require(cross[i], "through", at), at + "/through");
        c.to = get_string(require(cross[i], "to", at), at + "/to");
        c.sign = static_cast<int>(opt_int(cross[i], "sign", 1, at));
        if (c.sign != 1 && c.sign != -1) throw ValidationError(at + "/sign", "sign must be +1 or -1");
        if (cross[i].contains("h2_class")) c.h2_class = int_vector(cross[i]["h2_class"], at + "/h2_class");
        spec.crossing.push_back(std::move(c));
    }
    if (j.contains("base_actions")) {
        const auto& ba = j["base_actions"];
        if (!ba.is_object()) throw ValidationError(locus + "/base_actions", "expected an object");
        for (const auto& [k, v] : ba.items())
            spec.base_actions[k] = parse_rational_json(v, locus + "/base_actions/" + k);
    }
    return spec;
}

PlanarTorsionDescriptor parse_planar(const Json& j) {
    const std::string locus = "/planar_torsion";
    check_keys(j, {"m", "n", "r", "lattice_rank", "page_class", "torus_classes"}, locus);
    PlanarTorsionDescriptor d;
    d.m = static_cast<int>(opt_int(j, "m", 0, locus));
    d.n = static_cast<int>(get_int(require(j, "n", locus), locus + "/n"));
    d.r = static_cast<int>(opt_int(j, "r", 0, locus));
    d.lattice_rank = static_cast<std::size_t>(std::max(0L, opt_int(j, "lattice_rank", 0, locus)));
    if (j.contains("page_class")) d.page_class = int_vector(j["page_class"], locus + "/page_class");
    const auto& tc = array_at(j, "torus_classes", locus, true);
    for (std::size_t i = 0; i < tc.size(); ++i)
        d.torus_classes.push_back(int_vector(tc[i], idx(locus + "/torus_classes", i)));
    d.origin = "document";
    return d;
}

EchComplex parse_ech(const Json& j, std::optional<Rational>& L) {
    const std::string locus = "/ech_complex";
    check_keys(j, {"orbits", "generators", "contributions", "extra_curves", "action_bound"}, locus);
    EchComplex cx;
    cx.origin = "document";
    const auto& orbits = array_at(j, "orbits", locus);
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        const auto at = idx(locus + "/orbits", i);
        check_keys(orbits[i], {"id", "kind", "action", "cz"}, at);
        EchOrbit o;
        o.id = get_string(require(orbits[i], "id", at), at + "/id");
        auto kind = parse_kind(get_string(require(orbits[i], "kind", at), at + "/kind"));
        if (!kind) throw ValidationError(at + "/kind", "expected elliptic, positive_hyperbolic or negative_hyperbolic");
        o.kind = *kind;
        o.action = parse_rational_json(require(orbits[i], "action", at), at + "/action");
        o.cz = int_vector(require(orbits[i], "cz", at), at + "/cz");
        cx.orbits.push_back(std::move(o));
    }
    const auto& gens = array_at(j, "generators", locus, true);
    for (std::size_t i = 0; i < gens.size(); ++i)
        cx.generators.push_back(parse_orbit_set(gens[i], idx(locus + "/generators", i)));
    const auto& contribs = array_at(j, "contributions", locus, true);
    for (std::size_t i = 0; i < contribs.size(); ++i) {
        const auto at = idx(locus + "/contributions", i);
        const auto& c = contribs[i];
        check_keys(c, {"from", "to", "c_tau", "Q_tau", "sign", "genus", "n_plus", "n_minus", "irreducible",
                       "ind_equals_I", "origin"},
                   at);
        EchContribution u;
        u.rc.from = parse_orbit_set(require(c, "from", at), at + "/from");
        u.rc.to = parse_orbit_set(require(c, "to", at), at + "/to");
        u.rc.c_tau = opt_int(c, "c_tau", 0, at);
        u.rc.Q_tau = opt_int(c, "Q_tau", 0, at);
        u.sign = static_cast<int>(opt_int(c, "sign", 1, at));
        u.genus = static_cast<int>(opt_int(c, "genus", 0, at));
        if (c.contains("n_plus")) u.n_plus = parse_orbit_set(c["n_plus"], at + "/n_plus");
        if (c.contains("n_minus")) u.n_minus = parse_orbit_set(c["n_minus"], at + "/n_minus");
        u.irreducible = opt_bool(c, "irreducible", false, at);
        u.ind_equals_I = opt_bool(c, "ind_equals_I", false, at);
        u.origin = opt_string(c, "origin", at);
        cx.contributions.push_back(std::move(u));
    }
    const auto& extra = array_at(j, "extra_curves", locus, true);
    for (std::size_t i = 0; i < extra.size(); ++i) {
        const auto at = idx(locus + "/extra_curves", i);
        check_keys(extra[i], {"from", "to"}, at);
        cx.extra_curves.emplace_back(parse_orbit_set(require(extra[i], "from", at), at + "/from"),
                                     parse_orbit_set(require(extra[i], "to", at), at + "/to"));
    }
    if (j.contains("action_bound")) {
        L = parse_rational_json(j["action_bound"], locus + "/action_bound");
        if (*L <= 0) throw ValidationError(locus + "/action_bound", "must be positive");
    }
    validate_ech_complex(cx);
    return cx;
}

}  // namespace

std::string kind_name(Document::Kind k) {
    switch (k) {
        case Document::Kind::surface: return "surface";
        case Document::Kind::planar: return "planar_torsion";
        case Document::Kind::ech: return "ech_complex";
    }
    return "?";
}

Rational parse_rational_json(const Json& j, const std::string& locus) {
    try {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long>());
    } catch (const std::exception& e) {
        throw ValidationError(locus, e.what());
    }
    throw ValidationError(locus, "expected a rational as a string such as \"3/2\"");
}

Json rational_json(const Rational& q) { return to_string(q); }

OrbitSet parse_orbit_set(const Json& j, const std::string& locus) {
    OrbitSet s;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) s[get_string(j[i], idx(locus, i))] += 1;
        return s;
    }
    if (!j.is_object()) throw ValidationError(locus, "expected an orbit set (object id -> multiplicity, or list of ids)");
    for (const auto& [k, v] : j.items()) {
        long m = get_int(v, locus + "/" + k);
        if (m < 1) throw ValidationError(locus + "/" + k, "multiplicity must be at least 1");
        s[k] = static_cast<int>(m);
    }
    return s;
}

Json orbit_set_json(const OrbitSet& s) {
    Json j = Json::object();
    for (const auto& [id, m] : s) j[id] = m;
    return j;
}

Json algebra_json(const Registry& reg, const AlgebraElement& x) {
    Json out = Json::array();
    for (const auto& [k, c] : x.terms()) {
        Json words = Json::array();
        for (GenId g : k.gens) words.push_back(reg.at(g).name);
        out.push_back({{"coefficient", rational_json(c)}, {"hbar", k.hbar}, {"z", k.exp}, {"word", words}});
    }
    return out;
}

AlgebraElement algebra_from_json(const Registry& reg, std::size_t rank, const Json& j, const std::string& locus) {
    if (!j.is_array()) throw ValidationError(locus, "expected a list of terms");
    AlgebraElement out(rank);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto at = idx(locus, i);
        Rational c = parse_rational_json(require(j[i], "coefficient", at), at + "/coefficient");
        int h = static_cast<int>(get_int(require(j[i], "hbar", at), at + "/hbar"));
        Exponent z = int_vector(require(j[i], "z", at), at + "/z");
        if (z.size() != rank) throw ValidationError(at + "/z", "exponent has the wrong rank");
        std::vector<GenId> gens;
        for (const auto& name : string_vector(require(j[i], "word", at), at + "/word")) {
            auto id = reg.find(name);
            if (!id) throw ValidationError(at + "/word", "unknown generator '" + name + "'");
            gens.push_back(*id);
        }
        out += AlgebraElement::word(reg, gens, c, z, h);
    }
    return out;
}

Json operator_json(const Registry& reg, const DifferentialOperator& D) {
    Json terms = Json::array();
    for (const auto& t : D.terms) {
        Json coeff = Json::array();
        for (const auto& [e, c] : t.coefficient.terms()) coeff.push_back({{"z", e}, {"c", rational_json(c)}});
        Json outs = Json::array(), ins = Json::array();
        for (GenId g : t.outputs) outs.push_back(reg.at(g).name);
        for (GenId g : t.inputs) ins.push_back(reg.at(g).name);
        terms.push_back({{"coefficient", coeff},
                         {"hbar", t.hbar},
                         {"outputs", outs},
                         {"inputs", ins},
                         {"genus", t.genus},
                         {"origin", t.origin}});
    }
    return {{"rank", D.rank}, {"terms", terms}};
}

namespace {

Json side_json(const SidedSurface& s) {
    Json comps = Json::array(), crits = Json::array(), lines = Json::array();
    for (const auto& c : s.components) comps.push_back({{"genus", c.genus}, {"boundary", c.boundary}});
    for (const auto& p : s.critical_points) crits.push_back({{"id", p.id}, {"component", p.component}, {"index", p.index}});
    for (const auto& l : s.flow_lines) lines.push_back({{"id", l.id}, {"from", l.from}, {"to", l.to}, {"sign", l.sign}});
    return {{"components", comps}, {"critical_points", crits}, {"flow_lines", lines}};
}

}  // namespace

Json surface_spec_json(const SurfaceSpec& spec) {
    Json gammas = Json::array(), cross = Json::array();
    for (const auto& g : spec.gammas)
        gammas.push_back({{"id", g.id}, {"plus_circle", g.plus_circle}, {"minus_circle", g.minus_circle},
                          {"h1_class", g.h1_class}});
    for (const auto& c : spec.crossing) {
        Json j = {{"id", c.id}, {"from", c.from}, {"through", c.through}, {"to", c.to}, {"sign", c.sign}};
        if (!c.h2_class.empty()) j["h2_class"] = c.h2_class;
        cross.push_back(j);
    }
    Json out = {{"plus", side_json(spec.plus)},
                {"minus", side_json(spec.minus)},
                {"gammas", gammas},
                {"h1_rank", spec.h1_rank},
                {"crossing_lines", cross}};
    if (!spec.base_actions.empty()) {
        Json ba = Json::object();
        for (const auto& [k, v] : spec.base_actions) ba[k] = rational_json(v);
        out["base_actions"] = ba;
    }
    return out;
}

Json planar_json(const PlanarTorsionDescriptor& d) {
    Json j = {{"m", d.m}, {"n", d.n}, {"r", d.r}};
    if (d.lattice_rank) j["lattice_rank"] = d.lattice_rank;
    if (!d.page_class.empty()) j["page_class"] = d.page_class;
    if (!d.torus_classes.empty()) j["torus_classes"] = d.torus_classes;
    return j;
}

Json ech_complex_json(const EchComplex& cx) {
    Json orbits = Json::array(), gens = Json::array(), contribs = Json::array(), extra = Json::array();
    for (const auto& o : cx.orbits)
        orbits.push_back({{"id", o.id}, {"kind", kind_name(o.kind)}, {"action", rational_json(o.action)}, {"cz", o.cz}});
    for (const auto& g : cx.generators) gens.push_back(orbit_set_json(g));
    for (const auto& u : cx.contributions) {
        Json c = {{"from", orbit_set_json(u.rc.from)}, {"to", orbit_set_json(u.rc.to)}, {"c_tau", u.rc.c_tau},
                  {"Q_tau", u.rc.Q_tau}, {"sign", u.sign}, {"genus", u.genus}, {"irreducible", u.irreducible},
                  {"ind_equals_I", u.ind_equals_I}};
        if (!u.n_plus.empty()) c["n_plus"] = orbit_set_json(u.n_plus);
        if (!u.n_minus.empty()) c["n_minus"] = orbit_set_json(u.n_minus);
        if (!u.origin.empty()) c["origin"] = u.origin;
        contribs.push_back(c);
    }
    for (const auto& [a, b] : cx.extra_curves) extra.push_back({{"from", orbit_set_json(a)}, {"to", orbit_set_json(b)}});
    Json out = {{"orbits", orbits}, {"generators", gens}, {"contributions", contribs}};
    if (!extra.empty()) out["extra_curves"] = extra;
    return out;
}

Json truncation_json(const Truncation& t) {
    return {{"action_bound", rational_json(t.action_bound)},
            {"hbar_bound", t.hbar_bound},
            {"cover_max", t.cover_max},
            {"exponent_box", t.exponent_box}};
}

Json coefficients_json(const CoefficientMode& m, const std::optional<std::size_t>& full_rank) {
    switch (m.kind) {
        case CoefficientMode::Kind::untwisted: return {{"mode", "untwisted"}};
        case CoefficientMode::Kind::full: return {{"mode", "full"}, {"rank", full_rank.value_or(0)}};
        case CoefficientMode::Kind::twisted: {
            Json w = Json::array();
            for (const auto& q : m.omega) w.push_back(rational_json(q));
            return {{"mode", "twisted"}, {"omega", w}};
        }
    }
    return {};
}

Document parse_document(const Json& j) {
    if (!j.is_object()) throw ValidationError("", "document must be a JSON object");
    check_keys(j, {"surface", "planar_torsion", "ech_complex", "truncation", "coefficients"}, "");
    Document doc;
    doc.raw = j;
    int payloads = 0;
    for (const char* k : {"surface", "planar_torsion", "ech_complex"}) payloads += j.contains(k) ? 1 : 0;
    if (payloads != 1)
        throw ValidationError("", "exactly one of surface, planar_torsion, ech_complex is required (found " +
                                      std::to_string(payloads) + ")");

    if (j.contains("truncation")) {
        const auto& t = j["truncation"];
        check_keys(t, {"action_bound", "hbar_bound", "cover_max", "exponent_box"}, "/truncation");
        if (t.contains("action_bound"))
            doc.truncation.action_bound = parse_rational_json(t["action_bound"], "/truncation/action_bound");
        doc.truncation.hbar_bound = static_cast<int>(opt_int(t, "hbar_bound", doc.truncation.hbar_bound, "/truncation"));
        doc.truncation.cover_max = static_cast<int>(opt_int(t, "cover_max", doc.truncation.cover_max, "/truncation"));
        doc.truncation.exponent_box =
            static_cast<int>(opt_int(t, "exponent_box", doc.truncation.exponent_box, "/truncation"));
    }
    if (doc.truncation.action_bound <= 0) throw ValidationError("/truncation/action_bound", "must be positive");
    if (doc.truncation.hbar_bound < 0) throw ValidationError("/truncation/hbar_bound", "must be nonnegative");
    if (doc.truncation.cover_max < 1) throw ValidationError("/truncation/cover_max", "must be at least 1");
    if (doc.truncation.exponent_box < 0) throw ValidationError("/truncation/exponent_box", "must be nonnegative");

    if (j.contains("coefficients")) {
        const auto& c = j["coefficients"];
        check_keys(c, {"mode", "omega", "rank"}, "/coefficients");
        const std::string mode = get_string(require(c, "mode", "/coefficients"), "/coefficients/mode");
        if (mode == "untwisted") {
            doc.coefficients.kind = CoefficientMode::Kind::untwisted;
        } else if (mode == "twisted") {
            doc.coefficients.kind = CoefficientMode::Kind::twisted;
            const auto& w = require(c, "omega", "/coefficients");
            if (!w.is_array()) throw ValidationError("/coefficients/omega", "expected an array of rationals");
            for (std::size_t i = 0; i < w.size(); ++i)
                doc.coefficients.omega.push_back(parse_rational_json(w[i], idx("/coefficients/omega", i)));
        } else if (mode == "full") {
            doc.coefficients.kind = CoefficientMode::Kind::full;
            long r = get_int(require(c, "rank", "/coefficients"), "/coefficients/rank");
            if (r < 0) throw ValidationError("/coefficients/rank", "must be nonnegative");
            doc.full_rank = static_cast<std::size_t>(r);
        } else {
            throw ValidationError("/coefficients/mode", "expected untwisted, twisted or full");
        }
    }

    if (j.contains("surface")) {
        doc.kind = Document::Kind::surface;
        doc.surface = parse_surface(j["surface"]);
    } else if (j.contains("planar_torsion")) {
        doc.kind = Document::Kind::planar;
        doc.planar = parse_planar(j["planar_torsion"]);
    } else {
        doc.kind = Document::Kind::ech;
        doc.ech = parse_ech(j["ech_complex"], doc.ech_action_bound);
    }
    return doc;
}

}  // namespace tk
